# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the 4x4 closed-form layer.

Same API and semantics as ncweyl._kernels_py (the pure-Python reference);
kept in lockstep by tests/test_backends.py.  The win is per-call overhead:
grid scans and coefficient sweeps touch these functions once per parameter
point, where numpy dispatch would dominate at 4x4 sizes.
"""

from libc.math cimport fabs, sqrt, NAN

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

POSITIVE = 1
NEGATIVE = -1
CRITICAL = 0


def structure_omega(double theta, double gamma, double hbar):
    out = np.zeros((4, 4))
    cdef double[:, ::1] o = out
    o[0, 1] = theta
    o[0, 2] = hbar
    o[1, 3] = hbar
    o[2, 3] = gamma
    o[1, 0] = -theta
    o[2, 0] = -hbar
    o[3, 1] = -hbar
    o[3, 2] = -gamma
    return out


def sandwich4(const double[:, ::1] m, const double[:, ::1] omega):
    out = np.zeros((4, 4))
    cdef double[:, ::1] res = out
    cdef int i, j, k, l
    cdef double acc, row, mik
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for k in range(4):
                mik = m[i, k]
                if mik == 0.0:
                    continue
                row = 0.0
                for l in range(4):
                    row += omega[k, l] * m[j, l]
                acc += mik * row
            res[i, j] = acc
    return out


def bilinear4(const double[::1] u, const double[:, ::1] omega, const double[::1] v):
    # pairwise form: each term and the accumulation order are invariant
    # under u <-> v up to an exact sign flip, so antisymmetry is exact
    cdef double acc = 0.0
    cdef int i, j
    for i in range(4):
        for j in range(i + 1, 4):
            if omega[i, j] != 0.0:
                acc += omega[i, j] * (u[i] * v[j] - u[j] * v[i])
    return acc


def canonical_sigma(const double[:, ::1] omega_prime, double tol):
    cdef double sigma = 0.5 * (omega_prime[0, 2] + omega_prime[1, 3])
    cdef double bound = tol * max(1.0, fabs(sigma))
    cdef double target
    cdef int i, j
    for i in range(4):
        for j in range(4):
            if i == 0 and j == 2:
                target = sigma
            elif i == 1 and j == 3:
                target = sigma
            elif i == 2 and j == 0:
                target = -sigma
            elif i == 3 and j == 1:
                target = -sigma
            else:
                target = 0.0
            if fabs(omega_prime[i, j] - target) > bound:
                return NAN
    return sigma


cdef inline int _classify(double theta, double gamma, double hbar, double eps) nogil:
    cdef double delta = hbar * hbar - gamma * theta
    cdef double band = eps * hbar * hbar
    if delta > band:
        return 1
    if delta < -band:
        return -1
    return 0


def classify_code(double theta, double gamma, double hbar, double eps):
    return _classify(theta, gamma, hbar, eps)


def positive_coeffs(double theta, double gamma, double hbar):
    cdef double delta = hbar * hbar - gamma * theta
    cdef double root = sqrt(delta)
    return (
        (hbar + root) / gamma,
        theta / (hbar + root),
        (hbar + root) / theta,
        gamma / (hbar + root),
    )


def negative_coeffs(double theta, double gamma, double hbar):
    cdef double g = gamma * theta
    cdef double delta = hbar * hbar - g
    cdef double r = sqrt(-g * delta)
    cdef double a_minus = (-g - r) / hbar
    return g / a_minus, a_minus


cdef inline double _sigma_positive(double theta, double gamma, double hbar, int sign) nogil:
    cdef double delta = hbar * hbar - gamma * theta
    cdef double root = sqrt(delta)
    if sign > 0:
        return 2.0 * (delta / (gamma * theta)) * (hbar + root)
    return 2.0 * delta / (hbar + root)


def sigma_positive(double theta, double gamma, double hbar, int sign):
    return _sigma_positive(theta, gamma, hbar, sign)


cdef inline double _sigma_negative(double theta, double gamma, double hbar) nogil:
    cdef double g = gamma * theta
    return -2.0 * (g / hbar) * (hbar * hbar - g)


def sigma_negative(double theta, double gamma, double hbar):
    return _sigma_negative(theta, gamma, hbar)


def scan_grid(
    const double[::1] thetas,
    const double[::1] gammas,
    double hbar,
    double eps_critical,
    double ill_threshold,
):
    cdef Py_ssize_t nt = thetas.shape[0]
    cdef Py_ssize_t ng = gammas.shape[0]
    delta_out = np.empty(nt * ng)
    code_out = np.empty(nt * ng, dtype=np.int32)
    sig_plus = np.empty(nt * ng)
    sig_minus = np.empty(nt * ng)
    cdef double[::1] dv = delta_out
    cdef int[::1] cv = code_out
    cdef double[::1] sp = sig_plus
    cdef double[::1] sm = sig_minus
    cdef Py_ssize_t it, ig, k
    cdef double theta, gamma, s
    cdef double hbar2 = hbar * hbar
    cdef int code
    with nogil:
        for it in range(nt):
            theta = thetas[it]
            for ig in range(ng):
                gamma = gammas[ig]
                k = it * ng + ig
                dv[k] = hbar2 - gamma * theta
                code = _classify(theta, gamma, hbar, eps_critical)
                cv[k] = code
                if code == 0:
                    sp[k] = NAN
                    sm[k] = NAN
                elif code == -1:
                    s = _sigma_negative(theta, gamma, hbar)
                    sp[k] = s
                    sm[k] = s
                elif gamma == 0.0 or theta == 0.0:
                    sp[k] = hbar
                    sm[k] = hbar
                else:
                    sm[k] = _sigma_positive(theta, gamma, hbar, -1)
                    if fabs(gamma * theta) < ill_threshold * hbar2:
                        sp[k] = NAN
                    else:
                        sp[k] = _sigma_positive(theta, gamma, hbar, 1)
    return delta_out, code_out, sig_plus, sig_minus
