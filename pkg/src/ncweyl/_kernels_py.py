"""Pure-Python kernels for the 4x4 closed-form layer.

This is the fallback backend (and the readable reference) for the compiled
extension ``ncweyl._kernels``.  Both expose the same flat-function API and
must agree to rounding; see tests/test_backends.py.

Conventions baked in here (shared with the rest of the package):
generator order (x1, x2, p1, p2) and (y1, y2, q1, q2); commutators are
encoded as [g_i, g_j] = i * omega[i][j] with omega real antisymmetric.
The canonical pattern is sigma * J with J[0][2] = J[1][3] = 1.

Coefficient roots avoid subtractive cancellation: for delta > 0 the
smaller-magnitude root is obtained from the product-of-roots identity
(a+ a- = theta/gamma, b+ b- = gamma/theta), which also makes the minus
branch smooth as gamma -> 0; for delta < 0 the large root (-G - R)/hbar
is computed directly and the other as G divided by it.
"""

import math

import numpy as np

BACKEND = "python"

# classify codes
POSITIVE = 1
NEGATIVE = -1
CRITICAL = 0


def structure_omega(theta: float, gamma: float, hbar: float) -> np.ndarray:
    omega = np.zeros((4, 4))
    omega[0, 1] = theta
    omega[0, 2] = hbar
    omega[1, 3] = hbar
    omega[2, 3] = gamma
    omega[1, 0] = -theta
    omega[2, 0] = -hbar
    omega[3, 1] = -hbar
    omega[3, 2] = -gamma
    return omega


def sandwich4(m: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """M @ omega @ M.T for 4x4 real matrices."""
    out = np.zeros((4, 4))
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
            out[i, j] = acc
    return out


def bilinear4(u, omega: np.ndarray, v) -> float:
    # pairwise form: each term and the accumulation order are invariant
    # under u <-> v up to an exact sign flip, so antisymmetry is exact
    acc = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            w = omega[i, j]
            if w != 0.0:
                acc += w * (u[i] * v[j] - u[j] * v[i])
    return float(acc)


_J_ENTRIES = ((0, 2, 1.0), (1, 3, 1.0), (2, 0, -1.0), (3, 1, -1.0))


def canonical_sigma(omega_prime: np.ndarray, tol: float) -> float:
    """Sigma if omega_prime matches the canonical pattern sigma*J, else NaN."""
    sigma = 0.5 * (omega_prime[0, 2] + omega_prime[1, 3])
    bound = tol * max(1.0, abs(sigma))
    for i in range(4):
        for j in range(4):
            target = 0.0
            for a, b, s in _J_ENTRIES:
                if a == i and b == j:
                    target = s * sigma
            if abs(omega_prime[i, j] - target) > bound:
                return math.nan
    return float(sigma)


def classify_code(theta: float, gamma: float, hbar: float, eps: float) -> int:
    delta = hbar * hbar - gamma * theta
    band = eps * hbar * hbar
    if delta > band:
        return POSITIVE
    if delta < -band:
        return NEGATIVE
    return CRITICAL


def positive_coeffs(theta: float, gamma: float, hbar: float):
    """(a+, a-, b+, b-) for delta > 0, gamma != 0, theta > 0."""
    delta = hbar * hbar - gamma * theta
    root = math.sqrt(delta)
    a_plus = (hbar + root) / gamma
    a_minus = theta / (hbar + root)
    b_plus = (hbar + root) / theta
    b_minus = gamma / (hbar + root)
    return a_plus, a_minus, b_plus, b_minus


def negative_coeffs(theta: float, gamma: float, hbar: float):
    """(a+, a-) for delta < 0 (the b roots coincide with the a roots)."""
    g = gamma * theta
    delta = hbar * hbar - g
    r = math.sqrt(-g * delta)
    a_minus = (-g - r) / hbar
    a_plus = g / a_minus
    return a_plus, a_minus


def sigma_positive(theta: float, gamma: float, hbar: float, sign: int) -> float:
    delta = hbar * hbar - gamma * theta
    root = math.sqrt(delta)
    if sign > 0:
        return 2.0 * (delta / (gamma * theta)) * (hbar + root)
    # 2*(delta/(gamma*theta))*(hbar - root) rewritten without cancellation
    return 2.0 * delta / (hbar + root)


def sigma_negative(theta: float, gamma: float, hbar: float) -> float:
    g = gamma * theta
    return -2.0 * (g / hbar) * (hbar * hbar - g)


def scan_grid(
    thetas: np.ndarray,
    gammas: np.ndarray,
    hbar: float,
    eps_critical: float,
    ill_threshold: float,
):
    """Phase / sigma data for every (theta, gamma) grid cell, theta outer.

    Mirrors the dispatch of darboux.solve(): sigma entries are NaN exactly
    where solve() with that branch raises (critical band, ill-conditioned
    plus branch); the degenerate limit cases carry sigma = hbar.
    """
    nt = len(thetas)
    ng = len(gammas)
    n = nt * ng
    delta_out = np.empty(n)
    code_out = np.empty(n, dtype=np.int32)
    sig_plus = np.empty(n)
    sig_minus = np.empty(n)
    hbar2 = hbar * hbar
    for it in range(nt):
        theta = float(thetas[it])
        for ig in range(ng):
            gamma = float(gammas[ig])
            k = it * ng + ig
            delta = hbar2 - gamma * theta
            delta_out[k] = delta
            code = classify_code(theta, gamma, hbar, eps_critical)
            code_out[k] = code
            if code == CRITICAL:
                sig_plus[k] = math.nan
                sig_minus[k] = math.nan
            elif code == NEGATIVE:
                s = sigma_negative(theta, gamma, hbar)
                sig_plus[k] = s
                sig_minus[k] = s
            elif gamma == 0.0 or theta == 0.0:
                sig_plus[k] = hbar
                sig_minus[k] = hbar
            else:
                sig_minus[k] = sigma_positive(theta, gamma, hbar, -1)
                if abs(gamma * theta) < ill_threshold * hbar2:
                    sig_plus[k] = math.nan
                else:
                    sig_plus[k] = sigma_positive(theta, gamma, hbar, +1)
    return delta_out, code_out, sig_plus, sig_minus
