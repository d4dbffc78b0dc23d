"""The compiled kernels and the pure-Python reference must agree bit-for-bit
on the same inputs (same operations in the same order), and the import-time
selection must honor the NCWEYL_PURE_PYTHON override."""

import os
import subprocess
import sys

import numpy as np
import pytest

from ncweyl import _kernels_py as slow

fast = pytest.importorskip("ncweyl._kernels")

from helpers import make_rng


def random_params(rng, count=300):
    out = []
    while len(out) < count:
        theta = rng.uniform(0.0, 4.0)
        gamma = rng.uniform(-4.0, 4.0)
        hbar = rng.uniform(0.05, 4.0)
        if theta > 0:
            out.append((theta, gamma, hbar))
    return out


class TestKernelEquivalence:
    def test_structure_omega(self):
        rng = make_rng(61)
        for theta, gamma, hbar in random_params(rng, 100):
            assert np.array_equal(
                fast.structure_omega(theta, gamma, hbar),
                slow.structure_omega(theta, gamma, hbar),
            )

    def test_sandwich4(self):
        rng = make_rng(62)
        for _ in range(200):
            m = np.ascontiguousarray(rng.normal(size=(4, 4)))
            omega = slow.structure_omega(*rng.uniform(0.1, 3.0, size=3))
            assert np.array_equal(fast.sandwich4(m, omega), slow.sandwich4(m, omega))

    def test_bilinear4(self):
        rng = make_rng(63)
        omega = slow.structure_omega(1.3, -0.4, 2.2)
        for _ in range(200):
            u = np.ascontiguousarray(rng.normal(size=4))
            v = np.ascontiguousarray(rng.normal(size=4))
            assert fast.bilinear4(u, omega, v) == slow.bilinear4(u, omega, v)

    def test_canonical_sigma(self):
        rng = make_rng(64)
        j = np.zeros((4, 4))
        j[0, 2] = j[1, 3] = 1.0
        j -= j.T
        for _ in range(100):
            sigma = rng.uniform(-5, 5)
            noisy = np.ascontiguousarray(sigma * j + 1e-13 * rng.normal(size=(4, 4)))
            a = fast.canonical_sigma(noisy, 1e-10)
            b = slow.canonical_sigma(noisy, 1e-10)
            assert (np.isnan(a) and np.isnan(b)) or a == b
        off = np.ascontiguousarray(np.eye(4))
        assert np.isnan(fast.canonical_sigma(off, 1e-10))
        assert np.isnan(slow.canonical_sigma(off, 1e-10))

    def test_classify_and_coefficients(self):
        rng = make_rng(65)
        for theta, gamma, hbar in random_params(rng):
            code_f = fast.classify_code(theta, gamma, hbar, 1e-12)
            code_s = slow.classify_code(theta, gamma, hbar, 1e-12)
            assert code_f == code_s
            if code_f > 0 and gamma != 0.0:
                assert fast.positive_coeffs(theta, gamma, hbar) == slow.positive_coeffs(
                    theta, gamma, hbar
                )
                for sign in (1, -1):
                    assert fast.sigma_positive(theta, gamma, hbar, sign) == (
                        slow.sigma_positive(theta, gamma, hbar, sign)
                    )
            if code_f < 0:
                assert fast.negative_coeffs(theta, gamma, hbar) == slow.negative_coeffs(
                    theta, gamma, hbar
                )
                assert fast.sigma_negative(theta, gamma, hbar) == slow.sigma_negative(
                    theta, gamma, hbar
                )

    def test_scan_grid(self):
        thetas = np.ascontiguousarray(np.linspace(0.0, 4.0, 23))
        gammas = np.ascontiguousarray(np.linspace(-2.0, 4.0, 29))
        got = fast.scan_grid(thetas, gammas, 1.0, 1e-12, 1e-8)
        want = slow.scan_grid(thetas, gammas, 1.0, 1e-12, 1e-8)
        for f, s in zip(got, want):
            assert np.array_equal(f, s, equal_nan=True)


class TestSelection:
    def test_default_prefers_compiled(self):
        from ncweyl import backend_name

        assert backend_name() == "cython"

    def test_env_override_forces_python(self):
        env = dict(os.environ, NCWEYL_PURE_PYTHON="1")
        out = subprocess.run(
            [sys.executable, "-c", "import ncweyl; print(ncweyl.backend_name())"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        assert out.stdout.strip() == "python"
