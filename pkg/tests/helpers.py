"""Shared samplers and small oracles for the test suite.

All randomized tests draw from seeded generators so that every run sees the
same tuples; the samplers reject the measure-zero corners the closed forms
exclude (exact degeneracies, the critical band, the ill-conditioned plus
branch zone).
"""

import numpy as np

from ncweyl import AlgebraParams

SEED = 20260809


def make_rng(seed: int = SEED) -> np.random.Generator:
    return np.random.default_rng(seed)


def positive_phase_params(rng, count, min_delta=1e-6, min_gamma_theta=1e-6,
                          hbar_min=0.0):
    """theta in (0,4], gamma in [-4,4], hbar in (0,4] with delta > min_delta.

    |gamma*theta| >= min_gamma_theta keeps both branches defined and clear of
    the ill-conditioned plus-branch zone (threshold 1e-8*hbar^2 <= 1.6e-7).
    """
    out = []
    while len(out) < count:
        theta = rng.uniform(0.0, 4.0)
        gamma = rng.uniform(-4.0, 4.0)
        hbar = rng.uniform(hbar_min, 4.0)
        if theta <= 0.0 or hbar <= max(0.0, hbar_min):
            continue
        if hbar * hbar - gamma * theta <= min_delta:
            continue
        if abs(gamma * theta) < min_gamma_theta:
            continue
        out.append(AlgebraParams(theta, gamma, hbar))
    return out


def negative_phase_params(rng, count, rel_margin=1e-6, hbar_min=0.0):
    """Tuples with gamma*theta > hbar^2 * (1 + rel_margin)."""
    out = []
    while len(out) < count:
        theta = rng.uniform(0.0, 4.0)
        gamma = rng.uniform(0.0, 4.0)
        hbar = rng.uniform(hbar_min, 4.0)
        if theta <= 0.0 or gamma <= 0.0 or hbar <= max(0.0, hbar_min):
            continue
        if gamma * theta <= hbar * hbar * (1.0 + rel_margin):
            continue
        out.append(AlgebraParams(theta, gamma, hbar))
    return out


def critical_params(rng, count):
    """Tuples on the critical line: gamma = hbar^2 / theta, so |delta| ~ eps*hbar^2."""
    out = []
    for _ in range(count):
        theta = rng.uniform(0.1, 4.0)
        hbar = rng.uniform(0.1, 4.0)
        out.append(AlgebraParams(theta, hbar * hbar / theta, hbar))
    return out


def sigma_positive_closed(params: AlgebraParams, sign: int) -> float:
    """Literal closed form 2*(delta/(gamma*theta))*(hbar +- sqrt(delta))."""
    delta = params.delta()
    return 2.0 * (delta / (params.gamma * params.theta)) * (
        params.hbar + sign * np.sqrt(delta)
    )


def sigma_negative_closed(params: AlgebraParams) -> float:
    """Literal closed form -2*(gamma*theta/hbar)*delta."""
    return -2.0 * (params.gamma * params.theta / params.hbar) * params.delta()
