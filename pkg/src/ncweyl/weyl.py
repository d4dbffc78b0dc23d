"""Phase forms of the Weyl system built on a reduced canonical pair.

For canonical generators with [y_i, q_j] = i*sigma*delta_ij, the unitary
families U(alpha) = exp(i sum_j alpha_j y_j) and V(beta) = exp(i sum_j
beta_j q_j) obey

    U(alpha) V(beta) = exp(i * omega(alpha, beta)) V(beta) U(alpha),
    omega(alpha, beta) = -sigma * (alpha_1 beta_1 + alpha_2 beta_2),

exactly, because the commutator of the exponents is central.  The phase is
therefore evaluated from sigma alone at this layer; truncation effects of
actually exponentiating matrices are measured in ncweyl.fock instead.

The per-phase closed forms phase_form_positive / phase_form_negative are
independent evaluations of the same quantity through the case coefficients;
their agreement with weyl_phase is a tested identity, not an assumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_CRITICAL_TOL, AlgebraParams
from .darboux import Branch, DarbouxMap
from .errors import InvalidParams, WrongPhase


@dataclass(frozen=True)
class WeylPhaseForm:
    """The bilinear phase form omega(alpha, beta) = -sigma_eff * (alpha . beta)."""

    sigma_eff: float

    def __call__(self, alpha, beta) -> float:
        return -self.sigma_eff * _dot2(alpha, beta)

    def nondegenerate(self, hbar: float, eps_critical: float = DEFAULT_CRITICAL_TOL) -> bool:
        return abs(self.sigma_eff) > eps_critical * hbar


def _dot2(alpha, beta) -> float:
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    if a.shape != (2,) or b.shape != (2,):
        raise InvalidParams("alpha and beta must be real 2-vectors")
    return float(a[0] * b[0] + a[1] * b[1])


def weyl_phase(dmap: DarbouxMap, alpha, beta) -> float:
    """omega(alpha, beta) for the Weyl system of the map's canonical pair."""
    return -dmap.sigma * _dot2(alpha, beta)


def phase_form_positive(params: AlgebraParams, branch: Branch, alpha, beta) -> float:
    """Closed form for delta > 0: -2*(delta/(gamma*theta))*(hbar +- sqrt(delta))*(alpha . beta)."""
    delta = params.delta()
    if delta <= 0:
        raise WrongPhase("positive-delta phase form needs delta > 0")
    sign = 1.0 if branch is Branch.PLUS else -1.0
    factor = -2.0 * (delta / (params.gamma * params.theta)) * (
        params.hbar + sign * math.sqrt(delta)
    )
    return factor * _dot2(alpha, beta)


def phase_form_negative(params: AlgebraParams, alpha, beta) -> float:
    """Closed form for delta < 0: 2*delta*(gamma*theta/hbar)*(alpha . beta), branch independent."""
    delta = params.delta()
    if delta >= 0:
        raise WrongPhase("negative-delta phase form needs delta < 0")
    factor = 2.0 * delta * (params.gamma * params.theta / params.hbar)
    return factor * _dot2(alpha, beta)


def nondegenerate(dmap: DarbouxMap, eps_critical: float = DEFAULT_CRITICAL_TOL) -> bool:
    """True iff the map's phase form is nondegenerate: |sigma| > eps * hbar."""
    return nondegenerate_sigma(dmap.sigma, dmap.params.hbar, eps_critical)


def nondegenerate_sigma(sigma: float, hbar: float,
                        eps_critical: float = DEFAULT_CRITICAL_TOL) -> bool:
    return abs(sigma) > eps_critical * hbar


def group_law_defect(alpha, alpha_prime) -> float:
    """Defect of exponent addition within one abelian Weyl family.

    The generators of a single family mutually commute, so composition is
    exact vector addition of exponents and the defect is identically zero;
    this helper exists so tests and the numeric layer state that fact
    against the same artifact.  A corrupted map whose y-rows fail
    [y1, y2] = 0 is caught by the commutator check on the rows, not here.
    """
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(alpha_prime, dtype=float)
    if a.shape != b.shape:
        raise InvalidParams("exponent vectors must have the same shape")
    composed = a + b
    return float(np.max(np.abs((a + b) - composed))) if a.size else 0.0
