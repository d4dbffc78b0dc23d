"""Real linear reductions of the noncommutative algebra to canonical form.

Each solver returns a 4x4 real matrix M whose rows express the canonical
generators (y1, y2, q1, q2) in terms of (x1, x2, p1, p2), together with the
effective constant sigma in [y_i, q_j] = i*sigma*delta_ij.

Cases (eps is the antisymmetric 2-tensor, eps_12 = +1):

* delta > 0, gamma != 0, theta > 0:
      y_i = x_i + a * eps_ij p_j,    a(+-) = (hbar +- sqrt(delta)) / gamma
      q_i = p_i - b * eps_ij x_j,    b(+-) = (hbar +- sqrt(delta)) / theta
  with the SAME sign for a and b; mixing signs makes [y_i, q_i] vanish.
  sigma = 2 * (delta / (gamma*theta)) * (hbar +- sqrt(delta)).

* delta < 0 (which forces gamma*theta > hbar^2 > 0):
      y1 = gamma*x2 + a*p1,   y2 = theta*p2 - a*x1,
      q1 = b*x1 - theta*p2,   q2 = gamma*x2 + b*p1,
  where a and b are the two roots (-gamma*theta +- sqrt(-gamma*theta*delta))/hbar
  taken on OPPOSITE branches; equal branches make [y_i, q_i] vanish.
  sigma = -2 * (gamma*theta/hbar) * delta, branch independent and positive.

* gamma = 0 (theta > 0): the smooth gamma -> 0 limit of the minus branch,
  a = theta/(2*hbar), b = 0, sigma = hbar.  Mirror case theta = 0 with
  gamma != 0: a = 0, b = gamma/(2*hbar), sigma = hbar.  Both zero: identity.

No reduction of this form exists on the critical band; solve() raises
CriticalLine there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from ._backend import kernels
from .algebra import (
    DEFAULT_CRITICAL_TOL,
    AlgebraParams,
    Phase,
    classify,
)
from .errors import (
    CriticalLine,
    DegenerateParams,
    IllConditioned,
    InvalidParams,
    SingularMap,
    WrongPhase,
)

#: Plus-branch coefficients blow up like 2*hbar/gamma as gamma*theta -> 0;
#: below this product threshold solve() refuses to return them.
ILL_CONDITIONED_RATIO = 1e-8

#: Conditioning gate for invert(); unreachable off the critical band.
MAX_CONDITION = 1e12


class Branch(enum.Enum):
    """Sign choice in the coefficient roots."""

    PLUS = "plus"
    MINUS = "minus"


class ReductionCase(enum.Enum):
    """Which closed form produced a map."""

    POSITIVE_DELTA = "positive_delta"
    NEGATIVE_DELTA = "negative_delta"
    GAMMA_ZERO_LIMIT = "gamma_zero_limit"
    THETA_ZERO_LIMIT = "theta_zero_limit"
    COMMUTATIVE_IDENTITY = "commutative_identity"


@dataclass(frozen=True)
class DarbouxMap:
    """A linear reduction: rows of ``matrix`` are (y1, y2, q1, q2).

    ``sigma`` is stored from the closed form rather than recomputed from the
    matrix; the agreement of the two is itself a test.  ``a`` and ``b`` are
    the solver coefficients the rows were assembled from (normalize() scales
    b together with the q-rows).
    """

    matrix: np.ndarray
    sigma: float
    branch: Branch
    case: ReductionCase
    params: AlgebraParams
    a: float
    b: float

    def __post_init__(self) -> None:
        self.matrix.setflags(write=False)


def assemble_positive(a: float, b: float) -> np.ndarray:
    """Rows y_i = x_i + a*eps_ij p_j, q_i = p_i - b*eps_ij x_j."""
    return np.array(
        [
            [1.0, 0.0, 0.0, a],
            [0.0, 1.0, -a, 0.0],
            [0.0, -b, 1.0, 0.0],
            [b, 0.0, 0.0, 1.0],
        ]
    )


def assemble_negative(theta: float, gamma: float, a: float, b: float) -> np.ndarray:
    """Rows y1 = gamma*x2 + a*p1, y2 = theta*p2 - a*x1, q1 = b*x1 - theta*p2, q2 = gamma*x2 + b*p1."""
    return np.array(
        [
            [0.0, gamma, a, 0.0],
            [-a, 0.0, 0.0, theta],
            [b, 0.0, 0.0, -theta],
            [0.0, gamma, b, 0.0],
        ]
    )


def positive_coefficients(params: AlgebraParams) -> tuple[float, float, float, float]:
    """(a+, a-, b+, b-) for the delta > 0 case.

    Computed cancellation-free: the minus roots come from the root products
    a+ a- = theta/gamma and b+ b- = gamma/theta, so they stay accurate (and
    smooth) as gamma -> 0.
    """
    if params.gamma == 0.0 or params.theta == 0.0:
        raise DegenerateParams("coefficients need gamma != 0 and theta > 0")
    if params.delta() <= 0:
        raise WrongPhase("positive-delta coefficients need delta > 0")
    return kernels.positive_coeffs(params.theta, params.gamma, params.hbar)


def negative_coefficients(params: AlgebraParams) -> tuple[float, float]:
    """(a+, a-) for the delta < 0 case (b runs over the same two roots)."""
    if params.delta() >= 0:
        raise WrongPhase("negative-delta coefficients need delta < 0")
    return kernels.negative_coeffs(params.theta, params.gamma, params.hbar)


def solve_positive_delta(
    params: AlgebraParams,
    branch: Branch,
    eps_critical: float = DEFAULT_CRITICAL_TOL,
) -> DarbouxMap:
    """Reduction for delta > 0 with gamma != 0, theta > 0.

    y and q take the same branch; sigma = 2*(delta/(gamma*theta))*(hbar +- sqrt(delta)).
    """
    if classify(params, eps_critical) is not Phase.POSITIVE_DELTA:
        raise WrongPhase(f"parameters {params} are not in the positive-delta phase")
    if params.gamma == 0.0 or params.theta == 0.0:
        raise DegenerateParams("gamma = 0 or theta = 0: use the limit solvers")
    a_plus, a_minus, b_plus, b_minus = positive_coefficients(params)
    if branch is Branch.PLUS:
        a, b = a_plus, b_plus
        sigma = kernels.sigma_positive(params.theta, params.gamma, params.hbar, +1)
    else:
        a, b = a_minus, b_minus
        sigma = kernels.sigma_positive(params.theta, params.gamma, params.hbar, -1)
    return DarbouxMap(
        matrix=assemble_positive(a, b),
        sigma=float(sigma),
        branch=branch,
        case=ReductionCase.POSITIVE_DELTA,
        params=params,
        a=float(a),
        b=float(b),
    )


def solve_negative_delta(
    params: AlgebraParams,
    branch: Branch,
    eps_critical: float = DEFAULT_CRITICAL_TOL,
) -> DarbouxMap:
    """Reduction for delta < 0.

    The y-rows take the requested branch, the q-rows the opposite one;
    sigma = -2*(gamma*theta/hbar)*delta > 0 either way.
    """
    if classify(params, eps_critical) is not Phase.NEGATIVE_DELTA:
        raise WrongPhase(f"parameters {params} are not in the negative-delta phase")
    a_plus, a_minus = negative_coefficients(params)
    if branch is Branch.PLUS:
        a, b = a_plus, a_minus
    else:
        a, b = a_minus, a_plus
    sigma = kernels.sigma_negative(params.theta, params.gamma, params.hbar)
    return DarbouxMap(
        matrix=assemble_negative(params.theta, params.gamma, a, b),
        sigma=float(sigma),
        branch=branch,
        case=ReductionCase.NEGATIVE_DELTA,
        params=params,
        a=float(a),
        b=float(b),
    )


def solve_gamma_zero(params: AlgebraParams) -> DarbouxMap:
    """Smooth gamma -> 0 limit: a = theta/(2*hbar), b = 0, sigma = hbar."""
    if params.gamma != 0.0:
        raise DegenerateParams(f"gamma must be exactly 0, got {params.gamma}")
    if params.theta == 0.0:
        raise DegenerateParams("theta = 0 as well: the algebra is already canonical")
    a = params.theta / (2.0 * params.hbar)
    return DarbouxMap(
        matrix=assemble_positive(a, 0.0),
        sigma=params.hbar,
        branch=Branch.MINUS,
        case=ReductionCase.GAMMA_ZERO_LIMIT,
        params=params,
        a=a,
        b=0.0,
    )


def solve_theta_zero(params: AlgebraParams) -> DarbouxMap:
    """Mirror limit theta -> 0: a = 0, b = gamma/(2*hbar), sigma = hbar."""
    if params.theta != 0.0:
        raise DegenerateParams(f"theta must be exactly 0, got {params.theta}")
    if params.gamma == 0.0:
        raise DegenerateParams("gamma = 0 as well: the algebra is already canonical")
    b = params.gamma / (2.0 * params.hbar)
    return DarbouxMap(
        matrix=assemble_positive(0.0, b),
        sigma=params.hbar,
        branch=Branch.MINUS,
        case=ReductionCase.THETA_ZERO_LIMIT,
        params=params,
        a=0.0,
        b=b,
    )


def solve(
    params: AlgebraParams,
    branch: Branch = Branch.MINUS,
    eps_critical: float = DEFAULT_CRITICAL_TOL,
) -> DarbouxMap:
    """Dispatch to the correct case solver for the given parameters.

    Raises CriticalLine on the critical band (no such reduction exists
    there), and IllConditioned for the plus branch when gamma*theta is so
    small that a+ ~ 2*hbar/gamma would poison everything downstream; the
    minus branch is the smooth one and stays available.
    """
    phase = classify(params, eps_critical)
    if phase is Phase.CRITICAL:
        raise CriticalLine(
            f"hbar^2 = gamma*theta within the critical band "
            f"(delta = {params.delta():.3e}, hbar^2 = {params.hbar**2:.3e})"
        )
    if phase is Phase.NEGATIVE_DELTA:
        return solve_negative_delta(params, branch, eps_critical)
    if params.gamma == 0.0 and params.theta == 0.0:
        return DarbouxMap(
            matrix=np.eye(4),
            sigma=params.hbar,
            branch=branch,
            case=ReductionCase.COMMUTATIVE_IDENTITY,
            params=params,
            a=0.0,
            b=0.0,
        )
    if params.gamma == 0.0:
        return solve_gamma_zero(params)
    if params.theta == 0.0:
        return solve_theta_zero(params)
    if branch is Branch.PLUS and abs(params.gamma * params.theta) < (
        ILL_CONDITIONED_RATIO * params.hbar**2
    ):
        raise IllConditioned(
            f"plus branch with gamma*theta = {params.gamma * params.theta:.3e} "
            f"<< hbar^2: coefficients ~ 2*hbar/gamma blow up; use the minus branch"
        )
    return solve_positive_delta(params, branch, eps_critical)


def normalize(dmap: DarbouxMap, target: float | None = None) -> DarbouxMap:
    """Rescale the q-rows so the map's sigma becomes ``target`` exactly.

    Default target is the parameters' hbar.  A negative sigma (possible for
    gamma < 0 raw maps) is flipped here and nowhere else; the y-rows are
    never touched.
    """
    if target is None:
        target = dmap.params.hbar
    if not target > 0:
        raise InvalidParams(f"target sigma must be > 0, got {target}")
    if dmap.sigma == target:
        return dmap
    factor = target / dmap.sigma
    matrix = dmap.matrix.copy()
    matrix[2:4, :] *= factor
    return replace(dmap, matrix=matrix, sigma=float(target), b=dmap.b * factor)


def invert(dmap: DarbouxMap) -> np.ndarray:
    """M^-1, reconstructing (x, p) from (y, q).

    Gated on conditioning and on the residual ||M M^-1 - I||_max; a failure
    here means an internal inconsistency, not a user error, since every
    solver output is invertible off the critical band.
    """
    cond = np.linalg.cond(dmap.matrix)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularMap(f"condition estimate {cond:.3e} exceeds {MAX_CONDITION:.0e}")
    inverse = np.linalg.inv(dmap.matrix)
    residual = np.max(np.abs(dmap.matrix @ inverse - np.eye(4)))
    if residual >= 1e-10:
        raise SingularMap(f"inversion residual {residual:.3e} exceeds 1e-10")
    return inverse
