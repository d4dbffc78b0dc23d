"""Commutation structure of two noncommuting coordinates and momenta.

The algebra is generated by (x1, x2, p1, p2) with

    [x1, x2] = i*theta,   [x_i, p_j] = i*hbar*delta_ij,   [p1, p2] = i*gamma,

all other commutators zero.  Everything in this module is closed-form
bookkeeping on that structure: real linear combinations of the generators,
the 4x4 antisymmetric matrix holding all commutators, pushforward of that
matrix under a linear change of generators, and the phase classification
driven by the discriminant delta = hbar^2 - gamma*theta.

Generator ordering is fixed globally as (x1, x2, p1, p2) for the original
generators and (y1, y2, q1, q2) for canonical ones; every matrix in the
package uses it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InvalidParams

#: Default relative half-width of the critical band |delta| <= eps * hbar^2.
DEFAULT_CRITICAL_TOL = 1e-12

#: Canonical commutator pattern for (y1, y2, q1, q2): [y_i, q_j] = i*sigma*J[i][j].
CANONICAL_J = np.array(
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ]
)
CANONICAL_J.setflags(write=False)


class Phase(enum.Enum):
    """Which side of the critical line hbar^2 = gamma*theta the parameters sit on."""

    POSITIVE_DELTA = "positive_delta"
    NEGATIVE_DELTA = "negative_delta"
    CRITICAL = "critical"


@dataclass(frozen=True)
class AlgebraParams:
    """The parameter triple (theta, gamma, hbar).

    theta >= 0 (position noncommutativity, length^2), gamma real (momentum
    noncommutativity, momentum^2), hbar > 0 (action).  theta < 0 is rejected:
    the theta > 0 convention costs no generality and halves the sign
    bookkeeping.
    """

    theta: float
    gamma: float
    hbar: float

    def __post_init__(self) -> None:
        for name in ("theta", "gamma", "hbar"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParams(f"{name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.hbar <= 0:
            raise InvalidParams(f"hbar must be > 0, got {self.hbar}")
        if self.theta < 0:
            raise InvalidParams(f"theta must be >= 0, got {self.theta}")

    def delta(self) -> float:
        """Discriminant hbar^2 - gamma*theta."""
        return self.hbar * self.hbar - self.gamma * self.theta


@dataclass(frozen=True)
class LinComb:
    """A real linear combination of the generators, ordered (x1, x2, p1, p2)."""

    coeffs: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.coeffs) != 4:
            raise InvalidParams("LinComb needs exactly 4 coefficients")
        clean = tuple(float(c) for c in self.coeffs)
        if not all(math.isfinite(c) for c in clean):
            raise InvalidParams(f"coefficients must be finite reals, got {self.coeffs!r}")
        object.__setattr__(self, "coeffs", clean)

    def __add__(self, other: "LinComb") -> "LinComb":
        return LinComb(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LinComb") -> "LinComb":
        return LinComb(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "LinComb":
        return LinComb(tuple(-a for a in self.coeffs))

    def __mul__(self, scalar: float) -> "LinComb":
        return LinComb(tuple(scalar * a for a in self.coeffs))

    __rmul__ = __mul__

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs)


X1 = LinComb((1.0, 0.0, 0.0, 0.0))
X2 = LinComb((0.0, 1.0, 0.0, 0.0))
P1 = LinComb((0.0, 0.0, 1.0, 0.0))
P2 = LinComb((0.0, 0.0, 0.0, 1.0))


@dataclass(frozen=True)
class StructureMatrix:
    """4x4 real antisymmetric matrix with [g_i, g_j] = i * omega[i][j]."""

    omega: np.ndarray
    params: AlgebraParams

    def __post_init__(self) -> None:
        self.omega.setflags(write=False)


def structure_matrix(params: AlgebraParams) -> StructureMatrix:
    """Structure matrix of the algebra: antisymmetric by construction.

    Nonzero upper-triangle entries: omega[0][1] = theta, omega[0][2] =
    omega[1][3] = hbar, omega[2][3] = gamma.
    """
    omega = kernels.structure_omega(params.theta, params.gamma, params.hbar)
    return StructureMatrix(omega=omega, params=params)


def _omega_array(omega: StructureMatrix | np.ndarray) -> np.ndarray:
    arr = omega.omega if isinstance(omega, StructureMatrix) else np.asarray(omega, dtype=float)
    if arr.shape != (4, 4):
        raise InvalidParams(f"expected a 4x4 structure matrix, got shape {arr.shape}")
    return np.ascontiguousarray(arr)


def _coeff_array(u: LinComb | np.ndarray) -> np.ndarray:
    arr = u.as_array() if isinstance(u, LinComb) else np.asarray(u, dtype=float)
    if arr.shape != (4,):
        raise InvalidParams(f"expected a 4-vector of coefficients, got shape {arr.shape}")
    return np.ascontiguousarray(arr)


def commutator(u: LinComb | np.ndarray, v: LinComb | np.ndarray,
               omega: StructureMatrix | np.ndarray) -> float:
    """Scalar s with [u, v] = i*s, i.e. the bilinear form u^T omega v.

    Antisymmetric in (u, v) exactly, since omega is antisymmetric entrywise.
    """
    return float(kernels.bilinear4(_coeff_array(u), _omega_array(omega), _coeff_array(v)))


def transform_structure(m: np.ndarray, omega: StructureMatrix | np.ndarray) -> np.ndarray:
    """Structure matrix of the transformed generators g'_i = sum_j M[i][j] g_j.

    Returns M @ omega @ M^T; antisymmetric up to rounding.
    """
    marr = np.ascontiguousarray(np.asarray(m, dtype=float))
    if marr.shape != (4, 4):
        raise InvalidParams(f"expected a 4x4 transformation, got shape {marr.shape}")
    if not np.all(np.isfinite(marr)):
        raise InvalidParams("transformation matrix must be finite")
    return kernels.sandwich4(marr, _omega_array(omega))


def is_canonical(omega_prime: np.ndarray, tol: float = 1e-10) -> float | None:
    """Sigma if omega_prime matches the canonical pattern sigma*J, else None.

    The match is entrywise within tol * max(1, |sigma|); absence of a match
    is signalled by None, not an exception.
    """
    value = kernels.canonical_sigma(_omega_array(omega_prime), float(tol))
    if math.isnan(value):
        return None
    return float(value)


def classify(params: AlgebraParams, eps_critical: float = DEFAULT_CRITICAL_TOL) -> Phase:
    """Phase of the parameters, with a relative critical band.

    Critical iff |delta| <= eps_critical * hbar^2; exact equality tests on
    the line would be meaningless in floating point.
    """
    code = kernels.classify_code(params.theta, params.gamma, params.hbar, float(eps_critical))
    if code > 0:
        return Phase.POSITIVE_DELTA
    if code < 0:
        return Phase.NEGATIVE_DELTA
    return Phase.CRITICAL
