"""Finite-truncation matrix realizations and their defect measurements.

Everything here is plain dense linear algebra on truncated number-state
bases: ladder and position operators on a single truncation, the
Hilbert-Schmidt representation on the N^2-dimensional operator space, the
canonical oscillator pairs targeted by the reduction maps, Weyl unitaries
by spectral decomposition, and the constructive equivalence check between
two canonical representations (vacuum -> number basis -> basis change).

Truncation breaks the commutation relations only at the top of the ladder:
[b, b+] = I - N |N-1><N-1| exactly.  All algebra checks therefore measure
defects on an interior block, obtained by discarding ``margin`` top indices
in every tensor factor; margin 2 covers the products that appear in the
momentum operators.  Defects are operator norms (largest singular value)
normalized by max(|expected|, scale), which keeps relations of different
physical size comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse.linalg

from .algebra import AlgebraParams
from .darboux import DarbouxMap, invert
from .errors import (
    BasisBreakdown,
    DegenerateVacuum,
    DimensionMismatch,
    EmptyInterior,
    InvalidParams,
    InvalidSigma,
    InvalidTheta,
    SigmaMismatch,
)

#: Above this dimension exact SVD norms switch to a Lanczos estimate.
_DENSE_NORM_LIMIT = 2048

#: Hermiticity gate for representation generators (max-entry norm).
_HERMITICITY_TOL = 1e-12

#: Default near-zero threshold (in units of sigma) for vacuum counting.
DEFAULT_VACUUM_TOL = 0.1


@dataclass(frozen=True)
class FockSpace:
    """Truncated number basis |0> .. |N-1|; N >= 4 so margins leave an interior."""

    dim: int

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or self.dim < 4:
            raise InvalidParams(f"truncation dim must be an int >= 4, got {self.dim!r}")


@dataclass(frozen=True)
class FockRep:
    """A tuple of hermitian generator matrices on a (possibly composite) space.

    ``factors`` holds the per-tensor-factor truncations; their product is the
    ambient dimension.  Exactly one of ``sigma`` (canonical reps) and
    ``params`` (noncommutative реps) is set, and it fixes the natural scale
    used to normalize defects.
    """

    generators: tuple[np.ndarray, ...]
    names: tuple[str, ...]
    factors: tuple[int, ...]
    sigma: float | None = None
    params: AlgebraParams | None = None

    def __post_init__(self) -> None:
        dim = int(np.prod(self.factors))
        for name, g in zip(self.names, self.generators):
            if g.shape != (dim, dim):
                raise DimensionMismatch(
                    f"generator {name} has shape {g.shape}, expected {(dim, dim)}"
                )
            herm = np.max(np.abs(g - g.conj().T))
            if herm > _HERMITICITY_TOL:
                raise InvalidParams(f"generator {name} is not hermitian: defect {herm:.3e}")
            g.setflags(write=False)

    @property
    def dim(self) -> int:
        return int(np.prod(self.factors))

    @property
    def scale(self) -> float:
        if self.params is not None:
            return self.params.hbar
        return abs(self.sigma) if self.sigma else 1.0


@dataclass(frozen=True)
class DefectReport:
    """One measured defect with its tolerance verdict."""

    name: str
    defect: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "defect": self.defect,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "details": self.details,
        }


def _report(name: str, defect: float, tolerance: float, **details) -> DefectReport:
    return DefectReport(
        name=name,
        defect=float(defect),
        tolerance=float(tolerance),
        passed=bool(defect <= tolerance),
        details=details,
    )


def ladder(space: FockSpace) -> tuple[np.ndarray, np.ndarray]:
    """(b, b+) with b|n> = sqrt(n)|n-1>.

    The truncation corrupts the commutator only at the top state:
    [b, b+] = I - N|N-1><N-1| up to the rounding of sqrt(n)^2.
    """
    n = space.dim
    b = np.zeros((n, n), dtype=complex)
    b[np.arange(n - 1), np.arange(1, n)] = np.sqrt(np.arange(1, n))
    return b, b.conj().T.copy()


def position_ops(space: FockSpace, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates x1 = sqrt(theta/2)(b + b+), x2 = -i sqrt(theta/2)(b - b+).

    Hermitian exactly by construction; [x1, x2] = i*theta on the margin-1
    interior.
    """
    if theta <= 0:
        raise InvalidTheta(f"position operators need theta > 0, got {theta}")
    b, bdag = ladder(space)
    scale = math.sqrt(theta / 2.0)
    x1 = scale * (b + bdag)
    x2 = -1j * scale * (b - bdag)
    return x1, x2


def hs_inner(phi: np.ndarray, psi: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(phi^dagger psi), conjugate-linear in phi."""
    phi = np.asarray(phi)
    psi = np.asarray(psi)
    if phi.shape != psi.shape or phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
        raise DimensionMismatch(f"states must be equal square matrices, got {phi.shape} and {psi.shape}")
    return complex(np.vdot(phi, psi))


def vec_state(psi: np.ndarray) -> np.ndarray:
    """Flatten an operator-valued state row-major; hs_inner becomes the plain vector product."""
    return np.asarray(psi).reshape(-1)


def unvec_state(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim)


def hs_rep(space: FockSpace, theta: float, hbar: float) -> FockRep:
    """Operators on the N^2-dim space of matrices: X_i by left multiplication,
    P_i = (hbar/theta) * eps_ij * (commutator with x_j).

    Under row-major vectorization, left multiplication by A is kron(A, I) and
    right multiplication is kron(I, A^T), so
        P1 = (hbar/theta) (kron(x2, I) - kron(I, x2^T)),
        P2 = -(hbar/theta) (kron(x1, I) - kron(I, x1^T)).
    All four are hermitian for the Hilbert-Schmidt inner product, which is
    the ordinary vector inner product after vectorization.  This form of the
    momenta requires commuting momenta, i.e. gamma = 0.
    """
    if theta <= 0:
        raise InvalidTheta(f"the operator-space representation needs theta > 0, got {theta}")
    n = space.dim
    x1, x2 = position_ops(space, theta)
    eye = np.eye(n)
    left = lambda a: np.kron(a, eye)
    right = lambda a: np.kron(eye, a.T)
    ratio = hbar / theta
    gens = (
        left(x1),
        left(x2),
        ratio * (left(x2) - right(x2)),
        -ratio * (left(x1) - right(x1)),
    )
    return FockRep(
        generators=gens,
        names=("X1", "X2", "P1", "P2"),
        factors=(n, n),
        params=AlgebraParams(theta=theta, gamma=0.0, hbar=hbar),
    )


def canonical_pair(space: FockSpace, sigma: float) -> FockRep:
    """Single-mode pair y = sqrt(sigma/2)(a + a+), q = -i sqrt(sigma/2)(a - a+)."""
    if sigma <= 0:
        raise InvalidSigma(f"canonical pair needs sigma > 0, got {sigma}")
    b, bdag = ladder(space)
    scale = math.sqrt(sigma / 2.0)
    return FockRep(
        generators=(scale * (b + bdag), -1j * scale * (b - bdag)),
        names=("y", "q"),
        factors=(space.dim,),
        sigma=float(sigma),
    )


def two_mode_canonical(space: FockSpace, sigma: float) -> FockRep:
    """Two independent canonical pairs on the tensor square, ordered (y1, y2, q1, q2)."""
    if sigma <= 0:
        raise InvalidSigma(f"canonical pairs need sigma > 0, got {sigma}")
    single = canonical_pair(space, sigma)
    y, q = single.generators
    eye = np.eye(space.dim)
    return FockRep(
        generators=(np.kron(y, eye), np.kron(eye, y), np.kron(q, eye), np.kron(eye, q)),
        names=("y1", "y2", "q1", "q2"),
        factors=(space.dim, space.dim),
        sigma=float(sigma),
    )


def realize_nc(dmap: DarbouxMap, canonical: FockRep) -> FockRep:
    """Noncommutative generators as real linear combinations of canonical ones.

    Applies the inverse map rows to (y1, y2, q1, q2); real coefficients keep
    hermiticity exact, and the resulting commutators reproduce the structure
    matrix of the map's parameters on the interior.
    """
    if len(canonical.generators) != 4:
        raise DimensionMismatch("need a four-generator canonical representation")
    if canonical.sigma is None:
        raise InvalidSigma("the canonical representation must carry sigma")
    if abs(canonical.sigma - dmap.sigma) > 1e-10 * max(1.0, abs(dmap.sigma)):
        raise SigmaMismatch(
            f"canonical sigma {canonical.sigma} does not match map sigma {dmap.sigma}"
        )
    minv = invert(dmap)
    gens = tuple(
        sum(minv[i, j] * canonical.generators[j] for j in range(4)) for i in range(4)
    )
    return FockRep(
        generators=gens,
        names=("x1", "x2", "p1", "p2"),
        factors=canonical.factors,
        params=dmap.params,
    )


def interior_indices(factors: Sequence[int], margin: int) -> np.ndarray:
    """Ambient indices whose every factor index is below dim - margin."""
    if margin < 0:
        raise InvalidParams(f"margin must be >= 0, got {margin}")
    keep = [np.arange(d - margin) for d in factors]
    if any(len(k) == 0 for k in keep):
        raise EmptyInterior(f"margin {margin} empties factors {tuple(factors)}")
    idx = keep[0]
    for d, k in zip(factors[1:], keep[1:]):
        idx = (idx[:, None] * d + k[None, :]).reshape(-1)
    return idx


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value; Lanczos beyond the dense-SVD size limit."""
    if min(a.shape) <= _DENSE_NORM_LIMIT:
        return float(np.linalg.norm(a, 2))
    top = scipy.sparse.linalg.svds(a, k=1, return_singular_vectors=False)
    return float(top[0])


def commutator_defect(
    rep: FockRep,
    pair: tuple[int, int],
    expected: complex,
    margin: int,
    tolerance: float = 1e-10,
    name: str | None = None,
) -> DefectReport:
    """Interior defect of [A_i, A_j] = expected * I.

    defect = ||P ([A_i, A_j] - expected I) P|| / max(|expected|, scale) with
    P the margin projector.  The slab form P A B P etc. avoids full products.
    """
    if margin < 1:
        raise InvalidParams("algebra checks need margin >= 1")
    i, j = pair
    a, b = rep.generators[i], rep.generators[j]
    idx = interior_indices(rep.factors, margin)
    block = a[idx, :] @ b[:, idx] - b[idx, :] @ a[:, idx]
    block[np.arange(len(idx)), np.arange(len(idx))] -= expected
    scale = max(abs(expected), rep.scale)
    defect = operator_norm(block) / scale
    label = name or f"[{rep.names[i]},{rep.names[j]}]"
    expected = complex(expected)
    return _report(
        label,
        defect,
        tolerance,
        expected=[expected.real, expected.imag],
        margin=margin,
        factors=list(rep.factors),
        dim=rep.dim,
        scale=scale,
    )


def hermiticity_defect(rep: FockRep) -> dict[str, float]:
    """Max-entry norm of A - A+ per generator (zero by construction here)."""
    return {
        name: float(np.max(np.abs(g - g.conj().T)))
        for name, g in zip(rep.names, rep.generators)
    }


def _expm_i_hermitian(h: np.ndarray) -> np.ndarray:
    """exp(i h) for hermitian h via spectral decomposition: unitary up to rounding."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def weyl_numeric(rep: FockRep, family: str, coeffs) -> np.ndarray:
    """Unitary exp(i sum_j c_j G_j) over one family of generators.

    family "U" exponentiates the first half of the generators (the y's),
    family "V" the second half (the q's).
    """
    m = len(rep.generators) // 2
    gens = rep.generators[:m] if family.upper() == "U" else rep.generators[m:]
    if family.upper() not in ("U", "V"):
        raise InvalidParams(f"family must be 'U' or 'V', got {family!r}")
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (m,):
        raise InvalidParams(f"need {m} coefficients for this representation, got shape {c.shape}")
    h = sum(cj * g for cj, g in zip(c, gens))
    return _expm_i_hermitian(h)


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def phase_defect(
    u: np.ndarray,
    v: np.ndarray,
    omega_phase: float,
    margin: int,
    factors: Sequence[int] | None = None,
    tolerance: float = 1e-10,
    name: str = "weyl_phase",
) -> DefectReport:
    """Interior defect of U V = exp(i omega) V U.

    Truncation-limited: the defect converges to zero only on a fixed block
    as the truncation grows, so it is reported together with the dimensions
    and margin it was measured at.
    """
    if u.shape != v.shape:
        raise DimensionMismatch(f"U and V differ in shape: {u.shape} vs {v.shape}")
    dim = u.shape[0]
    facs = tuple(factors) if factors is not None else (dim,)
    if int(np.prod(facs)) != dim:
        raise DimensionMismatch(f"factors {facs} do not multiply to dim {dim}")
    idx = interior_indices(facs, margin)
    block = u[idx, :] @ v[:, idx] - np.exp(1j * omega_phase) * (v[idx, :] @ u[:, idx])
    defect = operator_norm(block)
    return _report(
        name,
        defect,
        tolerance,
        omega=float(omega_phase),
        margin=margin,
        factors=list(facs),
        dim=dim,
    )


def _annihilators(rep: FockRep, sigma: float) -> list[np.ndarray]:
    m = len(rep.generators) // 2
    return [
        (rep.generators[i] + 1j * rep.generators[m + i]) / math.sqrt(2.0 * sigma)
        for i in range(m)
    ]


def vacuum_spectrum(rep: FockRep, sigma: float | None = None) -> np.ndarray:
    """Ascending spectrum of the total number operator sum_i a_i^dagger a_i."""
    sigma = rep.sigma if sigma is None else sigma
    if sigma is None or sigma <= 0:
        raise InvalidSigma(f"vacuum analysis needs sigma > 0, got {sigma}")
    h = sum(a.conj().T @ a for a in _annihilators(rep, sigma))
    return np.linalg.eigvalsh(h)


def vacuum_space(
    rep: FockRep,
    sigma: float | None = None,
    tol: float = DEFAULT_VACUUM_TOL,
) -> tuple[np.ndarray, int]:
    """Near-vacuum eigenvectors (columns) and their count.

    Builds a_i = (y_i + i q_i)/sqrt(2 sigma), diagonalizes the hermitian
    positive sum a_i^dagger a_i, and returns eigenvectors with eigenvalue
    below tol.  The count is the multiplicity with which the representation
    contains the standard irreducible one at this truncation.
    """
    sigma = rep.sigma if sigma is None else sigma
    if sigma is None or sigma <= 0:
        raise InvalidSigma(f"vacuum analysis needs sigma > 0, got {sigma}")
    h = sum(a.conj().T @ a for a in _annihilators(rep, sigma))
    w, v = np.linalg.eigh(h)
    count = int(np.sum(w < tol))
    return v[:, :count], count


def _graded_indices(modes: int, count: int) -> list[tuple[int, ...]]:
    """Multi-indices in graded order: by total level, then descending first mode."""
    out: list[tuple[int, ...]] = []
    level = 0
    while len(out) < count:
        if modes == 1:
            out.append((level,))
        else:
            for k in range(level + 1):
                out.append((level - k, k))
                if len(out) >= count:
                    break
        level += 1
    return out[:count]


def build_number_basis(
    rep: FockRep,
    sigma: float,
    count: int,
    tol_vacuum: float = DEFAULT_VACUUM_TOL,
) -> np.ndarray:
    """Orthonormal number-state basis grown from the unique near-vacuum.

    Applies creation operators along the graded order and re-orthogonalizes
    each new vector twice against all previous ones; two passes keep the
    basis orthonormal at the level the equivalence residuals need.
    """
    m = len(rep.generators) // 2
    if m not in (1, 2):
        raise InvalidParams("basis construction supports one or two mode pairs")
    vectors, nvac = vacuum_space(rep, sigma, tol_vacuum)
    if nvac != 1:
        raise DegenerateVacuum(
            f"near-vacuum count is {nvac}, not 1; quotient the multiplicity first"
        )
    creators = [a.conj().T for a in _annihilators(rep, sigma)]
    states: dict[tuple[int, ...], np.ndarray] = {(0,) * m: vectors[:, 0]}
    basis: list[np.ndarray] = []
    for idx in _graded_indices(m, count):
        if sum(idx) == 0:
            vec = states[idx]
        else:
            j = next(k for k, nk in enumerate(idx) if nk > 0)
            parent = tuple(nk - (1 if k == j else 0) for k, nk in enumerate(idx))
            vec = creators[j] @ states[parent]
            for _ in range(2):
                for prev in basis:
                    vec = vec - (prev.conj() @ vec) * prev
            norm = float(np.linalg.norm(vec))
            if norm < 1e-8:
                raise BasisBreakdown(
                    f"basis vector {idx} collapsed (norm {norm:.3e}) before "
                    f"reaching {count} states"
                )
            vec = vec / norm
            states[idx] = vec
        basis.append(vec)
    return np.array(basis).T


@dataclass(frozen=True)
class IntertwinerResult:
    """Basis change between two canonical representations on a compared block."""

    w: np.ndarray
    residual: float
    unitarity_defect: float
    n_interior: int


def intertwiner(
    rep_a: FockRep,
    rep_b: FockRep,
    sigma: float | None = None,
    n_interior: int = 8,
    tol_vacuum: float = DEFAULT_VACUUM_TOL,
) -> IntertwinerResult:
    """Constructive equivalence of two canonical representations.

    Each representation gets a number basis grown from its unique vacuum;
    W maps the first onto the second.  The residual compares every
    generator's matrix elements in the two constructed bases,

        residual = max_i || B+ G_i^B B  -  A+ G_i^A A ||_2 / sigma,

    which equals the intertwining defect of W restricted to the compared
    block on both sides.  (One-sided restriction would be polluted by ladder
    leakage out of the block even for exactly equivalent representations.)
    """
    sigma_a = rep_a.sigma if sigma is None else sigma
    if sigma_a is None or sigma_a <= 0:
        raise InvalidSigma(f"intertwiner needs sigma > 0, got {sigma_a}")
    if len(rep_a.generators) != len(rep_b.generators):
        raise DimensionMismatch("representations have different generator counts")
    if n_interior < 1 or n_interior > min(rep_a.dim, rep_b.dim):
        raise InvalidParams(f"n_interior {n_interior} not in [1, min dim]")
    basis_a = build_number_basis(rep_a, sigma_a, n_interior, tol_vacuum)
    basis_b = build_number_basis(rep_b, sigma_a, n_interior, tol_vacuum)
    w = basis_b @ basis_a.conj().T
    residual = 0.0
    for ga, gb in zip(rep_a.generators, rep_b.generators):
        diff = basis_b.conj().T @ gb @ basis_b - basis_a.conj().T @ ga @ basis_a
        residual = max(residual, float(np.linalg.norm(diff, 2)))
    residual /= sigma_a
    gram = basis_a.conj().T @ (w.conj().T @ w) @ basis_a
    unit = float(np.max(np.abs(gram - np.eye(n_interior))))
    return IntertwinerResult(
        w=w, residual=residual, unitarity_defect=unit, n_interior=n_interior
    )


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish unitary from the QR decomposition of a complex Gaussian matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
