"""Noncommutative Heisenberg-Weyl algebra: reduction to canonical form and
numerical verification of representation uniqueness on truncated Fock spaces.

The closed-form layer (ncweyl.algebra, ncweyl.darboux, ncweyl.weyl) handles
the 4x4 commutation structure, the reducing linear maps in both phases of
the parameter space, and the Weyl phase forms.  The numeric layer
(ncweyl.fock, ncweyl.convergence) realizes everything as matrices on
truncated number bases and measures the defects.  ncweyl.cli drives it all
from the command line.
"""

from ._backend import backend_name
from .algebra import (
    DEFAULT_CRITICAL_TOL,
    AlgebraParams,
    LinComb,
    Phase,
    StructureMatrix,
    classify,
    commutator,
    is_canonical,
    structure_matrix,
    transform_structure,
    X1,
    X2,
    P1,
    P2,
)
from .darboux import (
    Branch,
    DarbouxMap,
    ReductionCase,
    invert,
    normalize,
    solve,
    solve_gamma_zero,
    solve_negative_delta,
    solve_positive_delta,
    solve_theta_zero,
)
from .errors import (
    BasisBreakdown,
    CriticalLine,
    DegenerateParams,
    DegenerateVacuum,
    DimensionMismatch,
    EmptyInterior,
    IllConditioned,
    InvalidParams,
    InvalidSigma,
    InvalidTheta,
    NCWeylError,
    SigmaMismatch,
    SingularMap,
    WrongPhase,
)
from .fock import (
    DefectReport,
    FockRep,
    FockSpace,
    IntertwinerResult,
    canonical_pair,
    commutator_defect,
    hs_inner,
    hs_rep,
    intertwiner,
    interior_indices,
    ladder,
    phase_defect,
    position_ops,
    realize_nc,
    two_mode_canonical,
    vacuum_space,
    weyl_numeric,
)
from .weyl import (
    WeylPhaseForm,
    group_law_defect,
    nondegenerate,
    nondegenerate_sigma,
    phase_form_negative,
    phase_form_positive,
    weyl_phase,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraParams",
    "BasisBreakdown",
    "Branch",
    "CriticalLine",
    "DarbouxMap",
    "DefectReport",
    "DegenerateParams",
    "DegenerateVacuum",
    "DimensionMismatch",
    "DEFAULT_CRITICAL_TOL",
    "EmptyInterior",
    "FockRep",
    "FockSpace",
    "IllConditioned",
    "IntertwinerResult",
    "InvalidParams",
    "InvalidSigma",
    "InvalidTheta",
    "LinComb",
    "NCWeylError",
    "P1",
    "P2",
    "Phase",
    "ReductionCase",
    "SigmaMismatch",
    "SingularMap",
    "StructureMatrix",
    "WeylPhaseForm",
    "WrongPhase",
    "X1",
    "X2",
    "backend_name",
    "canonical_pair",
    "classify",
    "commutator",
    "commutator_defect",
    "group_law_defect",
    "hs_inner",
    "hs_rep",
    "intertwiner",
    "interior_indices",
    "invert",
    "is_canonical",
    "ladder",
    "nondegenerate",
    "nondegenerate_sigma",
    "normalize",
    "phase_defect",
    "phase_form_negative",
    "phase_form_positive",
    "position_ops",
    "realize_nc",
    "solve",
    "solve_gamma_zero",
    "solve_negative_delta",
    "solve_positive_delta",
    "solve_theta_zero",
    "structure_matrix",
    "transform_structure",
    "two_mode_canonical",
    "vacuum_space",
    "weyl_numeric",
    "weyl_phase",
]
