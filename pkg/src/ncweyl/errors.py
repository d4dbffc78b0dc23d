"""Exception hierarchy for ncweyl.

Everything raised by this package derives from :class:`NCWeylError`, so
callers can catch one type at an API boundary.  Validation failures
additionally derive from ValueError.
"""


class NCWeylError(Exception):
    """Base class for all ncweyl errors."""


class InvalidParams(NCWeylError, ValueError):
    """Algebra parameters violate their invariants (hbar <= 0, theta < 0, non-finite)."""


class WrongPhase(NCWeylError):
    """A case solver was invoked for parameters in a different phase."""


class DegenerateParams(NCWeylError):
    """A case solver was invoked with a degenerate parameter (gamma or theta zero)."""


class CriticalLine(NCWeylError):
    """Parameters sit on the critical band hbar^2 = gamma*theta; no reduction exists."""


class IllConditioned(NCWeylError):
    """The requested branch would produce a numerically useless (blown-up) map."""


class SingularMap(NCWeylError):
    """Map inversion failed the conditioning / residual gate (internal consistency error)."""


class InvalidTheta(NCWeylError, ValueError):
    """A Fock-space constructor needs theta > 0."""


class InvalidSigma(NCWeylError, ValueError):
    """A canonical-pair constructor needs sigma > 0 (or a matching sigma)."""


class SigmaMismatch(NCWeylError):
    """The canonical representation's sigma does not match the map's sigma."""


class DimensionMismatch(NCWeylError, ValueError):
    """Operands live on different spaces."""


class EmptyInterior(NCWeylError, ValueError):
    """The requested margin leaves no interior basis states."""


class DegenerateVacuum(NCWeylError):
    """The representation's near-vacuum space is not one-dimensional."""


class BasisBreakdown(NCWeylError):
    """Orthonormalization produced a (near-)zero vector before the requested basis size."""
