"""Exception hierarchy shared by all rankone modules."""


class RankOneError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RankOneError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole of a gamma-type expression."""


class BranchCutError(DomainError):
    """The hypergeometric argument lies on the cut (1, inf)."""


class DegenerateParameterError(DomainError):
    """The lower hypergeometric parameter is zero or a negative integer."""


class PreconditionError(DomainError):
    """A stated inequality on the parameters fails."""


class AdmissibilityError(PreconditionError):
    """Parameters are not admissible for a bound certificate."""


class NonConvergenceError(RankOneError, ArithmeticError):
    """A series or iterative scheme failed to converge.

    ``diagnostics`` carries whatever the failing routine knew at the time.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class TailBoundError(RankOneError, ArithmeticError):
    """The analytic tail bound exceeds tolerance; a larger cutoff is needed."""


class DivergenceError(RankOneError, ArithmeticError):
    """An integral over the half-line diverges (truncations grow without bound)."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DiscrepancyError(RankOneError, ArithmeticError):
    """Two independent evaluation routes disagree beyond tolerance."""


class ZeroDivisorError(RankOneError, ZeroDivisionError):
    """A normalizing transform value is numerically zero."""


class InsufficientDecayError(DomainError):
    """A transform does not decay fast enough on the synthesis contour."""


class TruncationError(RankOneError, ArithmeticError):
    """A contour truncation bound cannot be brought under tolerance."""
