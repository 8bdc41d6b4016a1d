"""Exception types shared across the package."""


class SqcompError(Exception):
    """Base class for all sqcomp-specific errors."""


class TruncationTooSmall(SqcompError, ValueError):
    """The Fock cutoff leaves more probability mass in the tail than allowed."""

    def __init__(self, deficit, tail_tol, context=""):
        self.deficit = deficit
        self.tail_tol = tail_tol
        msg = f"tail mass {deficit:.3e} exceeds tail_tol {tail_tol:.3e}"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)


class PhaseMismatch(SqcompError, ValueError):
    """The two squeezing phases differ; only equal-phase inputs are supported."""


class SeriesDivergence(SqcompError, ArithmeticError):
    """Internal guard: a series argument left its convergence region."""


class DegenerateDenominator(SqcompError, ArithmeticError):
    """All conditional detection probabilities vanish; reliability is undefined."""


class CostGuardExceeded(SqcompError, ValueError):
    """A deliberately unoptimized validation sum was asked to run too large."""
