"""Exception hierarchy shared by all modules."""


class LevyMomentsError(Exception):
    """Base class for all errors raised by the package."""


class ParameterDomainError(LevyMomentsError, ValueError):
    """A kernel or coefficient parameter left its legal range."""


class SpecError(LevyMomentsError, ValueError):
    """A process specification is malformed or inconsistent with its flags."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class MomentDoesNotExist(LevyMomentsError):
    """A kernel moment required by a symbol derivative is infinite."""


class RegimeInapplicable(LevyMomentsError):
    """The hypotheses of a bound regime fail for the given process."""


class OutsideGuaranteedRange(LevyMomentsError):
    """Requested exponent lies outside the range where the bound is guaranteed."""


class UnsupportedFunction(LevyMomentsError, ValueError):
    """Function is not part of the supported moment-function catalog."""


class GrowthHypothesisFailure(LevyMomentsError):
    """Symbol derivatives grow faster than c_k (1 + |x|^k)."""


class PathAborted(LevyMomentsError):
    """A simulated path hit a state where the coefficients are illegal."""


class InapplicableCheck(LevyMomentsError):
    """A verification check was requested for a spec it does not apply to."""


class NonConvergentEstimate(LevyMomentsError):
    """A Monte Carlo curve failed the path-doubling convergence test."""
