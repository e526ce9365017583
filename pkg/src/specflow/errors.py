"""Exception hierarchy shared by all modules."""


class SpecflowError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SpecflowError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(SpecflowError, ZeroDivisionError):
    """Evaluation requested at (or numerically at) a pole."""


class AccuracyError(SpecflowError):
    """The requested accuracy cannot be delivered for these arguments."""


class NearZeroError(PoleError):
    """Logarithmic derivative requested within the exclusion radius of a zero."""


class ZeroOnPathError(SpecflowError):
    """The continuation path for the argument passed (numerically) through a zero.

    Callers are expected to perturb the ordinate and retry.
    """


class BranchError(SpecflowError):
    """A logarithm branch could not be fixed unambiguously."""


class CoalescenceError(SpecflowError):
    """The spectral-flow denominator vanished: two levels are merging."""


class InsufficientDataError(SpecflowError, ValueError):
    """Not enough samples (zeros, spacings) for the requested statistic."""


class ConfigError(SpecflowError, ValueError):
    """Invalid run configuration."""
