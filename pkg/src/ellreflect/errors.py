"""Exception hierarchy shared by all modules."""


class ReflectionError(Exception):
    """Base class for every error raised by ellreflect."""


class SingularityError(ReflectionError, ValueError):
    """A Schwarz function or coefficient was evaluated at an excluded point."""


class DomainError(ReflectionError, ValueError):
    """Argument outside the mathematical domain of a function."""


class NonConstantOperatorError(ReflectionError, ValueError):
    """Operation supports constant-coefficient operators only."""


class OnCharacteristicError(ReflectionError, ValueError):
    """Point lies on a complex characteristic through the source."""


class ConvergenceError(ReflectionError, RuntimeError):
    """An iterative procedure did not converge.

    ``history`` holds the successive-difference norms observed so far.
    """

    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)


class QuadratureError(ReflectionError, RuntimeError):
    """Adaptive quadrature hit its depth limit."""

    def __init__(self, message, achieved=float("nan")):
        super().__init__(message)
        self.achieved = achieved


class BranchTrackingError(ReflectionError, RuntimeError):
    """Consecutive samples of a logarithm jumped by more than pi."""


class ValidityError(ReflectionError, ValueError):
    """Point or path leaves the region where the construction is valid."""


class StrategyError(ReflectionError, ValueError):
    """Requested reflection strategy does not apply to the operator/curve pair."""


class ConfigError(ReflectionError, ValueError):
    """Malformed run configuration."""
