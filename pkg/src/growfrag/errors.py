"""Exception hierarchy shared by the solver, the analysis tools and the CLI."""


class GrowFragError(Exception):
    """Base class for every error raised by growfrag."""


class DomainError(GrowFragError, ValueError):
    """An argument lies outside the domain of a rate or kernel."""


class ExtrapolationError(DomainError):
    """A tabulated rate was queried beyond its samples without a tail exponent."""


class ConfigurationError(GrowFragError, ValueError):
    """Invalid grid, solver or run configuration."""


class ConfigParseError(ConfigurationError):
    """A problem/config file could not be parsed."""


class RejectedSpecError(GrowFragError):
    """A problem failed the structural assumption checks."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PlanError(GrowFragError):
    """A dilation plan does not match the problem it is applied to."""


class CollapseError(GrowFragError, ArithmeticError):
    """Normalization met a vector with no positive mass."""


class NonConvergenceError(GrowFragError):
    """The time-stepping iteration hit ``max_iters`` before the stop test."""

    def __init__(self, message, increment=float("nan"), iterations=0):
        super().__init__(message)
        self.increment = increment
        self.iterations = iterations


class OracleError(GrowFragError):
    """The dense eigen-oracle produced a sign-changing dominant vector."""


class IllPosedRegimeError(DomainError):
    """Exponents with ``1 + gamma - nu <= 0``: no dilation balances the problem."""
