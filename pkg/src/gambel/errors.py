"""Exception hierarchy shared across the package."""


class GambelError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GambelError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(GambelError, ValueError):
    """A special-function parameter sits on (or too close to) a pole."""


class ConvergenceError(GambelError, ArithmeticError):
    """A series or iteration failed to reach the requested tolerance."""


class MomentError(GambelError, ValueError):
    """The requested moment does not exist for the given parameters."""


class BracketError(GambelError, RuntimeError):
    """Root bracketing failed (pathological parameters)."""


class CurvatureError(GambelError, RuntimeError):
    """Curvature maximisation found no interior maximum."""


class SamplerError(GambelError, RuntimeError):
    """An MCMC update failed irrecoverably."""


class RankError(SamplerError):
    """Design matrix is rank deficient for the requested algorithm."""
