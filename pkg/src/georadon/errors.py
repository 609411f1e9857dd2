"""Exception hierarchy shared by all georadon modules."""


class GeoradonError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GeoradonError, ValueError):
    """An argument lies outside the valid parameter or coordinate range."""


class PoleError(GeoradonError, ValueError):
    """A Gamma-function argument is too close to a nonpositive integer."""


class DivergenceError(GeoradonError, ArithmeticError):
    """An integral fails its convergence criterion and would be infinite."""


class QuadratureError(GeoradonError, ArithmeticError):
    """Adaptive quadrature exhausted its subdivision budget."""


class SmoothnessError(GeoradonError, ValueError):
    """A profile lacks the derivatives an operator needs."""


class DifferentiationInstabilityError(GeoradonError, ArithmeticError):
    """Spectral differentiation noise exceeded the trust threshold."""


class McConvergenceWarning(UserWarning):
    """Running standard error is not shrinking at the Monte Carlo rate."""


class KernelSingularityWarning(UserWarning):
    """Sampled distances approach a singular kernel; smoothing applied."""
