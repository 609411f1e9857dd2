"""Exact constants: sphere areas, Grassmannian dimensions, and the
Gamma-function combinations appearing in the transform identities.

All values are computed through ``math.lgamma`` sums so that ratios of
large Gamma values neither overflow nor lose digits.  Pure and stateless.
"""
from __future__ import annotations

import math

from .errors import DomainError, PoleError

# Absolute guard on the distance of a Gamma argument from the nonpositive
# integers; closer than this is treated as a pole rather than a huge value.
POLE_GUARD = 1e-9


def _check_gamma_arg(x: float, what: str) -> None:
    if x <= 0.5 and abs(x - round(x)) < POLE_GUARD and round(x) <= 0:
        raise PoleError(f"{what}: Gamma argument {x} is within {POLE_GUARD} "
                        "of a nonpositive integer")


def gamma(x: float) -> float:
    """Gamma function with explicit pole detection."""
    _check_gamma_arg(x, "gamma")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    _check_gamma_arg(x, "log_gamma")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    """Euler Beta function B(a, b) via log-Gamma."""
    _check_gamma_arg(a, "beta")
    _check_gamma_arg(b, "beta")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def sphere_area(m: int) -> float:
    """Surface area of the unit m-sphere, 2*pi^((m+1)/2)/Gamma((m+1)/2).

    ``sphere_area(0) == 2`` (two points), ``sphere_area(1) == 2*pi``.
    """
    if m < 0 or m != int(m):
        raise DomainError(f"sphere_area: m must be a nonnegative integer, got {m}")
    h = (m + 1) / 2.0
    if m < 300:
        return 2.0 * math.pi ** h / math.gamma(h)
    return 2.0 * math.exp(h * math.log(math.pi) - math.lgamma(h))


def grassmann_dim(n: int, d: int) -> int:
    """Dimension (d+1)(n-d) of the manifold of d-planes in n-space."""
    if not (0 <= d <= n - 1):
        raise DomainError(f"grassmann_dim: need 0 <= d <= n-1, got n={n}, d={d}")
    return (d + 1) * (n - d)


def lambda1(alpha: float, j: int, k: int) -> float:
    """pi^((k-j)/2) * Gamma(alpha/2) / Gamma((alpha+k-j)/2).

    The proportionality constant of the forward chord transform on the
    truncated-power catalog profiles.
    """
    if alpha <= 0:
        raise DomainError(f"lambda1: alpha must be positive, got {alpha}")
    if k <= j:
        raise DomainError(f"lambda1: need j < k, got j={j}, k={k}")
    lg = 0.5 * (k - j) * math.log(math.pi)
    lg += log_gamma(alpha / 2.0) - log_gamma((alpha + k - j) / 2.0)
    return math.exp(lg)


def lambda2(alpha: float, n: int, j: int, k: int) -> float:
    """Gamma(a/2)Gamma((n-j)/2) / [Gamma((a+k-j)/2)Gamma((n-k)/2)].

    The constant of the dual chord transform acting on pure powers.
    """
    if alpha <= 0:
        raise DomainError(f"lambda2: alpha must be positive, got {alpha}")
    if not (0 <= j < k <= n - 1):
        raise DomainError(f"lambda2: need 0 <= j < k <= n-1, got n={n}, j={j}, k={k}")
    lg = log_gamma(alpha / 2.0) + log_gamma((n - j) / 2.0)
    lg -= log_gamma((alpha + k - j) / 2.0) + log_gamma((n - k) / 2.0)
    return math.exp(lg)


def gamma_nk(alpha: float, n: int, k: int) -> float:
    """Normalizing constant of the dual hyperbolic sine transform:

        2^(-alpha-k) Gamma((n-alpha-k)/2) Gamma((n-k)/2)
        / [pi^(n/2) Gamma(n/2) Gamma(alpha/2)].

    Raises ``PoleError`` when alpha + k - n is a nonnegative even integer,
    i.e. when (n-alpha-k)/2 hits a nonpositive integer.
    """
    if alpha <= 0:
        raise DomainError(f"gamma_nk: alpha must be positive, got {alpha}")
    if not (0 <= k <= n - 1):
        raise DomainError(f"gamma_nk: need 0 <= k <= n-1, got n={n}, k={k}")
    x = (n - alpha - k) / 2.0
    _check_gamma_arg(x, "gamma_nk")
    # Gamma alternates sign between negative integers; lgamma drops it
    sign = 1.0 if x > 0 else (-1.0) ** (math.floor(x) % 2)
    lg = -(alpha + k) * math.log(2.0)
    lg += math.lgamma(x) + log_gamma((n - k) / 2.0)
    lg -= 0.5 * n * math.log(math.pi) + log_gamma(n / 2.0) + log_gamma(alpha / 2.0)
    return sign * math.exp(lg)


def dual_transform_limit_constant(n: int, k: int) -> float:
    """2^(-k) Gamma((n-k)/2) / [pi^(k/2) Gamma(n/2)].

    Constant relating the plain dual transform to the vanishing-exponent
    limit of the sine-weighted family.
    """
    lg = -k * math.log(2.0) + log_gamma((n - k) / 2.0)
    lg -= 0.5 * k * math.log(math.pi) + log_gamma(n / 2.0)
    return math.exp(lg)
