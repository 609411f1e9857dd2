"""Single-variable radial/zonal profiles with argument-kind tags.

A profile is a function of one nonnegative coordinate together with the
metadata the quadrature and differentiation engines need: what the
coordinate means (``ArgKind``), how fast the function decays, how many
analytic derivatives are available, and any algebraic endpoint structure
``f(x) = x^o (S^2-x^2)_+^e * core(x)`` with a smooth core.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, SmoothnessError
from .spectral import ChebInterpolant

#: Arguments larger than this are treated as "at infinity" by re-parametrized
#: profiles; decaying profiles evaluate to their limit there.
HUGE_ARG = 1e12


class ArgKind(enum.Enum):
    """Meaning of a profile's coordinate."""

    EuclideanRadius = "euclidean_radius"    # distance of an affine plane to o
    BallRadius = "ball_radius"              # chord distance inside the unit ball
    CoshDistance = "cosh_distance"          # cosh of hyperbolic geodesic distance
    SinhDistance = "sinh_distance"          # sinh of hyperbolic geodesic distance
    TanhDistance = "tanh_distance"          # tanh of hyperbolic geodesic distance
    GeodesicDistance = "geodesic_distance"  # hyperbolic geodesic distance itself
    CosAngle = "cos_angle"                  # cosine of the elliptic angle
    SinAngle = "sin_angle"                  # sine of the elliptic angle
    Angle = "angle"                         # elliptic/projective angle itself


@dataclass(frozen=True)
class Profile1D:
    """A tagged single-variable function on [lo, hi).

    ``fn`` must accept and return numpy arrays.  ``decay_hint`` is an
    exponent rho with |f(x)| <= C (1+x)^(-rho) (``math.inf`` for
    super-polynomial decay); it is required on infinite domains before any
    right-sided operator is applied.  ``origin_power`` o and
    ``edge_exponent`` e expose the factorization
    ``f(x) = x^o * (S^2 - x^2)_+^e * core(x)`` (S = ``support``) that lets
    the quadratures fold algebraic endpoint singularities into Gauss-Jacobi
    weights; ``core`` must then be smooth and evaluable at the endpoints.
    """

    lo: float
    hi: float
    fn: Callable[[np.ndarray], np.ndarray]
    arg_kind: ArgKind = ArgKind.EuclideanRadius
    decay_hint: Optional[float] = None
    smoothness_hint: int = 0
    derivatives: Optional[Sequence[Callable]] = None
    origin_power: float = 0.0
    support: Optional[float] = None
    edge_exponent: float = 0.0
    core: Optional[Callable[[np.ndarray], np.ndarray]] = None
    breakpoints: tuple = ()
    limit_at_infinity: float = 0.0
    label: str = ""

    def __post_init__(self):
        if not (self.hi > self.lo >= 0.0):
            raise DomainError(f"Profile1D: invalid domain [{self.lo}, {self.hi})")
        if self.support is not None and self.support <= self.lo:
            raise DomainError("Profile1D: support radius below the domain start")

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.zeros_like(x)
        eps = 1e-12 * max(1.0, self.lo)     # absorb float noise at the edge
        inside = (x >= self.lo - eps) & (x < self.hi)
        if self.support is not None:
            inside &= x < self.support
        far = x >= HUGE_ARG
        inside &= ~far
        if np.any(inside):
            out[inside] = self.fn(np.maximum(x[inside], self.lo))
        out[far] = self.limit_at_infinity
        return float(out[0]) if scalar else out

    def derivative(self, order: int, x):
        """Analytic derivative of the given order; raises if unavailable."""
        if not self.derivatives or len(self.derivatives) < order:
            raise SmoothnessError(
                f"profile {self.label or '<anon>'} has no analytic derivative "
                f"of order {order}")
        x = np.asarray(x, dtype=float)
        return self.derivatives[order - 1](x)

    @property
    def upper_limit(self) -> float:
        """Effective upper integration limit (support cap or domain end)."""
        s = self.hi if self.support is None else min(self.hi, self.support)
        return s

    def factored(self):
        """(o, e, S, core) with f(x) = x^o (S^2-x^2)_+^e core(x)."""
        if self.core is not None:
            return self.origin_power, self.edge_exponent, self.support, self.core
        if self.origin_power == 0.0 and self.edge_exponent == 0.0:
            return 0.0, 0.0, self.support, self.fn
        # Reconstruct the core by dividing the algebraic factors back out.
        o, e, s = self.origin_power, self.edge_exponent, self.support

        def core(x):
            x = np.asarray(x, dtype=float)
            v = self.fn(x)
            if o != 0.0:
                v = v / x ** o
            if e != 0.0:
                v = v / (s * s - x * x) ** e
            return v

        return o, e, s, core

    # -- derived profiles ---------------------------------------------------

    def with_power(self, shift: float) -> "Profile1D":
        """x^shift * f(x), tracking the origin exponent."""
        if shift == 0.0:
            return self
        o, e, s, core = self.factored()
        base_fn = self.fn

        def fn(x):
            return x ** shift * base_fn(x)

        dec = None if self.decay_hint is None else self.decay_hint - shift
        return Profile1D(
            lo=self.lo, hi=self.hi, fn=fn, arg_kind=self.arg_kind,
            decay_hint=dec, smoothness_hint=self.smoothness_hint,
            derivatives=None, origin_power=o + shift, support=s,
            edge_exponent=e, core=core, breakpoints=self.breakpoints,
            limit_at_infinity=0.0,
            label=f"x^{shift}*{self.label}" if self.label else "")

    def scaled(self, c: float) -> "Profile1D":
        o, e, s, core = self.factored()
        base_fn = self.fn

        def fn(x):
            return c * base_fn(x)

        def core2(x):
            return c * core(x)

        derivs = None
        if self.derivatives:
            derivs = tuple((lambda d: (lambda x: c * d(x)))(d) for d in self.derivatives)
        return Profile1D(lo=self.lo, hi=self.hi, fn=fn, arg_kind=self.arg_kind,
                         decay_hint=self.decay_hint,
                         smoothness_hint=self.smoothness_hint, derivatives=derivs,
                         origin_power=o, support=s, edge_exponent=e, core=core2,
                         breakpoints=self.breakpoints,
                         limit_at_infinity=c * self.limit_at_infinity,
                         label=f"{c}*{self.label}" if self.label else "")


def from_grid(x: np.ndarray, y: np.ndarray, arg_kind: ArgKind,
              order: int = 3, decay_hint: Optional[float] = None) -> Profile1D:
    """Profile from a sampled grid with spline interpolation of given order."""
    from scipy.interpolate import make_interp_spline

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 8:
        raise DomainError("from_grid: need at least 8 nodes")
    if np.any(np.diff(x) <= 0):
        raise DomainError("from_grid: grid must be strictly increasing")
    spl = make_interp_spline(x, y, k=order)

    def fn(t):
        return spl(np.clip(t, x[0], x[-1]))

    derivs = tuple(spl.derivative(q) for q in range(1, order))
    return Profile1D(lo=float(x[0]), hi=float(x[-1]) * (1 + 1e-12) + 1e-300,
                     fn=fn, arg_kind=arg_kind, decay_hint=decay_hint,
                     smoothness_hint=order - 1, derivatives=derivs,
                     label="grid")


def tabulate(fn, lo: float, hi: float, arg_kind: ArgKind, n: int = 128,
             decay_hint: Optional[float] = None, support: Optional[float] = None,
             scale_fn=None, square_variable: bool = False,
             label: str = "") -> Profile1D:
    """Chebyshev tabulation of a smooth callable; cheap to re-evaluate.

    Only valid when ``fn`` is smooth on [lo, hi]; the interpolant is clamped
    to that window and zero outside a declared support.  When ``scale_fn``
    is given, ``fn/scale_fn`` is interpolated and the scale multiplied back,
    preserving relative accuracy through rapidly decaying tails.  With
    ``square_variable`` the interpolation runs in y = x^2, which keeps
    even profiles free of square-root kinks under later differentiation.
    """
    if square_variable:
        ylo, yhi = lo * lo, hi * hi

        def sample(y):
            return _scaled_sample(fn, scale_fn, np.sqrt(np.maximum(y, 0.0)))

        interp = ChebInterpolant.fit(sample, ylo, yhi, n)

        def ev(x):
            x = np.asarray(x, dtype=float)
            y = np.clip(x * x, ylo, yhi)
            out = interp(y)
            return out * scale_fn(x) if scale_fn is not None else out

        derivs = None
    elif scale_fn is None:
        interp = ChebInterpolant.fit(
            lambda x: np.asarray(fn(x), dtype=float), lo, hi, n)

        def ev(x):
            return interp(np.clip(x, lo, hi))

        derivs = tuple(
            (lambda d: (lambda x: d(np.clip(x, lo, hi))))(interp.derivative(q))
            for q in range(1, 5))
    else:
        interp = ChebInterpolant.fit(
            lambda x: _scaled_sample(fn, scale_fn, x), lo, hi, n)

        def ev(x):
            return interp(np.clip(x, lo, hi)) * scale_fn(x)

        derivs = None
    return Profile1D(lo=lo, hi=hi * (1 + 1e-12), fn=ev, arg_kind=arg_kind,
                     decay_hint=decay_hint, smoothness_hint=4,
                     derivatives=derivs, support=support, label=label or "cheb")


def _scaled_sample(fn, scale_fn, x):
    vals = np.asarray(fn(x), dtype=float)
    if scale_fn is None:
        return vals
    return vals / np.asarray(scale_fn(x), dtype=float)


# -- named analytic families ------------------------------------------------

def _hermite_chain(sigma: float, orders: int = 8):
    """Derivatives of exp(-(x/sigma)^2) via the Hermite recursion."""
    inv = 1.0 / sigma

    def deriv(q):
        def d(x):
            u = x * inv
            h_prev = np.ones_like(u)
            h = 2.0 * u
            if q == 0:
                return np.exp(-u * u)
            for _ in range(q - 1):
                h, h_prev = 2.0 * u * h - 2.0 * (_ + 1) * h_prev, h
            return (-inv) ** q * h * np.exp(-u * u) if q >= 1 else np.exp(-u * u)
        return d

    return tuple(deriv(q) for q in range(1, orders + 1))


def gaussian(sigma: float = 1.0, arg_kind: ArgKind = ArgKind.EuclideanRadius,
             lo: float = 0.0) -> Profile1D:
    """exp(-(x/sigma)^2) with full analytic derivative chain."""
    def fn(x):
        return np.exp(-(x / sigma) ** 2)

    return Profile1D(lo=lo, hi=math.inf, fn=fn, arg_kind=arg_kind,
                     decay_hint=math.inf, smoothness_hint=64,
                     derivatives=_hermite_chain(sigma),
                     label=f"gaussian({sigma})")


def gaussian_power(p: float, sigma: float = 1.0,
                   arg_kind: ArgKind = ArgKind.EuclideanRadius,
                   lo: float = 0.0) -> Profile1D:
    """x^p * exp(-(x/sigma)^2); p >= 0 keeps the chain simple."""
    def fn(x):
        return x ** p * np.exp(-(x / sigma) ** 2)

    derivs = None
    if p == int(p) and p >= 0:
        # Leibniz on x^p * gaussian, using the Hermite chain.
        g_chain = (lambda x: np.exp(-(x / sigma) ** 2),) + _hermite_chain(sigma)
        ip = int(p)

        def deriv(q):
            def d(x):
                out = np.zeros_like(np.asarray(x, dtype=float))
                for i in range(min(q, ip) + 1):
                    cpow = math.comb(q, i) * math.perm(ip, i)
                    out += cpow * x ** (ip - i) * g_chain[q - i](x)
                return out
            return d

        derivs = tuple(deriv(q) for q in range(1, 7))
    return Profile1D(lo=lo, hi=math.inf, fn=fn, arg_kind=arg_kind,
                     decay_hint=math.inf, smoothness_hint=6 if derivs else 0,
                     derivatives=derivs, origin_power=p,
                     label=f"x^{p}*gaussian({sigma})")


def bump(a: float, arg_kind: ArgKind = ArgKind.EuclideanRadius,
         lo: float = 0.0) -> Profile1D:
    """Smooth compactly supported bump exp(1 - a^2/(a^2 - x^2)) on [0, a)."""
    def fn(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < a
        xi = x[inside]
        out[inside] = np.exp(1.0 - a * a / (a * a - xi * xi))
        return out

    def d1(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < a
        xi = x[inside]
        den = a * a - xi * xi
        out[inside] = np.exp(1.0 - a * a / den) * (-2.0 * a * a * xi / den ** 2)
        return out

    return Profile1D(lo=lo, hi=math.inf, fn=fn, arg_kind=arg_kind,
                     decay_hint=math.inf, smoothness_hint=64,
                     derivatives=(d1,), support=a, label=f"bump({a})")


def power(p: float, lo: float = 0.0, hi: float = math.inf,
          arg_kind: ArgKind = ArgKind.EuclideanRadius,
          support: Optional[float] = None) -> Profile1D:
    """Pure power x^p."""
    def fn(x):
        return x ** p

    def _falling(q):
        c = 1.0
        for i in range(q):
            c *= p - i
        return lambda x: c * np.asarray(x, dtype=float) ** (p - q)

    derivs = tuple(_falling(q) for q in range(1, 5))
    return Profile1D(lo=lo, hi=hi, fn=fn, arg_kind=arg_kind,
                     decay_hint=-p, smoothness_hint=4, derivatives=derivs,
                     origin_power=p, support=support, label=f"power({p})")


def truncated_power_pair(alpha: float, a: float, inner_power: float,
                         arg_kind: ArgKind, lo: float = 0.0) -> Profile1D:
    """x^inner_power * (a^2 - x^2)_+^(alpha/2 - 1) with factored endpoints."""
    e = alpha / 2.0 - 1.0

    def core(x):
        return np.asarray(x, dtype=float) ** 0 * 1.0

    def fn(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = x < a
        xi = x[inside]
        out[inside] = xi ** inner_power * (a * a - xi * xi) ** e
        return out

    return Profile1D(lo=lo, hi=math.inf, fn=fn, arg_kind=arg_kind,
                     decay_hint=math.inf, smoothness_hint=0,
                     origin_power=inner_power, support=a, edge_exponent=e,
                     core=core, label=f"x^{inner_power}(a2-x2)^{e}")
