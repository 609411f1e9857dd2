"""Exact forward and dual transforms of radial/zonal functions in all five
models, the closed-form catalog, existence predicates with sharp exponents,
and radial inversion.

Every operator here is a weighted one-dimensional fractional integral: the
forward transforms are right-sided, the duals left-sided, with power weights
in front.  Inversion therefore strips the weights, applies the matching
fractional derivative, and restores the weights; it inverts the forward map
exactly as discretized rather than through an independent scheme.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DivergenceError, DomainError, GeoradonError
from .fracint import (check_decay, ek_deriv_left, ek_deriv_right, ek_left,
                      ek_right)
from .models import Model, WeightOp, apply_weight
from .profiles import ArgKind, Profile1D
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from .special import beta as beta_fn
from .special import lambda1, lambda2, sphere_area
from .spectral import ChebInterpolant, cheb_nodes


class ReconstructionError(GeoradonError, ArithmeticError):
    """Re-applying the forward map to a reconstruction missed the data."""


@dataclass(frozen=True)
class TransformParams:
    """The index triple (n, j, k): j-geodesics integrated over k-geodesics."""

    n: int
    j: int
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"need n >= 2, got n={self.n}")
        if not (0 <= self.j < self.k <= self.n - 1):
            raise DomainError(
                f"need 0 <= j < k <= n-1, got (n,j,k)=({self.n},{self.j},{self.k})")

    @property
    def half_gap(self) -> float:
        """(k - j)/2, the fractional order of every kernel here."""
        return 0.5 * (self.k - self.j)


def _as_array(x):
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    return xv, np.ndim(x) == 0


def _maybe_scalar(vals, scalar):
    return float(vals[0]) if scalar else vals


# -- forward transforms --------------------------------------------------------

def radon_affine_radial(p: TransformParams, f0: Profile1D, s,
                        spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Forward transform of a radial function on affine planes.

    F(s) = sigma_{k-j-1} * int_s^inf f0(r) (r^2-s^2)^((k-j)/2-1) r dr.
    Raises ``DivergenceError`` when the tail criterion fails (the transform
    would then be identically infinite).
    """
    if f0.arg_kind is not ArgKind.EuclideanRadius:
        raise DomainError("radon_affine_radial expects a plane-distance profile")
    a = p.half_gap
    if not check_decay(f0, a, 1.0, spec):
        raise DivergenceError(
            "forward transform diverges: the input fails the tail criterion")
    sv, scalar = _as_array(s)
    vals = math.pi ** a * np.asarray(ek_right(a, f0, sv, spec))
    return _maybe_scalar(vals, scalar)


def radon_chord_radial(p: TransformParams, f0: Profile1D, s,
                       spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Forward chord transform on the unit ball; the integral stops at 1."""
    if f0.arg_kind is not ArgKind.BallRadius:
        raise DomainError("radon_chord_radial expects a ball-radius profile")
    sv, scalar = _as_array(s)
    if np.any(sv < 0.0) or np.any(sv >= 1.0):
        raise DomainError("chord coordinate must lie in [0, 1)")
    capped = _cap_support(f0, 1.0)
    a = p.half_gap
    vals = math.pi ** a * np.asarray(ek_right(a, capped, sv, spec))
    return _maybe_scalar(vals, scalar)


def radon_hyper_zonal(p: TransformParams, f1: Profile1D, s,
                      spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Forward zonal transform on the hyperboloid, in the variable
    s = cosh(distance) >= 1:

    F(s) = sigma_{k-j-1} s^(1-k) int_s^inf f1(r)(r^2-s^2)^((k-j)/2-1) r^j dr.
    """
    if f1.arg_kind is not ArgKind.CoshDistance:
        raise DomainError("radon_hyper_zonal expects a cosh-distance profile")
    sv, scalar = _as_array(s)
    if np.any(sv < 1.0):
        raise DomainError("cosh-distance coordinate must be >= 1")
    a = p.half_gap
    g = f1.with_power(p.j - 1.0)
    if not check_decay(g, a, 1.0, spec):
        raise DivergenceError(
            "zonal transform diverges: the input fails the tail criterion")
    vals = math.pi ** a * sv ** (1.0 - p.k) * np.asarray(ek_right(a, g, sv, spec))
    return _maybe_scalar(vals, scalar)


def radon_elliptic_zonal(p: TransformParams, f1: Profile1D, s,
                         spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Forward zonal transform on the compact Grassmannian, in the variable
    s = cos(angle) in (0, 1]:

    F(s) = [sig_j sig_{k-j-1} / (sig_k s^(k-1))]
           * int_0^s f1(t)(s^2-t^2)^((k-j)/2-1) t^j dt.
    """
    if f1.arg_kind is not ArgKind.CosAngle:
        raise DomainError("radon_elliptic_zonal expects a cos-angle profile")
    sv, scalar = _as_array(s)
    if np.any(sv <= 0.0) or np.any(sv > 1.0):
        raise DomainError("cos-angle coordinate must lie in (0, 1]")
    a = p.half_gap
    g = f1.with_power(p.j - 1.0)
    c = sphere_area(p.j) * math.pi ** a / sphere_area(p.k)
    vals = c * sv ** (1.0 - p.k) * np.asarray(ek_left(a, g, sv, spec))
    return _maybe_scalar(vals, scalar)


def radon_projective_zonal(p: TransformParams, f: Profile1D, theta,
                           spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Forward zonal transform in the projective model, computed through the
    hyperboloid: strip the projective weights, transform there, restore."""
    if f.arg_kind is not ArgKind.Angle:
        raise DomainError("radon_projective_zonal expects an angle profile")
    tv, scalar = _as_array(theta)
    if np.any(tv < 0.0) or np.any(tv >= math.pi / 4):
        raise DomainError("projective angle must lie in [0, pi/4)")
    g = apply_weight(WeightOp.M1_INV, p, f)       # projective -> hyperboloid
    g_cosh = _as_cosh_profile(g)
    mid = radon_hyper_zonal_profile(p, g_cosh, spec)
    out = apply_weight(WeightOp.N1_INV, p, _as_geodesic_profile(mid))
    vals = out(tv)
    return _maybe_scalar(np.atleast_1d(vals), scalar)


# -- dual transforms -------------------------------------------------------------

def _dual_kernel(p: TransformParams, phi: Profile1D, r, spec: QuadratureSpec):
    """Shared left-sided kernel of every dual transform:

    (c / r^(n-j-2)) int_0^r phi(s)(r^2-s^2)^((k-j)/2-1) s^(n-k-1) ds,
    c = sig_{k-j-1} sig_{n-k-1} / sig_{n-j-1}.
    """
    a = p.half_gap
    g = phi.with_power(p.n - p.k - 2.0)
    if g.origin_power <= -2.0:
        raise DivergenceError(
            "dual transform diverges: the input is not locally integrable "
            f"against s^{p.n - p.k - 1} near 0")
    c = math.pi ** a * sphere_area(p.n - p.k - 1) / sphere_area(p.n - p.j - 1)
    rv, scalar = _as_array(r)
    vals = np.empty_like(rv)
    tiny = rv < 1e-7
    if np.any(~tiny):
        vals[~tiny] = c * rv[~tiny] ** (p.j + 2.0 - p.n) \
            * np.asarray(ek_left(a, g, rv[~tiny], spec))
    if np.any(tiny):
        # r -> 0 limit of the kernel: the powers cancel exactly and the Beta
        # integral survives (finite only for inputs regular at 0)
        if phi.origin_power != 0.0:
            raise DomainError(
                "dual transform at r = 0 needs an input regular at 0")
        cfull = sphere_area(p.k - p.j - 1) * sphere_area(p.n - p.k - 1) \
            / sphere_area(p.n - p.j - 1)
        lim = cfull * 0.5 * beta_fn((p.n - p.k) / 2.0, a) \
            * float(phi(np.array([max(phi.lo, 1e-9)]))[0])
        vals[tiny] = lim
    return _maybe_scalar(vals, scalar)


def dual_affine_radial(p: TransformParams, phi0: Profile1D, r,
                       spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Dual transform of a radial function on affine k-planes."""
    if phi0.arg_kind is not ArgKind.EuclideanRadius:
        raise DomainError("dual_affine_radial expects a plane-distance profile")
    return _dual_kernel(p, phi0, r, spec)


def dual_chord_radial(p: TransformParams, phi0: Profile1D, r,
                      spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Dual chord transform on the unit ball (same kernel, r < 1)."""
    if phi0.arg_kind is not ArgKind.BallRadius:
        raise DomainError("dual_chord_radial expects a ball-radius profile")
    rv, _ = _as_array(r)
    if np.any(rv >= 1.0):
        raise DomainError("chord coordinate must lie in [0, 1)")
    return _dual_kernel(p, phi0, r, spec)


def dual_elliptic_zonal(p: TransformParams, phi1: Profile1D, r,
                        spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Dual zonal transform on the compact Grassmannian, r = sin(angle)."""
    if phi1.arg_kind is not ArgKind.SinAngle:
        raise DomainError("dual_elliptic_zonal expects a sin-angle profile")
    rv, _ = _as_array(r)
    if np.any(rv > 1.0):
        raise DomainError("sin-angle coordinate must lie in [0, 1]")
    return _dual_kernel(p, phi1, r, spec)


def dual_hyper_zonal(p: TransformParams, phi1: Profile1D, r,
                     spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Dual zonal transform on the hyperboloid, r = sinh(distance)."""
    if phi1.arg_kind is not ArgKind.SinhDistance:
        raise DomainError("dual_hyper_zonal expects a sinh-distance profile")
    return _dual_kernel(p, phi1, r, spec)


def dual_projective_zonal(p: TransformParams, phi: Profile1D, theta,
                          spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Dual zonal transform in the projective model via the hyperboloid."""
    if phi.arg_kind is not ArgKind.Angle:
        raise DomainError("dual_projective_zonal expects an angle profile")
    tv, scalar = _as_array(theta)
    if np.any(tv < 0.0) or np.any(tv >= math.pi / 4):
        raise DomainError("projective angle must lie in [0, pi/4)")
    g = apply_weight(WeightOp.P1_INV, p, phi)     # projective -> hyperboloid
    g_sinh = _as_sinh_profile(g)
    mid = dual_hyper_zonal_profile(p, g_sinh, spec)
    out = apply_weight(WeightOp.Q1_INV, p, _as_geodesic_profile(mid))
    vals = out(tv)
    return _maybe_scalar(np.atleast_1d(vals), scalar)


# -- profile wrappers (lazy transform results) ----------------------------------

def _cap_support(f: Profile1D, cap: float) -> Profile1D:
    if f.support is not None and f.support <= cap:
        return f
    o, e, s, core = f.factored()
    return Profile1D(lo=f.lo, hi=max(f.hi, cap * (1 + 1e-12)), fn=f.fn,
                     arg_kind=f.arg_kind, decay_hint=f.decay_hint,
                     smoothness_hint=f.smoothness_hint, origin_power=o,
                     support=cap, edge_exponent=e if s is not None else 0.0,
                     core=core if (o != 0.0 or e != 0.0) else None,
                     breakpoints=f.breakpoints, label=f.label)


def _as_cosh_profile(g: Profile1D) -> Profile1D:
    """Reparametrize a geodesic-distance profile to the cosh variable."""
    if g.arg_kind is ArgKind.CoshDistance:
        return g
    if g.arg_kind is not ArgKind.GeodesicDistance:
        raise DomainError("expected a geodesic-distance profile")
    sup = None if g.support is None else math.cosh(g.support)
    hi = math.cosh(g.hi) if math.isfinite(g.hi) else math.inf

    def fn(s):
        s = np.asarray(s, dtype=float)
        return g(np.arccosh(np.maximum(s, 1.0)))

    return Profile1D(lo=1.0, hi=hi, fn=fn, arg_kind=ArgKind.CoshDistance,
                     decay_hint=g.decay_hint, smoothness_hint=g.smoothness_hint,
                     support=sup, label=g.label)


def _as_sinh_profile(g: Profile1D) -> Profile1D:
    if g.arg_kind is ArgKind.SinhDistance:
        return g
    if g.arg_kind is not ArgKind.GeodesicDistance:
        raise DomainError("expected a geodesic-distance profile")
    sup = None if g.support is None else math.sinh(g.support)
    hi = math.sinh(g.hi) if math.isfinite(g.hi) else math.inf

    def fn(s):
        s = np.asarray(s, dtype=float)
        return g(np.arcsinh(s))

    return Profile1D(lo=0.0, hi=hi, fn=fn, arg_kind=ArgKind.SinhDistance,
                     decay_hint=g.decay_hint, smoothness_hint=g.smoothness_hint,
                     support=sup, label=g.label)


_HUB_IDENTICAL = {ArgKind.EuclideanRadius, ArgKind.BallRadius,
                  ArgKind.TanhDistance}


def retag(g: Profile1D, kind: ArgKind) -> Profile1D:
    """Re-tag a profile between coordinate kinds that share values
    (plane distance, ball radius, tanh of distance)."""
    if g.arg_kind is kind:
        return g
    if g.arg_kind not in _HUB_IDENTICAL or kind not in _HUB_IDENTICAL:
        raise DomainError(f"cannot retag {g.arg_kind} as {kind}")
    o, e, s, core = g.factored()
    return Profile1D(lo=g.lo, hi=g.hi, fn=g.fn, arg_kind=kind,
                     decay_hint=g.decay_hint, smoothness_hint=g.smoothness_hint,
                     derivatives=g.derivatives, origin_power=o, support=s,
                     edge_exponent=e, core=g.core, breakpoints=g.breakpoints,
                     limit_at_infinity=g.limit_at_infinity, label=g.label)


def _as_cos_angle_profile(g: Profile1D) -> Profile1D:
    """Reparametrize an angle profile to the cos(angle) variable."""
    if g.arg_kind is ArgKind.CosAngle:
        return g
    if g.arg_kind is not ArgKind.Angle:
        raise DomainError("expected an angle profile")
    cos_lo = math.cos(min(g.hi, math.pi / 2))

    def fn(t):
        t = np.asarray(t, dtype=float)
        return g(np.arccos(np.clip(t, -1.0, 1.0)))

    return Profile1D(lo=max(cos_lo, 0.0), hi=1.0 + 1e-12, fn=fn,
                     arg_kind=ArgKind.CosAngle,
                     smoothness_hint=g.smoothness_hint, label=g.label)


def _as_sin_angle_profile(g: Profile1D) -> Profile1D:
    if g.arg_kind is ArgKind.SinAngle:
        return g
    if g.arg_kind is not ArgKind.Angle:
        raise DomainError("expected an angle profile")
    sin_hi = math.sin(min(g.hi, math.pi / 2))

    def fn(t):
        t = np.asarray(t, dtype=float)
        return g(np.arcsin(np.clip(t, -1.0, 1.0)))

    sup = None
    if g.support is not None and g.support < math.pi / 2:
        sup = math.sin(g.support)
    return Profile1D(lo=0.0, hi=min(sin_hi, 1.0) + 1e-12, fn=fn,
                     arg_kind=ArgKind.SinAngle, support=sup,
                     smoothness_hint=g.smoothness_hint, label=g.label)


def _as_angle_profile(g: Profile1D, hi: float = math.pi / 2) -> Profile1D:
    """Reparametrize a cos- or sin-angle profile to the angle itself."""
    if g.arg_kind is ArgKind.Angle:
        return g
    if g.arg_kind is ArgKind.CosAngle:
        conv = np.cos
    elif g.arg_kind is ArgKind.SinAngle:
        conv = np.sin
    else:
        raise DomainError(f"cannot lift {g.arg_kind} to an angle")

    def fn(th):
        return g(conv(np.asarray(th, dtype=float)))

    sup = None
    if g.support is not None and g.arg_kind is ArgKind.SinAngle \
            and g.support < 1.0:
        sup = math.asin(g.support)
    return Profile1D(lo=0.0, hi=hi, fn=fn, arg_kind=ArgKind.Angle, support=sup,
                     smoothness_hint=g.smoothness_hint, label=g.label)


def _as_geodesic_profile(g: Profile1D) -> Profile1D:
    """Reparametrize a cosh- or sinh-variable profile to plain distance."""
    if g.arg_kind is ArgKind.GeodesicDistance:
        return g
    if g.arg_kind is ArgKind.CoshDistance:
        conv = np.cosh
    elif g.arg_kind is ArgKind.SinhDistance:
        conv = np.sinh
    else:
        raise DomainError(f"cannot lift {g.arg_kind} to geodesic distance")
    back = math.acosh if conv is np.cosh else math.asinh
    sup = None
    if g.support is not None and math.isfinite(g.support):
        sup = back(max(g.support, 1.0) if conv is np.cosh else g.support)
    hi = back(max(g.hi, 1.0)) if math.isfinite(g.hi) else math.inf

    def fn(rho):
        return g(conv(np.asarray(rho, dtype=float)))

    return Profile1D(lo=0.0, hi=hi, fn=fn,
                     arg_kind=ArgKind.GeodesicDistance, decay_hint=g.decay_hint,
                     smoothness_hint=g.smoothness_hint, support=sup,
                     label=g.label)


def radon_hyper_zonal_profile(p: TransformParams, f1: Profile1D,
                              spec: QuadratureSpec = DEFAULT_QUADRATURE) -> Profile1D:
    """The forward zonal transform as a lazy cosh-variable profile."""
    sup = f1.support
    edge = f1.edge_exponent + p.half_gap if sup is not None else 0.0

    def fn(s):
        return np.asarray(radon_hyper_zonal(p, f1, np.atleast_1d(s), spec))

    return Profile1D(lo=1.0, hi=math.inf, fn=fn, arg_kind=ArgKind.CoshDistance,
                     decay_hint=f1.decay_hint, support=sup, edge_exponent=edge,
                     label=f"fwd[{f1.label}]")


def dual_hyper_zonal_profile(p: TransformParams, phi1: Profile1D,
                             spec: QuadratureSpec = DEFAULT_QUADRATURE) -> Profile1D:
    def fn(r):
        return np.asarray(dual_hyper_zonal(p, phi1, np.atleast_1d(r), spec))

    return Profile1D(lo=0.0, hi=math.inf, fn=fn, arg_kind=ArgKind.SinhDistance,
                     decay_hint=None if phi1.decay_hint is None
                     else min(phi1.decay_hint, p.n - p.k), label=f"dual[{phi1.label}]")


# -- closed-form catalog ---------------------------------------------------------

class ClosedFormId(enum.Enum):
    """Analytic input/output pairs used for conformance testing."""

    CHORD_INVERSE_POWER = "chord_inverse_power"   # forward chord, singular power
    CHORD_CAP = "chord_cap"                       # forward chord, truncated cap
    DUAL_CHORD_POWER = "dual_chord_power"         # dual chord, pure power
    DUAL_CHORD_EDGE = "dual_chord_edge"           # dual chord, boundary blow-up
    HYPER_CAP = "hyper_cap"                       # forward hyperbolic, cut cap


_CF_DEFAULTS = {
    ClosedFormId.CHORD_INVERSE_POWER: dict(alpha=2.0, n=5, j=1, k=2),
    ClosedFormId.CHORD_CAP: dict(alpha=2.0, a=1.0, n=4, j=0, k=2),
    ClosedFormId.DUAL_CHORD_POWER: dict(alpha=2.0, n=4, j=0, k=2),
    ClosedFormId.DUAL_CHORD_EDGE: dict(n=4, j=0, k=2),
    ClosedFormId.HYPER_CAP: dict(alpha=2.0, a=2.0, n=3, j=0, k=1),
}


@dataclass(frozen=True)
class ClosedFormPair:
    params: TransformParams
    input: Profile1D
    expected: Profile1D
    constant: float
    route: str            # "chord_forward" | "chord_dual" | "hyper_forward"


def closed_form_defaults(cf: ClosedFormId) -> dict:
    return dict(_CF_DEFAULTS[cf])


def closed_form_pair(cf: ClosedFormId, p: Optional[TransformParams] = None,
                     alpha: Optional[float] = None,
                     a: Optional[float] = None) -> ClosedFormPair:
    """Analytic (input, expected output, constant) for one catalog entry."""
    d = closed_form_defaults(cf)
    if p is None:
        p = TransformParams(d["n"], d["j"], d["k"])
    alpha = d.get("alpha") if alpha is None else alpha
    a = d.get("a") if a is None else a
    n, j, k = p.n, p.j, p.k

    if cf is ClosedFormId.CHORD_INVERSE_POWER:
        lam = lambda1(alpha, j, k)
        pin = -(alpha + k - j)
        ein = alpha / 2.0 - 1.0
        fin = Profile1D(
            lo=0.0, hi=1.0, arg_kind=ArgKind.BallRadius,
            fn=lambda r: r ** pin * (1.0 - r * r) ** ein,
            origin_power=pin, support=1.0, edge_exponent=ein,
            core=lambda r: np.ones_like(np.asarray(r, dtype=float)),
            label="inverse-power cap")
        eout = (alpha + k - j) / 2.0 - 1.0
        fout = Profile1D(
            lo=0.0, hi=1.0, arg_kind=ArgKind.BallRadius,
            fn=lambda s: lam * (1.0 - s * s) ** eout * s ** (-alpha),
            origin_power=-alpha, support=1.0, edge_exponent=eout,
            label="expected")
        return ClosedFormPair(p, fin, fout, lam, "chord_forward")

    if cf is ClosedFormId.CHORD_CAP:
        lam = lambda1(alpha, j, k)
        ein = alpha / 2.0 - 1.0
        fin = Profile1D(
            lo=0.0, hi=1.0, arg_kind=ArgKind.BallRadius,
            fn=lambda r: np.where(r < a, (a * a - r * r) ** ein, 0.0),
            support=a, edge_exponent=ein,
            core=lambda r: np.ones_like(np.asarray(r, dtype=float)),
            label="truncated cap")
        eout = (alpha + k - j) / 2.0 - 1.0
        fout = Profile1D(
            lo=0.0, hi=1.0, arg_kind=ArgKind.BallRadius,
            fn=lambda s: lam * np.where(s < a, (a * a - s * s) ** eout, 0.0)
            if eout != 0.0 else lam * (np.asarray(s) < a).astype(float),
            support=a, edge_exponent=eout, label="expected")
        return ClosedFormPair(p, fin, fout, lam, "chord_forward")

    if cf is ClosedFormId.DUAL_CHORD_POWER:
        lam = lambda2(alpha, n, j, k)
        pw = alpha + k - n
        fin = Profile1D(lo=0.0, hi=1.0, arg_kind=ArgKind.BallRadius,
                        fn=lambda s: s ** pw, origin_power=pw, label="power")
        fout = Profile1D(lo=0.0, hi=1.0, arg_kind=ArgKind.BallRadius,
                         fn=lambda r: lam * r ** pw, origin_power=pw,
                         label="expected")
        return ClosedFormPair(p, fin, fout, lam, "chord_dual")

    if cf is ClosedFormId.DUAL_CHORD_EDGE:
        fin = Profile1D(lo=0.0, hi=1.0, arg_kind=ArgKind.BallRadius,
                        fn=lambda s: (1.0 - s * s) ** ((j - n) / 2.0),
                        label="boundary blow-up")
        fout = Profile1D(lo=0.0, hi=1.0, arg_kind=ArgKind.BallRadius,
                         fn=lambda r: (1.0 - r * r) ** ((k - n) / 2.0),
                         label="expected")
        return ClosedFormPair(p, fin, fout, 1.0, "chord_dual")

    if cf is ClosedFormId.HYPER_CAP:
        if not a > 1.0:
            raise DomainError("the hyperbolic cap needs a > 1")
        lam = lambda1(alpha, j, k) / a ** (k - j)
        ein = alpha / 2.0 - 1.0
        pw = 1.0 - alpha - k
        fin = Profile1D(
            lo=1.0, hi=math.inf, arg_kind=ArgKind.CoshDistance,
            fn=lambda s: np.where(s < a, (a * a - s * s) ** ein * s ** pw, 0.0),
            support=a, edge_exponent=ein,
            core=lambda s: np.asarray(s, dtype=float) ** pw,
            label="hyperbolic cap")
        eout = (alpha + k - j) / 2.0 - 1.0
        fout = Profile1D(
            lo=1.0, hi=math.inf, arg_kind=ArgKind.CoshDistance,
            fn=lambda s: lam * np.where(s < a, (a * a - s * s) ** eout * s ** pw,
                                        0.0),
            support=a, edge_exponent=eout, label="expected")
        return ClosedFormPair(p, fin, fout, lam, "hyper_forward")

    raise DomainError(f"unknown closed form {cf}")


def evaluate_closed_form(pair: ClosedFormPair, coords,
                         spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Run the transform the pair belongs to on its input."""
    if pair.route == "chord_forward":
        return radon_chord_radial(pair.params, pair.input, coords, spec)
    if pair.route == "chord_dual":
        return dual_chord_radial(pair.params, pair.input, coords, spec)
    if pair.route == "hyper_forward":
        return radon_hyper_zonal(pair.params, pair.input, coords, spec)
    raise DomainError(f"unknown route {pair.route}")


# -- existence predicates --------------------------------------------------------

class ExistenceKind(enum.Enum):
    AFFINE_WEIGHTED_L1 = "affine_weighted_l1"      # tail-weight integrability
    AFFINE_FORWARD_POWER = "affine_forward_power"  # sup |tau|^lam |f| bound
    AFFINE_DUAL_POWER = "affine_dual_power"        # sup |zeta|^del |phi| bound
    HYPER_FORWARD_POWER = "hyper_forward_power"    # sup cosh^lam |f| bound
    HYPER_DUAL_POWER = "hyper_dual_power"          # sup sinh^del |phi| bound
    AFFINE_LEBESGUE = "affine_lebesgue"            # L^p exponent bound
    HYPER_LEBESGUE = "hyper_lebesgue"              # L^p exponent bound


class Verdict(enum.Enum):
    SUFFICIENT = "sufficient"
    SHARP_VIOLATION = "sharp-violation"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ExistenceResult:
    verdict: Verdict
    threshold: float
    witness_exponent: Optional[float] = None
    note: str = ""


def existence_predicate(kind: ExistenceKind, p: TransformParams,
                        subject) -> ExistenceResult:
    """Evaluate a sufficient existence condition on an exponent or profile.

    The conditions are one-sided: SUFFICIENT certifies convergence,
    SHARP_VIOLATION means the subject sits at or past an exponent where an
    explicit witness diverges, and INCONCLUSIVE is returned when a profile
    carries no usable hints (the criteria are sufficient, not necessary).
    """
    n, j, k = p.n, p.j, p.k
    thresholds = {
        ExistenceKind.AFFINE_WEIGHTED_L1: (k - j, "above"),
        ExistenceKind.AFFINE_FORWARD_POWER: (k - j, "above"),
        ExistenceKind.AFFINE_DUAL_POWER: (n - k, "below"),
        ExistenceKind.HYPER_FORWARD_POWER: (k - 1, "above"),
        ExistenceKind.HYPER_DUAL_POWER: (n - k, "below"),
        ExistenceKind.AFFINE_LEBESGUE: ((n - j) / (k - j), "below"),
        ExistenceKind.HYPER_LEBESGUE: ((n - 1) / max(k - 1, 1e-12), "below"),
    }
    thr, side = thresholds[kind]

    if isinstance(subject, Profile1D):
        expo = None
        if kind in (ExistenceKind.AFFINE_WEIGHTED_L1,
                    ExistenceKind.AFFINE_FORWARD_POWER,
                    ExistenceKind.HYPER_FORWARD_POWER):
            if subject.support is not None and math.isfinite(subject.support):
                return ExistenceResult(Verdict.SUFFICIENT, thr,
                                       note="compact support")
            expo = subject.decay_hint
        elif kind in (ExistenceKind.AFFINE_DUAL_POWER,
                      ExistenceKind.HYPER_DUAL_POWER):
            expo = -subject.origin_power if subject.origin_power != 0.0 else 0.0
        if expo is None:
            return ExistenceResult(Verdict.INCONCLUSIVE, thr,
                                   note="no usable hint on the profile")
        subject = expo

    x = float(subject)
    if side == "above":
        if x > thr:
            return ExistenceResult(Verdict.SUFFICIENT, thr)
        return ExistenceResult(Verdict.SHARP_VIOLATION, thr, witness_exponent=x,
                               note=f"power witness at exponent {x} diverges")
    if x < thr:
        return ExistenceResult(Verdict.SUFFICIENT, thr)
    return ExistenceResult(Verdict.SHARP_VIOLATION, thr, witness_exponent=x,
                           note=f"power witness at exponent {x} diverges")


def sharp_witness_profile(kind: ExistenceKind, p: TransformParams) -> Profile1D:
    """The divergence witness at the sharp exponent for each condition."""
    n, j, k = p.n, p.j, p.k
    if kind is ExistenceKind.AFFINE_FORWARD_POWER:
        lam = float(k - j)
        return Profile1D(lo=1e-12, hi=math.inf, arg_kind=ArgKind.EuclideanRadius,
                         fn=lambda r: r ** (-lam), decay_hint=lam,
                         origin_power=-lam, label="sharp forward power")
    if kind is ExistenceKind.AFFINE_DUAL_POWER:
        de = float(n - k)
        return Profile1D(lo=1e-300, hi=math.inf, arg_kind=ArgKind.EuclideanRadius,
                         fn=lambda s: s ** (-de), origin_power=-de,
                         decay_hint=de, label="sharp dual power")
    if kind is ExistenceKind.HYPER_FORWARD_POWER:
        lam = float(k - 1)
        return Profile1D(lo=1.0, hi=math.inf, arg_kind=ArgKind.CoshDistance,
                         fn=lambda s: s ** (-lam), decay_hint=lam,
                         label="sharp hyper forward")
    if kind is ExistenceKind.HYPER_DUAL_POWER:
        de = float(n - k)
        return Profile1D(lo=1e-300, hi=math.inf, arg_kind=ArgKind.SinhDistance,
                         fn=lambda s: s ** (-de), origin_power=-de,
                         decay_hint=de, label="sharp hyper dual")
    if kind is ExistenceKind.AFFINE_LEBESGUE:
        pw = (j - n) / ((n - j) / (k - j))        # = j - k at the critical p
        return Profile1D(lo=0.0, hi=math.inf, arg_kind=ArgKind.EuclideanRadius,
                         fn=lambda r: (2.0 + r) ** pw / np.log(2.0 + r),
                         decay_hint=-pw, label="critical Lebesgue witness")
    if kind is ExistenceKind.HYPER_LEBESGUE:
        pw = (1 - n) / ((n - 1) / (k - 1))        # = 1 - k at the critical p
        return Profile1D(lo=1.0, hi=math.inf, arg_kind=ArgKind.CoshDistance,
                         fn=lambda s: s ** pw / np.log(1.0 + s),
                         decay_hint=-pw, label="critical hyper witness")
    raise DomainError(f"no witness for {kind}")


def truncated_forward_values(p: TransformParams, f: Profile1D, s: float,
                             cutoffs,
                             spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Forward-transform integrals truncated at increasing upper cutoffs.

    A divergence witness shows monotone growth across the cutoffs; a
    convergent input shows stabilization.
    """
    out = []
    a = p.half_gap
    base = math.pi ** a
    for cut in cutoffs:
        capped = _cap_support(f, float(cut))
        if f.arg_kind is ArgKind.CoshDistance:
            g = capped.with_power(p.j - 1.0)
            out.append(base * s ** (1.0 - p.k) * ek_right(a, g, s, spec))
        else:
            out.append(base * ek_right(a, capped, s, spec))
    return np.asarray(out)


def truncated_dual_values(p: TransformParams, phi: Profile1D, r: float,
                          lower_cutoffs,
                          spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Dual-transform integrals truncated below at shrinking cutoffs."""
    out = []
    for eps in lower_cutoffs:
        def fn(s, eps=float(eps)):
            s = np.asarray(s, dtype=float)
            return np.where(s >= eps, phi.fn(s), 0.0)

        masked = Profile1D(lo=0.0, hi=phi.hi, fn=fn, arg_kind=phi.arg_kind,
                           decay_hint=phi.decay_hint, breakpoints=(float(eps),),
                           label="masked")
        out.append(_dual_kernel(p, masked, r, spec))
    return np.asarray(out)


# -- inversion --------------------------------------------------------------------

def invert_radial(model: Model, p: TransformParams, transformed: Profile1D,
                  out_range=None, dual: bool = False,
                  spec: QuadratureSpec = DEFAULT_QUADRATURE,
                  rel_tol: float = 1e-4, n_nodes: int = 96,
                  check_residual: bool = True,
                  deriv_noise_rel: float = 1e-6) -> Profile1D:
    """Recover the input profile from a forward (or dual) transform result.

    The transform is a power-weighted fractional integral, so inversion
    strips the weights, applies the matching fractional derivative on a
    Chebyshev grid over ``out_range``, and restores the weights.  When
    ``check_residual`` is set, the forward map is re-applied to the
    reconstruction and a residual above 10x ``rel_tol`` raises
    ``ReconstructionError``.
    """
    a = p.half_gap
    n, j, k = p.n, p.j, p.k

    if model is Model.Projective:
        return _invert_projective(p, transformed, out_range, dual, spec,
                                  rel_tol, n_nodes, check_residual,
                                  deriv_noise_rel)

    if not dual:
        if model in (Model.EuclideanAffine, Model.BeltramiKlein):
            kindc = ArgKind.EuclideanRadius if model is Model.EuclideanAffine \
                else ArgKind.BallRadius
            if transformed.arg_kind is not kindc:
                raise DomainError(f"expected a {kindc} profile")
            stripped = transformed.scaled(math.pi ** (-a))
            lo, hi = _default_range(model, transformed, out_range)
            grid = cheb_nodes(n_nodes, lo, hi)
            vals = ek_deriv_right(a, stripped, grid, spec, noise_rel=deriv_noise_rel)
            rec = _grid_profile(grid, vals, kindc, transformed)
            if check_residual:
                fwd = (radon_affine_radial if model is Model.EuclideanAffine
                       else radon_chord_radial)
                _residual_check(lambda x: fwd(p, rec, x, spec), transformed,
                                lo, hi, rel_tol)
            return rec
        if model is Model.Hyperboloid:
            if transformed.arg_kind is not ArgKind.CoshDistance:
                raise DomainError("expected a cosh-distance profile")
            stripped = transformed.with_power(k - 1.0).scaled(math.pi ** (-a))
            lo, hi = _default_range(model, transformed, out_range)
            grid = cheb_nodes(n_nodes, lo, hi)
            vals = grid ** (1.0 - j) * ek_deriv_right(a, stripped, grid, spec, noise_rel=deriv_noise_rel)
            rec = _grid_profile(grid, vals, ArgKind.CoshDistance, transformed)
            if check_residual:
                _residual_check(lambda x: radon_hyper_zonal(p, rec, x, spec),
                                transformed, lo, hi, rel_tol)
            return rec
        if model is Model.Elliptic:
            if transformed.arg_kind is not ArgKind.CosAngle:
                raise DomainError("expected a cos-angle profile")
            c = sphere_area(j) * math.pi ** a / sphere_area(k)
            stripped = transformed.with_power(k - 1.0).scaled(1.0 / c)
            lo, hi = _default_range(model, transformed, out_range)
            grid = cheb_nodes(n_nodes, lo, hi)
            vals = grid ** (1.0 - j) * ek_deriv_left(a, stripped, grid, spec, noise_rel=deriv_noise_rel)
            rec = _grid_profile(grid, vals, ArgKind.CosAngle, transformed)
            if check_residual:
                _residual_check(lambda x: radon_elliptic_zonal(p, rec, x, spec),
                                transformed, lo, hi, rel_tol)
            return rec
        raise DomainError(f"no radial inversion for model {model}")

    # dual transforms share one left-sided kernel
    kind = transformed.arg_kind
    c = math.pi ** a * sphere_area(n - k - 1) / sphere_area(n - j - 1)
    stripped = transformed.with_power(n - j - 2.0).scaled(1.0 / c)
    lo, hi = _default_range(model, transformed, out_range)
    grid = cheb_nodes(n_nodes, lo, hi)
    vals = grid ** (k + 2.0 - n) * ek_deriv_left(a, stripped, grid, spec, noise_rel=deriv_noise_rel)
    rec = _grid_profile(grid, vals, kind, transformed)
    if check_residual:
        dual_map = {Model.EuclideanAffine: dual_affine_radial,
                    Model.BeltramiKlein: dual_chord_radial,
                    Model.Hyperboloid: dual_hyper_zonal,
                    Model.Elliptic: dual_elliptic_zonal}[model]
        _residual_check(lambda x: dual_map(p, rec, x, spec), transformed,
                        lo, hi, rel_tol)
    return rec


def _invert_projective(p, transformed, out_range, dual, spec, rel_tol,
                       n_nodes, check_residual, deriv_noise_rel=1e-6):
    if transformed.arg_kind is not ArgKind.Angle:
        raise DomainError("expected a projective-angle profile")
    # pull the output window back to the hyperboloid; stay inside the image
    # of the angle domain, where pulled-back data is genuine
    if out_range is not None:
        rho_rng = tuple(math.atanh(math.tan(th)) for th in out_range)
    else:
        th_top = min(transformed.upper_limit, math.pi / 4 - 1e-9)
        rho_rng = (0.02, 0.9 * math.atanh(math.tan(th_top)))
    if not dual:
        w = apply_weight(WeightOp.N1, p, transformed)
        rec_h = invert_radial(Model.Hyperboloid, p, _as_cosh_profile(w),
                              out_range=(math.cosh(max(rho_rng[0], 1e-3)),
                                         math.cosh(rho_rng[1])),
                              spec=spec, rel_tol=rel_tol,
                              n_nodes=n_nodes, check_residual=False,
                              deriv_noise_rel=deriv_noise_rel)
        out = apply_weight(WeightOp.M1, p, _as_geodesic_profile(rec_h))
    else:
        w = apply_weight(WeightOp.Q1, p, transformed)
        rec_h = invert_radial(Model.Hyperboloid, p, _as_sinh_profile(w),
                              dual=True,
                              out_range=(math.sinh(max(rho_rng[0], 1e-3)),
                                         math.sinh(rho_rng[1])),
                              spec=spec, rel_tol=rel_tol, n_nodes=n_nodes,
                              check_residual=False,
                              deriv_noise_rel=deriv_noise_rel)
        out = apply_weight(WeightOp.P1, p, _as_geodesic_profile(rec_h))
    if check_residual:
        fwd = radon_projective_zonal if not dual else dual_projective_zonal
        lo, hi = 0.02, math.pi / 4 - 0.05
        _residual_check(lambda x: np.asarray(fwd(p, out, x, spec)), transformed,
                        lo, hi, rel_tol)
    return out


def _default_range(model: Model, transformed: Profile1D, out_range):
    if out_range is not None:
        return float(out_range[0]), float(out_range[1])
    if model is Model.EuclideanAffine:
        return max(transformed.lo, 0.05), 4.0
    if model is Model.BeltramiKlein:
        top = transformed.upper_limit
        return max(transformed.lo, 0.02), min(0.97, 0.999 * top)
    if model is Model.Hyperboloid:
        if transformed.arg_kind is ArgKind.CoshDistance:
            top = transformed.upper_limit
            hi = 4.0 if not math.isfinite(top) else 0.999 * top
            return max(transformed.lo, 1.0 + 1e-6), hi
        return max(transformed.lo, 0.02), 4.0
    if model is Model.Elliptic:
        return max(transformed.lo, 0.02), min(transformed.hi, 1.0) * 0.999
    raise DomainError(f"no default range for {model}")


def _grid_profile(grid, vals, kind: ArgKind, transformed: Profile1D) -> Profile1D:
    interp = ChebInterpolant(float(grid[0]), float(grid[-1]),
                             np.asarray(vals, dtype=float))
    lo, hi = float(grid[0]), float(grid[-1])

    def fn(x):
        return interp(np.clip(np.asarray(x, dtype=float), lo, hi))

    sup = transformed.support
    return Profile1D(lo=lo, hi=hi * (1 + 1e-12), fn=fn, arg_kind=kind,
                     decay_hint=transformed.decay_hint, smoothness_hint=2,
                     support=sup, label=f"inverted[{transformed.label}]")


def _residual_check(fwd, transformed: Profile1D, lo: float, hi: float,
                    rel_tol: float):
    probes = np.linspace(lo + 0.15 * (hi - lo), hi - 0.15 * (hi - lo), 5)
    want = transformed(probes)
    got = np.asarray(fwd(probes))
    scale = max(float(np.max(np.abs(want))), 1e-300)
    resid = float(np.max(np.abs(got - want))) / scale
    if resid > 10.0 * rel_tol:
        raise ReconstructionError(
            f"forward residual {resid:.2e} exceeds 10 x {rel_tol:.0e}; the "
            "data does not look like a transform of a smooth profile")
