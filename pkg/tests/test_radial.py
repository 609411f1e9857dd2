import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import TIGHT, rel_err, sup_rel_err
from georadon import profiles as P
from georadon import radial as R
from georadon.errors import DivergenceError, DomainError
from georadon.models import Model
from georadon.special import lambda2, sphere_area


def brute_forward_affine(p, f0, s, upper=np.inf):
    a = (p.k - p.j) / 2.0
    val, _ = quad(lambda r: f0(r) * (r * r - s * s) ** (a - 1.0) * r,
                  s, upper, limit=400)
    return sphere_area(p.k - p.j - 1) * val


def brute_dual(p, phi0, r):
    a = (p.k - p.j) / 2.0
    c = sphere_area(p.k - p.j - 1) * sphere_area(p.n - p.k - 1) \
        / sphere_area(p.n - p.j - 1)
    val, _ = quad(lambda s: phi0(s) * (r * r - s * s) ** (a - 1.0)
                  * s ** (p.n - p.k - 1), 0.0, r, limit=400)
    return c / r ** (p.n - p.j - 2) * val


def test_params_validation():
    with pytest.raises(DomainError):
        R.TransformParams(3, 1, 1)
    with pytest.raises(DomainError):
        R.TransformParams(3, 0, 3)
    with pytest.raises(DomainError):
        R.TransformParams(1, 0, 1)


def test_affine_gaussian_closed_form():
    for (n, j, k) in ((4, 0, 2), (5, 1, 3), (3, 0, 1)):
        p = R.TransformParams(n, j, k)
        s = np.linspace(0.0, 2.5, 11)
        got = R.radon_affine_radial(p, P.gaussian(), s)
        want = math.pi ** ((k - j) / 2) * np.exp(-s * s)
        assert rel_err(got, want) < 1e-12


def test_affine_elementary_tail():
    # r^(j-k-2) cut below 1, k-j=2: the transform is pi/s^2 past the cut
    p = R.TransformParams(5, 1, 3)

    def fn(r):
        r = np.asarray(r, dtype=float)
        return np.where(r > 1.0, r ** (p.j - p.k - 2.0), 0.0)

    f = P.Profile1D(lo=0.0, hi=math.inf, fn=fn,
                    arg_kind=P.ArgKind.EuclideanRadius, decay_hint=4.0,
                    breakpoints=(1.0,))
    for s in (1.2, 2.0):
        got = R.radon_affine_radial(p, f, s)
        want, _ = quad(lambda r: 2 * math.pi * r ** (-3.0), s, np.inf)
        assert abs(got - want) < 1e-9 * abs(want)


def test_affine_divergence_error():
    p = R.TransformParams(4, 0, 2)
    with pytest.raises(DivergenceError):
        R.radon_affine_radial(p, P.power(0.0), 1.0)


def test_zero_profile_maps_to_zero():
    p = R.TransformParams(4, 0, 2)
    zero = P.Profile1D(lo=0.0, hi=math.inf,
                       fn=lambda r: np.zeros_like(np.asarray(r)),
                       arg_kind=P.ArgKind.EuclideanRadius, decay_hint=math.inf)
    assert R.radon_affine_radial(p, zero, 1.0) == 0.0
    assert R.dual_affine_radial(p, zero, 1.0) == 0.0


def test_dual_transforms_of_constant_are_one():
    for (n, j, k) in ((4, 0, 2), (5, 1, 2), (6, 2, 4)):
        p = R.TransformParams(n, j, k)
        one_b = P.power(0.0, hi=1.0, arg_kind=P.ArgKind.BallRadius)
        assert abs(R.dual_chord_radial(p, one_b, 0.5) - 1.0) < 1e-12
        one_e = P.power(0.0, hi=math.inf)
        assert abs(R.dual_affine_radial(p, one_e, 1.3) - 1.0) < 1e-12
        one_c = P.power(0.0, hi=1.0 + 1e-9, arg_kind=P.ArgKind.CosAngle)
        assert abs(R.radon_elliptic_zonal(p, one_c, 0.7) - 1.0) < 1e-12
        one_s = P.power(0.0, hi=1.0 + 1e-9, arg_kind=P.ArgKind.SinAngle)
        assert abs(R.dual_elliptic_zonal(p, one_s, 0.7) - 1.0) < 1e-12


def test_dual_against_brute_quadrature():
    p = R.TransformParams(5, 1, 2)
    phi = P.gaussian()
    for r in (0.4, 1.1, 2.3):
        got = R.dual_affine_radial(p, phi, r)
        want = brute_dual(p, lambda s: math.exp(-s * s), r)
        assert abs(got - want) < 1e-9 * abs(want)


def test_dual_sharp_singularity_rejected():
    # phi ~ s^(k-n) is exactly non-integrable against s^(n-k-1)
    p = R.TransformParams(5, 1, 2)
    phi = P.power(float(p.k - p.n), lo=1e-300)
    with pytest.raises(DivergenceError):
        R.dual_affine_radial(p, phi, 1.0)


def test_elliptic_zonal_power_rule():
    # F1 = t^q maps to a Beta multiple of s^q
    p = R.TransformParams(5, 1, 2)
    q_exp = 2.0
    f1 = P.power(q_exp, hi=1.0 + 1e-9, arg_kind=P.ArgKind.CosAngle)
    a = (p.k - p.j) / 2.0
    c = sphere_area(p.j) * sphere_area(p.k - p.j - 1) / sphere_area(p.k)
    want_c = c * 0.5 * math.gamma((p.j + q_exp + 1) / 2) * math.gamma(a) \
        / math.gamma((p.j + q_exp + 1) / 2 + a)
    for s in (0.3, 0.8, 1.0):
        got = R.radon_elliptic_zonal(p, f1, s)
        assert abs(got - want_c * s ** q_exp) < 1e-11 * abs(want_c)


def test_hyper_zonal_example_value():
    pair = R.closed_form_pair(R.ClosedFormId.HYPER_CAP)
    got = R.evaluate_closed_form(pair, 1.0)
    assert abs(got - math.sqrt(3.0)) < 1e-10


def test_hyper_zonal_gaussian_identity():
    # f1 = e^{-r^2} r^{1-j} maps to pi^((k-j)/2) s^(1-k) e^{-s^2}
    for (n, j, k) in ((3, 0, 1), (5, 1, 3)):
        p = R.TransformParams(n, j, k)
        f1 = P.Profile1D(lo=1.0, hi=math.inf,
                         fn=lambda r: np.exp(-r * r) * r ** (1.0 - j),
                         arg_kind=P.ArgKind.CoshDistance, decay_hint=math.inf)
        s = np.linspace(1.0, 2.5, 7)
        got = R.radon_hyper_zonal(p, f1, s)
        want = math.pi ** ((k - j) / 2) * s ** (1.0 - k) * np.exp(-s * s)
        assert rel_err(got, want) < 1e-11


@pytest.mark.parametrize("cf", list(R.ClosedFormId))
def test_closed_forms_at_defaults(cf):
    pair = R.closed_form_pair(cf)
    grid = np.linspace(1.0, 1.98, 64) if cf is R.ClosedFormId.HYPER_CAP \
        else np.linspace(0.05, 0.95, 64)
    got = np.asarray(R.evaluate_closed_form(pair, grid))
    assert rel_err(got, pair.expected(grid)) < 1e-8


def test_closed_forms_other_regimes():
    # j > 0 with j+k >= n, and fractional kernel order
    pair = R.closed_form_pair(R.ClosedFormId.CHORD_CAP,
                              R.TransformParams(5, 1, 3), alpha=3.0, a=0.8)
    grid = np.linspace(0.05, 0.75, 33)
    got = np.asarray(R.evaluate_closed_form(pair, grid))
    assert rel_err(got, pair.expected(grid)) < 1e-8
    pair2 = R.closed_form_pair(R.ClosedFormId.DUAL_CHORD_POWER,
                               R.TransformParams(5, 1, 3), alpha=1.5)
    grid2 = np.linspace(0.05, 0.9, 33)
    got2 = np.asarray(R.evaluate_closed_form(pair2, grid2))
    assert rel_err(got2, pair2.expected(grid2)) < 1e-8


def test_projective_round_trip_by_construction(hyper_gauss_cosh):
    from georadon.models import WeightOp, apply_weight
    p = R.TransformParams(4, 1, 2)
    geo = P.Profile1D(lo=0.0, hi=math.inf,
                      fn=lambda rho: np.exp(-np.sinh(rho) ** 2),
                      arg_kind=P.ArgKind.GeodesicDistance, decay_hint=math.inf)
    f_pi = apply_weight(WeightOp.M1, p, geo)
    th = np.linspace(0.05, 0.6, 9)
    got = np.asarray(R.radon_projective_zonal(p, f_pi, th))
    # by the weighted-route definition this equals the stripped hyperbolic
    # forward transform
    rho = np.arctanh(np.tan(th))
    direct = np.asarray(R.radon_hyper_zonal(p, hyper_gauss_cosh, np.cosh(rho)))
    want = direct * np.cos(2 * th) ** (-(p.j + 1) / 2.0)
    assert rel_err(got, want) < 1e-10


def test_projective_against_chord_route(hyper_gauss_cosh):
    from georadon.models import WeightOp, apply_weight
    p = R.TransformParams(4, 1, 2)
    geo = P.Profile1D(lo=0.0, hi=math.inf,
                      fn=lambda rho: np.exp(-np.sinh(rho) ** 2),
                      arg_kind=P.ArgKind.GeodesicDistance, decay_hint=math.inf)
    f_pi = apply_weight(WeightOp.M1, p, geo)
    th = np.linspace(0.05, 0.6, 9)
    got = np.asarray(R.radon_projective_zonal(p, f_pi, th))
    g_ball = R.retag(apply_weight(WeightOp.M0_INV, p, f_pi),
                     P.ArgKind.BallRadius)
    rb = P.Profile1D(lo=0.0, hi=1.0,
                     fn=lambda b: np.asarray(
                         R.radon_chord_radial(p, g_ball, np.atleast_1d(b))),
                     arg_kind=P.ArgKind.BallRadius)
    via_chord = apply_weight(WeightOp.N0_INV, p, rb)(th)
    assert rel_err(got, via_chord) < 1e-8


# -- existence predicates and sharpness ------------------------------------------

def test_existence_verdicts():
    p = R.TransformParams(5, 1, 2)
    K, V = R.ExistenceKind, R.Verdict
    assert R.existence_predicate(K.AFFINE_FORWARD_POWER, p,
                                 p.k - p.j + 0.5).verdict is V.SUFFICIENT
    assert R.existence_predicate(K.AFFINE_FORWARD_POWER, p,
                                 p.k - p.j).verdict is V.SHARP_VIOLATION
    assert R.existence_predicate(K.AFFINE_DUAL_POWER, p,
                                 p.n - p.k - 0.5).verdict is V.SUFFICIENT
    assert R.existence_predicate(K.AFFINE_DUAL_POWER, p,
                                 p.n - p.k).verdict is V.SHARP_VIOLATION
    assert R.existence_predicate(K.HYPER_FORWARD_POWER, p,
                                 p.k - 1).verdict is V.SHARP_VIOLATION
    assert R.existence_predicate(K.HYPER_DUAL_POWER, p,
                                 p.n - p.k).verdict is V.SHARP_VIOLATION
    crit = (p.n - p.j) / (p.k - p.j)
    assert R.existence_predicate(K.AFFINE_LEBESGUE, p,
                                 crit).verdict is V.SHARP_VIOLATION
    assert R.existence_predicate(K.AFFINE_LEBESGUE, p,
                                 crit - 0.2).verdict is V.SUFFICIENT
    # profiles: compact support certifies; no hints -> inconclusive
    assert R.existence_predicate(K.AFFINE_FORWARD_POWER, p,
                                 P.bump(1.0)).verdict is V.SUFFICIENT
    hintless = P.Profile1D(lo=0.0, hi=math.inf,
                           fn=lambda r: np.exp(-r),
                           arg_kind=P.ArgKind.EuclideanRadius)
    assert R.existence_predicate(K.AFFINE_FORWARD_POWER, p,
                                 hintless).verdict is V.INCONCLUSIVE
    # the tail-weighted integrability criterion reduces to the same exponent
    assert R.existence_predicate(K.AFFINE_WEIGHTED_L1, p,
                                 P.power(-3.0, lo=1e-6)).verdict is V.SUFFICIENT
    assert R.existence_predicate(K.AFFINE_WEIGHTED_L1, p,
                                 float(p.k - p.j)).verdict is V.SHARP_VIOLATION


def _growth_table_checks(vals):
    incs = np.diff(vals)
    assert np.all(incs > 0)
    assert vals[-1] > 1.5 * vals[0]


def test_sharp_forward_witness_grows():
    p = R.TransformParams(5, 1, 2)
    w = R.sharp_witness_profile(R.ExistenceKind.AFFINE_FORWARD_POWER, p)
    cutoffs = 2.0 * 2.0 ** np.arange(7)
    vals = R.truncated_forward_values(p, w, 1.0, cutoffs)
    _growth_table_checks(vals)
    # sufficient side stabilizes: increments shrink geometrically
    good = P.power(-(p.k - p.j + 0.5), lo=1e-6)
    gvals = R.truncated_forward_values(p, good, 1.0, cutoffs)
    gincs = np.diff(gvals)
    assert np.all(gincs[1:] < 0.75 * gincs[:-1])


def test_sharp_lebesgue_witness_grows():
    p = R.TransformParams(5, 1, 2)
    w = R.sharp_witness_profile(R.ExistenceKind.AFFINE_LEBESGUE, p)
    cutoffs = 4.0 * 2.0 ** np.arange(7)
    vals = R.truncated_forward_values(p, w, 1.0, cutoffs)
    _growth_table_checks(vals)


def test_sharp_hyper_forward_witness_grows():
    p = R.TransformParams(5, 1, 2)
    w = R.sharp_witness_profile(R.ExistenceKind.HYPER_FORWARD_POWER, p)
    cutoffs = 4.0 * 2.0 ** np.arange(7)
    vals = R.truncated_forward_values(p, w, 1.5, cutoffs)
    _growth_table_checks(vals)


def test_sharp_dual_witnesses_grow():
    p = R.TransformParams(5, 1, 2)
    cuts = 0.5 ** np.arange(1, 8)
    for kind in (R.ExistenceKind.AFFINE_DUAL_POWER,
                 R.ExistenceKind.HYPER_DUAL_POWER):
        w = R.sharp_witness_profile(kind, p)
        vals = R.truncated_dual_values(p, w, 1.0, cuts)
        _growth_table_checks(vals)


# -- inversion --------------------------------------------------------------------

def test_invert_affine_forward_gaussian():
    p = R.TransformParams(4, 0, 2)
    F = P.Profile1D(lo=0.0, hi=math.inf,
                    fn=lambda s: math.pi * np.exp(-s * s),
                    arg_kind=P.ArgKind.EuclideanRadius, decay_hint=math.inf)
    rec = R.invert_radial(Model.EuclideanAffine, p, F, out_range=(0.1, 3.0))
    grid = np.linspace(0.15, 2.8, 32)
    assert rel_err(rec(grid), np.exp(-grid ** 2)) < 1e-4


def test_invert_zero_is_zero():
    p = R.TransformParams(4, 0, 2)
    zero = P.Profile1D(lo=0.0, hi=math.inf,
                       fn=lambda s: np.zeros_like(np.asarray(s)),
                       arg_kind=P.ArgKind.EuclideanRadius, decay_hint=math.inf)
    rec = R.invert_radial(Model.EuclideanAffine, p, zero, out_range=(0.1, 3.0),
                          check_residual=False)
    assert float(np.max(np.abs(rec(np.linspace(0.2, 2.5, 16))))) < 1e-12


def test_invert_hyper_forward(hyper_gauss_cosh):
    for (n, j, k) in ((3, 0, 1), (5, 1, 3)):
        p = R.TransformParams(n, j, k)
        F = P.tabulate(lambda s: R.radon_hyper_zonal(p, hyper_gauss_cosh, s,
                                                     TIGHT),
                       1.0, 4.6, P.ArgKind.CoshDistance, n=200,
                       decay_hint=math.inf, scale_fn=lambda s: np.exp(-s * s))
        rec = R.invert_radial(Model.Hyperboloid, p, F, out_range=(1.01, 3.5))
        grid = np.linspace(1.05, 3.2, 32)
        assert rel_err(rec(grid), hyper_gauss_cosh(grid)) < 1e-4


def test_invert_dual_hyper():
    p = R.TransformParams(5, 1, 3)
    phi = P.gaussian(arg_kind=P.ArgKind.SinhDistance)
    Phi = P.tabulate(lambda r: R.dual_hyper_zonal(p, phi, r, TIGHT), 1e-3, 5.0,
                     P.ArgKind.SinhDistance, n=200, decay_hint=2.0,
                     square_variable=True)
    rec = R.invert_radial(Model.Hyperboloid, p, Phi, dual=True,
                          out_range=(0.05, 3.0))
    grid = np.linspace(0.1, 2.8, 32)
    assert rel_err(rec(grid), phi(grid)) < 1e-4


def test_invert_support_locality():
    p = R.TransformParams(4, 0, 2)
    fb = P.bump(0.6, arg_kind=P.ArgKind.BallRadius)
    Fb = P.tabulate(lambda s: R.radon_chord_radial(p, fb, s, TIGHT), 0.0, 0.6,
                    P.ArgKind.BallRadius, n=240, support=0.6,
                    square_variable=True)
    # forward support locality is exact
    assert R.radon_chord_radial(p, fb, 0.7) == 0.0
    assert R.radon_chord_radial(p, fb, 0.95) == 0.0
    rec = R.invert_radial(Model.BeltramiKlein, p, Fb, out_range=(0.02, 0.55))
    grid = np.linspace(0.05, 0.5, 32)
    assert sup_rel_err(rec(grid), fb(grid)) < 1e-4
    # inversion beyond the support radius is exactly zero
    from georadon.fracint import ek_deriv_right
    assert float(np.max(np.abs(ek_deriv_right(1.0, Fb,
                                              np.array([0.7, 0.9]))))) == 0.0


def test_invert_projective_both_directions():
    from georadon.models import WeightOp, apply_weight
    p = R.TransformParams(4, 1, 2)
    geo = P.Profile1D(lo=0.0, hi=math.inf,
                      fn=lambda rho: np.exp(-np.sinh(rho) ** 2),
                      arg_kind=P.ArgKind.GeodesicDistance, decay_hint=math.inf)
    th = np.linspace(0.02, 0.6, 24)
    F = apply_weight(WeightOp.M1, p, geo)
    trans = P.tabulate(
        lambda x: np.asarray(R.radon_projective_zonal(p, F, np.atleast_1d(x),
                                                      TIGHT)),
        0.0, 0.76, P.ArgKind.Angle, n=160)
    rec = R.invert_radial(Model.Projective, p, trans, check_residual=False)
    assert rel_err(rec(th), F(th)) < 1e-4
    phi = apply_weight(WeightOp.P1, p, geo)
    trans_d = P.tabulate(
        lambda x: np.asarray(R.dual_projective_zonal(p, phi, np.atleast_1d(x),
                                                     TIGHT)),
        0.0, 0.76, P.ArgKind.Angle, n=160)
    rec_d = R.invert_radial(Model.Projective, p, trans_d, dual=True,
                            check_residual=False)
    assert rel_err(rec_d(th), phi(th)) < 1e-4


def test_dual_kernel_value_at_zero():
    # the powers cancel in the r -> 0 limit and the Beta constant survives
    for (n, j, k) in ((5, 1, 2), (4, 0, 2)):
        p = R.TransformParams(n, j, k)
        one = P.power(0.0, hi=math.inf)
        assert abs(R.dual_affine_radial(p, one, 0.0) - 1.0) < 1e-12


def test_invert_residual_check_rejects_garbage():
    p = R.TransformParams(4, 0, 2)
    noise = P.Profile1D(lo=0.0, hi=math.inf,
                        fn=lambda s: np.exp(-s) * (1.0 + 0.5 * np.sin(40 * s)),
                        arg_kind=P.ArgKind.EuclideanRadius, decay_hint=math.inf)
    with pytest.raises((R.ReconstructionError, Exception)):
        R.invert_radial(Model.EuclideanAffine, p, noise, out_range=(0.1, 3.0))
