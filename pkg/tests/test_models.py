import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import rel_err
from georadon import models as M
from georadon import profiles as P
from georadon.errors import DomainError
from georadon.radial import TransformParams
from georadon.special import sphere_area


def test_convert_examples():
    assert abs(M.convert_distance(1.0, M.Model.EuclideanAffine,
                                  M.Model.Elliptic) - math.pi / 4) < 1e-15
    got = M.convert_distance(math.tanh(1.0), M.Model.BeltramiKlein,
                             M.Model.Hyperboloid)
    assert abs(got - 1.0) < 1e-14
    for model in M.Model:
        assert M.convert_distance(0.0, model, M.Model.EuclideanAffine) == 0.0


@given(st.floats(min_value=1e-6, max_value=0.95))
def test_convert_cycle_is_identity(v):
    a = M.convert_distance(v, M.Model.EuclideanAffine, M.Model.Elliptic)
    b = M.convert_distance(a, M.Model.Elliptic, M.Model.Hyperboloid)
    c = M.convert_distance(b, M.Model.Hyperboloid, M.Model.BeltramiKlein)
    d = M.convert_distance(c, M.Model.BeltramiKlein, M.Model.EuclideanAffine)
    assert abs(d - v) < 1e-14


def test_convert_between_argument_kinds():
    # cosh of the distance whose tanh is 0.6
    got = M.convert_distance(0.6, P.ArgKind.TanhDistance, P.ArgKind.CoshDistance)
    assert abs(got - 1.25) < 1e-14
    got = M.convert_distance(1.0, P.ArgKind.EuclideanRadius, P.ArgKind.SinAngle)
    assert abs(got - math.sqrt(0.5)) < 1e-15


def test_convert_range_errors():
    with pytest.raises(DomainError):
        M.convert_distance(2.0, M.Model.EuclideanAffine, M.Model.BeltramiKlein)
    with pytest.raises(DomainError):
        M.convert_distance(1.2, M.Model.BeltramiKlein, M.Model.Hyperboloid)


def test_kelvin_map():
    assert M.kelvin_map(2.0) == 0.5
    assert M.kelvin_map(1.0) == 1.0
    with pytest.raises(DomainError):
        M.kelvin_map(0.0)
    assert M.kelvin_index(5, 1) == 3


def test_measure_density_examples():
    assert abs(M.measure_density(M.Model.EuclideanAffine, 3, 1, 1.0)
               - 2 * math.pi) < 1e-14
    got = M.measure_density(M.Model.Hyperboloid, 3, 1, 2.0,
                            P.ArgKind.CoshDistance)
    assert abs(got - 4 * math.pi) < 1e-13
    with pytest.raises(DomainError):
        M.measure_density(M.Model.EuclideanAffine, 3, 3, 1.0)


def test_integrate_radial_oracles():
    f = P.gaussian()
    assert abs(M.integrate_radial(M.Model.EuclideanAffine, 3, 1, f)
               - math.pi) < 1e-10
    one = P.power(0.0, hi=1.0, arg_kind=P.ArgKind.BallRadius)
    assert abs(M.integrate_radial(M.Model.BeltramiKlein, 3, 1, one)
               - math.pi) < 1e-12
    h = P.power(-4.0, lo=1.0, arg_kind=P.ArgKind.CoshDistance, hi=math.inf)
    assert abs(M.integrate_radial(M.Model.Hyperboloid, 3, 1, h)
               - math.pi) < 1e-9
    # elliptic/projective densities integrate to the Haar-probability masses
    one_a = P.power(0.0, hi=math.pi / 2, arg_kind=P.ArgKind.Angle)
    assert abs(M.integrate_radial(M.Model.Elliptic, 4, 1, one_a) - 1.0) < 1e-10


def test_weight_op_signatures():
    src, tgt, role = M.weight_op_signature(M.WeightOp.M)
    assert (src, tgt, role) == (M.Model.Hyperboloid, M.Model.BeltramiKlein,
                                "j-side")
    src, tgt, role = M.weight_op_signature(M.WeightOp.N0)
    assert (src, tgt) == (M.Model.Elliptic, M.Model.EuclideanAffine)
    assert M.weight_op_signature(M.WeightOp.U)[2] == "j-side"


def test_weight_op_inverse_pairs_pointwise():
    p = TransformParams(5, 1, 2)
    geo = P.Profile1D(lo=0.0, hi=math.inf,
                      fn=lambda rho: np.exp(-np.sinh(rho) ** 2),
                      arg_kind=P.ArgKind.GeodesicDistance, decay_hint=math.inf)
    x = np.linspace(0.01, 2.5, 64)
    for fwd, inv in ((M.WeightOp.M, M.WeightOp.M_INV),
                     (M.WeightOp.N_INV, M.WeightOp.N),
                     (M.WeightOp.P, M.WeightOp.P_INV),
                     (M.WeightOp.M1, M.WeightOp.M1_INV),
                     (M.WeightOp.Q1_INV, M.WeightOp.Q1)):
        back = M.apply_weight(inv, p, M.apply_weight(fwd, p, geo))
        assert float(np.max(np.abs(back(x) - geo(x)))) < 1e-14


def test_apply_weight_example_values():
    p = TransformParams(5, 1, 2)
    one = P.power(0.0, arg_kind=P.ArgKind.GeodesicDistance)
    mf = M.apply_weight(M.WeightOp.M, p, one)
    r = np.array([0.3, 0.7])
    assert rel_err(mf(r), (1 - r * r) ** (-(p.k + 1) / 2)) < 1e-14
    m1 = M.apply_weight(M.WeightOp.M1, p, one)
    th = np.array([0.2, 0.6])
    want = sphere_area(p.k) / sphere_area(p.j) * np.cos(2 * th) ** (-1.5)
    assert rel_err(m1(th), want) < 1e-14


def test_apply_weight_kind_mismatch():
    p = TransformParams(4, 1, 2)
    wrong = P.gaussian(arg_kind=P.ArgKind.CosAngle)
    with pytest.raises(DomainError):
        M.apply_weight(M.WeightOp.M, p, wrong)


def test_point_to_subhyperboloid_distance():
    n, k = 4, 2
    z = np.zeros(n + 1)
    z[n - k - 1] = math.sinh(0.8)
    z[n] = math.cosh(0.8)
    assert abs(M.point_to_subhyperboloid_distance(z, k) - 0.8) < 1e-12
    origin = np.zeros(n + 1)
    origin[n] = 1.0
    assert M.point_to_subhyperboloid_distance(origin, k) == 0.0
    inside = np.zeros(n + 1)
    inside[n - 1] = math.sinh(1.0)
    inside[n] = math.cosh(1.0)
    assert M.point_to_subhyperboloid_distance(inside, k) == 0.0
    bad = np.ones(n + 1)
    with pytest.raises(DomainError):
        M.point_to_subhyperboloid_distance(bad, k)
