import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dwlab.dyadic import CubeId, Truncation
from dwlab.growth import (
    GrowthError,
    GrowthFn,
    class_constant,
    is_almost_increasing,
    make_growth,
)


def test_power_examples():
    v0 = make_growth("power", tau=0.0)
    assert v0(CubeId(5, (17,))) == 1.0
    assert v0.declared_class == (0.0, 0.0, 0.0)
    v1 = make_growth("power", tau=1.0)
    assert v1(CubeId(2, (0,))) == 0.25


def test_weight_power_constant_field():
    v = make_growth("weight_power", field=lambda x: 1.0, tau=1.0)
    assert abs(v(CubeId(1, (0,))) - 0.5) < 1e-12


def test_piecewise_power_switches_at_unit_scale():
    v = make_growth("piecewise_power", alpha=0.25, beta=1.0)
    # ell >= 1 (j <= 0) uses beta, finer cubes use alpha
    assert v(CubeId(-1, (0,))) == 2.0
    assert v(CubeId(0, (0,))) == 1.0
    assert v(CubeId(2, (0,))) == 0.25 ** 0.25


def test_length_growth():
    v = make_growth("length", g=lambda ell: min(ell, 1.0), p=2.0)
    assert v(CubeId(3, (0,))) == 0.125
    assert v(CubeId(-2, (0,))) == 1.0
    assert v.declared_class == (0.0, 0.5, 0.0)


def test_class_constant_power_is_exactly_one():
    t = Truncation(1, 0, 4, 1)
    for tau in (0.0, 0.5, 1.0):
        v = make_growth("power", tau=tau)
        assert abs(class_constant(v, tau, tau, 0.0, t) - 1.0) < 1e-12


def test_class_constant_detects_wrong_class():
    # power(1) against class (0,0;0): worst pair is the smallest vs the
    # largest cube, ratio 2^{4} = 16 on a 4-level 1-d window
    t = Truncation(1, 0, 4, 1)
    v = make_growth("power", tau=1.0)
    assert class_constant(v, 0.0, 0.0, 0.0, t) > 8.0


def test_class_constant_constant_function():
    t = Truncation(1, 0, 3, 1)
    v = GrowthFn(eval=lambda c: 5.0)
    assert abs(class_constant(v, 0.0, 0.0, 0.0, t) - 1.0) < 1e-12


def test_almost_increasing():
    t = Truncation(1, 0, 3, 1)
    ok, c = is_almost_increasing(make_growth("power", tau=1.0), t)
    assert ok and c <= 1.0 + 1e-12
    ok, c = is_almost_increasing(make_growth("power", tau=0.0), t)
    assert ok and c == 1.0
    # v(Q) = |Q|^{-1} grows into subcubes: constant 2^3 at depth 3
    v = GrowthFn(eval=lambda c: 2.0 ** (c.j * c.n))
    ok, c = is_almost_increasing(v, t, cap=10.0)
    assert ok and abs(c - 8.0) < 1e-12
    ok, _ = is_almost_increasing(v, Truncation(1, 0, 5, 1), cap=10.0)
    assert not ok


def test_validation_errors():
    with pytest.raises(GrowthError):
        make_growth("power", tau=-1.0)
    with pytest.raises(GrowthError):
        make_growth("piecewise_power", alpha=2.0, beta=1.0)
    with pytest.raises(GrowthError):
        make_growth("no_such_kind")
    v = GrowthFn(eval=lambda c: -1.0)
    with pytest.raises(GrowthError):
        v(CubeId(0, (0,)))
    with pytest.raises(GrowthError):
        class_constant(make_growth("power", tau=0.0), 1.0, 0.0, 0.0,
                       Truncation(1, 0, 1, 1))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 2.0), st.integers(2, 4))
def test_power_class_membership_property(tau, depth):
    t = Truncation(1, 0, depth, 1)
    v = make_growth("power", tau=tau)
    assert class_constant(v, tau, tau, 0.0, t) <= 1.0 + 1e-9
