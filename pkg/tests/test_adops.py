import numpy as np
import pytest

from dwlab.adops import (
    ADError,
    ADParams,
    ad_apply,
    ad_entry,
    ad_thresholds,
    compose_check,
    majorant,
    molecule_thresholds,
)
from dwlab.dyadic import CubeId, Truncation
from dwlab.seqspace import CoeffSeq, build_random, build_single_point


def test_ad_entry_hand_values():
    # one level finer, concentric at the corner: ratio (1/2)^E
    assert ad_entry(CubeId(1, (0,)), CubeId(0, (0,)), ADParams(5.0, 2.0, 0.0)) == 0.25
    # same level, separation 4: sep^{-D}
    got = ad_entry(CubeId(0, (3,)), CubeId(0, (0,)), ADParams(2.0, 1.0, 1.0))
    assert got == 0.0625
    with pytest.raises(ADError):
        ad_entry(CubeId(0, (0,)), CubeId(0, (0, 0)), ADParams(1.0, 1.0, 1.0))


def test_envelope_with_zero_exponents_spreads_mass():
    t = Truncation(1, 0, 2, 1)
    tv = build_single_point(CubeId(1, (1,)), 3.0)
    out = ad_apply(ADParams(0.0, 0.0, 0.0), tv, t)
    for Q in (CubeId(0, (0,)), CubeId(2, (3,))):
        assert abs(out[Q][0] - 3.0) < 1e-15


def test_ad_apply_explicit_table():
    t = Truncation(1, 0, 1, 1)
    tv = build_single_point(CubeId(1, (0,)), 2.0)
    table = {(CubeId(0, (0,)), CubeId(1, (0,))): 0.5}
    out = ad_apply(table, tv, t)
    assert abs(out[CubeId(0, (0,))][0] - 1.0) < 1e-15
    assert abs(out[CubeId(1, (1,))][0]) == 0.0


def test_thresholds_f22_unweighted():
    th = ad_thresholds(0.0, 2.0, 2.0, "F", 0.0, 0.0, 0.0)
    assert th.regime == "subcritical"
    assert (th.J, th.D_min, th.E_min, th.F_min) == (1.0, 1.0, 0.5, 0.5)


def test_thresholds_regimes():
    th = ad_thresholds(0.0, 2.0, 2.0, "B", 1.0, 1.0, 0.0)
    assert th.regime == "supercritical" and th.J == 1.0
    th = ad_thresholds(0.0, 2.0, 2.0, "F", 0.5, 0.5, 0.0)
    assert th.regime == "critical" and th.J == 1.0 / min(1.0, 2.0)
    th = ad_thresholds(0.0, 0.5, 0.25, "F", 0.0, 0.0, 0.0)
    assert th.regime == "subcritical" and th.J == 4.0


def test_thresholds_shift_in_s():
    a = ad_thresholds(0.0, 2.0, 2.0, "F", 0.0, 0.0, 0.0)
    b = ad_thresholds(1.0, 2.0, 2.0, "F", 0.0, 0.0, 0.0)
    assert b.E_min - a.E_min == 1.0
    assert a.F_min - b.F_min == 1.0
    assert a.D_min == b.D_min


def test_thresholds_weighted_zero_dimensions_match_unweighted():
    for s, p, q in ((0.0, 2.0, 2.0), (0.5, 1.0, 3.0)):
        a = ad_thresholds(s, p, q, "F", 0.0, 0.25, 0.1)
        b = ad_thresholds(s, p, q, "F", 0.0, 0.25, 0.1, weighted=(0.0, 0.0))
        assert (a.J, a.D_min, a.E_min, a.F_min) == (b.J, b.D_min, b.E_min, b.F_min)


def test_thresholds_weighted_upper_dimension_shifts_f():
    p = 2.0
    a = ad_thresholds(0.0, p, 2.0, "F", 0.0, 0.0, 0.0, weighted=(0.0, 0.0))
    b = ad_thresholds(0.0, p, 2.0, "F", 0.0, 0.0, 0.0, weighted=(0.0, p))
    assert b.F_min - a.F_min == 1.0
    assert b.D_min - a.D_min == 1.0
    assert b.E_min == a.E_min


def test_thresholds_validation():
    with pytest.raises(ADError):
        ad_thresholds(0.0, 2.0, 2.0, "F", 0.5, 0.25, 0.0)
    with pytest.raises(ADError):
        ad_thresholds(0.0, 2.0, 2.0, "F", 0.0, 0.0, 1.0)
    with pytest.raises(ADError):
        ad_thresholds(0.0, 2.0, 2.0, "G", 0.0, 0.0, 0.0)
    with pytest.raises(ADError):
        ad_thresholds(0.0, 2.0, 2.0, "F", 0.0, 0.0, 0.0, weighted=(1.5, 0.0))


def test_majorant_hand_values():
    t = Truncation(1, 0, 1, 1)
    tv = build_single_point(CubeId(1, (0,)), 1.0)
    out = majorant(tv, 1.0, 2.0, t)
    # neighbor one cell away: (1 + 1)^{-2} = 0.25
    assert abs(out[CubeId(1, (1,))][0] - 0.25) < 1e-15
    # r = infinity with a single term reproduces the entry
    out_inf = majorant(tv, np.inf, 2.0, t)
    assert abs(out_inf[CubeId(1, (0,))][0] - 1.0) < 1e-15
    with pytest.raises(ADError):
        majorant(tv, 0.0, 2.0, t)


def test_majorant_dominates_sequence():
    t = Truncation(1, 0, 3, 1)
    tv = build_random(t, m=1, seed=4, density=0.5)
    out = majorant(tv, 2.0, 3.0, t)
    for Q, z in tv.entries.items():
        assert out[Q][0] >= abs(z[0]) - 1e-12


def test_compose_check_bounded_constant():
    t = Truncation(1, 0, 3, 1)
    C, claimed = compose_check(ADParams(3.0, 2.0, 2.0), ADParams(3.0, 2.0, 2.0), t)
    assert claimed == ADParams(3.0, 2.0, 2.0)
    assert 1.0 <= C <= 50.0
    with pytest.raises(ADError):
        compose_check(ADParams(3.0, 2.0, 2.0), ADParams(2.0, 2.0, 2.0), t)


def test_molecule_thresholds_f22():
    th = ad_thresholds(0.0, 2.0, 2.0, "F", 0.0, 0.0, 0.0)
    mol = molecule_thresholds(th)
    K, L, M, N = mol.analysis
    assert (K, L, M, N) == (1.0, 0.0, 1.0, 0.0)
    assert mol.synthesis == (1.0, 0.0, 1.0, 0.0)
    assert mol.k_min == 1
