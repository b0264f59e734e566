import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dwlab.dyadic import CubeId, Truncation
from dwlab.growth import make_growth
from dwlab.reducing import identity_family, build_family
from dwlab.seqspace import (
    CoeffSeq,
    SeqSpaceError,
    SpaceParams,
    build_besov_counterexample,
    build_random,
    build_single_point,
    finfty_norm,
    gamma_pq,
    la_norm,
    seq_norm,
    single_point_oracle,
)
from dwlab.weights import constant_weight, identity_weight

V0 = make_growth("power", tau=0.0)
V1 = make_growth("power", tau=1.0)


def _params(family="B", s=0.0, p=2.0, q=2.0, v=V0, **kw):
    return SpaceParams(family, s, p, q, v, **kw)


def test_coeffseq_validation():
    tv = CoeffSeq(2)
    with pytest.raises(SeqSpaceError):
        tv[CubeId(0, (0,))] = [1.0]
    with pytest.raises(SeqSpaceError):
        tv[CubeId(0, (0,))] = [1.0, np.nan]
    tv[CubeId(0, (0,))] = [1.0, 2.0j]
    assert np.allclose(tv[CubeId(1, (0,))], 0.0)  # absent -> zero
    assert len(tv) == 1
    assert np.allclose(tv.scaled(3.0)[CubeId(0, (0,))], [3.0, 6.0j])
    assert abs(tv.magnitudes()[CubeId(0, (0,))][0] - np.sqrt(5.0)) < 1e-12


def test_space_params_validation():
    with pytest.raises(SeqSpaceError):
        _params(family="G")
    with pytest.raises(SeqSpaceError):
        _params(family="F", p=np.inf)
    with pytest.raises(SeqSpaceError):
        _params(mode="averaging")
    with pytest.raises(SeqSpaceError):
        _params(mode="matrix")
    assert gamma_pq(_params("F", p=1.0, q=3.0)) == 1.0
    assert gamma_pq(_params("B", p=1.0, q=0.5)) == 1.0


def test_la_norm_constant_level_zero_field():
    t = Truncation(1, 0, 1, 1)
    R = t.cells_per_axis()
    fields = {0: np.ones(R)}
    for v in (V0, V1):
        got = la_norm(fields, _params(p=1.0, q=2.0, v=v), t)
        assert abs(got - 1.0) < 1e-12


def test_single_entry_norm_hand_value():
    # t_Q = 1 on Q = [0, 1/4): field is 2 * 1_Q, every window cube P >= Q
    # sees integral 2 * 1/4 = 1/2
    t = Truncation(1, 0, 2, 1)
    tv = build_single_point(CubeId(2, (0,)), 1.0)
    got = seq_norm(tv, _params(p=1.0, q=3.0), t)
    assert abs(got - 0.5) < 1e-12
    got_f = seq_norm(tv, _params("F", p=1.0, q=0.5), t)
    assert abs(got_f - 0.5) < 1e-12


def test_homogeneity():
    t = Truncation(1, 0, 3, 1)
    tv = build_random(t, m=2, seed=1)
    for params in (_params(), _params("F", s=0.5, p=1.0, q=np.inf, v=V1)):
        a = seq_norm(tv, params, t)
        b = seq_norm(tv.scaled(3.0), params, t)
        assert abs(b - 3.0 * a) < 1e-10 * max(a, 1.0)


def test_single_point_oracle_constant_matrix_weight():
    t = Truncation(1, 0, 2, 1)
    W = constant_weight(np.diag([1.0, 4.0]))
    params = _params("F", p=2.0, q=2.0, mode="matrix", weight=W)
    Q = CubeId(0, (0,))
    z = np.array([0.0, 1.0])
    assert abs(single_point_oracle(Q, z, params, t) - 2.0) < 1e-12
    got = seq_norm(build_single_point(Q, z), params, t)
    assert abs(got - 2.0) < 1e-10


def test_averaging_identity_family_matches_unweighted():
    t = Truncation(1, 0, 3, 1)
    fam = identity_family(t, m=2)
    pa = _params(p=2.0, q=1.0, mode="averaging", reducing=fam)
    pu = _params(p=2.0, q=1.0)
    for seed in range(5):
        tv = build_random(t, m=2, seed=seed)
        assert abs(seq_norm(tv, pa, t) - seq_norm(tv, pu, t)) < 1e-12


def test_finfty_matches_fqq_with_power_growth():
    t = Truncation(1, 0, 3, 1)
    for q, s in ((2.0, 0.0), (1.0, 0.5), (3.0, -0.25)):
        params = _params("F", s=s, p=q, q=q,
                         v=make_growth("power", tau=1.0 / q))
        for seed in range(10):
            tv = build_random(t, m=1, seed=seed)
            a = finfty_norm(tv, s, q, t)
            b = seq_norm(tv, params, t)
            assert abs(a - b) < 1e-10 * max(a, 1.0)


def test_finfty_q_inf_is_sup():
    t = Truncation(1, 0, 2, 1)
    tv = CoeffSeq(1)
    tv[CubeId(2, (1,))] = [0.5]
    tv[CubeId(0, (0,))] = [1.0]
    # 2^{2(0 + 1/2)} * 0.5 = 1 vs 2^0 * 1 = 1
    assert abs(finfty_norm(tv, 0.0, np.inf, t) - 1.0) < 1e-12


def test_besov_counterexample_support():
    t = Truncation(1, 0, 2, 1)
    tv = build_besov_counterexample(2, t)
    assert set(tv.cubes()) == {
        CubeId(0, (0,)), CubeId(1, (0,)), CubeId(2, (0,)), CubeId(2, (3,))
    }
    for Q, z in tv.entries.items():
        assert abs(z[0] - 2.0 ** (-Q.j / 2.0)) < 1e-15


def test_out_of_window_entry_raises():
    t = Truncation(1, 0, 1, 1)
    tv = build_single_point(CubeId(3, (0,)), 1.0)
    with pytest.raises(SeqSpaceError):
        seq_norm(tv, _params(), t)


def test_b_dominates_f_at_matching_parameters():
    # l^q(L^p) >= L^p(l^q) pointwise when q <= p on each window cube
    t = Truncation(1, 0, 3, 1)
    for seed in range(5):
        tv = build_random(t, m=1, seed=seed)
        b = seq_norm(tv, _params("B", p=2.0, q=1.0), t)
        f = seq_norm(tv, _params("F", p=2.0, q=1.0), t)
        assert b >= f - 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([0.5, 1.0, 2.0, np.inf]))
def test_quasinorm_positive_definite(seed, q):
    t = Truncation(1, 0, 2, 1)
    tv = build_random(t, m=1, seed=seed, density=0.5)
    val = seq_norm(tv, _params("B", p=2.0, q=q), t)
    if len(tv):
        assert val > 0
    else:
        assert val == 0.0
