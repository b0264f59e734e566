import numpy as np
import pytest

from dwlab.adops import ADParams
from dwlab.dyadic import CubeId, Truncation
from dwlab.transforms import (
    GridFunction,
    TransformError,
    band_project,
    build_lp_window,
    dwt_analyze,
    dwt_synthesize,
    peetre_maximal,
    phi_analyze,
    phi_synthesize,
    square_functions,
    wavelet_basis_function,
    wavelet_gram_check,
)
from dwlab.weights import identity_weight


def _random_grid(N, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    return GridFunction(1, N, v)


def test_lp_window_profiles_nonnegative_and_disjoint():
    w = build_lp_window(128)
    for j in w.levels:
        assert np.all(w.phi_hat[j] >= 0.0)
        assert np.all(np.isreal(w.phi_hat[j]))
        for jp in w.levels:
            if abs(j - jp) >= 2:
                assert np.max(w.phi_hat[j] * w.phi_hat[jp]) == 0.0


def test_lp_window_exact_partition_on_covered_band():
    w = build_lp_window(256)
    total = sum(w.phi_hat[j] * w.psi_hat[j] for j in w.levels)
    assert np.max(np.abs(total[w.covered] - 1.0)) < 1e-12
    assert np.max(np.abs(total[~w.covered])) == 0.0


def test_lp_window_validation():
    with pytest.raises(TransformError):
        build_lp_window(100)
    with pytest.raises(TransformError):
        build_lp_window(4)


def test_single_mode_coefficients_stay_in_their_octave():
    N = 64
    w = build_lp_window(N)
    x = np.arange(N) / N
    f = GridFunction(1, N, np.exp(2j * np.pi * 12 * x))  # octave of level 4
    tv = phi_analyze(f, w)
    for Q, z in tv.entries.items():
        if abs(Q.j - 4) >= 2:
            assert np.max(np.abs(z)) < 1e-12


def test_band_limited_round_trip_is_exact():
    N = 128
    w = build_lp_window(N)
    f = band_project(_random_grid(N, seed=2), w)
    g = phi_synthesize(phi_analyze(f, w), w)
    rel = np.max(np.abs(g.values - f.values)) / np.max(np.abs(f.values))
    assert rel < 1e-12


def test_dwt_constant_has_zero_details():
    f = GridFunction(1, 64, np.full(64, 2.5))
    c = dwt_analyze(f, k=4)
    for d in c.details.values():
        assert np.max(np.abs(d)) < 1e-12


def test_dwt_round_trip_and_parseval():
    for k in (2, 3, 4, 6, 8):
        f = _random_grid(128, seed=k)
        c = dwt_analyze(f, k=k)
        g = dwt_synthesize(c)
        assert np.max(np.abs(g.values - f.values)) < 1e-12
        assert abs(c.energy() - float(np.sum(np.abs(f.values) ** 2))) < 1e-10


def test_dwt_filter_validation():
    with pytest.raises(TransformError):
        dwt_analyze(_random_grid(64), k=5)
    with pytest.raises(TransformError):
        dwt_analyze(_random_grid(8), k=8)  # filter longer than the signal


def test_wavelet_basis_unit_norm_and_orthogonality():
    N = 128
    template = dwt_analyze(GridFunction(1, N, np.zeros(N)), k=4)
    u = wavelet_basis_function(template, 4, (3,)).values
    v = wavelet_basis_function(template, 4, (9,)).values
    w = wavelet_basis_function(template, 5, (3,)).values
    assert abs(np.vdot(u, u).real / N - 1.0) < 1e-12
    assert abs(np.vdot(u, v)) / N < 1e-12  # same level, disjoint shifts
    assert abs(np.vdot(u, w)) / N < 1e-12  # adjacent level


def test_wavelet_gram_against_envelope():
    t = Truncation(1, 3, 6, 1)
    worst = wavelet_gram_check(4, 256, ADParams(2.0, 1.5, 1.5), t,
                               level_lo=3, level_hi=6)
    # diagonal entries force worst >= 1; decay keeps it window-stable
    assert 1.0 - 1e-12 <= worst <= 10.0


def test_peetre_constant_field():
    W = identity_weight(1)
    fj = {2: np.full(32, 3.0 - 4.0j)}
    out = peetre_maximal(fj, eta=1.5, mode="matrix", W=W, p=2.0)
    assert np.max(np.abs(out[2] - 5.0)) < 1e-12


def test_peetre_single_spike_decay():
    W = identity_weight(1)
    Ng = 64
    v = np.zeros(Ng)
    v[3] = 2.0
    out = peetre_maximal({0: v}, eta=1.0, mode="matrix", W=W, p=2.0)
    d = 7.0 / Ng  # torus distance between grid slots 10 and 3
    assert abs(out[0][10] - 2.0 / (1.0 + d)) < 1e-12
    with pytest.raises(TransformError):
        peetre_maximal({0: v}, eta=0.0, mode="matrix", W=W, p=2.0)


def test_lusin_constant_field():
    out = square_functions({1: np.full(32, 1.5)}, kind="lusin", r=2.0,
                           alpha=1.0)
    assert np.max(np.abs(out[1] - 1.5)) < 1e-12


def test_gstar_matches_brute_force():
    rng = np.random.default_rng(11)
    Ng, j, r, lam = 32, 2, 2.0, 1.75
    v = rng.standard_normal(Ng)
    out = square_functions({j: v}, kind="gstar", r=r, lam=lam)[j]
    idx = np.arange(Ng)
    for x in (0, 7, 20):
        d = np.minimum(np.abs(idx - x), Ng - np.abs(idx - x)) / Ng
        want = (np.sum(np.abs(v) ** r * 2.0**j
                       / (1.0 + 2.0**j * d) ** (lam * r)) / Ng) ** (1.0 / r)
        assert abs(out[x] - want) < 1e-12


def test_grid_function_validation():
    with pytest.raises(TransformError):
        GridFunction(3, 8, np.zeros((8, 8, 8)))
    with pytest.raises(TransformError):
        GridFunction(1, 12, np.zeros(12))
    with pytest.raises(TransformError):
        GridFunction(1, 8, np.zeros(9))
