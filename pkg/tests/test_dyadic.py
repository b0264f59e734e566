import numpy as np
import pytest
from hypothesis import given, strategies as st

from dwlab.dyadic import (
    CubeId,
    DyadicError,
    Truncation,
    ancestor,
    children,
    contains_cube,
    cube_geometry,
    enumerate_cubes,
    parent,
    separation,
)


def test_geometry_examples():
    x, ell, j = cube_geometry(CubeId(0, (0,)))
    assert (x[0], ell, j) == (0.0, 1.0, 0)
    x, ell, j = cube_geometry(CubeId(2, (3,)))
    assert (x[0], ell, j) == (0.75, 0.25, 2)
    x, ell, j = cube_geometry(CubeId(-1, (1, 0)))
    assert np.allclose(x, [2.0, 0.0]) and ell == 2.0


def test_children_parent():
    assert children(CubeId(0, (0,))) == [CubeId(1, (0,)), CubeId(1, (1,))]
    assert parent(CubeId(1, (1,))) == CubeId(0, (0,))
    # 5 * 2^-3 = 0.625 lies in [0.5, 1)
    assert ancestor(CubeId(3, (5,)), 1) == CubeId(1, (1,))


def test_children_parent_roundtrip_2d():
    Q = CubeId(2, (1, 3))
    kids = children(Q)
    assert len(kids) == 4
    for c in kids:
        assert parent(c) == Q
        assert contains_cube(Q, c)


def test_separation_values():
    Q = CubeId(0, (3,))
    R = CubeId(0, (0,))
    assert separation(Q, Q) == 1.0
    assert separation(Q, R) == 4.0
    assert separation(CubeId(1, (0,)), CubeId(0, (2,))) == 3.0
    assert separation(Q, R) == separation(R, Q)


def test_truncation_counts():
    t = Truncation(1, 0, 1, 1)
    assert len(enumerate_cubes(t)) == 3
    t2 = Truncation(2, 0, 0, 2)
    assert len(enumerate_cubes(t2)) == 4


def test_contained_in():
    t = Truncation(1, 0, 1, 1)
    got = enumerate_cubes(t, contained_in=CubeId(0, (0,)))
    assert got == [CubeId(0, (0,)), CubeId(1, (0,)), CubeId(1, (1,))]


def test_enumeration_order_is_lexicographic():
    t = Truncation(1, 0, 2, 1)
    cubes = enumerate_cubes(t)
    assert cubes == sorted(cubes, key=lambda Q: (Q.j, Q.k))


def test_cell_index_slices_cover_window():
    t = Truncation(1, 0, 3, 2)
    R = t.cells_per_axis()
    covered = np.zeros(R, dtype=int)
    for Q in enumerate_cubes(t, level=2):
        offs, width = t.cell_index(Q)
        covered[offs[0]:offs[0] + width] += 1
    assert np.all(covered == 1)


def test_negative_levels():
    t = Truncation(1, -2, 0, 2)
    # hull is [-4, 4); root cubes have side 4
    root = enumerate_cubes(t, level=-2)
    assert len(root) == 2
    x, ell, _ = cube_geometry(root[0])
    assert x[0] == -4.0 and ell == 4.0


def test_dimension_mismatch_raises():
    with pytest.raises(DyadicError):
        separation(CubeId(0, (0,)), CubeId(0, (0, 0)))


def test_invalid_truncation():
    with pytest.raises(DyadicError):
        Truncation(1, 3, 1, 1)
    with pytest.raises(DyadicError):
        Truncation(1, 0, 1, 0)
    with pytest.raises(DyadicError):
        Truncation(0, 0, 1, 1)


@given(st.integers(0, 6), st.integers(0, 63), st.integers(0, 5))
def test_ancestor_contains(j, k, up):
    j = max(j, 0)
    k = k % (1 << j)
    Q = CubeId(j, (k,))
    lvl = max(j - up, 0)
    A = ancestor(Q, lvl)
    assert contains_cube(A, Q)
    x, ell, _ = cube_geometry(Q)
    ax, aell, _ = cube_geometry(A)
    assert ax[0] <= x[0] and x[0] + ell <= ax[0] + aell + 1e-12


@given(st.integers(-3, 5), st.integers(-8, 8), st.integers(-3, 5),
       st.integers(-8, 8))
def test_separation_symmetric_and_at_least_one(j1, k1, j2, k2):
    Q, R = CubeId(j1, (k1,)), CubeId(j2, (k2,))
    s = separation(Q, R)
    assert s >= 1.0
    assert s == separation(R, Q)
