"""Dyadic cube index algebra.

A dyadic cube Q_{j,k} = 2^{-j}([0,1)^n + k) is identified by its integer
level j and integer lower-corner coordinate k.  Everything downstream
(growth functions, sequence norms, almost-diagonal kernels) indexes data
by these cubes, so coordinates are kept as exact integers and real
geometry is derived on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


class DyadicError(ValueError):
    """Invalid cube-algebra argument (bad level, dimension mismatch, ...)."""


@dataclass(frozen=True)
class CubeId:
    """A dyadic cube: level ``j`` and integer lower-corner vector ``k``.

    The cube is 2^{-j}([0,1)^n + k); its edge length is 2^{-j} and its
    lower corner is 2^{-j} k.
    """

    j: int
    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(ki) for ki in self.k))

    @property
    def n(self):
        return len(self.k)


@dataclass(frozen=True)
class Truncation:
    """A finite dyadic window.

    All cubes of level j in [j_min, j_max] contained in the union of
    ``root_extent``^n level-j_min cubes whose lower corners per axis run
    over {-floor(root_extent/2), ...}.  The window is closed under
    children down to j_max and parents up to j_min.
    """

    n: int
    j_min: int
    j_max: int
    root_extent: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise DyadicError("spatial dimension must be >= 1")
        if self.j_min > self.j_max:
            raise DyadicError("need j_min <= j_max")
        if self.root_extent < 1:
            raise DyadicError("root_extent must be >= 1")

    @property
    def k_origin(self):
        """Per-axis lower-corner integer of the window at level j_min."""
        return -(self.root_extent // 2)

    def k_range(self, j):
        """Half-open per-axis integer range [lo, hi) of level-j cubes."""
        if not self.j_min <= j <= self.j_max:
            raise DyadicError(f"level {j} outside [{self.j_min}, {self.j_max}]")
        scale = 1 << (j - self.j_min)
        lo = self.k_origin * scale
        return lo, lo + self.root_extent * scale

    def level_count(self, j):
        lo, hi = self.k_range(j)
        return (hi - lo) ** self.n

    def contains(self, c: CubeId):
        if c.n != self.n:
            return False
        if not self.j_min <= c.j <= self.j_max:
            return False
        lo, hi = self.k_range(c.j)
        return all(lo <= ki < hi for ki in c.k)

    def cell_index(self, c: CubeId):
        """Finest-level (j_max) cell slice of the cube, per axis.

        Returns (offsets, width): the cube covers finest cells
        [offsets[a], offsets[a] + width) along axis a, with offset 0 at
        the window's lower corner.  Used by the norm engine to address
        piecewise-constant fields stored on the finest grid.
        """
        shift = self.j_max - c.j
        base = self.k_origin << (self.j_max - self.j_min)
        offsets = tuple((ki << shift) - base for ki in c.k)
        return offsets, 1 << shift

    def cells_per_axis(self):
        return self.root_extent << (self.j_max - self.j_min)


def cube_geometry(c: CubeId):
    """Return (lower corner x_Q, edge length, level) of a cube."""
    ell = 2.0 ** (-c.j)
    x = np.array(c.k, dtype=float) * ell
    return x, ell, c.j


def children(c: CubeId):
    """The 2^n level-(j+1) cubes whose union is c."""
    base = tuple(2 * ki for ki in c.k)
    out = []
    for bits in itertools.product((0, 1), repeat=c.n):
        out.append(CubeId(c.j + 1, tuple(b + o for b, o in zip(base, bits))))
    return out


def parent(c: CubeId):
    """The unique level-(j-1) cube containing c."""
    return CubeId(c.j - 1, tuple(ki >> 1 for ki in c.k))


def ancestor(c: CubeId, level: int):
    """The unique level-``level`` cube containing c; level <= j required."""
    if level > c.j:
        raise DyadicError(f"ancestor level {level} above cube level {c.j}")
    shift = c.j - level
    return CubeId(level, tuple(ki >> shift for ki in c.k))


def contains_cube(P: CubeId, Q: CubeId):
    """True iff Q is contained in P (as half-open cubes)."""
    if P.n != Q.n or Q.j < P.j:
        return False
    return ancestor(Q, P.j) == P


def separation(Q: CubeId, R: CubeId):
    """1 + |x_Q - x_R| / max(ell(Q), ell(R)), Euclidean lower-corner distance."""
    if Q.n != R.n:
        raise DyadicError("cubes live in different dimensions")
    xq, lq, _ = cube_geometry(Q)
    xr, lr, _ = cube_geometry(R)
    return 1.0 + float(np.linalg.norm(xq - xr)) / max(lq, lr)


def enumerate_cubes(t: Truncation, level=None, contained_in=None):
    """All window cubes in deterministic (j, k)-lexicographic order.

    ``level`` restricts to a single level j; ``contained_in`` restricts
    to cubes Q with Q contained in P and j_Q >= j_P.
    """
    if contained_in is not None and not t.contains(contained_in):
        raise DyadicError("containment anchor outside the window")
    levels = range(t.j_min, t.j_max + 1) if level is None else (level,)
    out = []
    for j in levels:
        lo, hi = t.k_range(j)  # validates the level
        if contained_in is None:
            axis = range(lo, hi)
            for k in itertools.product(axis, repeat=t.n):
                out.append(CubeId(j, k))
        else:
            P = contained_in
            if j < P.j:
                continue
            shift = j - P.j
            axes = [range(ki << shift, (ki + 1) << shift) for ki in P.k]
            for k in itertools.product(*axes):
                out.append(CubeId(j, k))
    return out
