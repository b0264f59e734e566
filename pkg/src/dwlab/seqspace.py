"""Cube-indexed coefficient sequences and their quasi-norms.

The Besov-type (B) and Triebel-Lizorkin-type (F) sequence norms are

    sup_P (1/v(P)) || {2^{js} g_j 1_P}_{j >= j_P} ||_{l^q(L^p) or L^p(l^q)}

where g_j is built from the level-j coefficients:  unweighted mode uses
|t_Q| |Q|^{-1/2} on Q, averaging mode |A_Q t_Q| |Q|^{-1/2}, matrix mode
|W^{1/p}(x) t_j(x)| at quadrature nodes, and scalar_weight mode folds a
scalar weight into the L^p measure.  All fields are piecewise constant
on the finest-grid (optionally quadrature-refined) cells, so the
unweighted and averaging integrals are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .dyadic import (
    CubeId,
    Truncation,
    ancestor,
    cube_geometry,
    enumerate_cubes,
)
from .growth import GrowthFn
from .reducing import ReducingFamily
from .weights import MatrixWeight, QuadratureSpec

UNDERFLOW_CLAMP = 1e-300


class SeqSpaceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Coefficient sequences
# ---------------------------------------------------------------------------

class CoeffSeq:
    """Finite map CubeId -> C^m (absent means zero)."""

    def __init__(self, m, entries=None):
        self.m = int(m)
        self.entries = {}
        if entries:
            for Q, z in entries.items():
                self[Q] = z

    def __setitem__(self, Q: CubeId, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if z.shape != (self.m,):
            raise SeqSpaceError(f"entry shape {z.shape} != ({self.m},)")
        if not np.all(np.isfinite(z.view(float))):
            raise SeqSpaceError("non-finite coefficient")
        self.entries[Q] = z

    def __getitem__(self, Q: CubeId):
        return self.entries.get(Q, np.zeros(self.m, dtype=complex))

    def __len__(self):
        return len(self.entries)

    def cubes(self):
        return list(self.entries)

    def scaled(self, lam):
        return CoeffSeq(self.m, {Q: lam * z for Q, z in self.entries.items()})

    def mapped(self, fn):
        """Entry-wise transform Q, z -> new vector (or scalar for m=1)."""
        return CoeffSeq(self.m, {Q: fn(Q, z) for Q, z in self.entries.items()})

    def magnitudes(self):
        """The scalar sequence {|t_Q|} (Euclidean entry norms)."""
        return CoeffSeq(1, {Q: np.array([np.linalg.norm(z)])
                            for Q, z in self.entries.items()})


@dataclass
class SpaceParams:
    """(family, s, p, q, growth function, weight mode) naming a quasi-norm."""

    family: str
    s: float
    p: float
    q: float
    v: GrowthFn
    mode: str = "unweighted"
    reducing: Optional[ReducingFamily] = None
    weight: Optional[MatrixWeight] = None
    quad: QuadratureSpec = dc_field(default_factory=QuadratureSpec)
    scalar_w: Optional[Callable] = None

    def __post_init__(self):
        self.family = self.family.upper()
        if self.family not in ("B", "F"):
            raise SeqSpaceError("family must be B or F")
        if np.isinf(self.p) and self.family == "F":
            raise SeqSpaceError("p = infinity is only defined for family B")
        if np.isinf(self.p) and self.mode != "unweighted":
            raise SeqSpaceError("p = infinity requires unweighted mode")
        if self.mode == "averaging" and self.reducing is None:
            raise SeqSpaceError("averaging mode needs a ReducingFamily")
        if self.mode == "matrix" and self.weight is None:
            raise SeqSpaceError("matrix mode needs a MatrixWeight")
        if self.mode == "scalar_weight" and self.scalar_w is None:
            raise SeqSpaceError("scalar_weight mode needs a weight callback")


def gamma_pq(params: SpaceParams):
    """min(p, q) for F-type spaces, p for B-type."""
    if params.family == "F":
        return min(params.p, params.q)
    return params.p


# ---------------------------------------------------------------------------
# The L A-norm engine (prefix/suffix sums over the finest grid)
# ---------------------------------------------------------------------------

def _box_reduce(arr, w, op):
    """Reduce an (R,)*n array over disjoint boxes of width w per axis."""
    for ax in range(arr.ndim):
        shape = arr.shape[:ax] + (arr.shape[ax] // w, w) + arr.shape[ax + 1:]
        arr = op(arr.reshape(shape), axis=ax + 1)
    return arr


def la_norm(fields, params: SpaceParams, t: Truncation, subdiv=1):
    """sup_P (1/v(P)) ||{f_j 1_P}_{j >= j_P}|| with l^q(L^p) (B) or
    L^p(l^q) (F) mixing and the usual modifications at infinity.

    ``fields`` maps level j to a piecewise-constant array on the finest
    grid refined ``subdiv``-fold per axis; absent levels are zero.
    """
    n = t.n
    R = t.cells_per_axis() * subdiv
    node_vol = (2.0 ** (-t.j_max) / subdiv) ** n
    p, q = params.p, params.q
    levels = list(range(t.j_min, t.j_max + 1))
    F = {}
    for j in levels:
        f = fields.get(j)
        if f is None:
            f = np.zeros((R,) * n)
        else:
            f = np.abs(np.asarray(f, dtype=float))
            if f.shape != (R,) * n:
                raise SeqSpaceError(f"level {j} field has shape {f.shape}")
        f = np.where(f < UNDERFLOW_CLAMP, 0.0, f)
        F[j] = f

    if params.family == "F":
        # suffix accumulation of |f_j|^q (or running max for q = inf)
        suffix = {}
        acc = np.zeros((R,) * n)
        for j in reversed(levels):
            acc = np.maximum(acc, F[j]) if np.isinf(q) else acc + F[j] ** q
            suffix[j] = acc.copy()

    best = 0.0
    for jP in levels:
        w = subdiv * (1 << (t.j_max - jP))
        if params.family == "B":
            per_level = []
            for j in levels:
                if j < jP:
                    continue
                if np.isinf(p):
                    per_level.append(_box_reduce(F[j], w, np.max))
                else:
                    per_level.append(
                        (_box_reduce(F[j] ** p, w, np.sum) * node_vol)
                        ** (1.0 / p)
                    )
            stack = np.stack(per_level)
            if np.isinf(q):
                vals = np.max(stack, axis=0)
            else:
                vals = np.sum(stack**q, axis=0) ** (1.0 / q)
        else:
            T = suffix[jP] if np.isinf(q) else suffix[jP] ** (1.0 / q)
            vals = (_box_reduce(T**p, w, np.sum) * node_vol) ** (1.0 / p)
        vflat = vals.ravel()
        cubes = enumerate_cubes(t, level=jP)
        vP = np.array([params.v(P) for P in cubes])
        best = max(best, float(np.max(vflat / vP)))
    return best


# ---------------------------------------------------------------------------
# Sequence norms
# ---------------------------------------------------------------------------

def _node_coords(t: Truncation, subdiv):
    lo = t.k_origin * 2.0 ** (-t.j_min)
    h = 2.0 ** (-t.j_max) / subdiv
    R = t.cells_per_axis() * subdiv
    return lo + (np.arange(R) + 0.5) * h


def _level_fields(tv: CoeffSeq, params: SpaceParams, t: Truncation):
    """Build the unscaled level fields g_j; returns (fields, subdiv)."""
    mode = params.mode
    subdiv = 1
    if mode in ("matrix", "scalar_weight"):
        subdiv = params.quad.G
    n, R = t.n, t.cells_per_axis() * subdiv
    coords = _node_coords(t, subdiv)
    fields = {}
    for Q, z in tv.entries.items():
        if not t.contains(Q):
            raise SeqSpaceError(f"coefficient cube {Q} outside the window")
        j = Q.j
        f = fields.setdefault(j, np.zeros((R,) * n))
        offs, width = t.cell_index(Q)
        sl = tuple(
            slice(o * subdiv, (o + width) * subdiv) for o in offs
        )
        scale = 2.0 ** (j * n / 2.0)  # |Q|^{-1/2}
        if mode == "unweighted":
            f[sl] = np.linalg.norm(z) * scale
        elif mode == "averaging":
            A = params.reducing[Q]
            f[sl] = np.linalg.norm(A @ z.astype(complex)) * scale
        else:
            axes = [coords[s] for s in sl]
            grids = np.meshgrid(*axes, indexing="ij")
            pts = np.stack([g.ravel() for g in grids], axis=-1)
            vals = np.empty(len(pts))
            if mode == "matrix":
                W = params.weight
                for i, x in enumerate(pts):
                    if W.is_singular_at(x):
                        vals[i] = 0.0
                    else:
                        wp = W.power_at(x, 1.0 / params.p)
                        vals[i] = np.linalg.norm(wp.astype(complex) @ z)
            else:  # scalar_weight: fold w^{1/p} into the field
                wv = np.array([params.scalar_w(x) for x in pts], dtype=float)
                vals = np.linalg.norm(z) * wv ** (1.0 / params.p)
            f[sl] = (vals * scale).reshape([s.stop - s.start for s in sl])
    return fields, subdiv


def seq_norm(tv: CoeffSeq, params: SpaceParams, t: Truncation):
    """The full sequence quasi-norm ||{2^{js} g_j}||_{LA^v_{p,q}}."""
    fields, subdiv = _level_fields(tv, params, t)
    scaled = {j: (2.0 ** (j * params.s)) * f for j, f in fields.items()}
    return la_norm(scaled, params, t, subdiv=subdiv)


def finfty_norm(tv: CoeffSeq, s, q, t: Truncation, w=None, w_nodes=32):
    """The f_{infinity,q}-style norm by its exact cube-sum form.

    sup_P { (1/w(P)) sum_{Q <= P} (|Q|^{-s/n-1/2} |t_Q|)^q w(Q) }^{1/q},
    with w(.) the (possibly weighted) measure; q = infinity collapses to
    sup_Q |Q|^{-s/n-1/2} |t_Q| (the b_{infinity,infinity} reading).
    """
    if tv.m != 1:
        raise SeqSpaceError("finfty_norm takes scalar (m=1) sequences")
    n = t.n
    if np.isinf(q):
        best = 0.0
        for Q, z in tv.entries.items():
            best = max(best, 2.0 ** (Q.j * (s + n / 2.0)) * abs(z[0]))
        return best

    from .growth import _cell_average

    def measure(Q):
        if w is None:
            return 2.0 ** (-Q.j * n)
        return _cell_average(w, Q, w_nodes)

    acc = {}
    for Q, z in tv.entries.items():
        if not t.contains(Q):
            raise SeqSpaceError(f"coefficient cube {Q} outside the window")
        contrib = (2.0 ** (Q.j * (s + n / 2.0)) * abs(z[0])) ** q * measure(Q)
        for lvl in range(t.j_min, Q.j + 1):
            P = ancestor(Q, lvl)
            acc[P] = acc.get(P, 0.0) + contrib
    best = 0.0
    for P, total in acc.items():
        best = max(best, (total / measure(P)) ** (1.0 / q))
    return best


def single_point_oracle(Q: CubeId, z, params: SpaceParams, t: Truncation,
                        oracle_nodes=64):
    """Closed-form norm of a one-entry sequence, independent of q and family.

    [max over window P >= Q of 1/v(P)] * 2^{j_Q(s + n/2)}
        * (int_Q |W^{1/p}(x) z|^p dx)^{1/p},
    with the integral evaluated on an independent, denser midpoint grid.
    """
    from .weights import box_nodes

    z = np.atleast_1d(np.asarray(z, dtype=complex))
    n = t.n
    x0, ell, j = cube_geometry(Q)
    sup_inv_v = max(
        1.0 / params.v(ancestor(Q, lvl)) for lvl in range(t.j_min, Q.j + 1)
    )
    if params.mode == "matrix":
        W = params.weight
        pts, wt = box_nodes(x0, x0 + ell, oracle_nodes if n == 1 else 12)
        vals = []
        for x in pts:
            if W.is_singular_at(x):
                continue
            wp = W.power_at(x, 1.0 / params.p)
            vals.append(np.linalg.norm(wp.astype(complex) @ z) ** params.p)
        integ = float(np.sum(vals)) * wt
    elif params.mode == "scalar_weight":
        pts, wt = box_nodes(x0, x0 + ell, oracle_nodes if n == 1 else 12)
        wv = np.array([params.scalar_w(x) for x in pts], dtype=float)
        integ = float(np.sum(wv)) * wt * np.linalg.norm(z) ** params.p
    elif params.mode == "averaging":
        A = params.reducing[Q]
        integ = np.linalg.norm(A @ z.astype(complex)) ** params.p * 2.0 ** (-j * n)
    else:
        integ = np.linalg.norm(z) ** params.p * 2.0 ** (-j * n)
    return sup_inv_v * 2.0 ** (j * (params.s + n / 2.0)) * integ ** (1.0 / params.p)


# ---------------------------------------------------------------------------
# Sequence builders
# ---------------------------------------------------------------------------

def build_single_point(Q: CubeId, z, m=None):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    m = m or z.size
    tv = CoeffSeq(m)
    tv[Q] = z
    return tv


def build_random(t: Truncation, m=1, seed=0, density=0.3, sigma=0.0):
    """Bernoulli(density) support over the window; |t_Q| scales like
    |Q|^sigma with standard-normal components."""
    rng = np.random.default_rng(seed)
    tv = CoeffSeq(m)
    for Q in enumerate_cubes(t):
        if rng.random() >= density:
            continue
        z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        z *= 2.0 ** (-Q.j * t.n * sigma) / np.sqrt(2.0)
        tv[Q] = z
    return tv


def build_besov_counterexample(J, t: Truncation):
    """Levels 0..J, entry |Q|^{1/2} wherever (1+j) divides k_1."""
    if J > t.j_max or t.j_min > 0:
        raise SeqSpaceError("window must cover levels 0..J")
    tv = CoeffSeq(1)
    for j in range(0, J + 1):
        for Q in enumerate_cubes(t, level=j):
            if Q.k[0] % (1 + j) == 0:
                tv[Q] = np.array([2.0 ** (-j * t.n / 2.0)])
    return tv
