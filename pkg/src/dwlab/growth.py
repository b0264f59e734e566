"""Growth functions on dyadic cubes.

A growth function v maps cubes to positive reals and is of class
(delta1, delta2; omega) when

    v(Q)/v(R) <= C * sep(Q,R)^omega * (|Q|/|R|)^(delta1 or delta2),

the exponent being delta1 when ell(Q) <= ell(R) and delta2 otherwise,
with sep(Q,R) = 1 + |x_Q - x_R|/(ell(Q) v ell(R)).  Membership is a
statement about all of the (infinite) dyadic lattice, so this module
only reports empirical class constants over finite windows; callers
compare constants across growing windows to detect non-membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .dyadic import CubeId, Truncation, cube_geometry, enumerate_cubes, ancestor

PAIR_CAP = 2_000_000
_SUBSAMPLE_SEED = 0xDAD1C


class GrowthError(ValueError):
    pass


@dataclass(frozen=True)
class GrowthFn:
    """An evaluable growth function with an optional declared class."""

    eval: Callable[[CubeId], float]
    declared_class: Optional[tuple] = None  # (delta1, delta2, omega)
    label: str = "custom"

    def __post_init__(self):
        if self.declared_class is not None:
            d1, d2, om = self.declared_class
            if d2 < d1 or om < 0:
                raise GrowthError(
                    "declared class needs delta2 >= delta1 and omega >= 0"
                )

    def __call__(self, c: CubeId):
        v = float(self.eval(c))
        if not v > 0:
            raise GrowthError(f"growth function nonpositive at {c}: {v}")
        return v


def _cube_volume(c: CubeId):
    return 2.0 ** (-c.j * c.n)


def _cell_average(field, c: CubeId, nodes_per_axis=16):
    """Midpoint-rule integral of a scalar field over a cube."""
    x0, ell, _ = cube_geometry(c)
    g = nodes_per_axis
    ticks = (np.arange(g) + 0.5) / g * ell
    grids = np.meshgrid(*[x0[a] + ticks for a in range(c.n)], indexing="ij")
    pts = np.stack([gr.ravel() for gr in grids], axis=-1)
    vals = np.array([field(p) for p in pts], dtype=float)
    return float(np.mean(vals)) * _cube_volume(c)


def make_growth(kind, **params):
    """Build one of the standard growth-function families.

    kind = "power":  v(Q) = |Q|^tau, tau >= 0; class (tau, tau; 0).
    kind = "weight_power":  v(Q) = [int_Q field]^tau for a positive
        scalar field (e.g. the operator norm of a matrix weight);
        class not closed-form, pass declared_class if known.
    kind = "length":  v(Q) = g(ell(Q)) for g with g(t) t^{-n/p}
        nonincreasing and g(t) nondecreasing; class (0, 1/p; 0).
    kind = "piecewise_power":  v(Q) = |Q|^beta if ell(Q) >= 1 else
        |Q|^alpha, alpha <= beta; class (alpha, beta; 0).
    """
    if kind == "power":
        tau = float(params["tau"])
        if tau < 0:
            raise GrowthError("power growth needs tau >= 0")
        return GrowthFn(
            eval=lambda c, t=tau: _cube_volume(c) ** t,
            declared_class=(tau, tau, 0.0),
            label=f"power({tau})",
        )
    if kind == "weight_power":
        field = params["field"]
        tau = float(params["tau"])
        nodes = int(params.get("nodes_per_axis", 16))
        declared = params.get("declared_class")
        cache = {}

        def ev(c, field=field, tau=tau, nodes=nodes, cache=cache):
            if c not in cache:
                cache[c] = _cell_average(field, c, nodes) ** tau
            return cache[c]

        return GrowthFn(eval=ev, declared_class=declared,
                        label=f"weight_power(tau={tau})")
    if kind == "length":
        g = params["g"]
        p = float(params["p"])
        return GrowthFn(
            eval=lambda c, g=g: float(g(2.0 ** (-c.j))),
            declared_class=(0.0, 1.0 / p, 0.0),
            label="length",
        )
    if kind == "piecewise_power":
        alpha = float(params["alpha"])
        beta = float(params["beta"])
        if alpha > beta:
            raise GrowthError("piecewise_power needs alpha <= beta")

        def ev(c, a=alpha, b=beta):
            vol = _cube_volume(c)
            return vol ** (b if c.j <= 0 else a)

        return GrowthFn(eval=ev, declared_class=(alpha, beta, 0.0),
                        label=f"piecewise_power({alpha},{beta})")
    raise GrowthError(f"unknown growth kind: {kind}")


def _pair_indices(count, rng_seed=_SUBSAMPLE_SEED):
    """All-pairs index arrays, uniformly subsampled above PAIR_CAP."""
    total = count * count
    if total <= PAIR_CAP:
        ii, jj = np.meshgrid(np.arange(count), np.arange(count), indexing="ij")
        return ii.ravel(), jj.ravel()
    rng = np.random.default_rng(rng_seed)
    flat = rng.integers(0, total, size=PAIR_CAP)
    return flat // count, flat % count


def class_constant(v: GrowthFn, delta1, delta2, omega, t: Truncation):
    """Worst ratio of v(Q)/v(R) to the class bound over window pairs.

    Finite by construction on a finite window; growth of this constant
    across nested windows signals non-membership.
    """
    if delta2 < delta1 or omega < 0:
        raise GrowthError("need delta2 >= delta1 and omega >= 0")
    cubes = enumerate_cubes(t)
    if not cubes:
        return 1.0
    vals = np.array([v(c) for c in cubes])
    js = np.array([c.j for c in cubes])
    xs = np.array([cube_geometry(c)[0] for c in cubes])
    ells = 2.0 ** (-js.astype(float))
    ii, jj = _pair_indices(len(cubes))
    sep = 1.0 + np.linalg.norm(xs[ii] - xs[jj], axis=-1) / np.maximum(
        ells[ii], ells[jj]
    )
    vol_ratio = 2.0 ** (-(js[ii] - js[jj]) * float(t.n))  # |Q_i| / |Q_j|
    expo = np.where(ells[ii] <= ells[jj], delta1, delta2)
    bound = sep**omega * vol_ratio**expo
    return float(np.max(vals[ii] / vals[jj] / bound))


def is_almost_increasing(v: GrowthFn, t: Truncation, cap=10.0):
    """(bool, worst constant) for v(Q) <= C v(P) over nested pairs Q <= P."""
    worst = 0.0
    for Q in enumerate_cubes(t):
        vq = v(Q)
        for lvl in range(t.j_min, Q.j + 1):
            worst = max(worst, vq / v(ancestor(Q, lvl)))
    if worst == 0.0:
        worst = 1.0
    return worst <= cap, worst
