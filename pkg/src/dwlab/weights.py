"""Matrix weights and their cube-average statistics.

A matrix weight is an a.e. positive-definite Hermitian-matrix-valued
function W(x), given here as an analytic callback evaluated at midpoint
quadrature nodes.  The module provides fractional matrix powers (cyclic
Jacobi eigensolver, dependency-free), the exp-log double-average
characteristic, doubling exponents, eigenvalue spread, and the
lower/upper dimension estimates used by the weighted almost-diagonal
thresholds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .dyadic import CubeId, Truncation, cube_geometry, enumerate_cubes

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 64
HERMITIAN_TOL = 1e-12


class WeightError(ValueError):
    pass


class NotPositiveDefinite(WeightError):
    pass


# ---------------------------------------------------------------------------
# Cyclic Jacobi eigendecomposition (real symmetric core + complex wrapper)
# ---------------------------------------------------------------------------

def _jacobi_real(A):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Returns (eigenvalues, eigenvectors-as-columns).  Rotates until the
    off-diagonal mass drops below JACOBI_TOL (relative to the matrix
    scale) or the sweep budget runs out.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    scale = max(np.max(np.abs(A)), 1.0)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = 0.0
        for p in range(n):
            off += np.sum(np.abs(A[p, p + 1:]))
        if off <= JACOBI_TOL * scale:
            break
        for p in range(n):
            for q in range(p + 1, n):
                if abs(A[p, q]) <= JACOBI_TOL * scale * 1e-3:
                    continue
                phi = 0.5 * np.arctan2(2.0 * A[p, q], A[q, q] - A[p, p])
                c, s = np.cos(phi), np.sin(phi)
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                A = rot.T @ A @ rot
                V = V @ rot
    return np.diag(A).copy(), V


def _realify(H):
    """Complex Hermitian m x m -> real symmetric 2m x 2m."""
    re, im = H.real, H.imag
    return np.block([[re, -im], [im, re]])


def _derealify(S, m):
    re = 0.5 * (S[:m, :m] + S[m:, m:])
    im = 0.5 * (S[m:, :m] - S[:m, m:])
    return re + 1j * im


def hermitian_eig(H):
    """Eigenvalues (ascending) of a Hermitian matrix via cyclic Jacobi."""
    H = np.asarray(H)
    if np.max(np.abs(H - H.conj().T)) > HERMITIAN_TOL * max(np.max(np.abs(H)), 1.0):
        raise WeightError("matrix is not Hermitian within tolerance")
    if np.iscomplexobj(H) and np.max(np.abs(H.imag)) > 0:
        lam, _ = _jacobi_real(_realify(H))
        lam = np.sort(lam)[::2]  # realification doubles each eigenvalue
        return np.sort(lam)
    lam, _ = _jacobi_real(H.real)
    return np.sort(lam)


def matrix_power(M, alpha):
    """M^alpha for Hermitian positive-definite M via Jacobi eigensystem."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise WeightError("matrix_power needs a square matrix")
    scale = max(np.max(np.abs(M)), 1.0)
    if np.max(np.abs(M - M.conj().T)) > HERMITIAN_TOL * scale:
        raise WeightError("matrix is not Hermitian within tolerance")
    m = M.shape[0]
    # Already-diagonal fast path (covers the scalar case and diagonal presets).
    if np.max(np.abs(M - np.diag(np.diag(M)))) <= JACOBI_TOL * scale:
        d = np.diag(M).real
        if np.min(d) <= 0:
            raise NotPositiveDefinite(f"diagonal entry {np.min(d)} <= 0")
        return np.diag(d**alpha).astype(M.dtype)
    if np.iscomplexobj(M) and np.max(np.abs(M.imag)) > JACOBI_TOL * scale:
        lam, V = _jacobi_real(_realify(M))
        if np.min(lam) <= 0:
            raise NotPositiveDefinite(f"eigenvalue {np.min(lam)} <= 0")
        S = V @ np.diag(lam**alpha) @ V.T
        return _derealify(S, m)
    lam, V = _jacobi_real(M.real)
    if np.min(lam) <= 0:
        raise NotPositiveDefinite(f"eigenvalue {np.min(lam)} <= 0")
    out = V @ np.diag(lam**alpha) @ V.T
    return out.astype(M.dtype) if np.iscomplexobj(M) else out


def op_norm(A):
    """Spectral norm; batched over leading axes."""
    A = np.asarray(A)
    if A.ndim == 2:
        return float(np.linalg.svd(A, compute_uv=False)[0])
    return np.linalg.svd(A, compute_uv=False)[..., 0]


# ---------------------------------------------------------------------------
# Matrix weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Midpoint tensor quadrature: G nodes per axis per finest cell."""

    nodes_per_axis_per_finest_cell: int = 3

    def __post_init__(self):
        if self.nodes_per_axis_per_finest_cell < 1:
            raise WeightError("quadrature needs G >= 1")

    @property
    def G(self):
        return self.nodes_per_axis_per_finest_cell


class MatrixWeight:
    """An m x m Hermitian-PD-valued function of x with optional singular set."""

    def __init__(self, m, eval_fn, singular_set=(), label="custom"):
        self.m = int(m)
        self._eval = eval_fn
        self.singular_set = [np.atleast_1d(np.asarray(s, dtype=float))
                             for s in singular_set]
        self.label = label
        self._power_cache = {}

    def __call__(self, x):
        return np.asarray(self._eval(np.atleast_1d(np.asarray(x, dtype=float))))

    def is_singular_at(self, x, tol=1e-14):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return any(np.linalg.norm(x - s) < tol for s in self.singular_set)

    def power_at(self, x, alpha):
        """W(x)^alpha, cached per (point, exponent)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        key = (tuple(np.round(x, 14)), alpha)
        got = self._power_cache.get(key)
        if got is None:
            got = matrix_power(self(x), alpha)
            self._power_cache[key] = got
        return got


def identity_weight(m=1):
    return MatrixWeight(m, lambda x: np.eye(m), label=f"identity({m})")


def constant_weight(M):
    M = np.asarray(M)
    hermitian_eig(M)  # validates Hermitian-ness
    return MatrixWeight(M.shape[0], lambda x: M, label="constant")


def power_weight(alpha, n=1):
    """Scalar |x|^alpha; A_1-valid for alpha in (-n, 0], usable for alpha > -n."""
    if alpha <= -n:
        raise WeightError(f"|x|^{alpha} is not locally integrable in R^{n}")
    return MatrixWeight(
        1,
        lambda x: np.array([[np.linalg.norm(x) ** alpha]]),
        singular_set=[np.zeros(n)] if alpha != 0 else [],
        label=f"|x|^{alpha}",
    )


def diag_power_weight(alpha, beta, n=1):
    """The 2x2 example diag(|x|^alpha, |x|^beta), -n < alpha <= beta."""
    if alpha <= -n or alpha > beta:
        raise WeightError("need -n < alpha <= beta")

    def ev(x):
        r = np.linalg.norm(x)
        return np.diag([r**alpha, r**beta])

    sing = [np.zeros(n)] if (alpha != 0 or beta != 0) else []
    return MatrixWeight(2, ev, singular_set=sing,
                        label=f"diag(|x|^{alpha},|x|^{beta})")


# ---------------------------------------------------------------------------
# Quadrature over cubes and boxes
# ---------------------------------------------------------------------------

def cube_nodes(Q: CubeId, t: Truncation, spec: QuadratureSpec):
    """Midpoint nodes over Q: finest-level cells, G subnodes per axis each.

    Returns (points [M, n], uniform node weight) with weights summing to |Q|.
    """
    x0, ell, _ = cube_geometry(Q)
    cells = 1 << (t.j_max - Q.j)
    g = cells * spec.G
    ticks = (np.arange(g) + 0.5) / g * ell
    grids = np.meshgrid(*[x0[a] + ticks for a in range(Q.n)], indexing="ij")
    pts = np.stack([gr.ravel() for gr in grids], axis=-1)
    wt = (ell / g) ** Q.n
    return pts, wt


def box_nodes(lo, hi, g):
    """Midpoint tensor nodes over the box [lo, hi); g nodes per axis."""
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    n = lo.size
    axes = [(lo[a] + (np.arange(g) + 0.5) / g * (hi[a] - lo[a])) for a in range(n)]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([gr.ravel() for gr in grids], axis=-1)
    wt = float(np.prod((hi - lo) / g))
    return pts, wt


def _filter_singular(W, pts):
    keep = [i for i, p in enumerate(pts) if not W.is_singular_at(p)]
    if not keep:
        raise WeightError("all quadrature nodes hit the singular set")
    return pts[keep]


def wp_stack(W: MatrixWeight, p, pts):
    """Stack of W^{1/p}(x) over quadrature points (singular nodes dropped)."""
    pts = _filter_singular(W, pts)
    return pts, np.stack([W.power_at(x, 1.0 / p) for x in pts])


def avg_wp_z(W, p, pts, z):
    """(avg over pts of |W^{1/p}(x) z|^p)^{1/p} by equal-weight midpoint rule."""
    _, stack = wp_stack(W, p, pts)
    vals = np.linalg.norm(stack.astype(complex) @ np.asarray(z, dtype=complex),
                          axis=-1)
    return float(np.mean(vals**p) ** (1.0 / p))


def _subsample(pts, cap, seed=7):
    if len(pts) <= cap:
        return pts
    idx = np.linspace(0, len(pts) - 1, cap).astype(int)
    return pts[idx]


# ---------------------------------------------------------------------------
# Weight statistics
# ---------------------------------------------------------------------------

def _pairwise_norm_pp(stack_x, stack_y_inv, p):
    """Matrix of ||W^{1/p}(x) W^{-1/p}(y)||^p over node pairs (y rows)."""
    prods = np.einsum("xab,ybc->yxac", stack_x, stack_y_inv)
    return op_norm(prods) ** p


def apinf_characteristic(W: MatrixWeight, p, t: Truncation, spec=None,
                         node_cap=64):
    """Window max of exp( avg_y log( avg_x ||W^{1/p}(x) W^{-1/p}(y)||^p ) )."""
    if p <= 0:
        raise WeightError("p must be positive")
    spec = spec or QuadratureSpec()
    best = 0.0
    for Q in enumerate_cubes(t):
        pts, _ = cube_nodes(Q, t, spec)
        pts = _subsample(_filter_singular(W, pts), node_cap)
        stack = np.stack([W.power_at(x, 1.0 / p) for x in pts])
        stack_inv = np.stack([W.power_at(x, -1.0 / p) for x in pts])
        inner = np.mean(_pairwise_norm_pp(stack, stack_inv, p), axis=1)
        best = max(best, float(np.exp(np.mean(np.log(inner)))))
    return best


def _window_hull(t: Truncation):
    lo = t.k_origin * 2.0 ** (-t.j_min)
    hi = (t.k_origin + t.root_extent) * 2.0 ** (-t.j_min)
    return lo, hi


def _dilated_box(Q: CubeId, lam):
    """The concentric dilate lam*Q as (lo, hi) corner arrays."""
    x0, ell, _ = cube_geometry(Q)
    c = x0 + 0.5 * ell
    half = 0.5 * lam * ell
    return c - half, c + half


def sphere_directions(m, count, seed=0):
    """Quasi-uniform unit directions: Fibonacci spiral for m in {2,3},
    normalized Gaussian otherwise."""
    if m == 1:
        return np.ones((1, 1))
    if m == 2:
        th = np.pi * (3.0 - np.sqrt(5.0)) * np.arange(count)
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    if m == 3:
        i = np.arange(count) + 0.5
        phi = np.arccos(1.0 - 2.0 * i / count)
        th = np.pi * (1.0 + np.sqrt(5.0)) * i
        return np.stack(
            [np.sin(phi) * np.cos(th), np.sin(phi) * np.sin(th), np.cos(phi)],
            axis=-1,
        )
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, m))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def _fits_window(t, lo, hi):
    wlo, whi = _window_hull(t)
    return np.all(lo >= wlo - 1e-12) and np.all(hi <= whi + 1e-12)


def doubling_exponent(W: MatrixWeight, p, t: Truncation, spec=None,
                      directions=20, g=None):
    """log2 of the worst ratio int_{2Q}|W^{1/p}z|^p / int_Q over window cubes."""
    spec = spec or QuadratureSpec()
    g = g or (48 if t.n == 1 else 10)
    dirs = sphere_directions(W.m, directions)
    best = 0.0
    found = False
    for Q in enumerate_cubes(t):
        lo2, hi2 = _dilated_box(Q, 2.0)
        if not _fits_window(t, lo2, hi2):
            continue
        found = True
        lo1, hi1 = _dilated_box(Q, 1.0)
        for (lo, hi, sgn) in ((lo1, hi1, -1), (lo2, hi2, +1)):
            pts, wt = box_nodes(lo, hi, g)
            pts, stack = wp_stack(W, p, pts)
            vals = np.linalg.norm(
                np.einsum("xab,db->xda", stack, dirs.astype(stack.dtype)),
                axis=-1,
            ) ** p
            integ = np.sum(vals, axis=0) * wt
            if sgn < 0:
                denom = integ
            else:
                best = max(best, float(np.max(integ / denom)))
    if not found:
        raise WeightError("window too small to double any cube")
    return float(np.log2(best))


def eigen_spread(W: MatrixWeight, sample_points):
    """(sup over points of lambda_max/lambda_min, per-point eigenvalue table)."""
    rows = []
    for x in sample_points:
        if W.is_singular_at(x):
            continue
        lam = hermitian_eig(W(x))
        rows.append((np.asarray(x, dtype=float), float(lam[0]), float(lam[-1])))
    if not rows:
        raise WeightError("all sample points were singular")
    sup = max(hi / lo for _, lo, hi in rows)
    return float(sup), rows


def _dilation_value(W, p, Q_box, lamQ_box, g, inner_over_dilate):
    """exp-log double average with inner x-average over one box and outer
    y-average over the other (the two A_{p,infty}-dimension quantities)."""
    inner_box = lamQ_box if inner_over_dilate else Q_box
    outer_box = Q_box if inner_over_dilate else lamQ_box
    xin, _ = box_nodes(*inner_box, g)
    yout, _ = box_nodes(*outer_box, g)
    xin = _filter_singular(W, xin)
    yout = _filter_singular(W, yout)
    stack_x = np.stack([W.power_at(x, 1.0 / p) for x in xin])
    stack_yinv = np.stack([W.power_at(y, -1.0 / p) for y in yout])
    inner = np.mean(_pairwise_norm_pp(stack_x, stack_yinv, p), axis=1)
    return float(np.exp(np.mean(np.log(inner))))


def estimate_dimensions(W: MatrixWeight, p, t: Truncation, spec=None,
                        lams=(1.0, 2.0, 4.0, 8.0), g=None, cube_cap=12):
    """(d_lower, d_upper) by log-log slope fit of the dilation averages.

    For each sampled cube Q and dilation factor lam the two exp-log
    quantities are evaluated on midpoint grids; d is the largest fitted
    slope of log(value) against log(lam), floored at 0.
    """
    g = g or (40 if t.n == 1 else 8)
    cubes = [Q for Q in enumerate_cubes(t)
             if _fits_window(t, *_dilated_box(Q, max(lams)))]
    if not cubes:
        raise WeightError("no window cube admits the requested dilations")
    if len(cubes) > cube_cap:
        idx = np.linspace(0, len(cubes) - 1, cube_cap).astype(int)
        cubes = [cubes[i] for i in idx]
    loglam = np.log(np.asarray(lams))
    d_low, d_up = 0.0, 0.0
    for Q in cubes:
        qbox = _dilated_box(Q, 1.0)
        vals_low, vals_up = [], []
        for lam in lams:
            lbox = _dilated_box(Q, lam)
            vals_low.append(_dilation_value(W, p, qbox, lbox, g, False))
            vals_up.append(_dilation_value(W, p, qbox, lbox, g, True))
        for vals, acc in ((vals_low, "low"), (vals_up, "up")):
            slope = np.polyfit(loglam, np.log(np.asarray(vals)), 1)[0]
            if acc == "low":
                d_low = max(d_low, float(slope))
            else:
                d_up = max(d_up, float(slope))
    return max(d_low, 0.0), max(d_up, 0.0)
