"""Almost-diagonal envelopes, admissibility thresholds, majorants,
composition checks, and molecule/wavelet smoothness thresholds.

The envelope entry is

    u_{Q,R} = sep(Q,R)^{-D} * (l(Q)/l(R))^E   if l(Q) <= l(R)
              sep(Q,R)^{-D} * (l(R)/l(Q))^F   otherwise,

the extremal member of the (D,E,F)-almost-diagonal class: boundedness of
the envelope operator implies boundedness of everything it dominates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dyadic import CubeId, Truncation, cube_geometry, enumerate_cubes
from .seqspace import CoeffSeq


class ADError(ValueError):
    pass


@dataclass(frozen=True)
class ADParams:
    D: float
    E: float
    F: float


@dataclass(frozen=True)
class Thresholds:
    """Strict lower bounds for admissible (D, E, F) plus the J constant."""

    J: float
    D_min: float
    E_min: float
    F_min: float
    regime: str
    weighted: bool = False


def ad_entry(Q: CubeId, R: CubeId, p: ADParams):
    if Q.n != R.n:
        raise ADError("cubes live in different dimensions")
    xq, lq, _ = cube_geometry(Q)
    xr, lr, _ = cube_geometry(R)
    sep = 1.0 + float(np.linalg.norm(xq - xr)) / max(lq, lr)
    if lq <= lr:
        ratio = (lq / lr) ** p.E
    else:
        ratio = (lr / lq) ** p.F
    return sep ** (-p.D) * ratio


def _entry_matrix(rows, cols, p: ADParams):
    """Vectorized envelope entries for cube lists (rows x cols)."""
    xr = np.array([cube_geometry(Q)[0] for Q in rows])
    xc = np.array([cube_geometry(R)[0] for R in cols])
    lr = np.array([2.0 ** (-Q.j) for Q in rows])
    lc = np.array([2.0 ** (-R.j) for R in cols])
    dist = np.linalg.norm(xr[:, None, :] - xc[None, :, :], axis=-1)
    lmax = np.maximum(lr[:, None], lc[None, :])
    sep = 1.0 + dist / lmax
    ratio = np.where(
        lr[:, None] <= lc[None, :],
        (lr[:, None] / lc[None, :]) ** p.E,
        (lc[None, :] / lr[:, None]) ** p.F,
    )
    return sep ** (-p.D) * ratio


def ad_apply(U, tv: CoeffSeq, t: Truncation):
    """(Ut)_Q = sum_R u_{Q,R} t_R over the window.

    ``U`` is either ADParams (the extremal envelope) or an explicit
    {(Q, R): value} table.
    """
    out = CoeffSeq(tv.m)
    targets = enumerate_cubes(t)
    support = tv.cubes()
    if not support:
        return out
    vals = np.stack([tv[R] for R in support])
    if isinstance(U, ADParams):
        M = _entry_matrix(targets, support, U)
    else:
        M = np.array([[U.get((Q, R), 0.0) for R in support] for Q in targets])
    res = M @ vals
    for Q, z in zip(targets, res):
        if np.any(z != 0):
            out[Q] = z
    return out


def ad_thresholds(s, p, q, family, delta1, delta2, omega, n=1,
                  weighted: Optional[tuple] = None):
    """Admissibility thresholds for (D, E, F)-almost-diagonal boundedness.

    Unweighted:  J by regime dispatch, then
        D > J + min(omega, n(delta2 - 1/p)_+),
        E > n/2 + s + n(delta2 - 1/p)_+,
        F > J - n/2 - s - n(delta1 - 1/p)_+.
    Weighted (with dimensions (d_lower, d_upper)):
        Delta = [delta2 - 1/p + d_lower/(np)]_+,
        D > J + min(n Delta, omega + d_lower/p) + d_upper/p,
        E > n/2 + s + n Delta,
        F > J - n/2 - s - n(delta1 - 1/p)_+ + d_upper/p.
    """
    family = family.upper()
    if family not in ("B", "F"):
        raise ADError("family must be B or F")
    if delta2 < delta1:
        raise ADError("need delta2 >= delta1")
    if not (0 <= omega <= n * (delta2 - delta1) + 1e-12):
        raise ADError("need omega in [0, n(delta2 - delta1)]")
    inv_p = 0.0 if np.isinf(p) else 1.0 / p
    gamma = min(p, q) if family == "F" else p
    if delta1 > inv_p or (delta1 == inv_p and np.isinf(q)):
        regime, J = "supercritical", float(n)
    elif family == "F" and delta1 == delta2 == inv_p and not np.isinf(q):
        regime, J = "critical", n / min(1.0, q)
    else:
        regime, J = "subcritical", n / min(1.0, gamma)
    pos = lambda x: max(x, 0.0)
    if weighted is None:
        D_min = J + min(omega, n * pos(delta2 - inv_p))
        E_min = n / 2.0 + s + n * pos(delta2 - inv_p)
        F_min = J - n / 2.0 - s - n * pos(delta1 - inv_p)
        return Thresholds(J, D_min, E_min, F_min, regime, weighted=False)
    d_lower, d_upper = weighted
    if not (0 <= d_lower < n) or d_upper < 0:
        raise ADError("need d_lower in [0, n) and d_upper >= 0")
    Delta = pos(delta2 - inv_p + d_lower / (n * p))
    D_min = J + min(n * Delta, omega + d_lower / p) + d_upper / p
    E_min = n / 2.0 + s + n * Delta
    F_min = J - n / 2.0 - s - n * pos(delta1 - inv_p) + d_upper / p
    return Thresholds(J, D_min, E_min, F_min, regime, weighted=True)


def majorant(tv: CoeffSeq, r, lam, t: Truncation):
    """The within-level majorant sequence

        t*_Q = [ sum_{l(R)=l(Q)} |t_R|^r / (1 + l(R)^{-1}|x_Q - x_R|)^{lam r} ]^{1/r}

    (sup modification for r = infinity), indexed on every window cube.
    """
    if not (r > 0 or np.isinf(r)):
        raise ADError("need r > 0")
    out = CoeffSeq(1)
    by_level = {}
    for R, z in tv.entries.items():
        by_level.setdefault(R.j, []).append((R, abs(np.linalg.norm(z))))
    for j, items in by_level.items():
        cubes = enumerate_cubes(t, level=j)
        xr = np.array([cube_geometry(R)[0] for R, _ in items])
        mag = np.array([v for _, v in items])
        xq = np.array([cube_geometry(Q)[0] for Q in cubes])
        ell = 2.0 ** (-j)
        pen = 1.0 + np.linalg.norm(xq[:, None, :] - xr[None, :, :], axis=-1) / ell
        if np.isinf(r):
            vals = np.max(mag[None, :] / pen**lam, axis=1)
        else:
            vals = np.sum(mag[None, :] ** r / pen ** (lam * r), axis=1) ** (1.0 / r)
        for Q, v in zip(cubes, vals):
            if v > 0:
                out[Q] = np.array([v])
    return out


def compose_check(p1: ADParams, p2: ADParams, t: Truncation):
    """Brute-force composition constant over the window.

    With D1 = D2 the composed kernel should be dominated by the envelope
    of (D1, min E, min F); returns (C, claimed) with C the worst ratio
    of sum_P u1_{Q,P} u2_{P,R} to the claimed envelope entry.
    """
    if p1.D != p2.D:
        raise ADError("composition check requires D1 = D2 (pre-normalize)")
    claimed = ADParams(p1.D, min(p1.E, p2.E), min(p1.F, p2.F))
    cubes = enumerate_cubes(t)
    U1 = _entry_matrix(cubes, cubes, p1)
    U2 = _entry_matrix(cubes, cubes, p2)
    Uc = _entry_matrix(cubes, cubes, claimed)
    C = float(np.max((U1 @ U2) / Uc))
    return C, claimed


@dataclass(frozen=True)
class MoleculeThresholds:
    """Strict lower bounds (K, L, M, N) for analysis/synthesis molecules
    and the minimal wavelet smoothness order."""

    analysis: tuple   # (K_low, L_low, M_low, N_low); L is inclusive
    synthesis: tuple
    k_min: int


def molecule_thresholds(th: Thresholds, n=1):
    """Molecule parameter bounds induced by admissibility thresholds.

    Analysis molecules need K > D v (E + n/2), L >= E - n/2, M > D,
    N > F - n/2; synthesis molecules swap the roles of E and F; the
    wavelet smoothness k_min is the least integer exceeding
    max(E - n/2, F - n/2).
    """
    D, E, F = th.D_min, th.E_min, th.F_min
    analysis = (max(D, E + n / 2.0), E - n / 2.0, D, F - n / 2.0)
    synthesis = (max(D, F + n / 2.0), F - n / 2.0, D, E - n / 2.0)
    k_min = int(np.floor(max(E - n / 2.0, F - n / 2.0))) + 1
    return MoleculeThresholds(analysis, synthesis, k_min)
