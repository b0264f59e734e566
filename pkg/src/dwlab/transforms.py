"""Function-level front ends on the periodic unit torus.

A GridFunction holds N = 2^J samples per axis.  The band-limited
transform uses per-level frequency multipliers supported in single
dyadic octaves, chosen so that level-j coefficients sampled on the 2^j
cube lattice are alias-free and the analysis/synthesis round trip is
exact (to roundoff) on the covered band.  The wavelet transform is the
standard periodic orthonormal Daubechies filter bank with embedded
machine-precision filter constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .dyadic import CubeId, Truncation, cube_geometry
from .seqspace import CoeffSeq


class TransformError(ValueError):
    pass


@dataclass
class GridFunction:
    """Samples of a (vector-valued) function on the periodic unit torus."""

    n: int
    N: int
    values: np.ndarray  # shape (N,)*n for m=1, (N,)*n + (m,) otherwise
    m: int = 1

    def __post_init__(self):
        if self.n not in (1, 2):
            raise TransformError("only n in {1, 2} is supported")
        if self.N & (self.N - 1):
            raise TransformError("N must be a power of two")
        self.values = np.asarray(self.values, dtype=complex)
        want = (self.N,) * self.n if self.m == 1 else (self.N,) * self.n + (self.m,)
        if self.values.shape != want:
            raise TransformError(f"values shape {self.values.shape} != {want}")

    @property
    def J(self):
        return int(np.log2(self.N))


# ---------------------------------------------------------------------------
# Littlewood-Paley windows (n = 1, alias-free single-octave profiles)
# ---------------------------------------------------------------------------

def _profile_up(tt):
    """Smooth ramp with support (1/2, 1]:  sin^2((pi/2) log2(2t))."""
    out = np.zeros_like(tt)
    mask = (tt > 0.5) & (tt <= 1.0)
    out[mask] = np.sin(0.5 * np.pi * np.log2(2.0 * tt[mask])) ** 2
    return out


def _profile_down(tt):
    """Smooth ramp with support [1/2, 1):  cos^2((pi/2) log2(2t))."""
    out = np.zeros_like(tt)
    mask = (tt >= 0.5) & (tt < 1.0)
    out[mask] = np.cos(0.5 * np.pi * np.log2(2.0 * tt[mask])) ** 2
    return out


@dataclass
class LPWindow:
    """Per-level multipliers phi_hat[j], psi_hat[j] on the DFT lattice.

    Level j is supported on the single octave
    {xi : 2^{j-1} < xi <= 2^j} u {xi : -2^j < xi <= -2^{j-1}},
    a complete residue system modulo 2^j, so sampling the level-j band
    at 2^j points loses nothing.  psi_hat = phi_hat / sum_i phi_hat_i^2
    gives the exact partition on the covered band.
    """

    N: int
    J: int
    phi_hat: dict = dc_field(default_factory=dict)
    psi_hat: dict = dc_field(default_factory=dict)
    covered: np.ndarray = None

    @property
    def levels(self):
        return list(range(1, self.J))


def build_lp_window(N, J=None):
    J = J or int(np.log2(N))
    if 2**J != N:
        raise TransformError("need N = 2^J")
    if J < 3:
        raise TransformError("need J >= 3")
    xi = np.fft.fftfreq(N, d=1.0 / N)  # integer frequencies
    w = LPWindow(N=N, J=J)
    total = np.zeros(N)
    for j in range(1, J):
        ph = np.where(
            xi > 0,
            _profile_up(np.abs(xi) / 2.0**j),
            _profile_down(np.abs(xi) / 2.0**j),
        )
        ph[xi == 0] = 0.0
        w.phi_hat[j] = ph
        total += ph**2
    w.covered = total > 1e-14
    for j in range(1, J):
        psi = np.zeros(N)
        psi[w.covered] = w.phi_hat[j][w.covered] / total[w.covered]
        w.psi_hat[j] = psi
    return w


def band_project(f: GridFunction, w: LPWindow):
    """Project onto the covered frequency band (the caller's job before
    asking for an exact round trip)."""
    fhat = np.fft.fft(f.values, axis=0)
    fhat[~w.covered] = 0.0
    return GridFunction(f.n, f.N, np.fft.ifft(fhat, axis=0), m=f.m)


def phi_analyze(f: GridFunction, w: LPWindow):
    """Coefficients <f, phi_Q> = |Q|^{1/2} (tilde-phi_j * f)(x_Q)."""
    if f.n != 1:
        raise TransformError("the band-limited transform is 1-d only")
    tv = CoeffSeq(f.m)
    fhat = np.fft.fft(f.values, axis=0)
    for j in w.levels:
        conv = np.fft.ifft(np.conj(w.phi_hat[j])[:, None] * fhat
                           if f.m > 1 else np.conj(w.phi_hat[j]) * fhat,
                           axis=0)
        stride = f.N >> j
        samples = conv[::stride]
        scale = 2.0 ** (-j / 2.0)
        for k in range(1 << j):
            z = np.atleast_1d(samples[k]) * scale
            if np.any(np.abs(z) > 0):
                tv[CubeId(j, (k,))] = z
    return tv


def phi_synthesize(tv: CoeffSeq, w: LPWindow, m=1):
    """sum_Q t_Q psi_Q via per-level DFTs of the coefficient arrays."""
    N = w.N
    xi = np.fft.fftfreq(N, d=1.0 / N).astype(int)
    fhat = np.zeros((N, m), dtype=complex)
    by_level = {}
    for Q, z in tv.entries.items():
        if Q.n != 1:
            raise TransformError("the band-limited transform is 1-d only")
        if Q.j not in w.phi_hat:
            raise TransformError(f"coefficient level {Q.j} outside the window")
        by_level.setdefault(Q.j, {})[Q.k[0]] = z
    for j, kz in by_level.items():
        arr = np.zeros((1 << j, m), dtype=complex)
        for k, z in kz.items():
            arr[k % (1 << j)] = z
        A = np.fft.fft(arr, axis=0)  # A[r] = sum_k t_k e^{-2pi i r k / 2^j}
        res = xi % (1 << j)
        fhat += (2.0 ** (-j / 2.0)) * w.psi_hat[j][:, None] * A[res]
    vals = np.fft.ifft(fhat, axis=0) * N
    if m == 1:
        vals = vals[:, 0]
    return GridFunction(1, N, vals, m=m)


def phi_transform(f_or_tv, w: LPWindow, direction="analyze", m=1):
    if direction == "analyze":
        return phi_analyze(f_or_tv, w)
    if direction == "synthesize":
        return phi_synthesize(f_or_tv, w, m=m)
    raise TransformError(f"unknown direction: {direction}")


# ---------------------------------------------------------------------------
# Periodic orthonormal Daubechies wavelets
# ---------------------------------------------------------------------------

# Low-pass filters (sum = sqrt(2)), generated by spectral factorization of
# the Daubechies half-band polynomial and polished to machine precision.
DB_FILTERS = {
    2: (4.82962913144534156e-01, 8.36516303737807942e-01,
        2.24143868042013389e-01, -1.29409522551260370e-01),
    3: (3.32670552950082632e-01, 8.06891509311092547e-01,
        4.59877502118491543e-01, -1.35011020010254584e-01,
        -8.54412738820266582e-02, 3.52262918857095333e-02),
    4: (2.30377813308896506e-01, 7.14846570552915672e-01,
        6.30880767929858921e-01, -2.79837694168598543e-02,
        -1.87034811719093086e-01, 3.08413818355607640e-02,
        3.28830116668851966e-02, -1.05974017850690317e-02),
    6: (1.11540743350109467e-01, 4.94623890398453059e-01,
        7.51133908021095364e-01, 3.15250351709197629e-01,
        -2.26264693965439828e-01, -1.29766867567261940e-01,
        9.75016055873230425e-02, 2.75228655303057269e-02,
        -3.15820393174860298e-02, 5.53842201161496126e-04,
        4.77725751094551076e-03, -1.07730108530847959e-03),
    8: (5.44158422431040081e-02, 3.12871590914299946e-01,
        6.75630736297289758e-01, 5.85354683654206731e-01,
        -1.58291052563493059e-02, -2.84015542961546907e-01,
        4.72484573913282795e-04, 1.28747426620478472e-01,
        -1.73693010018075474e-02, -4.40882539307947546e-02,
        1.39810279173982824e-02, 8.74609404740577662e-03,
        -4.87035299345157414e-03, -3.91740373376947050e-04,
        6.75449406450569331e-04, -1.17476784124769535e-04),
}

_checked_filters = set()


def _get_filters(k):
    if k not in DB_FILTERS:
        raise TransformError(f"no DB-{k} filter; have {sorted(DB_FILTERS)}")
    h = np.array(DB_FILTERS[k])
    g = ((-1.0) ** np.arange(h.size)) * h[::-1]
    if k not in _checked_filters:
        # orthonormality self-test: <h, shift_2m h> = delta_m, sum h = sqrt 2
        for shift in range(0, h.size, 2):
            dot = float(np.dot(h[: h.size - shift], h[shift:]))
            want = 1.0 if shift == 0 else 0.0
            if abs(dot - want) > 1e-14:
                raise TransformError(f"DB-{k} filter failed self-test")
        if abs(np.sum(h) - np.sqrt(2.0)) > 1e-13:
            raise TransformError(f"DB-{k} filter sum != sqrt(2)")
        _checked_filters.add(k)
    return h, g


def _dwt_step(a, h, g, axis=0):
    """One periodic analysis step along an axis: returns (approx, detail)."""
    a = np.moveaxis(a, axis, 0)
    lo = np.zeros_like(a[::2])
    hi = np.zeros_like(a[::2])
    for i in range(h.size):
        rolled = np.roll(a, -i, axis=0)[::2]
        lo += h[i] * rolled
        hi += g[i] * rolled
    return np.moveaxis(lo, 0, axis), np.moveaxis(hi, 0, axis)


def _idwt_step(lo, hi, h, g, axis=0):
    """Adjoint of _dwt_step (exact inverse for orthonormal filters)."""
    lo = np.moveaxis(lo, axis, 0)
    hi = np.moveaxis(hi, axis, 0)
    N = 2 * lo.shape[0]
    out = np.zeros((N,) + lo.shape[1:], dtype=complex)
    up_lo = np.zeros_like(out)
    up_hi = np.zeros_like(out)
    up_lo[::2] = lo
    up_hi[::2] = hi
    for i in range(h.size):
        out += h[i] * np.roll(up_lo, i, axis=0)
        out += g[i] * np.roll(up_hi, i, axis=0)
    return np.moveaxis(out, 0, axis)


@dataclass
class WaveletCoeffs:
    """Periodic DWT output: approx block plus per-level detail blocks.

    Details are keyed by dyadic level j (the block has 2^j entries per
    axis); in 2-d each level carries the three orientation blocks
    ('h', 'v', 'd').  to_coeffseq() reindexes details by CubeId with
    L^2 normalization (coefficients scaled by N^{-n/2} so that the sum
    of squares matches the grid-measure integral of |f|^2).
    """

    n: int
    N: int
    filter_k: int
    approx: np.ndarray
    details: dict

    def to_coeffseq(self):
        scale = self.N ** (-self.n / 2.0)
        if self.n == 1:
            tv = CoeffSeq(1)
            for j, d in self.details.items():
                for k, v in enumerate(d):
                    tv[CubeId(j, (k,))] = np.array([v * scale])
            return tv
        tv = CoeffSeq(3)
        for j, blocks in self.details.items():
            B = 1 << j
            for k0 in range(B):
                for k1 in range(B):
                    z = np.array([blocks["h"][k0, k1], blocks["v"][k0, k1],
                                  blocks["d"][k0, k1]]) * scale
                    tv[CubeId(j, (k0, k1))] = z
        return tv

    def energy(self):
        tot = float(np.sum(np.abs(self.approx) ** 2))
        for d in self.details.values():
            if self.n == 1:
                tot += float(np.sum(np.abs(d) ** 2))
            else:
                tot += sum(float(np.sum(np.abs(b) ** 2)) for b in d.values())
        return tot


def dwt_analyze(f: GridFunction, k=4, levels=None):
    if f.m != 1:
        raise TransformError("dwt handles one component at a time")
    h, g = _get_filters(k)
    if h.size > f.N:
        raise TransformError("filter longer than the signal")
    J = f.J
    levels = levels or J
    a = f.values
    details = {}
    for step in range(1, levels + 1):
        if a.shape[0] < h.size or a.shape[0] < 2:
            levels = step - 1
            break
        j = J - step
        if f.n == 1:
            a, d = _dwt_step(a, h, g)
            details[j] = d
        else:
            lo0, hi0 = _dwt_step(a, h, g, axis=0)
            ll, lh = _dwt_step(lo0, h, g, axis=1)
            hl, hh = _dwt_step(hi0, h, g, axis=1)
            a = ll
            details[j] = {"h": lh, "v": hl, "d": hh}
    return WaveletCoeffs(n=f.n, N=f.N, filter_k=k, approx=a, details=details)


def dwt_synthesize(c: WaveletCoeffs):
    h, g = _get_filters(c.filter_k)
    a = c.approx
    for j in sorted(c.details):
        if c.n == 1:
            a = _idwt_step(a, c.details[j], h, g)
        else:
            blocks = c.details[j]
            lo0 = _idwt_step(a, blocks["h"], h, g, axis=1)
            hi0 = _idwt_step(blocks["v"], blocks["d"], h, g, axis=1)
            a = _idwt_step(lo0, hi0, h, g, axis=0)
    return GridFunction(c.n, c.N, a, m=1)


def dwt(f_or_coeffs, filter_k=4, direction="analyze", levels=None):
    if direction == "analyze":
        return dwt_analyze(f_or_coeffs, k=filter_k, levels=levels)
    if direction == "synthesize":
        return dwt_synthesize(f_or_coeffs)
    raise TransformError(f"unknown direction: {direction}")


def wavelet_basis_function(c_template: WaveletCoeffs, j, k, orientation=None):
    """The discrete wavelet theta_Q as a grid function (unit L^2 norm
    with respect to the grid measure)."""
    c = WaveletCoeffs(
        n=c_template.n, N=c_template.N, filter_k=c_template.filter_k,
        approx=np.zeros_like(c_template.approx),
        details={
            jj: (np.zeros_like(d) if c_template.n == 1
                 else {o: np.zeros_like(b) for o, b in d.items()})
            for jj, d in c_template.details.items()
        },
    )
    if c.n == 1:
        c.details[j][k[0]] = 1.0
    else:
        c.details[j][orientation][k] = 1.0
    gfun = dwt_synthesize(c)
    gfun.values = gfun.values * c.N ** (c.n / 2.0)  # grid-measure unit norm
    return gfun


# ---------------------------------------------------------------------------
# Peetre maximal and square functions
# ---------------------------------------------------------------------------

def _torus_dist(N, n):
    """Periodic distances between all grid-point pairs (1-d axis table)."""
    idx = np.arange(N)
    diff = np.abs(idx[:, None] - idx[None, :])
    return np.minimum(diff, N - diff) / N


def _weighted_mags(fvals, Wp_stack):
    """|W^{1/p}(x) f(y)| for all (x, y): returns (X, Y) array."""
    # fvals: (Y, m); Wp_stack: (X, m, m)
    prod = np.einsum("xab,yb->xya", Wp_stack, fvals)
    return np.linalg.norm(prod, axis=-1)


def _point_matrices(mode, pts, j, W=None, p=None, fam=None, t=None):
    if mode == "matrix":
        return np.stack([W.power_at(x, 1.0 / p) for x in pts])
    # averaging: A_Q of the level-j cube containing x
    from .reducing import cube_containing

    mats = []
    for x in pts:
        Q = cube_containing(x, j, t)
        mats.append(fam[Q])
    return np.stack(mats).astype(complex)


def peetre_maximal(fj, eta, mode="matrix", W=None, p=None, fam=None,
                   t=None, N=None):
    """sup_y |M(x) f_j(y)| / (1 + 2^j d(x, y))^eta on the periodic grid.

    ``fj`` maps level j to grid values (N,) or (N, m); returns the same
    structure with scalar fields.  1-d only (brute-force sup).
    """
    if eta <= 0:
        raise TransformError("eta must be positive")
    out = {}
    for j, vals in fj.items():
        vals = np.asarray(vals, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        Ng = vals.shape[0]
        pts = (np.arange(Ng) + 0.5) / Ng
        dist = _torus_dist(Ng, 1)
        pen = (1.0 + 2.0**j * dist) ** eta
        M = _point_matrices(mode, pts, j, W=W, p=p, fam=fam, t=t)
        mags = _weighted_mags(vals, M)
        out[j] = np.max(mags / pen, axis=1)
    return out


def direct_weighted_field(fj, mode="matrix", W=None, p=None, fam=None, t=None):
    """|M(x) f_j(x)| pointwise (the y = x term of the Peetre sup)."""
    out = {}
    for j, vals in fj.items():
        vals = np.asarray(vals, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        Ng = vals.shape[0]
        pts = (np.arange(Ng) + 0.5) / Ng
        M = _point_matrices(mode, pts, j, W=W, p=p, fam=fam, t=t)
        out[j] = np.linalg.norm(np.einsum("xab,xb->xa", M, vals), axis=-1)
    return out


def square_functions(fj, kind="gstar", r=2.0, lam=2.0, alpha=1.0,
                     W=None, p=None):
    """Discrete Lusin area function / g*_lambda fields (1-d brute force).

    lusin: (avg_{d(x,y) <= alpha 2^{-j}} |W^{1/p}(x) f_j(y)|^r)^{1/r},
    ball clamped to the containing cell when finer than the grid.
    gstar: (sum_y 2^{jn} |W^{1/p}(x) f_j(y)|^r (1 + 2^j d)^{-lam r} dy)^{1/r}.
    """
    out = {}
    for j, vals in fj.items():
        vals = np.asarray(vals, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        Ng = vals.shape[0]
        pts = (np.arange(Ng) + 0.5) / Ng
        dist = _torus_dist(Ng, 1)
        if W is None:
            mags = np.abs(np.linalg.norm(vals, axis=-1))[None, :].repeat(Ng, 0)
        else:
            M = np.stack([W.power_at(x, 1.0 / p) for x in pts])
            mags = _weighted_mags(vals, M)
        if kind == "lusin":
            rad = max(alpha * 2.0 ** (-j), 0.5 / Ng)
            inside = dist <= rad + 1e-15
            counts = np.sum(inside, axis=1)
            out[j] = (np.sum(mags**r * inside, axis=1) / counts) ** (1.0 / r)
        elif kind == "gstar":
            wts = 2.0**j / (1.0 + 2.0**j * dist) ** (lam * r) / Ng
            out[j] = np.sum(mags**r * wts, axis=1) ** (1.0 / r)
        else:
            raise TransformError(f"unknown square function kind: {kind}")
    return out


def wavelet_gram_check(filter_k, N, ad, t: Truncation, level_lo=None,
                       level_hi=None):
    """Max of |<theta_Q, theta_R>| / u_{Q,R} over window wavelet pairs.

    Same-family orthonormality gives an exact 0/1 diagonal; the ratio
    exercises the cross-level decay of the discrete Gram matrix against
    the almost-diagonal envelope.
    """
    from .adops import ad_entry

    f0 = GridFunction(1, N, np.zeros(N))
    template = dwt_analyze(f0, k=filter_k)
    J = int(np.log2(N))
    level_lo = level_lo if level_lo is not None else max(min(template.details), 1)
    level_hi = level_hi if level_hi is not None else J - 1
    items = []
    for j in range(level_lo, level_hi + 1):
        if j not in template.details:
            continue
        for k in range(1 << j):
            Q = CubeId(j, (k,))
            if t.contains(Q):
                vec = wavelet_basis_function(template, j, (k,)).values
                items.append((Q, vec))
    worst = 0.0
    vol = 1.0 / N
    for i, (Q, u) in enumerate(items):
        for R, v in items[i:]:
            ip = abs(np.vdot(u, v)) * vol
            worst = max(worst, ip / ad_entry(Q, R, ad))
    return worst
