"""Eigenvalues, conjugate points and real eigenvalue curves.

Real eigenvalues of the rescaled problem are zeros of the characteristic
determinant det X(ell; lam, s).  Scans use the batched fixed-step sweep;
every root is then polished with the adaptive integrator and packaged with
its kernel, reconstructed from the null space of X(ell).

``fd_spectrum`` is an independent oracle: a second-order finite-difference
discretization whose eigenvalues are extrapolated from two grids.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg, ndimage, optimize

from .errors import BoundaryDegeneracyWarning, DomainError, NotACrossingError
from .hamflow import (QUAD_POINTS, fundamental_matrix, inner, quad_grid, solution_samples,
                      sweep_char_det, sweep_steps, x_block)

KERNEL_TOL = 1e-8
TANGENCY_DIP = 1e-6
ROOT_XTOL = 1e-10


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class KernelFunction:
    """An eigenfunction pair (u, v) with derivatives, sampled on [0, ell]."""

    x: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    du: np.ndarray = field(repr=False)
    dv: np.ndarray = field(repr=False)

    def endpoint(self):
        return (self.u[0], self.v[0], self.u[-1], self.v[-1],
                self.du[0], self.dv[0], self.du[-1], self.dv[-1])


@dataclass(frozen=True)
class Crossing:
    lambda0: float
    s0: float
    kernel_dim: int
    kernel: tuple = field(repr=False)
    which_kernel: str
    singular_values: tuple = ()

    @property
    def x(self):
        return self.kernel[0].x

    @property
    def ell(self):
        return float(self.kernel[0].x[-1])


@dataclass(frozen=True)
class EigenvalueCurve:
    branch_id: int
    points: np.ndarray = field(repr=False)
    tangency_flags: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class OracleEigenvalue:
    value: complex
    error: float
    krein_value: float


# ---------------------------------------------------------------------------
# characteristic determinant and crossings


def char_det(p, lam, s):
    """det X(ell; lam, s)."""
    X = x_block(p, lam, s)
    return float(X[0, 0] * X[1, 1] - X[0, 1] * X[1, 0])


def _normalize_sign(u, v, du, dv):
    # fix the sign so the dominant component starts with positive slope
    lead = du[0] if np.max(np.abs(u)) >= np.max(np.abs(v)) else dv[0]
    if lead == 0:
        lead = u[np.argmax(np.abs(u))] + v[np.argmax(np.abs(v))]
    return -1.0 if lead < 0 else 1.0


def _kernel_function(p, lam, s, c, x):
    u, v, du, dv = solution_samples(p, lam, s, [0.0, 0.0, c[0], c[1]], x)
    nrm = math.sqrt(inner(u, u, x) + inner(v, v, x))
    sgn = _normalize_sign(u, v, du, dv) / nrm
    return KernelFunction(x, sgn * u, sgn * v, sgn * du, sgn * dv)


def crossing_at(p, lam, s, tol=KERNEL_TOL, force_dim=None, n_quad=QUAD_POINTS):
    """Package (lam, s) as a crossing, extracting the kernel from X(ell).

    Singular values of X below ``tol`` times the norm of the full
    fundamental matrix count towards the kernel.  ``force_dim`` overrides
    the count (used for roots located by a sign change).
    """
    if abs(lam) <= 1e-13:
        lam = 0.0
    fr = fundamental_matrix(p, lam, s)
    scale = float(np.linalg.norm(fr.phi))
    X = fr.X
    x = quad_grid(p.ell, n_quad)
    if lam == 0.0:
        # the system decouples: X is diagonal and the kernel is coordinate-aligned
        diag = np.abs(np.diag(X))
        order = list(np.argsort(diag))
        dims = [j for j in (0, 1) if diag[j] < tol * scale]
        if force_dim is not None and len(dims) < force_dim:
            dims = sorted(order[:force_dim])
        if not dims:
            raise NotACrossingError(f"trivial kernel at (lambda=0, s={s})")
        vecs = [np.eye(2)[j] for j in dims]
        which = {(0,): "Lplus", (1,): "Lminus", (0, 1): "both"}[tuple(dims)]
        sv = tuple(float(d) for d in sorted(diag))
    else:
        _, sv_arr, vt = np.linalg.svd(X)
        dim = int(np.count_nonzero(sv_arr < tol * scale))
        if force_dim is not None:
            dim = max(dim, force_dim)
        if dim == 0:
            raise NotACrossingError(f"trivial kernel at (lambda={lam}, s={s})")
        vecs = [vt[-k] for k in range(1, dim + 1)][::-1]
        which = "coupled"
        sv = tuple(float(t) for t in sv_arr[::-1])
    funcs = [_kernel_function(p, lam, s, c, x) for c in vecs]
    if len(funcs) == 2 and lam != 0.0:
        funcs = _orthonormalize(funcs)
    return Crossing(float(lam), float(s), len(funcs), tuple(funcs), which, sv)


def _orthonormalize(funcs):
    a, b = funcs
    x = a.x
    proj = inner(a.u, b.u, x) + inner(a.v, b.v, x)
    parts = [getattr(b, k) - proj * getattr(a, k) for k in ("u", "v", "du", "dv")]
    nrm = math.sqrt(inner(parts[0], parts[0], x) + inner(parts[1], parts[1], x))
    return [a, KernelFunction(x, *(q / nrm for q in parts))]


# ---------------------------------------------------------------------------
# real eigenvalues at fixed s


def _scan_grid(lo, hi, steps):
    lams = np.linspace(lo, hi, steps + 1)
    if lo < 0.0 < hi:
        lams = np.unique(np.append(lams, 0.0))
    return lams


def _dip_runs(d, dip, half_width=20):
    """Maximal runs of indices where |d| dips below ``dip`` times its local max."""
    absd = np.abs(d)
    local = ndimage.maximum_filter1d(absd, size=2 * half_width + 1, mode="nearest")
    dipped = absd < dip * local
    runs = []
    i = 0
    while i < d.size:
        if dipped[i]:
            j = i
            while j + 1 < d.size and dipped[j + 1]:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs, dipped


def _tangential_candidates(lams, d, dip):
    """Indices of local minima of |d| inside dip runs without a sign change."""
    runs, _ = _dip_runs(d, dip)
    out = []
    for i, j in runs:
        lo, hi = max(i - 1, 0), min(j + 1, d.size - 1)
        if d[lo] * d[hi] < 0:
            continue
        out.append(i + int(np.argmin(np.abs(d[i:j + 1]))))
    return out


def real_eigenvalues(p, s, window, steps=2000, tol=ROOT_XTOL, dip=TANGENCY_DIP):
    """All real lam in ``window`` with det X(ell; lam, s) = 0, as crossings.

    Sign changes between ordinary scan points are polished by Brent's
    method.  Runs of scan points where |det X| dips far below its local
    size are treated as one candidate: an odd root if the sign differs
    across the run, otherwise a tangential (even-order) zero refined by
    minimizing |det X|.  This keeps noise-level sign flips next to a
    high-order zero from producing spurious roots.
    """
    lo, hi = float(window[0]), float(window[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise DomainError(f"invalid window {window!r}")
    lams = _scan_grid(lo, hi, steps)
    d = sweep_char_det(p, lams, s)
    n = lams.size
    runs, dipped = _dip_runs(d, dip)

    def det(lam):
        return char_det(p, lam, s)

    def bracket_root(a, b):
        fa, fb = det(a), det(b)
        if fa == 0.0:
            return float(a)
        if fb == 0.0:
            return float(b)
        if fa * fb > 0:
            return None
        return float(optimize.brentq(det, a, b, xtol=tol, maxiter=200))

    roots = []
    for i in range(n - 1):
        if dipped[i] or dipped[i + 1]:
            continue
        if d[i] * d[i + 1] < 0:
            r = bracket_root(lams[i], lams[i + 1])
            if r is not None:
                roots.append((r, 1))
    for i, j in runs:
        lo_i, hi_i = max(i - 1, 0), min(j + 1, n - 1)
        a, b = lams[lo_i], lams[hi_i]
        if d[lo_i] * d[hi_i] < 0:
            r = bracket_root(a, b)
            if r is not None:
                if a <= 0.0 <= b and abs(det(0.0)) <= abs(det(r)):
                    r = 0.0
                roots.append((r, 1))
                continue
        if a <= 0.0 <= b:
            roots.append((0.0, None))
            continue
        res = optimize.minimize_scalar(lambda t: abs(det(t)), bounds=(a, b), method="bounded",
                                       options={"xatol": 1e-12})
        k = i + int(np.argmin(np.abs(d[i:j + 1])))
        cands = [(abs(det(lams[k])), float(lams[k])), (abs(res.fun), float(res.x))]
        best = min(cands)[1]
        if min(best - lo, hi - best) <= 1e-9 * (hi - lo):
            continue  # the dip belongs to a zero outside the window
        roots.append((best, None))
    roots.sort()
    out = []
    for lam, force in roots:
        if out and abs(lam - out[-1].lambda0) < 1e-8 * max(1.0, abs(lam)):
            continue
        try:
            out.append(crossing_at(p, lam, s, force_dim=force))
        except NotACrossingError:
            continue
    return out


def solve_curve_s(p, lam, s_lo, s_hi, probes=16):
    """Roots s in [s_lo, s_hi] of s -> det X(ell; lam, s)."""
    ss = np.linspace(s_lo, s_hi, probes + 1)
    vals = [char_det(p, lam, t) for t in ss]
    roots = []
    for i in range(probes):
        if vals[i] == 0.0:
            roots.append(float(ss[i]))
        elif vals[i] * vals[i + 1] < 0:
            roots.append(optimize.brentq(lambda t: char_det(p, lam, t), ss[i], ss[i + 1],
                                         xtol=1e-14, maxiter=200))
    return roots


def solve_curve_lambda(p, s, lam_lo, lam_hi, probes=16):
    """Roots lam in [lam_lo, lam_hi] of lam -> det X(ell; lam, s)."""
    ls = np.linspace(lam_lo, lam_hi, probes + 1)
    vals = [char_det(p, t, s) for t in ls]
    roots = []
    for i in range(probes):
        if vals[i] * vals[i + 1] < 0:
            roots.append(optimize.brentq(lambda t: char_det(p, t, s), ls[i], ls[i + 1],
                                         xtol=1e-14, maxiter=200))
    return roots


# ---------------------------------------------------------------------------
# conjugate points and Morse indices


def _shooting_solution(q, ell, smax):
    """y'' + q(t) y = 0, y(0) = 0, y'(0) = 1 on [0, smax ell] with zero events."""
    def rhs(t, y):
        return [y[1], -float(q(t)) * y[0]]

    def hit(_, y):
        return y[0]

    t_end = smax * ell
    eps = 1e-10 * ell
    # Taylor start just off the origin so the initial zero is not reported
    y_eps = [eps, 1.0]
    sol = integrate.solve_ivp(rhs, (eps, t_end), y_eps, method="DOP853", rtol=1e-12,
                              atol=1e-14, events=hit, dense_output=True)
    return sol


def conjugate_points(q, ell, window=(0.0, 1.0), tol=KERNEL_TOL):
    """Rescalings s in (window[0], window[1]] where -d^2 - s^2 q(s x) has kernel.

    With y solving y'' + q y = 0 from (0, 1), the shooting function satisfies
    w(ell; s) = y(s ell) / s, so the zeros in s are the zeros of y divided by
    ell.  The right endpoint is included when y vanishes there to ``tol``
    relative to the phase-plane radius.
    """
    lo, hi = window
    sol = _shooting_solution(q, ell, hi)
    t_end = hi * ell
    zeros = [float(t) / ell for t in sol.t_events[0] if t < t_end * (1.0 - 1e-8)]
    y_end, dy_end = sol.y[0, -1], sol.y[1, -1]
    radius = math.hypot(y_end, ell * dy_end)
    if abs(y_end) <= tol * radius or any(t >= t_end * (1.0 - 1e-8) for t in sol.t_events[0]):
        zeros.append(float(hi))
    return [z for z in zeros if z > lo]


def morse_index(q, ell):
    """Number of negative Dirichlet eigenvalues of -d^2 - q on [0, ell]."""
    pts = conjugate_points(q, ell)
    inside = [t for t in pts if t < 1.0 - 1e-8]
    if len(inside) != len(pts):
        warnings.warn("conjugate point at s = 1: the operator has a kernel",
                      BoundaryDegeneracyWarning, stacklevel=2)
    return len(inside)


def has_kernel(q, ell, tol=KERNEL_TOL):
    pts = conjugate_points(q, ell, tol=tol)
    return bool(pts) and pts[-1] >= 1.0 - 1e-8


# ---------------------------------------------------------------------------
# eigenvalue curves


def char_det_grid(p, lams, ss, threads=1):
    """det X on the tensor grid; rows indexed by s, columns by lam."""
    lams = np.asarray(lams, dtype=float)
    ss = np.asarray(ss, dtype=float)
    n_steps = sweep_steps(p, lams, ss)

    def row(s):
        return sweep_char_det(p, lams, np.full(lams.shape, s), n_steps)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(row, ss))
    else:
        rows = [row(s) for s in ss]
    return np.array(rows)


def _refine_edges(p, a_pts, b_pts, fa, fb, n_steps, iters=60):
    """Illinois regula falsi along straight edges between points a and b."""
    a, b, fa, fb = a_pts.copy(), b_pts.copy(), fa.copy(), fb.copy()
    for _ in range(iters):
        width = np.max(np.abs(b - a), axis=1)
        active = (width > 1e-13) & (fb != 0)
        if not np.any(active):
            break
        c = b - (fb / (fb - fa))[:, None] * (b - a)
        fc = fb.copy()
        fc[active] = sweep_char_det(p, c[active, 0], c[active, 1], n_steps)
        c[~active] = b[~active]
        flip = fc * fb < 0
        a = np.where(flip[:, None], b, a)
        fa = np.where(flip, fb, 0.5 * fa)
        b, fb = c, fc
    return b


def trace_curves(p, lam_range, s_range=(0.05, 1.0), n_lam=400, n_s=400, threads=1,
                 grid=None, tangency_tol=1e-2):
    """Real eigenvalue curves in the rectangle lam_range x s_range.

    Sign changes of det X across grid edges are located by regula falsi,
    joined cell by cell and chained into polylines.  Points where the curve
    is nearly horizontal (|d det/d lam| small against the gradient) are
    flagged, and isolated touchings of the top edge are returned as
    single-point curves.
    """
    lam_lo, lam_hi = lam_range
    s_lo, s_hi = s_range
    if s_lo < 0.05 - 1e-15:
        raise DomainError("s window floor is 0.05")
    lams = np.linspace(lam_lo, lam_hi, n_lam)
    ss = np.linspace(s_lo, s_hi, n_s)
    n_steps = sweep_steps(p, lams, ss)
    D = char_det_grid(p, lams, ss, threads) if grid is None else np.asarray(grid)
    sgn = np.where(D >= 0, 1, -1)

    # edge crossings: horizontal edges (i, j)-(i, j+1), vertical (i, j)-(i+1, j)
    hz = np.argwhere(sgn[:, :-1] != sgn[:, 1:])
    vt = np.argwhere(sgn[:-1, :] != sgn[1:, :])
    a_pts, b_pts, fa, fb, keys = [], [], [], [], []
    for i, j in hz:
        a_pts.append((lams[j], ss[i]))
        b_pts.append((lams[j + 1], ss[i]))
        fa.append(D[i, j])
        fb.append(D[i, j + 1])
        keys.append(("h", int(i), int(j)))
    for i, j in vt:
        a_pts.append((lams[j], ss[i]))
        b_pts.append((lams[j], ss[i + 1]))
        fa.append(D[i, j])
        fb.append(D[i + 1, j])
        keys.append(("v", int(i), int(j)))
    curves = []
    if keys:
        pts = _refine_edges(p, np.array(a_pts), np.array(b_pts), np.array(fa, dtype=float),
                            np.array(fb, dtype=float), n_steps)
        index = {k: n for n, k in enumerate(keys)}
        segments = _cell_segments(p, D, sgn, lams, ss, index, n_steps)
        for poly in _chain(segments, len(keys)):
            pl = pts[poly]
            flags = _tangency_flags(D, lams, ss, pl, tangency_tol)
            curves.append((pl, flags))
    top = D[-1]
    for i in _tangential_candidates(lams, top, TANGENCY_DIP):
        a = lams[max(i - 1, 0)]
        b = lams[min(i + 1, lams.size - 1)]
        res = optimize.minimize_scalar(lambda t: abs(char_det(p, t, s_hi)), bounds=(a, b),
                                       method="bounded", options={"xatol": 1e-12})
        lam0 = 0.0 if a <= 0.0 <= b and abs(char_det(p, 0.0, s_hi)) <= res.fun else res.x
        curves.append((np.array([[lam0, s_hi]]), np.array([True])))
    curves.sort(key=lambda c: (round(float(c[0][0, 0]), 9), round(float(c[0][0, 1]), 9)))
    return [EigenvalueCurve(k, pl, fl) for k, (pl, fl) in enumerate(curves)]


def _cell_segments(p, D, sgn, lams, ss, index, n_steps):
    segs = []
    ambiguous = []
    n_s, n_l = D.shape
    for i in range(n_s - 1):
        for j in range(n_l - 1):
            edges = [("h", i, j), ("v", i, j + 1), ("h", i + 1, j), ("v", i, j)]
            hit = [e for e in edges if e in index]
            if len(hit) == 2:
                segs.append((index[hit[0]], index[hit[1]]))
            elif len(hit) == 4:
                ambiguous.append((i, j))
    if ambiguous:
        cl = np.array([0.5 * (lams[j] + lams[j + 1]) for i, j in ambiguous])
        cs = np.array([0.5 * (ss[i] + ss[i + 1]) for i, j in ambiguous])
        centre = sweep_char_det(p, cl, cs, n_steps)
        for (i, j), c in zip(ambiguous, centre):
            bottom, right = index[("h", i, j)], index[("v", i, j + 1)]
            top, left = index[("h", i + 1, j)], index[("v", i, j)]
            if (c >= 0) == (sgn[i, j] > 0):
                segs += [(bottom, right), (top, left)]
            else:
                segs += [(left, bottom), (right, top)]
    return segs


def _chain(segments, n_nodes):
    adj = [[] for _ in range(n_nodes)]
    for a, b in segments:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n_nodes
    polys = []

    def walk(start):
        path = [start]
        seen[start] = True
        cur = start
        while True:
            nxt = [n for n in adj[cur] if not seen[n]]
            if not nxt:
                break
            cur = nxt[0]
            seen[cur] = True
            path.append(cur)
        return path

    for n in range(n_nodes):
        if not seen[n] and len(adj[n]) <= 1:
            polys.append(walk(n))
    for n in range(n_nodes):
        if not seen[n]:
            path = walk(n)
            path.append(path[0])
            polys.append(path)
    return polys


def _tangency_flags(D, lams, ss, pts, tol):
    dl = lams[1] - lams[0]
    ds = ss[1] - ss[0]
    gs, gl = np.gradient(D, ds, dl)
    span_l = lams[-1] - lams[0]
    span_s = ss[-1] - ss[0]
    jj = np.clip(np.round((pts[:, 0] - lams[0]) / dl).astype(int), 0, lams.size - 1)
    ii = np.clip(np.round((pts[:, 1] - ss[0]) / ds).astype(int), 0, ss.size - 1)
    a = np.abs(gl[ii, jj]) * span_l
    b = np.abs(gs[ii, jj]) * span_s
    return a < tol * np.hypot(a, b)


# ---------------------------------------------------------------------------
# finite-difference oracle


def _fd_operators(p, s, n):
    h = p.ell / (n + 1)
    x = h * np.arange(1, n + 1)
    main = 2.0 / h ** 2 * np.ones(n)
    off = -1.0 / h ** 2 * np.ones(n - 1)
    lap = np.diag(main) + np.diag(off, 1) + np.diag(off, -1)
    Lp = lap - np.diag(s * s * np.asarray(p.g(s * x), dtype=float))
    Lm = lap - np.diag(s * s * np.asarray(p.h(s * x), dtype=float))
    return h, Lp, Lm


def _fd_squares(p, s, n):
    """Eigenvalues mu of -L- L+ (the squares of eigenvalues of N_s) and vectors."""
    h, Lp, Lm = _fd_operators(p, s, n)
    mu, vecs = linalg.eig(-Lm @ Lp)
    return h, Lp, Lm, mu, vecs


def _krein(h, Lp, Lm, u, sigma):
    w = Lp @ u / sigma
    val = np.vdot(u, Lp @ u) + np.vdot(w, Lm @ w)
    nrm = np.vdot(u, u) + np.vdot(w, w)
    return float(np.real(val / nrm))


def fd_spectrum(p, s=1.0, n=256, keep=None, zero_tol=1e-10):
    """Oracle eigenvalues lam of the rescaled problem (N_s has s^2 lam).

    N_s is discretized with central differences on n and 2n+1 interior
    points (so the mesh width halves exactly).  The squares mu = (s^2 lam)^2,
    eigenvalues of -L- L+, are matched between grids and Richardson
    extrapolated; only the ``keep`` lowest modes are returned.  Each
    eigenvalue carries the Krein value <Lz, z>/<z, z> of the fine-grid
    eigenvector (nan for the zero eigenvalue).
    """
    if n < 64:
        raise DomainError("oracle grid needs n >= 64")
    keep = keep or max(8, n // 8)
    _, _, _, mu_c, _ = _fd_squares(p, s, n)
    hf, Lp, Lm, mu_f, vec_f = _fd_squares(p, s, 2 * n + 1)
    oc = np.argsort(np.abs(mu_c))[:keep]
    of = np.argsort(np.abs(mu_f))[:keep + 8]
    cost = np.abs(mu_c[oc][:, None] - mu_f[of][None, :])
    rows, cols = optimize.linear_sum_assignment(cost)
    scale = max(1.0, float(np.max(np.abs(mu_f[of]))))
    out = []
    for r, c in zip(rows, cols):
        m_c, m_f = mu_c[oc[r]], mu_f[of[c]]
        if abs(m_c.imag) < 1e-9 * scale:
            m_c = m_c.real
        if abs(m_f.imag) < 1e-9 * scale:
            m_f = m_f.real
        m_e = m_f + (m_f - m_c) / 3.0
        err_mu = abs(m_f - m_c) / 3.0
        if abs(m_e) <= max(4.0 * err_mu, zero_tol * scale):
            out += [OracleEigenvalue(0j, float(err_mu), math.nan)] * 2
            continue
        root = np.sqrt(complex(m_e))
        err = abs(root - np.sqrt(complex(m_f))) / (s * s)
        sigma_f = np.sqrt(complex(m_f))
        kv = _krein(hf, Lp, Lm, vec_f[:, of[c]], sigma_f)
        for sgn in (1.0, -1.0):
            val = sgn * root / (s * s)
            val = complex(_clean(val.real), _clean(val.imag))
            out.append(OracleEigenvalue(val, float(err), kv))
    out.sort(key=lambda e: (round(e.value.real, 10), round(e.value.imag, 10)))
    return out


def _clean(v):
    return 0.0 if abs(v) < 1e-300 else float(v)


def fd_negative_count(q, ell, n=400, tol=1e-6):
    """Negative Dirichlet eigenvalues of -d^2 - q, Richardson extrapolated over two grids.

    A zero eigenvalue moves by O(h^2) under discretization, so the raw
    count is unreliable when the operator has a kernel.
    """
    ec = fd_scalar_eigenvalues(q, ell, n)
    ef = fd_scalar_eigenvalues(q, ell, 2 * n + 1)
    k = min(ec.size, 32)
    ex = ef[:k] + (ef[:k] - ec[:k]) / 3.0
    scale = max(1.0, float(np.max(np.abs(ex))))
    return int(np.count_nonzero(ex < -tol * scale))


def fd_scalar_eigenvalues(q, ell, n=400):
    """Dirichlet eigenvalues of -d^2 - q by central differences."""
    h = ell / (n + 1)
    x = h * np.arange(1, n + 1)
    d = 2.0 / h ** 2 - np.asarray(q(x), dtype=float)
    e = -1.0 / h ** 2 * np.ones(n - 1)
    return linalg.eigvalsh_tridiagonal(d, e)
