"""First-order Hamiltonian system of the rescaled eigenvalue problem.

For a potential pair (g, h), spectral parameter lam and rescaling s, the state
(u, v, r, z) with r = u'/s and z = -v'/s obeys on [0, ell]

    u' = s r,        v' = -s z,
    r' = -s g(sx) u - s lam v,
    z' = -s lam u + s h(sx) v.

The fundamental matrix started at the identity is split into 2x2 blocks
[[U, X], [V, Y]]; det X(ell) vanishes exactly when s^2 lam is a Dirichlet
eigenvalue of the rescaled operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, IntegrationError

RTOL = 1e-12
ATOL = 1e-12
QUAD_POINTS = 2049

# canonical symplectic matrix on R^8
SYMPLECTIC_J = np.block([[np.zeros((4, 4)), -np.eye(4)], [np.eye(4), np.zeros((4, 4))]])


def inner(a, b, x):
    """L^2 inner product of sampled real functions by composite Simpson."""
    return float(integrate.simpson(np.asarray(a) * np.asarray(b), x=x))


def quad_grid(ell, n=QUAD_POINTS):
    return np.linspace(0.0, ell, n)


def _check_s(p, s):
    if not s > 0:
        raise DomainError(f"rescaling s must be positive, got {s!r}")
    if s > 1.0 + 1e-14 and not p.extends:
        raise DomainError("s > 1 needs potentials defined beyond ell")


def system_matrix(p, lam, s, x):
    """The 4x4 coefficient matrix at position x."""
    g = float(p.g(s * x))
    h = float(p.h(s * x))
    return s * np.array([[0.0, 0.0, 1.0, 0.0],
                         [0.0, 0.0, 0.0, -1.0],
                         [-g, -lam, 0.0, 0.0],
                         [-lam, h, 0.0, 0.0]])


def _rhs(p, lam, s, ncols):
    g, h = p.g, p.h

    def rhs(x, y):
        st = y.reshape(4, ncols)
        gx = g(s * x)
        hx = h(s * x)
        out = np.empty_like(st)
        out[0] = s * st[2]
        out[1] = -s * st[3]
        out[2] = -s * (gx * st[0] + lam * st[1])
        out[3] = s * (hx * st[1] - lam * st[0])
        return out.ravel()

    return rhs


def propagate(p, lam, s, x0, x1, y0, dense=False):
    """Integrate the system from x0 to x1 for initial columns y0 (4 x k)."""
    _check_s(p, s)
    y0 = np.asarray(y0, dtype=float)
    ncols = 1 if y0.ndim == 1 else y0.shape[1]
    sol = integrate.solve_ivp(_rhs(p, float(lam), float(s), ncols), (x0, x1), y0.ravel(),
                              method="DOP853", rtol=RTOL, atol=ATOL, dense_output=dense)
    if not sol.success:
        raise IntegrationError(f"integration failed: {sol.message}", lam, s)
    if dense:
        return sol
    return sol.y[:, -1].reshape(y0.shape)


@dataclass(frozen=True)
class BoundaryFrame:
    """Blocks of the fundamental matrix at x = ell."""

    lam: float
    s: float
    U: np.ndarray
    V: np.ndarray
    X: np.ndarray
    Y: np.ndarray

    @property
    def phi(self):
        return np.block([[self.U, self.X], [self.V, self.Y]])

    @property
    def det_x(self):
        return float(np.linalg.det(self.X))


def fundamental_matrix(p, lam, s, x_end=None):
    """Fundamental matrix blocks at x = ell (or at ``x_end``)."""
    end = p.ell if x_end is None else x_end
    Phi = propagate(p, lam, s, 0.0, end, np.eye(4))
    return BoundaryFrame(float(lam), float(s), Phi[:2, :2], Phi[2:, :2], Phi[:2, 2:], Phi[2:, 2:])


def x_block(p, lam, s):
    """The block X(ell) alone (integrates the two columns that feed it)."""
    cols = propagate(p, lam, s, 0.0, p.ell, np.eye(4)[:, 2:])
    return cols[:2, :]


def solution_samples(p, lam, s, y0, x):
    """Sample u, v, u', v' of the solution with initial state y0 on points x."""
    sol = propagate(p, lam, s, 0.0, p.ell, np.asarray(y0, dtype=float), dense=True)
    st = sol.sol(x)
    return st[0], st[1], s * st[2], -s * st[3]


# ---------------------------------------------------------------------------
# batched fixed-step integration for sweeps


def _sup_norm(p):
    cached = p.__dict__.get("_sup_cache")
    if cached is None:
        cached = max(p.sup_norms())
        object.__setattr__(p, "_sup_cache", cached)
    return cached


def _rk4_x(p, lam, s, n_steps):
    """Classical RK4 for the X-feeding columns over a batch of (lam, s)."""
    B = lam.size
    xs = np.linspace(0.0, p.ell, 2 * n_steps + 1)
    sx = s[:, None] * xs[None, :]
    if p.constants is not None:
        sg = np.broadcast_to((s * p.constants[0])[:, None], sx.shape)
        sh = np.broadcast_to((s * p.constants[1])[:, None], sx.shape)
    elif np.all(s == s[0]):
        sg = np.broadcast_to(s[0] * np.asarray(p.g(s[0] * xs)), sx.shape)
        sh = np.broadcast_to(s[0] * np.asarray(p.h(s[0] * xs)), sx.shape)
    else:
        sg = s[:, None] * p.g(sx)
        sh = s[:, None] * p.h(sx)
    dx = p.ell / n_steps
    sl = (s * lam)[:, None]
    sc = s[:, None]
    u = np.zeros((B, 2))
    v = np.zeros((B, 2))
    r = np.zeros((B, 2))
    z = np.zeros((B, 2))
    r[:, 0] = 1.0
    z[:, 1] = 1.0

    def f(u, v, r, z, j):
        gj = sg[:, j:j + 1]
        hj = sh[:, j:j + 1]
        return sc * r, -sc * z, -(gj * u + sl * v), hj * v - sl * u

    h2 = 0.5 * dx
    for k in range(n_steps):
        j0, j1, j2 = 2 * k, 2 * k + 1, 2 * k + 2
        a1 = f(u, v, r, z, j0)
        a2 = f(u + h2 * a1[0], v + h2 * a1[1], r + h2 * a1[2], z + h2 * a1[3], j1)
        a3 = f(u + h2 * a2[0], v + h2 * a2[1], r + h2 * a2[2], z + h2 * a2[3], j1)
        a4 = f(u + dx * a3[0], v + dx * a3[1], r + dx * a3[2], z + dx * a3[3], j2)
        c = dx / 6.0
        u = u + c * (a1[0] + 2 * a2[0] + 2 * a3[0] + a4[0])
        v = v + c * (a1[1] + 2 * a2[1] + 2 * a3[1] + a4[1])
        r = r + c * (a1[2] + 2 * a2[2] + 2 * a3[2] + a4[2])
        z = z + c * (a1[3] + 2 * a2[3] + 2 * a3[3] + a4[3])
    return np.stack([u, v], axis=1)


def sweep_steps(p, lam, s, phase_step=0.05):
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    freq = math.sqrt(_sup_norm(p) + float(np.max(np.abs(lam))) + 1.0)
    theta = float(np.max(s)) * p.ell * freq
    return int(min(max(math.ceil(theta / phase_step), 32), 40000))


def sweep_x_blocks(p, lam, s, n_steps=None, chunk=512):
    """X(ell) for arrays of (lam, s); fixed-step RK4 with one Richardson step.

    Intended for scans and sign analysis; precise single evaluations go
    through :func:`x_block`.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    s = np.broadcast_to(np.atleast_1d(np.asarray(s, dtype=float)), lam.shape).copy()
    if np.any(s <= 0):
        raise DomainError("rescaling s must be positive")
    if np.any(s > 1.0 + 1e-14) and not p.extends:
        raise DomainError("s > 1 needs potentials defined beyond ell")
    if n_steps is None:
        n_steps = sweep_steps(p, lam, s)
    out = np.empty((lam.size, 2, 2))
    for start in range(0, lam.size, chunk):
        sl = slice(start, start + chunk)
        coarse = _rk4_x(p, lam[sl], s[sl], n_steps)
        fine = _rk4_x(p, lam[sl], s[sl], 2 * n_steps)
        out[sl] = fine + (fine - coarse) / 15.0
    return out


def sweep_char_det(p, lam, s, n_steps=None):
    X = sweep_x_blocks(p, lam, s, n_steps)
    return X[:, 0, 0] * X[:, 1, 1] - X[:, 0, 1] * X[:, 1, 0]


# ---------------------------------------------------------------------------
# traces and the symplectic form


def omega(a, b):
    """Symplectic form omega(a, b) = J a . b on R^8."""
    return float(SYMPLECTIC_J @ np.asarray(a, dtype=float) @ np.asarray(b, dtype=float))


def rescaled_trace(endpoint, s):
    """Trace vector of a solution from its endpoint data.

    ``endpoint`` is (u(0), v(0), u(ell), v(ell), u'(0), v'(0), u'(ell), v'(ell)).
    """
    if s == 0:
        raise DomainError("trace undefined at s = 0")
    u0, v0, ul, vl, du0, dv0, dul, dvl = (float(t) for t in endpoint)
    return np.array([u0, v0, ul, vl, -du0 / s, dv0 / s, dul / s, -dvl / s])


def frame_traces(frame):
    """8x4 matrix whose columns are traces of the four fundamental solutions."""
    I2, O2 = np.eye(2), np.zeros((2, 2))
    return np.block([[I2, O2], [frame.U, frame.X], [O2, -I2], [frame.V, frame.Y]])


def lagrangian_residual(frame):
    """Max |omega(col_i, col_j)| over the trace columns of the frame."""
    Z = frame_traces(frame)
    return float(np.max(np.abs(Z.T @ SYMPLECTIC_J @ Z)))


# ---------------------------------------------------------------------------
# Green identity


@dataclass(frozen=True)
class SampledPair:
    """A pair (u, v) with first and second derivatives on a uniform grid."""

    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    du: np.ndarray
    dv: np.ndarray
    ddu: np.ndarray
    ddv: np.ndarray

    def endpoint(self):
        return (self.u[0], self.v[0], self.u[-1], self.v[-1],
                self.du[0], self.dv[0], self.du[-1], self.dv[-1])


def apply_shifted(w, p, lam, s):
    """Components of S (N_s - s^2 lam) w on the grid of w."""
    gs = s * s * np.asarray(p.g(s * w.x))
    hs = s * s * np.asarray(p.h(s * w.x))
    lp = -w.ddu - gs * w.u
    lm = -w.ddv - hs * w.v
    shift = s * s * lam
    # N w = (-L- v, L+ u); S swaps the components
    return lp - shift * w.v, -lm - shift * w.u


def greens_residual(a, b, p, lam, s):
    """|<S(N_s - s^2 lam)a, b> - <a, S(N_s - s^2 lam)b> - s omega(Tr a, Tr b)|."""
    a1, a2 = apply_shifted(a, p, lam, s)
    b1, b2 = apply_shifted(b, p, lam, s)
    lhs = (inner(a1, b.u, a.x) + inner(a2, b.v, a.x)
           - inner(a.u, b1, a.x) - inner(a.v, b2, a.x))
    rhs = s * omega(rescaled_trace(a.endpoint(), s), rescaled_trace(b.endpoint(), s))
    return abs(lhs - rhs)
