"""Standing-wave profiles and the potentials of their linearization.

A standing wave is a real solution of

    phi'' + f(phi^2) phi + beta phi = 0   on [0, ell]

with Dirichlet or Neumann conditions.  Profiles are found by one-parameter
shooting along a phase-plane orbit; for the cubic nonlinearities the
profile is also available in closed form through Jacobi elliptic functions
and the two constructions are compared before a wave is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, interpolate, optimize

from .elliptic import ellipk, eval_jacobi
from .errors import DomainError, NoWaveError

__all__ = [
    "Nonlinearity",
    "Branch",
    "StandingWave",
    "PotentialPair",
    "eval_jacobi",
    "solve_standing_wave",
    "linearized_potentials",
    "wave_residual",
    "hamiltonian_drift",
]

RTOL = 1e-12
ATOL = 1e-12
DEFAULT_GRID = 1024
MIN_GRID = 512


# --------------------------------------------------------------------------
# nonlinearity


@dataclass(frozen=True)
class Nonlinearity:
    """The function f in the stationary equation, as a function of r = phi^2.

    Use the constructors :meth:`power`, :meth:`cubic_focusing`,
    :meth:`cubic_defocusing` and :meth:`custom` rather than the raw fields.
    """

    kind: str
    p: float = 1.0
    f_custom: Optional[Callable] = field(default=None, compare=False, repr=False)
    df_custom: Optional[Callable] = field(default=None, compare=False, repr=False)

    @classmethod
    def power(cls, p):
        if not p > 0:
            raise DomainError(f"power nonlinearity needs p > 0, got {p!r}")
        return cls("power", float(p))

    @classmethod
    def cubic_focusing(cls):
        return cls("cubic_focusing", 1.0)

    @classmethod
    def cubic_defocusing(cls):
        return cls("cubic_defocusing", 1.0)

    @classmethod
    def custom(cls, f, df):
        return cls("custom", 1.0, f, df)

    @property
    def ident(self):
        if self.kind == "power":
            return f"power:{self.p!r}"
        return self.kind

    @classmethod
    def from_ident(cls, ident):
        if isinstance(ident, dict):
            kind = ident.get("kind")
            if kind == "power":
                return cls.power(float(ident["p"]))
            ident = kind
        if ident == "cubic_focusing":
            return cls.cubic_focusing()
        if ident == "cubic_defocusing":
            return cls.cubic_defocusing()
        if isinstance(ident, str) and ident.startswith("power:"):
            return cls.power(float(ident.split(":", 1)[1]))
        raise DomainError(f"unknown nonlinearity {ident!r}")

    @property
    def is_cubic(self):
        """True for f(r) = r and f(r) = -r (elliptic closed forms exist)."""
        if self.kind in ("cubic_focusing", "cubic_defocusing"):
            return True
        return self.kind == "power" and self.p == 1.0

    @property
    def sign(self):
        return -1.0 if self.kind == "cubic_defocusing" else 1.0

    def f(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "custom":
            return np.asarray(self.f_custom(r), dtype=float)
        if self.kind == "power":
            return r ** self.p
        return self.sign * r

    def df(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "custom":
            return np.asarray(self.df_custom(r), dtype=float)
        if self.kind == "power":
            return self.p * r ** (self.p - 1.0)
        return self.sign * np.ones_like(r)

    def d2f(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "custom":
            step = 1e-5 * np.maximum(1.0, np.abs(r))
            return (self.df(r + step) - self.df(r - step)) / (2.0 * step)
        if self.kind == "power":
            if self.p == 1.0:
                return np.zeros_like(r)
            return self.p * (self.p - 1.0) * r ** (self.p - 2.0)
        return np.zeros_like(r)

    def antiderivative(self, r):
        """F with F' = f and F(0) = 0."""
        r = np.asarray(r, dtype=float)
        if self.kind == "power":
            return r ** (self.p + 1.0) / (self.p + 1.0)
        if self.kind != "custom":
            return 0.5 * self.sign * r * r
        flat = [integrate.quad(lambda t: float(self.f(t)), 0.0, float(ri),
                               epsabs=1e-14, epsrel=1e-13)[0] for ri in r.ravel()]
        return np.asarray(flat).reshape(r.shape)

    def check_derivative(self, r_values, rtol=1e-6):
        """Compare f' against central differences of f on the given r values."""
        r = np.asarray(r_values, dtype=float)
        step = 1e-5 * np.maximum(1.0, np.abs(r))
        fd = (self.f(r + step) - self.f(r - step)) / (2.0 * step)
        exact = self.df(r)
        scale = np.maximum(1.0, np.abs(exact))
        bad = np.abs(fd - exact) > rtol * scale
        if np.any(bad):
            raise DomainError(
                f"f' disagrees with finite differences of f at r={r[bad][0]!r}")

    def g_of(self, r, beta):
        """2 f'(r) r + f(r) + beta."""
        return 2.0 * self.df(r) * r + self.f(r) + beta

    def h_of(self, r, beta):
        return self.f(r) + beta

    def dg_dr(self, r):
        return 2.0 * self.d2f(r) * r + 3.0 * self.df(r)


# --------------------------------------------------------------------------
# branches and waves


@dataclass(frozen=True)
class Branch:
    """Phase-plane orbit descriptor.

    ``amplitude`` bounds the free initial value: the slope b0 = phi'(0) for
    Dirichlet problems, the value a0 = phi(0) for Neumann problems.
    ``critical_points`` is the number of interior zeros of phi'.  The first
    admissible orbit in increasing amplitude is selected.
    """

    amplitude: tuple
    critical_points: int

    def __post_init__(self):
        lo, hi = self.amplitude
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
            raise DomainError(f"empty amplitude range {self.amplitude!r}")
        if self.critical_points < 0:
            raise DomainError("critical_points must be nonnegative")

    def half_periods(self, bc):
        """Number of half-periods of the orbit contained in [0, ell]."""
        if bc == "dirichlet":
            if self.critical_points < 1:
                raise DomainError("a Dirichlet wave has at least one critical point")
            return self.critical_points
        return self.critical_points + 1

    def to_dict(self):
        return {"amplitude": [float(self.amplitude[0]), float(self.amplitude[1])],
                "critical_points": int(self.critical_points)}

    @classmethod
    def from_dict(cls, d):
        lo, hi = d["amplitude"]
        return cls((float(lo), float(hi)), int(d["critical_points"]))


@dataclass(frozen=True)
class StandingWave:
    beta: float
    ell: float
    bc: str
    nonlinearity: Nonlinearity
    branch: Branch
    a0: float
    b0: float
    x: np.ndarray = field(repr=False, compare=False)
    phi: np.ndarray = field(repr=False, compare=False)
    dphi: np.ndarray = field(repr=False, compare=False)
    profile: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.profile is None:
            object.__setattr__(self, "profile", _hermite_profile(self))

    def evaluate(self, x):
        """(phi, phi') at arbitrary points of [0, ell]."""
        return self.profile(np.asarray(x, dtype=float))

    @property
    def critical_points(self):
        return self.branch.critical_points

    def is_nonvanishing(self):
        return bool(np.all(self.phi > 0) or np.all(self.phi < 0))

    def to_dict(self):
        return {
            "beta": float(self.beta),
            "ell": float(self.ell),
            "bc": self.bc,
            "nonlinearity": self.nonlinearity.ident,
            "branch": dict(self.branch.to_dict(), a0=float(self.a0), b0=float(self.b0)),
            "grid": [{"x": float(a), "phi": float(b), "dphi": float(c)}
                     for a, b, c in zip(self.x, self.phi, self.dphi)],
        }

    @classmethod
    def from_dict(cls, d):
        grid = d["grid"]
        branch = d["branch"]
        return cls(
            beta=float(d["beta"]), ell=float(d["ell"]), bc=d["bc"],
            nonlinearity=Nonlinearity.from_ident(d["nonlinearity"]),
            branch=Branch.from_dict(branch),
            a0=float(branch.get("a0", 0.0)), b0=float(branch.get("b0", 0.0)),
            x=np.array([r["x"] for r in grid]),
            phi=np.array([r["phi"] for r in grid]),
            dphi=np.array([r["dphi"] for r in grid]),
        )


def _hermite_profile(w):
    """Quintic Hermite interpolant of sampled data, using phi'' from the ODE."""
    f = w.nonlinearity
    d2 = -(f.f(w.phi ** 2) + w.beta) * w.phi
    poly = interpolate.BPoly.from_derivatives(
        w.x, np.column_stack([w.phi, w.dphi, d2])[:, :, None], extrapolate=False)
    dpoly = poly.derivative()

    def profile(x):
        xc = np.clip(x, w.x[0], w.x[-1])
        return np.asarray(poly(xc))[..., 0], np.asarray(dpoly(xc))[..., 0]

    return profile


def _wave_rhs(f, beta):
    def rhs(_, y):
        return [y[1], -(float(f.f(y[0] * y[0])) + beta) * y[0]]
    return rhs


def _half_period(f, beta, bc, amp, t_cap):
    """Time from the start point to the next zero of phi (dirichlet) or phi'."""
    if bc == "dirichlet":
        y0 = [0.0, amp]

        def event(_, y):
            return y[0]
    else:
        y0 = [amp, 0.0]

        def event(_, y):
            return y[1]
    event.terminal = True
    # skip the start point itself, where the event function vanishes
    eps = 1e-9 * t_cap
    start = integrate.solve_ivp(_wave_rhs(f, beta), (0.0, eps), y0, method="DOP853",
                                rtol=RTOL, atol=ATOL)
    sol = integrate.solve_ivp(_wave_rhs(f, beta), (eps, t_cap), start.y[:, -1],
                              method="DOP853", rtol=RTOL, atol=ATOL, events=event)
    if sol.t_events[0].size:
        return float(sol.t_events[0][0])
    return math.inf


# closed forms for the cubic nonlinearities ---------------------------------


def _cubic_orbit(f, beta, bc, amp):
    """Return (kappa, m, shift, scale, kind, half) describing the elliptic orbit.

    The profile is ``scale * J(kappa x + shift | m)`` with J one of sn/cn/dn;
    ``half`` is the half-period relevant for the boundary condition.  Returns
    None when the start point does not lie on a closed-form family.
    """
    focusing = f.sign > 0
    if focusing and bc == "neumann":
        A = amp
        if beta < 0 and -beta < A * A < -2.0 * beta:
            kappa = A / math.sqrt(2.0)
            m = 2.0 + 2.0 * beta / (A * A)
            K = ellipk(m)
            return kappa, m, 0.0, A, "dn", K / kappa
        kap2 = A * A + beta
        if kap2 > 0 and A * A >= -2.0 * beta:
            kappa = math.sqrt(kap2)
            m = A * A / (2.0 * kap2)
            if m <= 1.0:
                K = ellipk(m)
                return kappa, m, 0.0, A, "cn", 2.0 * K / kappa
        return None
    if focusing and bc == "dirichlet":
        A = math.sqrt(-beta + math.sqrt(beta * beta + 2.0 * amp * amp))
        kap2 = A * A + beta
        if kap2 <= 0:
            return None
        kappa = math.sqrt(kap2)
        m = A * A / (2.0 * kap2)
        if not 0.0 < m < 1.0:
            return None
        K = ellipk(m)
        return kappa, m, -K, A, "cn", 2.0 * K / kappa
    if not focusing and bc == "dirichlet" and beta > 0:
        disc = beta * beta - 2.0 * amp * amp
        if disc <= 0:
            return None
        A = math.sqrt(beta - math.sqrt(disc))
        kap2 = beta - 0.5 * A * A
        kappa = math.sqrt(kap2)
        m = A * A / (2.0 * kap2)
        if not 0.0 < m < 1.0:
            return None
        K = ellipk(m)
        return kappa, m, 0.0, A, "sn", 2.0 * K / kappa
    return None


def _cubic_profile(orbit):
    kappa, m, shift, A, kind, _ = orbit

    def profile(x):
        u = kappa * np.asarray(x, dtype=float) + shift
        sn, cn, dn = eval_jacobi(u, m)
        sn, cn, dn = np.asarray(sn), np.asarray(cn), np.asarray(dn)
        if kind == "sn":
            return A * sn, A * kappa * cn * dn
        if kind == "cn":
            return A * cn, -A * kappa * sn * dn
        return A * dn, -A * kappa * m * sn * cn

    return profile


# shooting ------------------------------------------------------------------


def _shoot(period_fn, target, lo, hi, scan=64):
    """First amplitude in [lo, hi] with period_fn(a) == target."""
    amps = np.linspace(lo, hi, scan + 1)
    vals = []
    for a in amps:
        t = period_fn(a)
        vals.append(t - target if math.isfinite(t) else math.inf)
    for i in range(scan):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            return float(amps[i])
        if math.isfinite(a) and math.isfinite(b) and a * b < 0:
            return optimize.brentq(lambda z: period_fn(z) - target, amps[i], amps[i + 1],
                                   xtol=1e-14, maxiter=200)
        if math.isfinite(a) != math.isfinite(b):
            # the period map leaves the admissible region inside this cell;
            # refine the boundary and retry on the finite side
            fin, inf = (amps[i], amps[i + 1]) if math.isfinite(a) else (amps[i + 1], amps[i])
            for _ in range(60):
                mid = 0.5 * (fin + inf)
                if math.isfinite(period_fn(mid)):
                    fin = mid
                else:
                    inf = mid
            vf = period_fn(fin) - target
            va = a if math.isfinite(a) else b
            if vf * va < 0:
                left, right = sorted((fin, amps[i] if math.isfinite(a) else amps[i + 1]))
                return optimize.brentq(lambda z: period_fn(z) - target, left, right,
                                       xtol=1e-14, maxiter=200)
    raise NoWaveError(
        f"no orbit with the requested period in amplitude range [{lo}, {hi}]")


def solve_standing_wave(f, beta, ell, bc, branch, grid=DEFAULT_GRID, cross_check=True):
    """Solve the stationary equation on [0, ell] on the given branch.

    The free initial value (slope for Dirichlet, amplitude for Neumann) is
    tuned so that ``ell`` equals the branch's number of half-periods.
    """
    if bc not in ("dirichlet", "neumann"):
        raise DomainError(f"unknown boundary condition {bc!r}")
    if not ell > 0:
        raise DomainError("ell must be positive")
    if grid < MIN_GRID:
        raise DomainError(f"grid size must be at least {MIN_GRID}")
    k = branch.half_periods(bc)
    target = ell / k
    lo, hi = branch.amplitude
    t_cap = 2.0 * target + 1.0

    closed = f.is_cubic and _cubic_orbit(f, beta, bc, 0.5 * (lo + hi)) is not None

    if closed:
        def period_fn(a):
            orb = _cubic_orbit(f, beta, bc, a)
            return orb[5] if orb is not None else math.inf
    else:
        def period_fn(a):
            return _half_period(f, beta, bc, a, t_cap)

    amp = _shoot(period_fn, target, lo, hi)
    a0, b0 = (0.0, amp) if bc == "dirichlet" else (amp, 0.0)

    sol = integrate.solve_ivp(_wave_rhs(f, beta), (0.0, ell), [a0, b0], method="DOP853",
                              rtol=RTOL, atol=ATOL, dense_output=True)
    if not sol.success:
        raise NoWaveError(f"integration of the profile failed: {sol.message}")

    def ode_profile(x):
        xa = np.asarray(x, dtype=float)
        y = sol.sol(xa.ravel())
        return y[0].reshape(xa.shape), y[1].reshape(xa.shape)

    profile = ode_profile
    x = np.linspace(0.0, ell, grid)
    if closed:
        profile = _cubic_profile(_cubic_orbit(f, beta, bc, amp))
        if cross_check:
            pa, da = profile(x)
            pb, db = ode_profile(x)
            scale = max(np.max(np.abs(pa)), 1e-300)
            dev = max(np.max(np.abs(pa - pb)), np.max(np.abs(da - db))) / scale
            if dev > 1e-8:
                raise NoWaveError(
                    f"closed-form and integrated profiles differ by {dev:.3e}")
    phi, dphi = profile(x)
    phi = np.array(phi, dtype=float)
    dphi = np.array(dphi, dtype=float)
    if f.kind == "custom":
        f.check_derivative(phi ** 2)
    w = StandingWave(beta=float(beta), ell=float(ell), bc=bc, nonlinearity=f, branch=branch,
                     a0=float(a0), b0=float(b0), x=x, phi=phi, dphi=dphi, profile=profile)
    _validate(w)
    return w


def _validate(w):
    scale = np.max(np.abs(w.phi))
    ends = (w.phi[0], w.phi[-1]) if w.bc == "dirichlet" else (w.dphi[0], w.dphi[-1])
    if max(abs(ends[0]), abs(ends[1])) > 1e-10 * max(scale, 1e-300):
        raise NoWaveError(f"boundary condition violated at the endpoints: {ends!r}")
    crit = _count_sign_changes(w.dphi[1:-1])
    if scale > 0 and crit != w.branch.critical_points:
        raise NoWaveError(
            f"profile has {crit} interior critical points, branch requires "
            f"{w.branch.critical_points}")


def _count_sign_changes(values):
    s = np.sign(values)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


# invariants ----------------------------------------------------------------

# eighth-order central first-derivative stencil
_STENCIL = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])


def wave_residual(w):
    """Sup-norm residual of the stationary equation at interior nodes.

    phi'' is obtained by an eighth-order difference of the sampled phi' and
    compared with -(f(phi^2) + beta) phi; normalized by max|phi|.
    """
    h = w.x[1] - w.x[0]
    d2 = np.convolve(w.dphi, _STENCIL[::-1], mode="valid") / h
    phi = w.phi[4:-4]
    res = d2 + (w.nonlinearity.f(phi ** 2) + w.beta) * phi
    return float(np.max(np.abs(res)) / max(np.max(np.abs(w.phi)), 1e-300))


def hamiltonian_drift(w):
    """Relative variation of 1/2 phi'^2 + 1/2 beta phi^2 + 1/2 F(phi^2)."""
    r = w.phi ** 2
    terms = (0.5 * w.dphi ** 2, 0.5 * w.beta * r, 0.5 * w.nonlinearity.antiderivative(r))
    H = sum(terms)
    scale = max(float(np.max(sum(np.abs(t) for t in terms))), 1e-300)
    return float((np.max(H) - np.min(H)) / scale)


# --------------------------------------------------------------------------
# potentials


@dataclass(frozen=True)
class PotentialPair:
    """Potentials g of L+ = -d^2 - g and h of L- = -d^2 - h on [0, ell].

    ``extends`` marks potentials that may be evaluated beyond ``ell``
    (constants and explicit formulas), which permits rescalings s > 1.
    ``constants`` is set for constant-coefficient pairs.
    """

    g: Callable
    h: Callable
    ell: float
    dg: Optional[Callable] = field(default=None, repr=False)
    dh: Optional[Callable] = field(default=None, repr=False)
    provenance: str = "explicit"
    wave: Optional[StandingWave] = field(default=None, repr=False, compare=False)
    extends: bool = True
    constants: Optional[tuple] = None

    @classmethod
    def constant(cls, c_plus, c_minus, ell=1.0):
        c_plus, c_minus = float(c_plus), float(c_minus)

        def g(x):
            return np.full(np.shape(x), c_plus) if np.ndim(x) else c_plus

        def h(x):
            return np.full(np.shape(x), c_minus) if np.ndim(x) else c_minus

        def zero(x):
            return np.zeros(np.shape(x)) if np.ndim(x) else 0.0

        return cls(g, h, float(ell), zero, zero, "explicit", None, True, (c_plus, c_minus))

    @classmethod
    def cosine_series(cls, g_coeffs, h_coeffs, ell=1.0):
        """g(x) = sum_k a_k cos(k pi x / ell), likewise h."""
        ga = np.asarray(g_coeffs, dtype=float)
        ha = np.asarray(h_coeffs, dtype=float)
        ell = float(ell)

        def series(coeffs, deriv):
            k = np.arange(coeffs.size) * math.pi / ell

            def fn(x):
                xa = np.asarray(x, dtype=float)
                arg = np.multiply.outer(xa, k)
                if deriv:
                    val = -(np.sin(arg) * k) @ coeffs
                else:
                    val = np.cos(arg) @ coeffs
                return float(val) if np.ndim(x) == 0 else val
            return fn

        return cls(series(ga, False), series(ha, False), ell,
                   series(ga, True), series(ha, True), "explicit", None, True, None)

    def sup_norms(self, n=2049):
        x = np.linspace(0.0, self.ell, n)
        return float(np.max(np.abs(self.g(x)))), float(np.max(np.abs(self.h(x))))

    def derivative_g(self, x):
        if self.dg is not None:
            return self.dg(x)
        return _central_diff(self.g, x, self.ell)

    def derivative_h(self, x):
        if self.dh is not None:
            return self.dh(x)
        return _central_diff(self.h, x, self.ell)


def _central_diff(fn, x, ell):
    step = 1e-6 * ell
    xa = np.asarray(x, dtype=float)
    lo = np.clip(xa - step, 0.0, ell)
    hi = np.clip(xa + step, 0.0, ell)
    return (fn(hi) - fn(lo)) / (hi - lo)


def linearized_potentials(w):
    """g = 2 f'(phi^2) phi^2 + f(phi^2) + beta and h = f(phi^2) + beta."""
    f = w.nonlinearity
    beta = w.beta
    ell = w.ell

    def _phi(x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa < -1e-12 * ell) or np.any(xa > ell * (1 + 1e-12)):
            raise DomainError("wave potentials are only defined on [0, ell]")
        return w.profile(np.clip(xa, 0.0, ell))

    def _scalar(x, val):
        return float(val) if np.ndim(x) == 0 else val

    def g(x):
        phi, _ = _phi(x)
        return _scalar(x, f.g_of(phi * phi, beta))

    def h(x):
        phi, _ = _phi(x)
        return _scalar(x, f.h_of(phi * phi, beta))

    def dg(x):
        phi, dphi = _phi(x)
        return _scalar(x, f.dg_dr(phi * phi) * 2.0 * phi * dphi)

    def dh(x):
        phi, dphi = _phi(x)
        return _scalar(x, f.df(phi * phi) * 2.0 * phi * dphi)

    return PotentialPair(g, h, ell, dg, dh, "from_wave", w, False, None)
