"""Crossing forms, curve concavities, the corner term and the box count.

Kernel functions handed to the forms are L^2-normalized on [0, ell].  A
kernel (u, v) lies in the L+ component when v vanishes identically and in
the L- component when u does; this only happens at lam = 0, where the
system decouples.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import (ConsistencyError, DegenerateCrossingWarning, DomainError,
                     FredholmError, NongenericTangencyError, NotACrossingError,
                     PreconditionError, UnresolvedCornerError)
from .hamflow import inner
from .spectra import (conjugate_points, crossing_at, has_kernel, morse_index,
                      real_eigenvalues, solve_curve_s)

FORM_TOL = 1e-8
DEGENERATE_SDDOT = 1e-7
ORTHO_TOL = 1e-8


@dataclass(frozen=True)
class FormMatrix:
    """A small symmetric matrix together with its inertia."""

    matrix: np.ndarray
    n_plus: int
    n_minus: int

    @property
    def signature(self):
        return self.n_plus - self.n_minus

    def to_dict(self):
        m = np.atleast_2d(self.matrix)
        return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
                "data": [float(t) for t in m.ravel()],
                "n_plus": self.n_plus, "n_minus": self.n_minus, "signature": self.signature}


def _form(M, tol=FORM_TOL):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    M = 0.5 * (M + M.T)
    ev = np.linalg.eigvalsh(M)
    return FormMatrix(M, int(np.count_nonzero(ev > tol)), int(np.count_nonzero(ev < -tol)))


def _component(k):
    """'Lplus', 'Lminus' or None for a coupled kernel function."""
    nu = float(np.max(np.abs(k.u)))
    nv = float(np.max(np.abs(k.v)))
    if nv <= 1e-12 * max(nu, 1e-300):
        return "Lplus"
    if nu <= 1e-12 * max(nv, 1e-300):
        return "Lminus"
    return None


def _require_crossing(c):
    if c is None or c.kernel_dim == 0:
        raise NotACrossingError("kernel is trivial")


# ---------------------------------------------------------------------------
# first-order forms


def crossing_form_s(c, p):
    """Crossing form in the s direction.

    At lam0 = 0 this is the boundary expression (ell/s0^2)(-u'u' + v'v') at
    x = ell; otherwise the interior integral of the s-derivative of the
    rescaled potentials together with the spectral shift.
    """
    _require_crossing(c)
    s0, lam0, ell = c.s0, c.lambda0, c.ell
    k = c.kernel
    n = len(k)
    M = np.zeros((n, n))
    if lam0 == 0.0:
        for i in range(n):
            for j in range(n):
                M[i, j] = ell / s0 ** 2 * (-k[i].du[-1] * k[j].du[-1] + k[i].dv[-1] * k[j].dv[-1])
        return _form(M)
    x = c.x
    sx = s0 * x
    a_g = 2.0 * s0 * np.asarray(p.g(sx)) + s0 * s0 * x * np.asarray(p.derivative_g(sx))
    a_h = 2.0 * s0 * np.asarray(p.h(sx)) + s0 * s0 * x * np.asarray(p.derivative_h(sx))
    for i in range(n):
        for j in range(n):
            M[i, j] = (inner(a_h * k[i].v, k[j].v, x) - inner(a_g * k[i].u, k[j].u, x)) / s0 \
                - 2.0 * lam0 * (inner(k[i].u, k[j].v, x) + inner(k[i].v, k[j].u, x))
    return _form(M)


def crossing_form_lambda(c):
    """Crossing form in the lam direction, -s0 <u_i, S u_j> symmetrized."""
    _require_crossing(c)
    k = c.kernel
    n = len(k)
    M = np.zeros((n, n))
    x = c.x
    for i in range(n):
        for j in range(n):
            if i == j and c.lambda0 == 0.0:
                continue  # one component vanishes identically
            M[i, j] = -c.s0 * (inner(k[i].u, k[j].v, x) + inner(k[i].v, k[j].u, x))
    return _form(M)


# ---------------------------------------------------------------------------
# inhomogeneous Dirichlet problems


def _fundamental_pair(q, x):
    """Solutions p (1, 0) and y (0, 1) of w'' + q w = 0 sampled on x."""
    def rhs(t, w):
        qt = float(q(t))
        return [w[1], -qt * w[0], w[3], -qt * w[2]]

    sol = integrate.solve_ivp(rhs, (x[0], x[-1]), [1.0, 0.0, 0.0, 1.0], method="DOP853",
                              rtol=1e-12, atol=1e-14, dense_output=True)
    if not sol.success:
        raise PreconditionError(f"fundamental pair integration failed: {sol.message}")
    return sol.sol(x)


def solve_inhomogeneous(q, sign_convention, rhs, ell, x=None):
    """Dirichlet solution of L+ w = F or -L- w = F with L = -d^2 - q.

    ``sign_convention`` is ``"Lplus_eq"`` for -w'' - q w = F and
    ``"minus_Lminus_eq"`` for w'' + q w = F.  ``rhs`` holds samples of F on
    the uniform grid ``x`` (default: linspace over [0, ell] matching rhs).
    Variation of parameters with the pair initialised at the identity (unit
    Wronskian).  If the operator has a kernel, F must be orthogonal to it
    and the solution orthogonal to the kernel is returned.
    """
    if sign_convention == "Lplus_eq":
        sgn = -1.0
    elif sign_convention == "minus_Lminus_eq":
        sgn = 1.0
    else:
        raise DomainError(f"unknown sign convention {sign_convention!r}")
    F = sgn * np.asarray(rhs, dtype=float)
    if x is None:
        x = np.linspace(0.0, ell, F.size)
    st = _fundamental_pair(q, x)
    pf, dpf, y, dy = st
    wr = pf * dy - dpf * y
    if np.max(np.abs(wr - 1.0)) > 1e-8:
        raise PreconditionError(f"Wronskian drifted to {np.max(np.abs(wr - 1.0)):.2e}")
    ip = integrate.cumulative_simpson(pf * F, x=x, initial=0.0)
    iy = integrate.cumulative_simpson(y * F, x=x, initial=0.0)
    w = y * ip - pf * iy
    radius = math.hypot(y[-1], ell * dy[-1])
    if abs(y[-1]) > 1e-8 * radius:
        return w - (w[-1] / y[-1]) * y
    # resonant case: y spans the kernel
    fn = math.sqrt(inner(F, F, x))
    yn = math.sqrt(inner(y, y, x))
    if abs(inner(F, y, x)) > 1e-8 * max(fn * yn, 1e-300):
        raise FredholmError("right-hand side is not orthogonal to the kernel")
    return w - inner(w, y, x) / (yn * yn) * y


def _rescaled(fn, s0):
    def q(x):
        return s0 * s0 * fn(s0 * x)
    return q


# ---------------------------------------------------------------------------
# second order


@dataclass(frozen=True)
class GeneralizedKernel:
    """Solution of the inhomogeneous problem for one kernel function."""

    component: str
    solution: np.ndarray = field(repr=False)
    pairing: float          # <u_hat, v> or <v_hat, u>


def generalized_kernel(c, p):
    """Solve L+ u_hat = v (L- kernels) or -L- v_hat = u (L+ kernels)."""
    if c.lambda0 != 0.0:
        raise PreconditionError("generalized kernels are only built at lam0 = 0")
    x = c.x
    out = []
    for k in c.kernel:
        comp = _component(k)
        if comp == "Lminus":
            sol = solve_inhomogeneous(_rescaled(p.g, c.s0), "Lplus_eq", k.v, c.ell, x)
            out.append(GeneralizedKernel(comp, sol, inner(sol, k.v, x)))
        elif comp == "Lplus":
            sol = solve_inhomogeneous(_rescaled(p.h, c.s0), "minus_Lminus_eq", k.u, c.ell, x)
            out.append(GeneralizedKernel(comp, sol, inner(sol, k.u, x)))
        else:
            raise PreconditionError("kernel function is not confined to one component")
    return out


def second_order_form(c, p, first=None):
    """Second-order lam form -2 s0^3 <generalized kernel, S kernel>."""
    _require_crossing(c)
    first = crossing_form_lambda(c) if first is None else first
    if np.max(np.abs(first.matrix)) > FORM_TOL:
        raise PreconditionError("first-order lam form does not vanish")
    gk = generalized_kernel(c, p)
    M = np.diag([-2.0 * c.s0 ** 3 * g.pairing for g in gk])
    form = _form(M)
    if np.min(np.abs(np.diag(M))) < FORM_TOL:
        warnings.warn("second-order form is degenerate", DegenerateCrossingWarning, stacklevel=2)
    return form, gk


@dataclass(frozen=True)
class CrossingFormReport:
    at: object
    m_s: FormMatrix
    m_lambda: FormMatrix
    m_lambda2: Optional[FormMatrix] = None
    generalized: tuple = field(default=(), repr=False)

    def to_dict(self):
        c = self.at
        return {"lambda0": c.lambda0, "s0": c.s0, "kernel_dim": c.kernel_dim,
                "which_kernel": c.which_kernel, "m_s": self.m_s.to_dict(),
                "m_lambda": self.m_lambda.to_dict(),
                "m_lambda2": None if self.m_lambda2 is None else self.m_lambda2.to_dict(),
                "pairings": [g.pairing for g in self.generalized]}


def crossing_forms(c, p):
    m_s = crossing_form_s(c, p)
    m_l = crossing_form_lambda(c)
    m2, gk = None, ()
    if c.lambda0 == 0.0 and np.max(np.abs(m_l.matrix)) <= FORM_TOL:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateCrossingWarning)
            m2, gk = second_order_form(c, p, m_l)
    return CrossingFormReport(c, m_s, m_l, m2, tuple(gk))


# ---------------------------------------------------------------------------
# concavity of eigenvalue curves at lam = 0


@dataclass(frozen=True)
class ConcavityReport:
    """Second derivatives of the curves s(lam) through (0, s0).

    ``components`` lists the kernel component of each curve ('Lplus' or
    'Lminus'); ``sddot``, ``s_sharp`` and ``vk_integrals`` follow that order.
    ``isolated`` marks a double kernel with <u1, v2> != 0, where no curve
    passes through the crossing.
    """

    s0: float
    components: tuple
    sddot: tuple
    s_sharp: tuple
    vk_integrals: tuple
    degenerate: bool = False
    isolated: bool = False
    tangency_check: Optional[float] = None
    sdot0: float = 0.0
    from_fallback: bool = False

    def to_dict(self):
        return {"s0": self.s0, "sdot0": self.sdot0, "components": list(self.components),
                "sddot": list(self.sddot),
                "s_sharp": [None if t is None else int(t) for t in self.s_sharp],
                "vk_integrals": list(self.vk_integrals), "degenerate": self.degenerate,
                "isolated": self.isolated, "tangency_check": self.tangency_check,
                "from_fallback": self.from_fallback}


def _side_of_curve(p, s0, deltas=(2e-2, 1e-2, 5e-3)):
    """Which side of s0 the curve through (0, s0) leaves on, by local root finding."""
    hi = s0 + 0.05 if p.extends else s0
    votes = []
    for d in deltas:
        for lam in (-d, d):
            roots = solve_curve_s(p, lam, max(s0 - 0.05, 1e-3), hi, probes=40)
            if not roots:
                if not p.extends:
                    votes.append(1)  # nothing below s0 and s cannot exceed s0
                continue
            r = min(roots, key=lambda t: abs(t - s0))
            votes.append(1 if r > s0 else -1)
    if votes and all(v == votes[0] for v in votes):
        return votes[0]
    return None


def concavity(c, p):
    """Concavities of the eigenvalue curves through a conjugate point at lam = 0."""
    _require_crossing(c)
    if c.lambda0 != 0.0:
        raise PreconditionError("concavity formulas apply at lam0 = 0")
    if c.kernel_dim > 2:
        raise DomainError("kernel dimension above two")
    s0, ell = c.s0, c.ell
    comps = tuple(_component(k) for k in c.kernel)
    if c.kernel_dim == 2:
        i1, i2 = comps.index("Lplus"), comps.index("Lminus")
        u1, v2 = c.kernel[i1].u, c.kernel[i2].v
        overlap = inner(u1, v2, c.x)
        if abs(overlap) > ORTHO_TOL:
            return ConcavityReport(s0, comps, (math.nan, math.nan), (None, None), (overlap,),
                                   isolated=True)
    gk = generalized_kernel(c, p)
    sdd = []
    for k, g in zip(c.kernel, gk):
        if g.component == "Lminus":
            sdd.append(2.0 * s0 ** 5 / ell * g.pairing / k.dv[-1] ** 2)
        else:
            sdd.append(-2.0 * s0 ** 5 / ell * g.pairing / k.du[-1] ** 2)
    check = None
    if c.kernel_dim == 2:
        a = gk[i1].pairing / c.kernel[i1].du[-1] ** 2
        b = gk[i2].pairing / c.kernel[i2].dv[-1] ** 2
        check = a + b
        if abs(check) <= 1e-8 * (abs(a) + abs(b)):
            raise NongenericTangencyError(
                "tangency condition vanishes; curves coincide to second order")
    degenerate = any(abs(t) < DEGENERATE_SDDOT for t in sdd)
    sharp = [int(np.sign(t)) if abs(t) >= DEGENERATE_SDDOT else None for t in sdd]
    fallback = False
    if degenerate and c.kernel_dim == 1:
        sharp = [_side_of_curve(p, s0)]
        fallback = True
    return ConcavityReport(s0, comps, tuple(float(t) for t in sdd), tuple(sharp),
                           tuple(float(g.pairing) for g in gk), degenerate, False, check,
                           0.0, fallback)


# ---------------------------------------------------------------------------
# corner term


def correction_term(c, conc, p=None):
    """Corner contribution in {-1, 0, 1} of the conjugate point at (0, 1).

    ``c`` is the crossing at lam = 0, s = 1 or None.  When ``p`` is given
    and the concavities come from the formulas, the value is cross-checked
    against the negative index of the second-order form.
    """
    if c is None:
        return 0
    if conc is None:
        raise PreconditionError("a concavity report is needed at a conjugate point")
    if conc.isolated:
        return 0
    if any(t is None for t in conc.s_sharp):
        raise UnresolvedCornerError("side of the eigenvalue curve could not be decided",
                                    interval=(-1, 1))
    sharp = dict(zip(conc.components, conc.s_sharp))
    if c.kernel_dim == 1:
        if "Lplus" in sharp:
            val = 0 if sharp["Lplus"] > 0 else -1
        else:
            val = 0 if sharp["Lminus"] > 0 else 1
    else:
        pair = (sharp["Lplus"], sharp["Lminus"])
        val = {(1, -1): 1, (-1, 1): -1}.get(pair, 0)
    if p is not None and not conc.from_fallback:
        m2, _ = second_order_form(c, p)
        n_kernel_minus = sum(1 for t in conc.components if t == "Lminus")
        if val - n_kernel_minus != -m2.n_minus:
            raise ConsistencyError(
                f"corner term {val} disagrees with second-order form index {m2.n_minus}")
    return val


# ---------------------------------------------------------------------------
# the box


@dataclass(frozen=True)
class MaslovBoxReport:
    P: int
    Q: int
    gamma2_index: int
    corner_c: int
    gamma3_index: int
    lower_bound: int
    conjugate_points: tuple = ()
    corner: Optional[object] = field(default=None, repr=False)
    concavity: Optional[ConcavityReport] = None
    gamma3_recount: Optional[int] = None
    positive_roots: tuple = ()

    @property
    def box_sum(self):
        return self.gamma2_index + self.corner_c + self.gamma3_index

    def to_dict(self):
        return {"P": self.P, "Q": self.Q, "gamma2_index": self.gamma2_index,
                "corner_c": self.corner_c, "gamma3_index": self.gamma3_index,
                "lower_bound": self.lower_bound,
                "conjugate_points": [list(t) for t in self.conjugate_points],
                "concavity": None if self.concavity is None else self.concavity.to_dict(),
                "gamma3_recount": self.gamma3_recount,
                "positive_roots": list(self.positive_roots)}


def lambda_infinity(p):
    """Bound beyond which no real eigenvalue of the rescaled problems lies."""
    return 1.1 * max(p.sup_norms()) + 1.0


def _quiet_morse(q, ell):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return morse_index(q, ell)


def maslov_box(p, recount=False, steps=2000):
    """Index bookkeeping around the box [0, lam_inf] x [tau, 1].

    With ``recount`` the top edge is re-indexed independently by summing the
    signs of the lam-forms of the positive real roots at s = 1.
    """
    ell = p.ell
    P = _quiet_morse(p.g, ell)
    Q = _quiet_morse(p.h, ell)
    pts = sorted({round(t, 12) for t in conjugate_points(p.g, ell) + conjugate_points(p.h, ell)
                  if t < 1.0 - 1e-8})
    gamma2 = 0
    listing = []
    for s0 in pts:
        c = crossing_at(p, 0.0, s0, tol=1e-6)
        sig = crossing_form_s(c, p).signature
        gamma2 += sig
        listing.append((float(s0), c.which_kernel, sig))
    if gamma2 != Q - P:
        raise ConsistencyError(f"left edge index {gamma2} differs from Q - P = {Q - P}")

    corner, conc = None, None
    if has_kernel(p.g, ell) or has_kernel(p.h, ell):
        corner = crossing_at(p, 0.0, 1.0, tol=1e-6,
                             force_dim=int(has_kernel(p.g, ell)) + int(has_kernel(p.h, ell)))
        conc = concavity(corner, p)
    c_val = correction_term(corner, conc, p)
    gamma3 = P - Q - c_val

    tally, roots = None, ()
    if recount:
        lam_inf = lambda_infinity(p)
        eps = 1e-3 * lam_inf
        found = real_eigenvalues(p, 1.0, (eps, lam_inf), steps=steps)
        roots = tuple(float(r.lambda0) for r in found)
        total = 0
        for r in found:
            m = crossing_form_lambda(r)
            if r.kernel_dim != 1 or m.n_plus + m.n_minus != 1:
                total = None
                break
            total += m.signature
        tally = total
    return MaslovBoxReport(P, Q, gamma2, c_val, gamma3, abs(gamma3), tuple(listing), corner,
                           conc, tally, roots)
