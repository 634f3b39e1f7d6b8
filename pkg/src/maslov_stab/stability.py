"""Stability verdicts for standing waves and Krein-index cross-checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import (ConsistencyError, ContinuationError, ContradictionError, NoWaveError,
                     NondegeneracyError, PreconditionError, UnresolvedCornerError)
from .hamflow import inner, quad_grid
from .maslov import (_fundamental_pair, _quiet_morse, generalized_kernel, lambda_infinity,
                     maslov_box, solve_inhomogeneous)
from .spectra import crossing_at, fd_spectrum, has_kernel, real_eigenvalues
from .waves import linearized_potentials, solve_standing_wave

AXIS_TOL = 1e-4
KREIN_TOL = 1e-6


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class StabilityReport:
    P: int
    Q: int
    kernel_case: str
    corner_c: Optional[int]
    lower_bound: Optional[int]
    vk_integral: Optional[float]
    sddot: tuple
    verdict: str
    evidence: tuple
    positive_roots: tuple = ()
    corner_interval: Optional[tuple] = None

    def to_dict(self):
        return {"P": self.P, "Q": self.Q, "kernel_case": self.kernel_case,
                "corner_c": self.corner_c, "lower_bound": self.lower_bound,
                "vk_integral": self.vk_integral, "sddot": list(self.sddot),
                "verdict": self.verdict, "evidence": list(self.evidence),
                "positive_roots": list(self.positive_roots),
                "corner_interval": None if self.corner_interval is None
                else list(self.corner_interval)}


def _kernel_case(p):
    kp = has_kernel(p.g, p.ell)
    km = has_kernel(p.h, p.ell)
    if kp and km:
        return "double_kernel"
    if kp:
        return "Lplus_kernel"
    if km:
        return "Lminus_kernel"
    return "no_kernel"


def _positive_roots(p, steps):
    lam_inf = lambda_infinity(p)
    found = real_eigenvalues(p, 1.0, (1e-3 * lam_inf, lam_inf), steps=steps)
    return tuple(float(c.lambda0) for c in found)


def assess(p, bc=None, nonvanishing=False, interior_critical=False, locate_roots=True,
           steps=2000):
    """Verdict for a potential pair; wave-level facts are passed as flags."""
    case = _kernel_case(p)
    evidence = []
    try:
        box = maslov_box(p)
    except UnresolvedCornerError as exc:
        P, Q = _quiet_morse(p.g, p.ell), _quiet_morse(p.h, p.ell)
        roots = _positive_roots(p, steps) if locate_roots else ()
        verdict = "unstable_real_eigenvalue" if roots else "inconclusive"
        evidence.append("corner-unresolved")
        if roots:
            evidence.append("root-located")
        lo, hi = exc.interval
        bounds = tuple(sorted({abs(P - Q - c) for c in range(lo, hi + 1)}))
        return StabilityReport(P, Q, case, None, min(bounds), None, (), verdict,
                               tuple(evidence), roots, tuple(exc.interval))
    P, Q, c_val, bound = box.P, box.Q, box.corner_c, box.lower_bound
    conc = box.concavity
    sdd = tuple(conc.sddot) if conc is not None else ()
    vk = float(conc.vk_integrals[0]) if conc is not None and case != "double_kernel" else None
    verdict = None
    degenerate = conc is not None and conc.degenerate

    if case == "double_kernel":
        evidence.append("Hyp2.2-violated")
        verdict = "inconclusive"
    if verdict is None and degenerate:
        evidence.append("degenerate-sddot")
        verdict = "inconclusive"
    if verdict is None:
        # Jones-Grillakis exclusion
        d = P - Q
        if (case == "Lplus_kernel" and d not in (-1, 0)) or (case == "Lminus_kernel"
                                                             and d not in (0, 1)):
            evidence.append("Cor2.3")
            verdict = "unstable_real_eigenvalue"
        if bc == "neumann" and nonvanishing and interior_critical and case == "Lplus_kernel":
            evidence.append("Cor2.4")
            if sdd and sdd[0] <= 0:
                raise ContradictionError("concavity of a nonvanishing Neumann wave is not positive")
            verdict = verdict or "unstable_real_eigenvalue"
    if verdict is None:
        edge = ((P, Q, case) == (1, 0, "Lminus_kernel"), (P, Q, case) == (0, 1, "Lplus_kernel"))
        if any(edge):
            tag = "Thm2.7-case1" if edge[0] else "Thm2.7-case2"
            evidence.append(tag)
            verdict = ("unstable_real_eigenvalue" if sdd[0] > 0
                       else "spectrally_stable_imaginary_axis")
    if verdict is None and bound >= 1:
        evidence.append("Thm2.1")
        verdict = "unstable_real_eigenvalue"
    if verdict is None:
        evidence.append("no-rule")
        verdict = "inconclusive"

    roots = _positive_roots(p, steps) if locate_roots else ()
    if locate_roots:
        if verdict == "unstable_real_eigenvalue" and not roots:
            raise ConsistencyError("instability predicted but no positive real root located")
        if verdict == "spectrally_stable_imaginary_axis" and roots:
            raise ConsistencyError(f"stability predicted but real roots {roots} located")
    return StabilityReport(P, Q, case, c_val, bound, vk, sdd, verdict, tuple(evidence), roots)


def stability_report(w, locate_roots=True, steps=2000):
    """Full verdict for a standing wave."""
    p = linearized_potentials(w)
    nonconstant = float(np.max(np.abs(w.dphi))) > 1e-10 * max(float(np.max(np.abs(w.phi))), 1e-300)
    return assess(p, bc=w.bc, nonvanishing=w.is_nonvanishing() and nonconstant,
                  interior_critical=w.critical_points >= 1, locate_roots=locate_roots,
                  steps=steps)


# ---------------------------------------------------------------------------
# Neumann concavity sign


@dataclass(frozen=True)
class NeumannConcavity:
    sign: int
    bracket: float          # int p^2 - p(ell) ell^2 / q(ell)
    integral: float         # <w, phi'> with L- w = phi'


def neumann_concavity_sign(w, n=4097):
    """Sign of the curve concavity for a Neumann wave from the fundamental pair of L-."""
    if w.bc != "neumann":
        raise PreconditionError("needs a Neumann wave")
    scale = float(np.max(np.abs(w.phi)))
    if float(np.max(np.abs(w.dphi))) <= 1e-10 * max(scale, 1e-300):
        raise PreconditionError("constant wave: phi' is not an eigenfunction")
    p = linearized_potentials(w)
    x = quad_grid(w.ell, n)
    pf, _, q, _ = _fundamental_pair(p.h, x)
    if abs(q[-1]) < 1e-10:
        raise ContradictionError("q(ell) vanishes: 0 would be an eigenvalue of L-")
    ell = w.ell
    bracket = float(integrate.simpson(pf * pf, x=x)) - pf[-1] / q[-1] * ell * ell
    phi0 = float(w.evaluate(0.0)[0])
    val = phi0 * phi0 / 4.0 * bracket
    return NeumannConcavity(int(np.sign(bracket)), float(bracket), float(val))


# ---------------------------------------------------------------------------
# Vakhitov-Kolokolov type integral from a beta family


@dataclass(frozen=True)
class VKResult:
    value: float            # from the beta family
    pairing: float          # <u_hat, phi> from the inhomogeneous solve
    family: str
    correction: float
    rel_diff: float


def _mass(phi, x):
    return float(integrate.simpson(phi * phi, x=x))


def _richardson(fn, beta, delta):
    d1 = (fn(beta + delta) - fn(beta - delta)) / (2 * delta)
    d2 = (fn(beta + 2 * delta) - fn(beta - 2 * delta)) / (4 * delta)
    return (4 * d1 - d2) / 3


def classical_vk(w, family="dirichlet", delta=1e-4, rtol=1e-4, n=4097):
    """Half the beta-derivative of the mass, with the boundary correction if needed.

    ``family='dirichlet'`` re-solves the wave at nearby beta keeping both
    Dirichlet conditions; ``family='fixed_slope'`` varies beta in the
    initial value problem with phi(0) = 0, phi'(0) = b0 fixed, and adds the
    boundary correction built from the fundamental pair of L+.  Both are
    compared with <u_hat, phi>, L+ u_hat = phi.
    """
    if w.bc != "dirichlet":
        raise PreconditionError("the beta family is built for Dirichlet waves")
    p = linearized_potentials(w)
    if has_kernel(p.g, w.ell):
        raise PreconditionError("L+ has a kernel")
    x = quad_grid(w.ell, n)
    phi0 = np.asarray(w.evaluate(x)[0])
    u_hat = solve_inhomogeneous(p.g, "Lplus_eq", phi0, w.ell, x)
    pairing = inner(u_hat, phi0, x)

    if family == "dirichlet":
        def mass(beta):
            try:
                wb = solve_standing_wave(w.nonlinearity, beta, w.ell, w.bc, w.branch,
                                         grid=len(w.x), cross_check=False)
            except NoWaveError as exc:
                raise ContinuationError(f"no wave near beta={beta}: {exc}") from exc
            return _mass(np.asarray(wb.evaluate(x)[0]), x)

        value = 0.5 * _richardson(mass, w.beta, delta)
        corr = 0.0
    elif family == "fixed_slope":
        f = w.nonlinearity

        def state(beta):
            def rhs(_, y):
                return [y[1], -(f.f(y[0] * y[0]) + beta) * y[0]]
            sol = integrate.solve_ivp(rhs, (0.0, w.ell), [0.0, w.b0], method="DOP853",
                                      rtol=1e-12, atol=1e-13, dense_output=True)
            if not sol.success:
                raise ContinuationError(f"initial value problem failed at beta={beta}")
            return sol.sol(x)

        value = 0.5 * _richardson(lambda b: _mass(state(b)[0], x), w.beta, delta)
        psi = _richardson(lambda b: state(b), w.beta, delta)
        a, b, dpsi_l = float(psi[0, 0]), float(psi[0, -1]), float(psi[1, -1])
        _, _, q, _ = _fundamental_pair(p.g, x)
        Q = _quiet_morse(p.h, w.ell)
        sg = (-1) ** Q
        corr = (sg * a + b) * ((a + sg * b) / q[-1] + dpsi_l)
        value += corr
    else:
        raise PreconditionError(f"unknown family {family!r}")
    rel = abs(value - pairing) / max(abs(pairing), 1e-300)
    if rel > rtol:
        raise ConsistencyError(f"beta-family value {value} differs from <u_hat, phi> = {pairing}")
    return VKResult(float(value), float(pairing), family, float(corr), float(rel))


# ---------------------------------------------------------------------------
# Krein index cross-check


@dataclass(frozen=True)
class KreinReport:
    D_plus: np.ndarray
    D_minus: np.ndarray
    n_minus_Dplus: int
    n_minus_Dminus: int
    corner_c: int
    identity_c: bool
    P: int
    Q: int
    gamma3_index: int
    k_r: int
    k_c: int
    k_i_minus: int
    indeterminate: int
    rhs: int
    kks_balance: bool
    form_P: bool
    form_Q: bool
    cor_PQ0: Optional[bool]
    cor_kr0: Optional[bool]
    gker_hypothesis: bool
    oracle: tuple = field(default=(), repr=False)

    def to_dict(self):
        return {
            "D_plus": np.atleast_2d(self.D_plus).tolist() if self.D_plus.size else [],
            "D_minus": np.atleast_2d(self.D_minus).tolist() if self.D_minus.size else [],
            "n_minus_Dplus": self.n_minus_Dplus, "n_minus_Dminus": self.n_minus_Dminus,
            "corner_c": self.corner_c, "identity_c": self.identity_c,
            "P": self.P, "Q": self.Q, "gamma3_index": self.gamma3_index,
            "k_r": self.k_r, "k_c": self.k_c, "k_i_minus": self.k_i_minus,
            "indeterminate": self.indeterminate, "rhs": self.rhs,
            "kks_balance": self.kks_balance, "form_P": self.form_P, "form_Q": self.form_Q,
            "cor_PQ0": self.cor_PQ0, "cor_kr0": self.cor_kr0,
            "gker_hypothesis": self.gker_hypothesis,
        }


def _n_minus(D):
    if D.size == 0:
        return 0
    ev = np.linalg.eigvalsh(D)
    if np.min(np.abs(ev)) < 1e-10:
        raise NondegeneracyError("D matrix is singular")
    return int(np.count_nonzero(ev < 0))


def classify_oracle(eigs, tol=AXIS_TOL, krein_tol=KREIN_TOL):
    """Counts (k_r, k_c, k_i_minus, indeterminate, zeros) from oracle eigenvalues."""
    k_r = k_c = k_i = indet = zeros = 0
    for e in eigs:
        re, im = e.value.real, e.value.imag
        if abs(re) <= tol and abs(im) <= tol:
            zeros += 1
        elif abs(im) <= tol and re > tol:
            k_r += 1
        elif re > tol and im > tol:
            k_c += 1
        elif abs(re) <= tol and im > tol:
            if not math.isfinite(e.krein_value) or abs(e.krein_value) < krein_tol:
                indet += 1
            elif e.krein_value < 0:
                k_i += 1
    return k_r, k_c, k_i, indet, zeros


def krein_analysis(p, n=256, keep=None):
    """D matrices, the corner identity and the Krein count balance."""
    box = maslov_box(p)
    kp = has_kernel(p.g, p.ell)
    km = has_kernel(p.h, p.ell)
    Dm = np.zeros((0, 0))
    Dp = np.zeros((0, 0))
    if kp or km:
        c = crossing_at(p, 0.0, 1.0, tol=1e-6, force_dim=int(kp) + int(km))
        gk = generalized_kernel(c, p)
        x = c.x
        plus = [(k, g) for k, g in zip(c.kernel, gk) if g.component == "Lplus"]
        minus = [(k, g) for k, g in zip(c.kernel, gk) if g.component == "Lminus"]
        Dm = np.array([[-inner(gi.solution, kj.u, x) for kj, _ in plus] for _, gi in plus])
        Dp = np.array([[inner(gi.solution, kj.v, x) for kj, _ in minus] for _, gi in minus])
        Dm = Dm.reshape(len(plus), len(plus))
        Dp = Dp.reshape(len(minus), len(minus))
    nm_p = _n_minus(Dp)
    nm_m = _n_minus(Dm)
    identity = box.corner_c == nm_p - nm_m

    eigs = fd_spectrum(p, 1.0, n=n, keep=keep)
    k_r, k_c, k_i, indet, zeros = classify_oracle(eigs)
    dim_ker = int(kp) + int(km)
    P, Q, g3 = box.P, box.Q, box.gamma3_index
    lhs = k_r + 2 * k_c + 2 * k_i
    rhs = P + Q - nm_m - nm_p
    pq_zero = (k_c == 0 and k_i == 0) if (P == 0 or Q == 0) else None
    kr_zero = None
    if k_r == 0 or P == 0 or Q == 0:
        kr_zero = (k_c + k_i == Q - nm_m) and (k_c + k_i == P - nm_p)
    return KreinReport(Dp, Dm, nm_p, nm_m, box.corner_c, identity, P, Q, g3, k_r, k_c, k_i,
                       indet, rhs, lhs == rhs and indet == 0, lhs == -g3 + 2 * P - 2 * nm_p,
                       lhs == g3 + 2 * Q - 2 * nm_m, pq_zero, kr_zero, zeros == 2 * dim_ker,
                       tuple(eigs))
