import json
import math

import numpy as np
import pytest

from maslov_stab.errors import DomainError, FredholmError, PreconditionError
from maslov_stab.maslov import (concavity, correction_term, crossing_form_lambda,
                                crossing_form_s, crossing_forms, generalized_kernel,
                                lambda_infinity, maslov_box, second_order_form,
                                solve_inhomogeneous)
from maslov_stab.spectra import crossing_at
from maslov_stab.waves import PotentialPair

PI2 = math.pi ** 2


def corner(cp, cm):
    p = PotentialPair.constant(cp, cm)
    c = crossing_at(p, 0.0, 1.0)
    return correction_term(c, concavity(c, p), p)


def test_crossing_forms_t1(families):
    p = families["T1"]
    c = crossing_at(p, 0.0, 1.0)
    m_s = crossing_form_s(c, p)
    assert np.allclose(m_s.matrix, np.diag([-18 * PI2, 8 * PI2]), rtol=1e-9, atol=1e-8)
    assert (m_s.n_plus, m_s.n_minus, m_s.signature) == (1, 1, 0)
    m_l = crossing_form_lambda(c)
    assert np.max(np.abs(m_l.matrix)) < 1e-12
    m2, gk = second_order_form(c, p)
    assert np.allclose(np.diag(m2.matrix), [2 / (5 * PI2)] * 2, rtol=1e-9)
    assert m2.n_minus == 0


def test_generalized_kernel_t1(families):
    p = families["T1"]
    c = crossing_at(p, 0.0, 1.0)
    gk = generalized_kernel(c, p)
    assert [g.component for g in gk] == ["Lplus", "Lminus"]
    # hat functions are -kernel / (5 pi^2) in both components
    assert np.allclose(gk[0].solution, -c.kernel[0].u / (5 * PI2), atol=1e-10)
    assert np.allclose(gk[1].solution, -c.kernel[1].v / (5 * PI2), atol=1e-10)
    assert gk[0].pairing == pytest.approx(-1 / (5 * PI2), rel=1e-9)


def test_second_order_t2(families):
    p = families["T2"]
    rep = crossing_forms(crossing_at(p, 0.0, 1.0), p)
    assert rep.m_s.matrix[0, 0] == pytest.approx(8 * PI2, rel=1e-9)
    assert rep.m_lambda2.matrix[0, 0] == pytest.approx(-1 / PI2, rel=1e-9)
    json.dumps(rep.to_dict())


def test_hadamard_slope_t3(families):
    p = families["T3"]
    cp, cm = p.constants
    lam0 = PI2 / math.sqrt(2)

    def lam_of(s):
        return math.sqrt(-(PI2 - s * s * cp) * (PI2 - s * s * cm)) / (s * s)

    h = 1e-5
    slope = (lam_of(1 + h) - lam_of(1 - h)) / (2 * h)
    c = crossing_at(p, lam0, 1.0)
    m_s, m_l = crossing_form_s(c, p).matrix[0, 0], crossing_form_lambda(c).matrix[0, 0]
    assert m_l > 0
    assert -m_s / m_l == pytest.approx(slope, rel=1e-7)
    assert slope == pytest.approx(-PI2 / math.sqrt(2), rel=1e-7)
    with pytest.raises(PreconditionError):
        second_order_form(c, p)


def test_concavity_values(families):
    p = families["T1"]
    conc = concavity(crossing_at(p, 0.0, 1.0), p)
    assert conc.sddot[0] == pytest.approx(1 / (45 * PI2 ** 2), rel=1e-8)
    assert conc.sddot[1] == pytest.approx(-1 / (20 * PI2 ** 2), rel=1e-8)
    assert conc.s_sharp == (1, -1) and not conc.degenerate and not conc.isolated
    assert conc.tangency_check != 0
    with pytest.raises(PreconditionError):
        concavity(crossing_at(families["T3"], PI2 / math.sqrt(2), 1.0), families["T3"])


def test_solve_inhomogeneous_closed_forms():
    x = np.linspace(0.0, 2.0, 2049)
    zero = PotentialPair.constant(0.0, 0.0, 2.0).g
    w = solve_inhomogeneous(zero, "Lplus_eq", np.ones_like(x), 2.0, x)
    assert np.allclose(w, x * (2.0 - x) / 2, atol=1e-10)
    w = solve_inhomogeneous(zero, "minus_Lminus_eq", np.ones_like(x), 2.0, x)
    assert np.allclose(w, x * (x - 2.0) / 2, atol=1e-10)
    with pytest.raises(DomainError):
        solve_inhomogeneous(zero, "Lzero", np.ones_like(x), 2.0, x)


def test_solve_inhomogeneous_resonant():
    x = np.linspace(0.0, 1.0, 2049)
    q = PotentialPair.constant(PI2, 0.0).g
    with pytest.raises(FredholmError):
        solve_inhomogeneous(q, "Lplus_eq", np.sin(math.pi * x), 1.0, x)
    w = solve_inhomogeneous(q, "Lplus_eq", np.sin(2 * math.pi * x), 1.0, x)
    assert np.allclose(w, np.sin(2 * math.pi * x) / (3 * PI2), atol=1e-9)


@pytest.mark.parametrize("cp, cm, expected", [
    (PI2, 0.5 * PI2, 0),         # L+ kernel, curve bends up
    (PI2, 2.0 * PI2, -1),        # L+ kernel, curve bends down
    (0.5 * PI2, PI2, 0),         # L- kernel, curve bends up
    (2.0 * PI2, PI2, 1),         # L- kernel, curve bends down
    (9 * PI2, 4 * PI2, 1),       # orthogonal double kernel, (+, -)
    (4 * PI2, 9 * PI2, -1),      # orthogonal double kernel, (-, +)
])
def test_corner_table(cp, cm, expected):
    assert corner(cp, cm) == expected


def test_isolated_double_kernel():
    p = PotentialPair.constant(PI2, PI2)
    c = crossing_at(p, 0.0, 1.0)
    conc = concavity(c, p)
    assert conc.isolated and correction_term(c, conc) == 0
    assert correction_term(None, None) == 0


@pytest.mark.parametrize("name, P, Q, c, bound", [
    ("T1", 2, 1, 1, 0), ("T2", 1, 1, 0, 0), ("T3", 1, 0, 0, 1), ("free", 0, 0, 0, 0),
])
def test_maslov_box_families(families, name, P, Q, c, bound):
    box = maslov_box(families[name])
    assert (box.P, box.Q, box.corner_c, box.lower_bound) == (P, Q, c, bound)
    assert box.box_sum == 0
    assert box.gamma2_index == Q - P
    json.dumps(box.to_dict())


def test_maslov_box_t1_conjugate_points(families):
    box = maslov_box(families["T1"])
    pts = [(round(s, 9), kind) for s, kind, _ in box.conjugate_points]
    assert pts == [(round(1 / 3, 9), "Lplus"), (0.5, "Lminus"), (round(2 / 3, 9), "Lplus")]


def test_lambda_infinity_bounds_spectrum(families):
    p = families["T3"]
    assert lambda_infinity(p) > PI2 / math.sqrt(2)
    assert lambda_infinity(families["free"]) >= 1.0
