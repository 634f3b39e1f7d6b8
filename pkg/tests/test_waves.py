import json
import math

import mpmath
import numpy as np
import pytest

from conftest import dnoidal_period
from maslov_stab.elliptic import ellipk, eval_jacobi
from maslov_stab.errors import DomainError, NoWaveError
from maslov_stab.waves import (Branch, Nonlinearity, PotentialPair, StandingWave,
                               hamiltonian_drift, linearized_potentials,
                               solve_standing_wave, wave_residual)


# --- Jacobi functions -------------------------------------------------------

def test_jacobi_limits():
    u = np.linspace(-3, 3, 11)
    sn, cn, dn = eval_jacobi(u, 0.0)
    assert np.allclose(sn, np.sin(u), atol=1e-15) and np.allclose(dn, 1.0)
    sn, cn, dn = eval_jacobi(u, 1.0)
    assert np.allclose(sn, np.tanh(u)) and np.allclose(cn, 1 / np.cosh(u))
    sn, cn, dn = eval_jacobi(0.0, 0.5)
    assert (float(sn), float(cn), float(dn)) == (0.0, 1.0, 1.0)


def test_jacobi_quarter_period():
    for m in (0.1, 0.5, 0.9, 0.999):
        sn, cn, dn = eval_jacobi(ellipk(m), m)
        assert abs(sn - 1) < 1e-12 and abs(cn) < 1e-7 and abs(dn - math.sqrt(1 - m)) < 1e-12


def test_jacobi_identities_random():
    rng = np.random.default_rng(0)
    u = rng.uniform(-10, 10, 1000)
    for m in rng.uniform(0, 1, 10):
        sn, cn, dn = eval_jacobi(u, m)
        assert np.max(np.abs(sn ** 2 + cn ** 2 - 1)) < 1e-12
        assert np.max(np.abs(dn ** 2 + m * sn ** 2 - 1)) < 1e-12


def test_jacobi_against_mpmath():
    rng = np.random.default_rng(1)
    for _ in range(40):
        u, m = rng.uniform(-8, 8), rng.uniform(0, 0.999)
        sn, cn, dn = eval_jacobi(u, m)
        for name, val in (("sn", sn), ("cn", cn), ("dn", dn)):
            ref = float(mpmath.ellipfun(name, u, m=m))
            assert abs(val - ref) < 1e-12


def test_jacobi_bad_parameter():
    with pytest.raises(DomainError):
        eval_jacobi(0.3, 1.2)
    with pytest.raises(DomainError):
        ellipk(-0.1)


def test_ellipk_against_mpmath():
    for m in (0.0, 0.3, 0.7, 0.99):
        assert abs(ellipk(m) - float(mpmath.ellipk(m))) < 1e-13


# --- nonlinearities ---------------------------------------------------------

def test_power_one_is_cubic_focusing():
    r = np.linspace(0, 3, 7)
    a, b = Nonlinearity.power(1), Nonlinearity.cubic_focusing()
    assert a.is_cubic and np.allclose(a.f(r), b.f(r)) and np.allclose(a.g_of(r, -2), b.g_of(r, -2))


def test_nonlinearity_validation():
    with pytest.raises(DomainError):
        Nonlinearity.power(0)
    with pytest.raises(DomainError):
        Nonlinearity.from_ident("quintic")
    bad = Nonlinearity.custom(lambda r: r ** 2, lambda r: r)
    with pytest.raises(DomainError):
        bad.check_derivative(np.linspace(0.5, 2, 5))
    Nonlinearity.custom(lambda r: r ** 2, lambda r: 2 * r).check_derivative(np.linspace(0, 2, 5))


def test_nonlinearity_ident_roundtrip():
    for nl in (Nonlinearity.power(3), Nonlinearity.cubic_defocusing()):
        assert Nonlinearity.from_ident(nl.ident) == nl


def test_branch_validation():
    with pytest.raises(DomainError):
        Branch((2.0, 1.0), 1)
    with pytest.raises(DomainError):
        Branch((0.1, 1.0), -1)
    with pytest.raises(DomainError):
        Branch((0.1, 1.0), 0).half_periods("dirichlet")
    assert Branch((0.1, 1.0), 2).half_periods("neumann") == 3


# --- standing waves ---------------------------------------------------------

def test_dnoidal_matches_closed_form(dnoidal_wave):
    w = dnoidal_wave
    amp, kappa = 1.8, 1.8 / math.sqrt(2)
    m = 2.0 - 4.0 / amp ** 2
    assert abs(w.a0 - amp) < 1e-8
    exact = amp * eval_jacobi(kappa * w.x, m)[2]
    assert np.max(np.abs(w.phi - exact)) < 1e-8
    assert w.is_nonvanishing() and w.critical_points == 5
    assert wave_residual(w) < 1e-6 and hamiltonian_drift(w) < 1e-10


def test_cnoidal_dirichlet(cnoidal_wave):
    w = cnoidal_wave
    assert abs(w.phi[0]) < 1e-12 and abs(w.phi[-1]) < 1e-8
    assert abs(np.max(np.abs(w.evaluate(np.linspace(0, w.ell, 20001))[0])) - 2.5) < 1e-6
    assert not w.is_nonvanishing()
    assert wave_residual(w) < 1e-6 and hamiltonian_drift(w) < 1e-10


def test_power_wave_profile(power_stable):
    w = power_stable
    assert abs(w.phi[0]) < 1e-12 and abs(w.phi[-1]) < 1e-8 and np.all(w.phi[1:-1] > 0)
    assert wave_residual(w) < 1e-6 and hamiltonian_drift(w) < 1e-10
    # the profile is symmetric about the midpoint
    phi_mid, dphi_mid = w.evaluate(w.ell / 2)
    assert abs(dphi_mid) < 1e-8


def test_closed_form_and_shooting_agree():
    ell = 2.0 * dnoidal_period(1.8)
    fc = Nonlinearity.cubic_focusing()
    a = solve_standing_wave(fc, -2.0, ell, "neumann", Branch((1.45, 1.99), 3))
    custom = Nonlinearity.custom(lambda r: r, lambda r: np.ones_like(r))
    b = solve_standing_wave(custom, -2.0, ell, "neumann", Branch((1.45, 1.99), 3))
    assert abs(a.a0 - b.a0) < 1e-8
    assert np.max(np.abs(a.phi - b.phi)) < 1e-7


def test_no_wave_in_range():
    with pytest.raises(NoWaveError):
        solve_standing_wave(Nonlinearity.power(3), -2.0, 2.12743, "dirichlet",
                            Branch((5.0, 6.0), 1))


def test_solver_input_validation():
    nl = Nonlinearity.power(3)
    with pytest.raises(DomainError):
        solve_standing_wave(nl, -2.0, 1.0, "periodic", Branch((0.1, 2), 1))
    with pytest.raises(DomainError):
        solve_standing_wave(nl, -2.0, -1.0, "dirichlet", Branch((0.1, 2), 1))
    with pytest.raises(DomainError):
        solve_standing_wave(nl, -2.0, 1.0, "dirichlet", Branch((0.1, 2), 1), grid=100)


def test_wave_json_roundtrip(power_stable):
    w = power_stable
    back = StandingWave.from_dict(json.loads(json.dumps(w.to_dict())))
    assert back == w
    assert np.array_equal(back.phi, w.phi)
    xs = np.linspace(0, w.ell, 37)
    assert np.max(np.abs(back.evaluate(xs)[0] - w.evaluate(xs)[0])) < 1e-9


# --- potentials -------------------------------------------------------------

def test_kernel_identities(dnoidal_wave):
    """L- phi = 0 and L+ phi' = 0 for the linearized operators."""
    w = dnoidal_wave
    p = linearized_potentials(w)
    x = np.linspace(0.05, w.ell - 0.05, 400)
    phi, dphi = w.evaluate(x)
    d = 1e-4
    dd = lambda fn: (fn(x + d) - 2 * fn(x) + fn(x - d)) / d ** 2
    lminus = -dd(lambda t: w.evaluate(t)[0]) - p.h(x) * phi
    lplus = -dd(lambda t: w.evaluate(t)[1]) - p.g(x) * dphi
    assert np.max(np.abs(lminus)) < 1e-5 and np.max(np.abs(lplus)) < 1e-5


def test_potential_derivatives(power_stable):
    p = linearized_potentials(power_stable)
    x = np.linspace(0.1, power_stable.ell - 0.1, 50)
    d = 1e-5
    assert np.max(np.abs((p.g(x + d) - p.g(x - d)) / (2 * d) - p.dg(x))) < 1e-5
    assert np.max(np.abs((p.h(x + d) - p.h(x - d)) / (2 * d) - p.dh(x))) < 1e-5
    assert not p.extends
    with pytest.raises(DomainError):
        p.g(power_stable.ell * 1.5)


def test_constant_and_cosine_pairs():
    p = PotentialPair.constant(3.0, -1.0, 2.0)
    assert p.g(0.7) == 3.0 and np.all(p.h(np.ones(4)) == -1.0) and p.ell == 2.0
    q = PotentialPair.cosine_series([1.0, 2.0], [0.0, -1.0], ell=2.0)
    x = np.linspace(0, 2, 9)
    assert np.allclose(q.g(x), 1 + 2 * np.cos(math.pi * x / 2))
    assert np.allclose(q.dh(x), math.pi / 2 * np.sin(math.pi * x / 2))
