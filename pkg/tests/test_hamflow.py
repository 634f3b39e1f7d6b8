import math

import numpy as np
import pytest

from maslov_stab.errors import DomainError
from maslov_stab.hamflow import (SYMPLECTIC_J, SampledPair, fundamental_matrix, greens_residual,
                                 lagrangian_residual, omega, propagate, rescaled_trace,
                                 sweep_char_det, sweep_x_blocks, x_block)
from maslov_stab.spectra import char_det
from maslov_stab.waves import PotentialPair, linearized_potentials


def test_free_block_is_linear():
    p = PotentialPair.constant(0.0, 0.0, 1.5)
    for s in (0.2, 1.0):
        X = x_block(p, 0.0, s)
        assert np.allclose(X, np.diag([s * 1.5, -s * 1.5]), atol=1e-12)


def test_constant_block_closed_form():
    cp, cm, ell, s = 7.0, 3.0, 1.3, 0.8
    X = x_block(PotentialPair.constant(cp, cm, ell), 0.0, s)
    expect = np.diag([math.sin(s * math.sqrt(cp) * ell) / math.sqrt(cp),
                      -math.sin(s * math.sqrt(cm) * ell) / math.sqrt(cm)])
    assert np.allclose(X, expect, atol=1e-11)


def test_char_det_vanishes_at_closed_form_root():
    # T3: lam = pi^2 / sqrt(2) is an eigenvalue at s = 1
    p = PotentialPair.constant(2 * math.pi ** 2, 0.5 * math.pi ** 2)
    lam = math.pi ** 2 / math.sqrt(2)
    assert abs(char_det(p, lam, 1.0)) < 1e-10
    assert abs(char_det(p, lam + 0.1, 1.0)) > 1e-4


def test_liouville_and_lagrangian():
    p = PotentialPair.cosine_series([30.0, 4.0, -2.0], [5.0, 1.0])
    for lam, s in ((-7.0, 0.3), (0.0, 1.0), (12.5, 0.9)):
        fr = fundamental_matrix(p, lam, s)
        assert abs(np.linalg.det(fr.phi) - 1.0) < 1e-9
        assert lagrangian_residual(fr) < 1e-10


def test_composition_property():
    p = PotentialPair.cosine_series([20.0, 3.0], [2.0, -1.0], ell=1.0)
    full = fundamental_matrix(p, 2.0, 0.7).phi
    half = fundamental_matrix(p, 2.0, 0.7, x_end=0.5).phi
    rest = propagate(p, 2.0, 0.7, 0.5, 1.0, np.eye(4))
    assert np.allclose(rest @ half, full, atol=1e-10)


def test_sweep_matches_adaptive():
    p = PotentialPair.cosine_series([25.0, 3.0], [4.0, -1.0])
    lams = np.array([-3.0, 0.0, 2.0, 8.0])
    ss = np.array([0.2, 0.5, 0.9, 1.0])
    swept = sweep_char_det(p, lams, ss)
    exact = [char_det(p, a, b) for a, b in zip(lams, ss)]
    assert np.allclose(swept, exact, atol=1e-8, rtol=1e-7)
    same_s = sweep_x_blocks(p, lams, 0.9)
    assert np.allclose(same_s[:, 0, 0], [x_block(p, a, 0.9)[0, 0] for a in lams], atol=1e-8)


def test_omega_is_antisymmetric():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=8), rng.normal(size=8)
    assert omega(a, b) == pytest.approx(-omega(b, a))
    assert abs(omega(a, a)) < 1e-14
    assert np.allclose(SYMPLECTIC_J @ SYMPLECTIC_J, -np.eye(8))


def test_rescaled_trace():
    tr = rescaled_trace((1, 2, 3, 4, 5, 6, 7, 8), 0.5)
    assert np.allclose(tr, [1, 2, 3, 4, -10, 12, 14, -16])
    with pytest.raises(DomainError):
        rescaled_trace((0,) * 8, 0.0)


def test_s_domain_checks(power_stable):
    p = PotentialPair.constant(1.0, 1.0)
    with pytest.raises(DomainError):
        x_block(p, 0.0, 0.0)
    with pytest.raises(DomainError):
        x_block(linearized_potentials(power_stable), 0.0, 1.2)
    # explicit potentials may be rescaled beyond 1
    x_block(p, 0.0, 1.2)


def test_greens_identity_on_known_pair():
    x = np.linspace(0.0, 1.0, 2049)
    p = PotentialPair.constant(3.0, -2.0)
    a = SampledPair(x, np.sin(2 * x), np.cos(x), 2 * np.cos(2 * x), -np.sin(x),
                    -4 * np.sin(2 * x), -np.cos(x))
    b = SampledPair(x, x ** 2, np.exp(x), 2 * x, np.exp(x), 2 + 0 * x, np.exp(x))
    assert greens_residual(a, b, p, 1.7, 0.6) < 1e-10
