import math
import warnings

import numpy as np
import pytest

from maslov_stab.config import family_potentials
from maslov_stab.waves import Branch, Nonlinearity, PotentialPair, solve_standing_wave
from maslov_stab.elliptic import ellipk

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = {}


def report(criterion, ok, detail=""):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
    ACCEPTANCE_LINES[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])


def closed_form_lambdas(c_plus, c_minus, n_max=40):
    """All eigenvalues of the constant problem on [0, 1], as complex numbers."""
    out = []
    for n in range(1, n_max):
        mp = (n * math.pi) ** 2 - c_plus
        mm = (n * math.pi) ** 2 - c_minus
        root = np.sqrt(complex(-mp * mm))
        out += [root, -root]
    return out


def random_cosine_pair(rng, n_terms=4, scale=5.0):
    g = [rng.uniform(-5.0, 60.0)] + list(rng.normal(0.0, scale, n_terms - 1))
    h = [rng.uniform(-5.0, 60.0)] + list(rng.normal(0.0, scale, n_terms - 1))
    return PotentialPair.cosine_series(g, h)


@pytest.fixture(scope="session")
def families():
    return {name: family_potentials(name) for name in ("T1", "T2", "T3", "free")}


POWER_NL = Nonlinearity.power(3)
POWER_BRANCH = Branch((0.01, 20.0), 1)


def power_wave(ell):
    return solve_standing_wave(POWER_NL, -2.0, ell, "dirichlet", POWER_BRANCH)


@pytest.fixture(scope="session")
def power_stable():
    return power_wave(2.12743)


def dnoidal_period(amp, beta=-2.0):
    kappa = amp / math.sqrt(2.0)
    m = 2.0 + 2.0 * beta / amp ** 2
    return 2.0 * ellipk(m) / kappa


@pytest.fixture(scope="session")
def dnoidal_wave():
    """Cubic focusing Neumann wave over three periods."""
    ell = 3.0 * dnoidal_period(1.8)
    return solve_standing_wave(Nonlinearity.cubic_focusing(), -2.0, ell, "neumann",
                               Branch((1.45, 1.99), 5))


@pytest.fixture(scope="session")
def cnoidal_wave():
    """Cubic focusing Dirichlet wave over three half periods, amplitude 2.5."""
    amp, beta = 2.5, -2.0
    k2 = amp ** 2 + beta
    m = amp ** 2 / (2.0 * k2)
    period = 4.0 * ellipk(m) / math.sqrt(k2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return solve_standing_wave(Nonlinearity.cubic_focusing(), beta, 1.5 * period,
                                   "dirichlet", Branch((0.5, 10.0), 3))
