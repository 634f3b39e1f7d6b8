"""Run configuration: a YAML document validated with line-anchored errors.

Defaults
--------
=========================  ===============  =====================================
key                        default          meaning
=========================  ===============  =====================================
windows.lambda             [-3.0, 3.0]      lam range for curve tracing
windows.s                  [0.05, 1.0]      s range for curve tracing
resolutions.n_lambda       400              lam grid points for curve tracing
resolutions.n_s            400              s grid points for curve tracing
resolutions.lambda_steps   2000             scan points for real roots at s = 1
resolutions.oracle_n       256              finite-difference oracle grid
resolutions.wave_grid      1024             samples of the wave profile
tolerances.kernel          1e-8             relative singular value cut-off
tolerances.tangency        1e-2             tangency flag threshold on curves
outputs                    [report_json]    any of curves_csv, report_json,
                                            oracle_csv, plotdata
seed                       0                randomized checks
=========================  ===============  =====================================

The ``problem`` section holds exactly one of ``wave``, ``family`` (T1, T2,
T3 or free), ``constants`` ([c_plus, c_minus]) or ``cosine`` ({g: [...],
h: [...]}); the last two take an optional ``ell`` (default 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import yaml

from .errors import ConfigError, DomainError
from .waves import Branch, Nonlinearity, PotentialPair, linearized_potentials, solve_standing_wave

OUTPUT_KINDS = ("curves_csv", "report_json", "oracle_csv", "plotdata")
FAMILIES = {
    "T1": (9.0, 4.0),
    "T2": (2.0, 4.0),
    "T3": (2.0, 0.5),
    "free": (0.0, 0.0),
}


def family_potentials(name):
    """Built-in constant families; coefficients are multiples of pi^2 on [0, 1]."""
    try:
        a, b = FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}") from None
    return PotentialPair.constant(a * math.pi ** 2, b * math.pi ** 2, 1.0)


@dataclass
class RunConfig:
    problem: dict
    lam_window: tuple = (-3.0, 3.0)
    s_window: tuple = (0.05, 1.0)
    n_lambda: int = 400
    n_s: int = 400
    lambda_steps: int = 2000
    oracle_n: int = 256
    wave_grid: int = 1024
    kernel_tol: float = 1e-8
    tangency_tol: float = 1e-2
    outputs: tuple = ("report_json",)
    seed: int = 0
    lines: dict = field(default_factory=dict, repr=False)

    def has_wave(self):
        return "wave" in self.problem

    def build_wave(self):
        spec = self.problem["wave"]
        return solve_standing_wave(spec["nonlinearity"], spec["beta"], spec["ell"], spec["bc"],
                                   spec["branch"], grid=self.wave_grid)

    def build_potentials(self, wave=None):
        pr = self.problem
        if "wave" in pr:
            return linearized_potentials(wave if wave is not None else self.build_wave())
        if "family" in pr:
            return family_potentials(pr["family"])
        if "constants" in pr:
            a, b = pr["constants"]
            return PotentialPair.constant(a, b, pr.get("ell", 1.0))
        return PotentialPair.cosine_series(pr["cosine"]["g"], pr["cosine"]["h"],
                                           pr.get("ell", 1.0))


# ---------------------------------------------------------------------------
# parsing


def _line_map(node, prefix=(), out=None):
    """Map key paths to 1-based source lines of a composed YAML tree."""
    out = {} if out is None else out
    out[prefix] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            key = k.value
            out[prefix + (key,)] = k.start_mark.line + 1
            _line_map(v, prefix + (key,), out)
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _line_map(v, prefix + (i,), out)
    return out


class _Reader:
    def __init__(self, data, lines):
        self.data = data
        self.lines = lines

    def fail(self, path, msg):
        line = None
        for k in range(len(path), -1, -1):
            if tuple(path[:k]) in self.lines:
                line = self.lines[tuple(path[:k])]
                break
        raise ConfigError(f"{'.'.join(str(p) for p in path) or '<root>'}: {msg}", line)

    def get(self, path, default=None):
        cur = self.data
        for key in path:
            if isinstance(cur, dict) and key in cur:
                cur = cur[key]
            elif isinstance(cur, list) and isinstance(key, int) and 0 <= key < len(cur):
                cur = cur[key]
            else:
                return default
        return cur

    def convert(self, path, val, positive=False):
        try:
            out = float(val)  # plain YAML reads 1e-8 as a string
        except (TypeError, ValueError):
            self.fail(path, f"expected a number, got {val!r}")
        if isinstance(val, bool) or not math.isfinite(out):
            self.fail(path, f"expected a finite number, got {val!r}")
        if positive and out <= 0:
            self.fail(path, "must be positive")
        return out

    def number(self, path, default=None, positive=False):
        return self.convert(path, self.get(path, default), positive)

    def integer(self, path, default, minimum=None):
        val = self.get(path, default)
        if isinstance(val, bool) or not isinstance(val, int):
            self.fail(path, f"expected an integer, got {val!r}")
        if minimum is not None and val < minimum:
            self.fail(path, f"must be at least {minimum}")
        return val

    def window(self, path, default):
        val = self.get(path, default)
        if not isinstance(val, (list, tuple)) or len(val) != 2:
            self.fail(path, "expected a two-element list [lo, hi]")
        lo = self.convert(path + (0,), val[0])
        hi = self.convert(path + (1,), val[1])
        if not lo < hi:
            self.fail(path, "range is empty")
        return (lo, hi)


_TOP_KEYS = {"problem", "windows", "resolutions", "tolerances", "outputs", "seed"}


def _parse_wave(r, base):
    spec = r.get(base)
    if not isinstance(spec, dict):
        r.fail(base, "expected a mapping")
    for key in ("nonlinearity", "beta", "ell", "bc", "branch"):
        if key not in spec:
            r.fail(base, f"missing key {key!r}")
    try:
        nl = Nonlinearity.from_ident(str(spec["nonlinearity"]))
    except (DomainError, ValueError) as exc:
        r.fail(base + ("nonlinearity",), str(exc))
    bc = spec["bc"]
    if bc not in ("dirichlet", "neumann"):
        r.fail(base + ("bc",), "must be 'dirichlet' or 'neumann'")
    br = spec["branch"]
    if not isinstance(br, dict) or "amplitude" not in br or "critical_points" not in br:
        r.fail(base + ("branch",), "needs 'amplitude' and 'critical_points'")
    amp = r.window(base + ("branch", "amplitude"), None)
    crit = r.integer(base + ("branch", "critical_points"), None, minimum=0)
    try:
        branch = Branch(amp, crit)
        branch.half_periods(bc)
    except DomainError as exc:
        r.fail(base + ("branch",), str(exc))
    return {"nonlinearity": nl, "beta": r.number(base + ("beta",)),
            "ell": r.number(base + ("ell",), positive=True), "bc": bc, "branch": branch}


def _parse_problem(r):
    pr = r.get(("problem",))
    if not isinstance(pr, dict):
        r.fail(("problem",), "missing or not a mapping")
    kinds = [k for k in ("wave", "family", "constants", "cosine") if k in pr]
    if len(kinds) != 1:
        r.fail(("problem",), "give exactly one of wave, family, constants, cosine")
    kind = kinds[0]
    out = {}
    if kind == "wave":
        out["wave"] = _parse_wave(r, ("problem", "wave"))
    elif kind == "family":
        if pr["family"] not in FAMILIES:
            r.fail(("problem", "family"), f"unknown family {pr['family']!r}")
        out["family"] = pr["family"]
    elif kind == "constants":
        val = pr["constants"]
        if not isinstance(val, list) or len(val) != 2:
            r.fail(("problem", "constants"), "expected [c_plus, c_minus]")
        out["constants"] = [r.number(("problem", "constants", i)) for i in range(2)]
    else:
        cs = pr["cosine"]
        if not isinstance(cs, dict) or "g" not in cs or "h" not in cs:
            r.fail(("problem", "cosine"), "needs coefficient lists g and h")
        out["cosine"] = {k: [r.number(("problem", "cosine", k, i)) for i in range(len(cs[k]))]
                         for k in ("g", "h")}
    if kind in ("constants", "cosine"):
        out["ell"] = r.number(("problem", "ell"), 1.0, positive=True)
    return out


def parse_config(text):
    """Parse and validate a YAML configuration document."""
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"YAML syntax error: {getattr(exc, 'problem', exc)}",
                          None if mark is None else mark.line + 1) from None
    if node is None or not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping", 1)
    lines = _line_map(node)
    r = _Reader(data, lines)
    for key in data:
        if key not in _TOP_KEYS:
            r.fail((key,), "unknown key")
    problem = _parse_problem(r)
    cfg = RunConfig(problem=problem, lines=lines)
    cfg.lam_window = r.window(("windows", "lambda"), [-3.0, 3.0])
    cfg.s_window = r.window(("windows", "s"), [0.05, 1.0])
    if cfg.s_window[0] <= 0:
        r.fail(("windows", "s"), "s must stay positive")
    cfg.n_lambda = r.integer(("resolutions", "n_lambda"), 400, minimum=16)
    cfg.n_s = r.integer(("resolutions", "n_s"), 400, minimum=16)
    cfg.lambda_steps = r.integer(("resolutions", "lambda_steps"), 2000, minimum=16)
    cfg.oracle_n = r.integer(("resolutions", "oracle_n"), 256, minimum=64)
    cfg.wave_grid = r.integer(("resolutions", "wave_grid"), 1024, minimum=512)
    cfg.kernel_tol = r.number(("tolerances", "kernel"), 1e-8, positive=True)
    cfg.tangency_tol = r.number(("tolerances", "tangency"), 1e-2, positive=True)
    outs = r.get(("outputs",), ["report_json"])
    if not isinstance(outs, list):
        r.fail(("outputs",), "expected a list")
    for i, o in enumerate(outs):
        if o not in OUTPUT_KINDS:
            r.fail(("outputs", i), f"unknown output {o!r}; choose from {', '.join(OUTPUT_KINDS)}")
    cfg.outputs = tuple(outs)
    cfg.seed = r.integer(("seed",), 0, minimum=0)
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)
