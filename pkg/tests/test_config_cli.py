import csv
import json
import textwrap

import pytest

from maslov_stab import cli
from maslov_stab.config import RunConfig, parse_config
from maslov_stab.errors import ConfigError

POWER_WAVE = """\
problem:
  wave:
    nonlinearity: "power:3.0"
    beta: -2.0
    ell: 2.12743
    bc: dirichlet
    branch: {amplitude: [0.01, 20.0], critical_points: 1}
outputs: [report_json, oracle_csv]
resolutions: {oracle_n: 128}
"""


def write(tmp_path, text, name="run.yaml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return str(path)


def test_defaults():
    cfg = parse_config("problem: {family: T1}\n")
    assert isinstance(cfg, RunConfig)
    assert cfg.lam_window == (-3.0, 3.0) and cfg.s_window == (0.05, 1.0)
    assert (cfg.n_lambda, cfg.n_s, cfg.oracle_n) == (400, 400, 256)
    assert cfg.kernel_tol == 1e-8 and cfg.outputs == ("report_json",) and cfg.seed == 0
    assert cfg.build_potentials().constants is not None


def test_wave_problem_parses():
    cfg = parse_config(POWER_WAVE)
    assert cfg.has_wave()
    spec = cfg.problem["wave"]
    assert spec["nonlinearity"].p == 3.0 and spec["branch"].critical_points == 1


def test_cosine_and_constants():
    cfg = parse_config("problem:\n  cosine: {g: [1, 2], h: [0.5]}\n  ell: 2\n")
    p = cfg.build_potentials()
    assert p.ell == 2.0 and p.g(0.0) == pytest.approx(3.0)
    cfg = parse_config("problem: {constants: [1.5, 2.5]}\n")
    assert cfg.build_potentials().constants == (1.5, 2.5)


@pytest.mark.parametrize("text, line", [
    ("problem: {family: T9}\n", 1),
    ("problem: {family: T1}\nwindows:\n  lambda: [3, -3]\n", 3),
    ("problem: {family: T1}\nresolutions:\n  n_s: 4\n", 3),
    ("problem: {family: T1}\ntolerances:\n  kernel: -1\n", 3),
    ("problem: {family: T1}\noutputs:\n  - report_json\n  - movie\n", 4),
    ("problem: {family: T1}\nbogus: 1\n", 2),
    ("problem: {family: T1, constants: [1, 2]}\n", 1),
    ("problem:\n  family: T1\nwindows:\n  s: [0.0, 1.0]\n", 4),
    ("problem: [\n", 2),
])
def test_config_errors_carry_lines(text, line):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line == line


def test_wave_config_errors():
    bad = POWER_WAVE.replace("bc: dirichlet", "bc: periodic")
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert err.value.line == 6
    bad = POWER_WAVE.replace("critical_points: 1", "critical_points: 0")
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert err.value.line == 7


def test_cli_config_error_exit(tmp_path, capsys):
    path = write(tmp_path, "problem: {family: T1}\nresolutions:\n  n_s: 2\n")
    assert cli.main(["curves", "--config", path, "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    assert "line 3" in capsys.readouterr().err
    assert cli.main(["curves", "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    assert cli.main(["check", "--threads", "0", "--out", str(tmp_path)]) == cli.EXIT_CONFIG


def test_cli_check(tmp_path, capsys):
    assert cli.main(["check", "--out", str(tmp_path)]) == cli.EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out and all(line.startswith("PASS") for line in out)
    data = json.loads((tmp_path / "check.json").read_text())
    assert all(c["passed"] for c in data["checks"])


def test_cli_curves_deterministic(tmp_path):
    text = """\
    problem: {family: T1}
    windows: {lambda: [-3, 3], s: [0.05, 1.0]}
    resolutions: {n_lambda: 24, n_s: 20}
    outputs: [curves_csv, plotdata, report_json]
    """
    path = write(tmp_path, text)
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        assert cli.main(["curves", "--config", path, "--out", str(d), "--threads", "2"]) == 0
        outs.append({n: (d / n).read_bytes() for n in ("curves.csv", "grid.csv", "curves.json")})
    assert outs[0] == outs[1]
    rows = list(csv.reader((tmp_path / "run0" / "curves.csv").read_text().splitlines()))
    assert rows[0] == ["branch_id", "lambda", "s"] and len(rows) > 20
    grid = list(csv.reader((tmp_path / "run0" / "grid.csv").read_text().splitlines()))
    assert grid[0] == ["lambda", "s", "detX"] and len(grid) == 24 * 20 + 1


def test_cli_wave_and_stability(tmp_path):
    path = write(tmp_path, POWER_WAVE)
    assert cli.main(["wave", "--config", path, "--out", str(tmp_path)]) == 0
    wave = json.loads((tmp_path / "wave.json").read_text())
    assert wave["bc"] == "dirichlet" and len(wave["grid"]) >= 512
    assert cli.main(["stability", "--config", path, "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["stability"]["verdict"] == "spectrally_stable_imaginary_axis"
    assert report["stability"]["evidence"] == ["Thm2.7-case1"]
    header = (tmp_path / "oracle.csv").read_text().splitlines()[0]
    assert header == "re,im,krein_value"


def test_cli_krein(tmp_path):
    path = write(tmp_path, "problem: {family: T1}\noutputs: [report_json, oracle_csv]\n")
    assert cli.main(["krein", "--config", path, "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "krein.json").read_text())
    assert rep["identity_c"] and rep["kks_balance"] and rep["k_i_minus"] == 1


def test_cli_wave_needs_wave(tmp_path):
    path = write(tmp_path, "problem: {family: T1}\n")
    assert cli.main(["wave", "--config", path, "--out", str(tmp_path)]) == cli.EXIT_CONFIG
