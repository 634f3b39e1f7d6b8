"""Command line front end: ``maslov-stab <command> --config FILE``.

Exit status: 0 success, 2 configuration error, 3 numerical failure,
4 unresolved corner term.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings

import numpy as np

from . import config as cfgmod
from .errors import ConfigError, DomainError, NumericalError, UnresolvedCornerError
from .hamflow import fundamental_matrix, lagrangian_residual
from .maslov import maslov_box
from .spectra import (char_det_grid, fd_negative_count, fd_spectrum, morse_index,
                      real_eigenvalues, trace_curves)
from .stability import assess, krein_analysis, stability_report

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_CORNER = 0, 2, 3, 4


def _num(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def _clean_json(obj):
    if isinstance(obj, dict):
        return {str(k): _clean_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean_json(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_clean_json(obj), fh, indent=2, allow_nan=False)
        fh.write("\n")


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for row in rows:
            wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                         for v in row])


def _oracle_rows(eigs):
    return [(float(e.value.real), float(e.value.imag),
             float(e.krein_value) if math.isfinite(e.krein_value) else "nan") for e in eigs]


# ---------------------------------------------------------------------------
# commands


def cmd_wave(cfg, out, threads):
    if not cfg.has_wave():
        raise ConfigError("the wave command needs problem.wave", cfg.lines.get(("problem",)))
    w = cfg.build_wave()
    write_json(os.path.join(out, "wave.json"), w.to_dict())
    write_csv(os.path.join(out, "wave.csv"), ["x", "phi", "dphi"],
              zip(w.x.tolist(), w.phi.tolist(), w.dphi.tolist()))
    return EXIT_OK


def cmd_curves(cfg, out, threads):
    p = cfg.build_potentials()
    lam_lo, lam_hi = cfg.lam_window
    s_lo, s_hi = cfg.s_window
    lams = np.linspace(lam_lo, lam_hi, cfg.n_lambda)
    ss = np.linspace(s_lo, s_hi, cfg.n_s)
    D = char_det_grid(p, lams, ss, threads)
    curves = trace_curves(p, cfg.lam_window, cfg.s_window, cfg.n_lambda, cfg.n_s, threads,
                          grid=D, tangency_tol=cfg.tangency_tol)
    outputs = set(cfg.outputs) | {"curves_csv"}
    if "curves_csv" in outputs:
        rows = [(c.branch_id, float(a), float(b)) for c in curves for a, b in c.points]
        write_csv(os.path.join(out, "curves.csv"), ["branch_id", "lambda", "s"], rows)
    if "plotdata" in outputs:
        rows = [(float(lams[j]), float(ss[i]), float(D[i, j]))
                for i in range(ss.size) for j in range(lams.size)]
        write_csv(os.path.join(out, "grid.csv"), ["lambda", "s", "detX"], rows)
    if "report_json" in outputs:
        write_json(os.path.join(out, "curves.json"),
                   {"curves": [{"branch_id": c.branch_id, "points": int(len(c.points)),
                                "tangent_points": int(np.count_nonzero(c.tangency_flags))}
                               for c in curves]})
    return EXIT_OK


def cmd_stability(cfg, out, threads):
    if cfg.has_wave():
        w = cfg.build_wave()
        report = stability_report(w, steps=cfg.lambda_steps)
        p = cfg.build_potentials(w)
    else:
        p = cfg.build_potentials()
        report = assess(p, steps=cfg.lambda_steps)
    data = {"stability": report.to_dict()}
    if report.corner_c is not None:
        data["box"] = maslov_box(p).to_dict()
    if "report_json" in cfg.outputs:
        write_json(os.path.join(out, "report.json"), data)
    if "oracle_csv" in cfg.outputs:
        write_csv(os.path.join(out, "oracle.csv"), ["re", "im", "krein_value"],
                  _oracle_rows(fd_spectrum(p, 1.0, n=cfg.oracle_n)))
    return EXIT_OK


def cmd_krein(cfg, out, threads):
    p = cfg.build_potentials()
    rep = krein_analysis(p, n=cfg.oracle_n)
    if "report_json" in cfg.outputs:
        write_json(os.path.join(out, "krein.json"), rep.to_dict())
    if "oracle_csv" in cfg.outputs:
        write_csv(os.path.join(out, "oracle.csv"), ["re", "im", "krein_value"],
                  _oracle_rows(rep.oracle))
    return EXIT_OK


def _closed_form_roots(cp, cm, n_max=30):
    roots = []
    for n in range(1, n_max):
        mp = (n * math.pi) ** 2 - cp
        mm = (n * math.pi) ** 2 - cm
        if mp * mm < 0:
            roots.append(math.sqrt(-mp * mm))
    return sorted(roots)


def run_checks(seed=0):
    """Invariant suite on the built-in constant families; list of (name, ok, detail)."""
    rng = np.random.default_rng(seed)
    results = []

    def record(name, ok, detail):
        results.append({"name": name, "passed": bool(ok), "detail": detail})

    expected = {"T1": (1, 0), "T2": (0, 0), "T3": (0, 1), "free": (0, 0)}
    for name in ("T1", "T2", "T3", "free"):
        p = cfgmod.family_potentials(name)
        cp, cm = p.constants
        exact = _closed_form_roots(cp, cm)
        found = [c.lambda0 for c in real_eigenvalues(p, 1.0, (1e-3, 200.0))]
        ok = len(found) == len(exact) and all(
            abs(a - b) <= 1e-8 * b for a, b in zip(found, exact))
        record(f"{name}:real_roots", ok, {"found": found, "closed_form": exact})

        box = maslov_box(p, recount=True)
        c_exp, b_exp = expected[name]
        ok = (box.corner_c == c_exp and box.lower_bound == b_exp and box.box_sum == 0
              and box.gamma3_recount in (None, box.gamma3_index))
        record(f"{name}:box", ok, box.to_dict())

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            P, Q = morse_index(p.g, 1.0), morse_index(p.h, 1.0)
        nP, nQ = fd_negative_count(p.g, 1.0), fd_negative_count(p.h, 1.0)
        record(f"{name}:morse", (P, Q) == (nP, nQ), {"shooting": [P, Q], "oracle": [nP, nQ]})

        res = max(lagrangian_residual(fundamental_matrix(p, lam, s))
                  for lam in rng.uniform(-20, 20, 4) for s in rng.uniform(0.1, 1.0, 4))
        record(f"{name}:lagrangian", res < 1e-8, {"residual": res})

        if name in ("T1", "T2"):
            k = krein_analysis(p)
            record(f"{name}:krein", k.identity_c and k.kks_balance, k.to_dict())
    return results


def cmd_check(cfg, out, threads):
    seed = cfg.seed if cfg is not None else 0
    results = run_checks(seed)
    write_json(os.path.join(out, "check.json"), {"seed": seed, "checks": results})
    for r in results:
        print(f"{'PASS' if r['passed'] else 'FAIL'} {r['name']}")
    return EXIT_OK if all(r["passed"] for r in results) else EXIT_NUMERICAL


COMMANDS = {
    "wave": cmd_wave,
    "curves": cmd_curves,
    "stability": cmd_stability,
    "krein": cmd_krein,
    "check": cmd_check,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="maslov-stab",
                                 description="Maslov-index spectral stability toolkit")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="YAML run configuration (optional for check)")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        cfg = None
        if args.config:
            cfg = cfgmod.load_config(args.config)
        elif args.command != "check":
            raise ConfigError(f"the {args.command} command needs --config")
        os.makedirs(args.out, exist_ok=True)
        return COMMANDS[args.command](cfg, args.out, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnresolvedCornerError as exc:
        print(f"unresolved corner term: {exc}; admissible values {exc.interval}",
              file=sys.stderr)
        return EXIT_CORNER
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
