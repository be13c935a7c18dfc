"""Command-line driver: ``koalint verify | integrate | scan``.

Exit codes: 0 pass, 1 verification failure, 2 config error, 3 sampling
exhausted, 4 runtime singularity.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import config as cfgmod
from . import dynamics, suites
from .errors import (
    ConfigInvalid,
    DegenerateDenominator,
    SamplingExhausted,
    SingularEncounter,
    SingularPoint,
    StepUnderflow,
)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_SAMPLING, EXIT_SINGULAR = 0, 1, 2, 3, 4
SAMPLING_Q_MAX2 = 4.0


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(report):
    """Deterministic JSON; floats use the shortest round-trip repr."""
    return json.dumps(_jsonable(report), indent=2, allow_nan=False) + "\n"


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _warn_overflow(cfg):
    z = cfg.z if cfg.family != "comodule" else None
    if z and abs(z) * cfg.N * SAMPLING_Q_MAX2 > 30:
        print(f"warning: |z| N max q^2 = {abs(z) * cfg.N * SAMPLING_Q_MAX2:g} > 30; "
              "exponential factors may lose precision", file=sys.stderr)


def _load(args):
    cfg = cfgmod.load(args.config, args.max_n)
    _warn_overflow(cfg)
    return cfg


def cmd_verify(args):
    cfg = _load(args)
    cfg = cfgmod.override(cfg, args.max_n, seed=args.seed, n_points=args.points, tol=args.tol)
    report = suites.run_verify(cfg, timestamp=not args.no_timestamp)
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(f"verify {cfg.family} N={cfg.N}: {'PASS' if report['passed'] else 'FAIL'}"
          + (f" (report: {args.out})" if args.out else ""))
    if not args.out:
        sys.stdout.write(text)
    return EXIT_PASS if report["passed"] else EXIT_FAIL


def write_trajectory_csv(path, traj):
    n = traj.N
    header = ["t", *[f"q{i}" for i in range(1, n + 1)], *[f"p{i}" for i in range(1, n + 1)]]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for t, s in zip(traj.times, traj.states):
            w.writerow([_fmt(float(t)), *[_fmt(float(v)) for v in s]])


def cmd_integrate(args):
    cfg = _load(args)
    fam = suites.build_family(cfg)
    x0 = suites.initial_point(cfg)
    dt = args.dt
    if dt is None:
        dt = 1e-2
    traj = dynamics.integrate(fam.H, x0, args.t_end, dt, args.method, rtol=args.rtol)
    write_trajectory_csv(args.out, traj)
    drift = dynamics.drift_report(traj, fam.drift_set)
    report = {
        "config": cfg.resolved(),
        "method": traj.method,
        "dt": traj.dt,
        "rtol": traj.rtol,
        "t_end": args.t_end,
        "n_samples": len(traj),
        "x0": x0,
        "drift": drift,
    }
    text = dumps(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_PASS


def _parse_values(text):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ConfigInvalid("--values", "empty value list")
    try:
        return [float(s) for s in items]
    except ValueError as exc:
        raise ConfigInvalid("--values", str(exc)) from None


def cmd_scan(args):
    cfg = _load(args)
    values = _parse_values(args.values)
    if args.param not in cfg.fields:
        raise ConfigInvalid(args.param, f"does not apply to family {cfg.family!r}")
    rows = []
    for v in values:
        rows.append(suites.scan_row(cfg.with_param(args.param, v, args.max_n), args.param, v))
    cols = [args.param, "passed", "max_residual", "rank", "expected_rank", "limit_diff"]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in cols])
    finally:
        if args.out:
            out.close()
    return EXIT_PASS if all(r["passed"] for r in rows) else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="koalint", description="Superintegrability checks for SW-type chains.")
    ap.add_argument("--max-n", type=int, default=cfgmod.N_CAP, help="cap on the number of sites (default 12)")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite for a config")
    v.add_argument("config")
    v.add_argument("--out")
    v.add_argument("--seed", type=int)
    v.add_argument("--points", type=int)
    v.add_argument("--tol", type=float)
    v.add_argument("--no-timestamp", action="store_true")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("integrate", help="integrate Hamilton's equations and report drifts")
    i.add_argument("config")
    i.add_argument("--t-end", type=float, required=True)
    i.add_argument("--dt", type=float)
    i.add_argument("--method", choices=dynamics.METHODS, default="adaptive")
    i.add_argument("--rtol", type=float, default=1e-10)
    i.add_argument("--out", required=True)
    i.add_argument("--report", help="also write the drift report JSON here")
    i.set_defaults(func=cmd_integrate)

    s = sub.add_parser("scan", help="rerun the suite over values of z or sigma")
    s.add_argument("config")
    s.add_argument("--param", choices=("z", "sigma"), required=True)
    s.add_argument("--values", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scan)
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SamplingExhausted as exc:
        print(f"sampling exhausted: {exc}", file=sys.stderr)
        return EXIT_SAMPLING
    except SingularEncounter as exc:
        where = f" at t={exc.t:g}" if exc.t is not None else ""
        print(f"singular encounter{where}: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (SingularPoint, DegenerateDenominator, StepUnderflow) as exc:
        print(f"runtime singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
