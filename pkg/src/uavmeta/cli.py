"""Command-line entry point: ``uavmeta validate|run|compare``."""

import argparse
import sys

from . import experiment
from .model import ParameterError


def _validate(args):
    try:
        spec = experiment.load_spec(args.config)
    except ParameterError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return 2
    for p in experiment._points(spec):
        print(f"h={p.h:g} m: eps_l={p.eps_l:.6g} (max {p.eps_max('l'):.6g}), "
              f"eps_n={p.eps_n:.6g} (max {p.eps_max('n'):.6g})")
    print("ok")
    return 0


def _run(args):
    try:
        spec = experiment.load_spec(args.config)
    except ParameterError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return 2
    out = experiment.run(spec, args.output)
    print(f"wrote {out} and {out.with_suffix('.json')}")
    return 0


def _compare(args):
    try:
        diffs = experiment.compare(args.run_a, args.run_b)
    except (experiment.SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    worst = 0.0
    for col, d in diffs.items():
        flag = "FAIL" if d > args.tol else "ok"
        print(f"{col:20s} max|diff| = {d:.6g}  {flag}")
        worst = max(worst, d)
    return 1 if worst > args.tol else 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="uavmeta", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", help="check a config file")
    p.add_argument("config")
    p.set_defaults(func=_validate)
    p = sub.add_parser("run", help="run the sweep described by a config file")
    p.add_argument("config")
    p.add_argument("-o", "--output", help="CSV path (overrides the config's output key)")
    p.set_defaults(func=_run)
    p = sub.add_parser("compare", help="max per-cell difference between two run CSVs")
    p.add_argument("run_a")
    p.add_argument("run_b")
    p.add_argument("--tol", type=float, required=True)
    p.set_defaults(func=_compare)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
