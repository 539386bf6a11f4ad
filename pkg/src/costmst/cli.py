"""Command-line entry point.

    costmst gen -n 8 -gamma 1 -seed 7 -o tiny.json
    costmst solve -i tiny.json -c0 3.5 [-tol 1e-9] [-tighten]
    costmst exact -i tiny.json -c0 3.5
    costmst theory eval f 2.0
    costmst predict -n 1000000 -c0 999999 -gamma 1 [--extrapolate]
    costmst sweep -config cfg.json -o out.csv [-summary summary.csv] [-workers 4]
    costmst selftest

Data goes to stdout (JSON or CSV), diagnostics to stderr.  Exit status is 2
for usage errors, 1 for infeasible or failed runs and 0 otherwise.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from . import selftest as _selftest
from .experiments import SweepConfig, run_sweep, write_csv
from .instances import MAX_ENUM_N, Instance, exact_constrained_mst, sample_instance
from .lagrange import InfeasibleBudget, solve
from .theory import EVALUATORS, evaluate, predict_wstar

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _json_out(obj) -> None:
    def clean(x):
        # JSON has no inf / nan
        if isinstance(x, float) and not math.isfinite(x):
            return None
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        return x
    sys.stdout.write(json.dumps(clean(obj)) + "\n")


def _load_instance(path: str) -> Instance:
    try:
        with open(path) as fh:
            return Instance.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read instance: {exc}") from exc
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad instance file {path}: {exc}") from exc


def cmd_gen(a) -> int:
    try:
        inst = sample_instance(a.n, a.gamma, a.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = inst.to_json() + "\n"
    if a.o:
        with open(a.o, "w") as fh:
            fh.write(text)
        print(f"wrote {a.o}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(a) -> int:
    inst = _load_instance(a.i)
    if a.tol is not None and not a.tol > 0:
        raise UsageError("-tol must be positive")
    if not a.c0 > 0:
        raise UsageError("-c0 must be positive")
    try:
        sol = solve(inst, a.c0, a.tol, tighten=a.tighten)
    except InfeasibleBudget as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _json_out(sol.to_dict())
    return EXIT_OK


def cmd_exact(a) -> int:
    inst = _load_instance(a.i)
    if inst.n > MAX_ENUM_N:
        raise UsageError(f"exact needs n <= {MAX_ENUM_N}, instance has n = {inst.n}")
    if a.c0 < 0:
        raise UsageError("-c0 must be non-negative")
    tree = exact_constrained_mst(inst, a.c0)
    if tree is None:
        print("infeasible: no spanning tree has cost within the budget", file=sys.stderr)
        return EXIT_FAIL
    _json_out(tree.to_dict())
    return EXIT_OK


def cmd_theory(a) -> int:
    if a.action != "eval":
        raise UsageError("theory supports only: eval")
    if a.name not in EVALUATORS:
        raise UsageError(f"unknown quantity {a.name!r}; choose from {', '.join(sorted(EVALUATORS))}")
    try:
        args = [float(x) for x in a.args]
    except ValueError as exc:
        raise UsageError(f"arguments must be numbers: {exc}") from exc
    try:
        ev = evaluate(a.name, *args)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    except (ValueError, ArithmeticError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _json_out({"value": ev.value, "abs_error_bound": ev.abs_error_bound,
               "terms_used": ev.terms_used})
    return EXIT_OK


def cmd_predict(a) -> int:
    try:
        p = predict_wstar(a.n, a.c0, a.gamma, extrapolate=a.extrapolate)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _json_out(p.to_dict())
    return EXIT_OK


def cmd_sweep(a) -> int:
    if a.workers < 1:
        raise UsageError("-workers must be >= 1")
    try:
        with open(a.config) as fh:
            cfg = SweepConfig.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad config: {exc}") from exc
    records, summary = run_sweep(cfg, workers=a.workers)
    if a.o:
        with open(a.o, "w", newline="") as fh:
            write_csv(records, fh, cfg.record_wall_time)
        print(f"wrote {len(records)} records to {a.o}", file=sys.stderr)
    else:
        write_csv(records, sys.stdout, cfg.record_wall_time)
    if a.summary:
        with open(a.summary, "w", newline="") as fh:
            fh.write(summary.to_csv())
    return EXIT_OK


def cmd_selftest(a) -> int:
    def report(name, ok, detail, secs):
        print(f"{'PASS' if ok else 'FAIL'} {name:16s} {secs:6.2f}s  {detail}", file=sys.stderr)
    ok = _selftest.run(report)
    _json_out({"passed": ok})
    return EXIT_OK if ok else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="costmst", description="cost-constrained random MST toolkit")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", help="sample an instance")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-gamma", type=float, default=1.0)
    s.add_argument("-seed", type=int, required=True)
    s.add_argument("-o", help="output file (stdout if omitted)")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("solve", help="dual maximization plus exchange repair")
    s.add_argument("-i", required=True, help="instance JSON")
    s.add_argument("-c0", type=float, required=True)
    s.add_argument("-tol", type=float)
    s.add_argument("-tighten", action="store_true", help="re-solve with a tightened budget")
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("exact", help="exhaustive constrained optimum (n <= 9)")
    s.add_argument("-i", required=True)
    s.add_argument("-c0", type=float, required=True)
    s.set_defaults(fn=cmd_exact)

    s = sub.add_parser("theory", help="evaluate a constant or function")
    s.add_argument("action", choices=["eval"])
    s.add_argument("name")
    s.add_argument("args", nargs="*")
    s.set_defaults(fn=cmd_theory)

    s = sub.add_parser("predict", help="regime and predicted W*")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-c0", type=float, required=True)
    s.add_argument("-gamma", type=float, default=1.0)
    s.add_argument("--extrapolate", action="store_true")
    s.set_defaults(fn=cmd_predict)

    s = sub.add_parser("sweep", help="Monte Carlo sweep from a JSON config")
    s.add_argument("-config", required=True)
    s.add_argument("-o", help="record CSV (stdout if omitted)")
    s.add_argument("-summary", help="per-cell summary CSV")
    s.add_argument("-workers", type=int, default=1)
    s.set_defaults(fn=cmd_sweep)

    s = sub.add_parser("selftest", help="run the invariant suite")
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        return a.fn(a)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
