"""Command-line front end.

Exit codes: 0 success, 1 a must-pass check failed, 2 scenario or input error,
3 domain cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from rosserlab.constructions import run, trace_from_json
from rosserlab.corpus import DEFAULT_CODE_BOUND, write_corpus
from rosserlab.errors import DomainCapError, ScenarioError
from rosserlab.godel import encode, xi
from rosserlab.harness import SUITES, reports_to_json, run_suite
from rosserlab.models import ORDERS, least_model
from rosserlab.parser import print_formula
from rosserlab.proofs import p_set
from rosserlab.scenario import load_scenario

EXIT_OK, EXIT_FAIL, EXIT_SCENARIO, EXIT_CAP = 0, 1, 2, 3


def enumerate_lines(count: int) -> list[str]:
    return [f"{k} {encode(xi(k))} {print_formula(xi(k))}" for k in range(count)]


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args: argparse.Namespace) -> int:
    sc = load_scenario(args.scenario)
    t = run(args.construction, sc, args.horizon, args.order)
    _write(t.dumps(), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.trace).read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read {args.trace}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{args.trace} is not valid JSON: {exc}") from exc
    t = trace_from_json(data)
    bound = args.codes_up_to
    if bound is None:
        meta = t.scenario.meta if t.scenario is not None else {}
        bound = int(meta.get("code_bound", DEFAULT_CODE_BOUND))
    reports = run_suite(args.suite, t, bound)
    _write(reports_to_json(reports), args.out)
    failed = [r for r in reports if r.failed]
    for r in failed:
        for v in r.failures()[:5]:
            print(f"FAIL {r.check_name}: {v.instance} [{v.witness}]", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise ScenarioError("--count must be at least 1")
    sys.stdout.write("\n".join(enumerate_lines(args.count)) + "\n")
    return EXIT_OK


def cmd_sat(args: argparse.Namespace) -> int:
    sc = load_scenario(args.scenario)
    V = least_model(p_set(sc.source(), args.m), ("A", "B"), args.order)
    if V is None:
        print(f"Sat({args.m}): false")
    else:
        print(f"Sat({args.m}): true")
        print(json.dumps({"n": V.domain_bound, "V": V.pairs()}, separators=(",", ":")))
    return EXIT_OK


def cmd_seed_corpus(args: argparse.Namespace) -> int:
    for p in write_corpus(args.out):
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rosserlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a construction over a scenario")
    p.add_argument("--construction", choices=("g1", "g2", "g3"), required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--order", choices=ORDERS, default="ascending")
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run a check suite over a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--codes-up-to", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list xi_0 .. xi_{count-1}")
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sat", help="probe Sat(m) for a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--order", choices=ORDERS, default="ascending")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("seed-corpus", help="write the curated fixtures")
    p.add_argument("--out", default="corpus")
    p.set_defaults(func=cmd_seed_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainCapError as exc:
        print(f"domain cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO


if __name__ == "__main__":
    sys.exit(main())
