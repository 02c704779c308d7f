"""Command-line front end.

Reports go to stdout, diagnostics to stderr.  Exit codes:

    reduce    0 ok, 2 layout validation failed, 3 sweep stalled
    solve     0 solvable, 1 unsolvable, 4 unknown (batch: the largest code seen)
    validate  0 all checks pass, 2 otherwise
    replay    0 won, 5 not won, 6 illegal move
    any       10 on I/O, parse or argument errors
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cnf import CnfError, parse_dimacs
from .engine import EngineError, ReplayError, apply, initial_state, is_won, validate_task
from .formats import format_plan, format_state, format_task, parse_plan, parse_task
from .generate import random_task
from .reduction import ConstructionError, build_task, validate_layout
from .solver import SearchConfig, Solvable, Unsolvable, move_bound, solve, solve_exhaustive
from .strategy import StrategyError, SweepStalled, reduce_and_certify

EXIT_OK = 0
EXIT_UNSOLVABLE = 1
EXIT_INVALID = 2
EXIT_STALLED = 3
EXIT_UNKNOWN = 4
EXIT_NOT_WON = 5
EXIT_ILLEGAL = 6
EXIT_ERROR = 10


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _load_formula(path: str):
    try:
        return parse_dimacs(_read(path))
    except CnfError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_task(path: str, validate: bool = True):
    try:
        return parse_task(_read(path), validate=validate)
    except EngineError as exc:
        raise CliError(f"{path}: {exc}") from None


def cmd_reduce(args) -> int:
    formula = _load_formula(args.cnf)
    task, layout = build_task(formula)
    _write(args.out, format_task(task))
    sys.stdout.write(layout.format())
    if not layout.ok:
        print("layout validation failed: " + ", ".join(layout.failed), file=sys.stderr)
        return EXIT_INVALID
    if not args.certify:
        return EXIT_OK
    try:
        cert = reduce_and_certify(formula, probe_nodes=args.max_nodes or 10_000_000)
    except SweepStalled as exc:
        sys.stderr.write(exc.dump())
        return EXIT_STALLED
    _write(args.out + ".cert", cert.format())
    if cert.plan is not None:
        _write(args.plan or args.out + ".plan", format_plan(cert.plan))
    print(f"CERT {cert.kind} {cert.verdict}")
    return EXIT_OK


def _config(args) -> SearchConfig:
    return SearchConfig(max_depth=args.max_depth, max_nodes=args.max_nodes or 1_000_000)


def _solve_one(task, args):
    if args.oracle:
        return solve_exhaustive(task, node_cap=args.max_nodes or 2_000_000)
    return solve(task, _config(args))


def _verdict_code(verdict) -> int:
    if isinstance(verdict, Solvable):
        return EXIT_OK
    if isinstance(verdict, Unsolvable):
        return EXIT_UNSOLVABLE
    return EXIT_UNKNOWN


def cmd_solve(args) -> int:
    if args.batch:
        if args.instance or args.plan:
            raise CliError("--batch takes no instance path and no --plan")
        paths = sorted(p for p in Path(args.batch).iterdir() if p.is_file())
        worst = EXIT_OK
        for path in paths:
            verdict = _solve_one(_load_task(str(path)), args)
            print(f"{path.name}: {verdict}")
            worst = max(worst, _verdict_code(verdict))
        return worst
    if not args.instance:
        raise CliError("solve needs an instance path or --batch DIR")
    verdict = _solve_one(_load_task(args.instance), args)
    print(verdict)
    if args.plan and isinstance(verdict, Solvable):
        _write(args.plan, format_plan(verdict.plan))
    return _verdict_code(verdict)


def cmd_validate(args) -> int:
    task = _load_task(args.instance, validate=False)
    report = validate_task(task)
    failed = []
    print(f"engine checks: {'pass' if report.ok else 'FAIL'}")
    for violation in report.violations:
        print(f"  {violation}")
    if not report.ok:
        failed.append("engine checks")
    if args.cnf:
        layout = validate_layout(task, _load_formula(args.cnf))
        sys.stdout.write(layout.format())
        failed += layout.failed
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_replay(args) -> int:
    task = _load_task(args.instance)
    try:
        plan = parse_plan(_read(args.plan_file))
    except EngineError as exc:
        raise CliError(f"{args.plan_file}: {exc}") from None
    state = initial_state(task)
    for i, move in enumerate(plan):
        try:
            state, removals = apply(state, move)
        except EngineError as exc:
            err = ReplayError(i, getattr(exc, "reason", str(exc)), state)
            print(err, file=sys.stderr)
            sys.stderr.write(format_state(state))
            return EXIT_ILLEGAL
        if args.trace:
            suffix = " removed " + " ".join(s.letter for s in removals) if removals else ""
            print(f"{i} {move}{suffix}")
    if is_won(state):
        print(f"won after {len(plan)} moves")
        return EXIT_OK
    left = sum(map(len, state.slots)) + len(state.deck)
    print(f"not won: {left} cards remain after {len(plan)} moves")
    sys.stdout.write(format_state(state))
    return EXIT_NOT_WON


def cmd_random(args) -> int:
    try:
        task = random_task(args.n, args.w, args.deck_size, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    text = format_task(task)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    return EXIT_OK


def cmd_bound(args) -> int:
    try:
        print(move_bound(args.n))
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spidersat", description="3-SAT to Spider Solitaire toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="compile a DIMACS 3-CNF file into an instance")
    p.add_argument("cnf")
    p.add_argument("out", help="instance file to write")
    p.add_argument("--certify", action="store_true", help="also write OUT.cert and the winning plan")
    p.add_argument("--plan", help="plan path for --certify (default OUT.plan)")
    p.add_argument("--max-nodes", type=int, help="search cap for the unsatisfiable probe (default 10^7)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="decide solvability of an instance")
    p.add_argument("instance", nargs="?")
    p.add_argument("--oracle", action="store_true", help="use the breadth-first exact oracle")
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--plan", help="write the winning plan here")
    p.add_argument("--batch", metavar="DIR", help="solve every file in DIR, in filename order")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check an instance, optionally against its formula")
    p.add_argument("instance")
    p.add_argument("cnf", nargs="?")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("replay", help="replay a plan on an instance")
    p.add_argument("instance")
    p.add_argument("plan_file", metavar="plan")
    p.add_argument("--trace", action="store_true", help="print each move")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("random", help="write a seeded random instance")
    p.add_argument("n", type=int)
    p.add_argument("w", type=int)
    p.add_argument("deck_size", type=int)
    p.add_argument("out", help="output path, '-' for stdout")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("bound", help="print the shortest-plan length bound for suit length n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConstructionError, StrategyError, ValueError) as exc:
        print(f"spidersat {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
