"""Acceptance criteria 1-10.

Each criterion is a function returning a detail string and raising
AssertionError on failure.  Under pytest every criterion is one test that
also prints a ``PASS``/``FAIL`` line; ``python tests/test_acceptance.py``
runs them all and prints the same lines.
"""

from __future__ import annotations

import random
import subprocess
import sys
import tempfile
import time
from collections import Counter
from pathlib import Path

import pytest

from spidersat.cnf import CnfFormula, brute_force_sat, occurrence_table, random_formula
from spidersat.engine import (
    DEAL,
    Card,
    Transfer,
    _complete_block,
    apply,
    full_deck,
    initial_state,
    legal_moves,
)
from spidersat.formats import format_plan, format_task, parse_plan, parse_task
from spidersat.generate import micro_suite, random_task
from spidersat.reduction import SlotMap, build_task, value_schedule
from spidersat.solver import Solvable, move_bound, solve, solve_exhaustive, verify_plan
from spidersat.strategy import reduce_and_certify

F_REF = CnfFormula.from_ints(3, [(1, -1, 2), (-1, 2, 3), (3, -2, -3)])
UNSAT_PROBE = CnfFormula.from_ints(1, [(1, 1, 1), (-1, -1, -1)])
F_REF_CNF = "p cnf 3 3\n1 -1 2 0\n-1 2 3 0\n3 -2 -3 0\n"


def criterion_1():
    s = value_schedule(F_REF)
    got = (s.val_s, *s.val[1:], s.val_c, s.val_b, s.val_f)
    assert got == (11, 15, 21, 27, 31, 37, 41, 43, 61, 73), got
    task, _ = build_task(F_REF)
    assert task.w == 34, task.w
    return "val_s 11, val 15..41, val_c 43, val_b 61, val_f 73, w 34"


def criterion_2():
    table = {n: move_bound(n) for n in (1, 2, 3)}
    assert table == {1: 0, 2: 120, 3: 368}, table
    return "move_bound 1->0, 2->120, 3->368"


def criterion_3():
    rng = random.Random(3)
    for _ in range(100):
        task = random_task(1, rng.randint(1, 8), 0, rng.getrandbits(64))
        verdict = solve(task)
        assert isinstance(verdict, Solvable) and verdict.plan == (), (format_task(task), verdict)
    return "100/100 n=1 instances SOLVABLE 0"


def _all_cards(state):
    """Tableau + deck + removed; each removal event holds values 1..n of one suit."""
    removed = Counter(Card(suit, v) for suit in state.removed for v in range(1, state.n + 1))
    return state.cards() + removed


def criterion_4():
    rng = random.Random(4)
    moves = conservation = reversibility = fixpoint = reversible_checked = 0
    while moves < 10_000:
        n = rng.randint(1, 5)
        task = random_task(n, rng.randint(1, 8), rng.randint(0, 8 * n), rng.getrandbits(64))
        state = initial_state(task)
        for _ in range(60):
            options = legal_moves(state)
            if not options or moves >= 10_000:
                break
            move = rng.choice(options)
            child, removals = apply(state, move)
            moves += 1
            if _all_cards(child) != _all_cards(state):
                conservation += 1
            if any(_complete_block(slot, n) for slot in child.slots):
                fixpoint += 1
            if isinstance(move, Transfer) and not removals:
                src = child.slots[move.src]
                bottom = state.slots[move.src][-move.length]
                if not src or src[-1].value == bottom.value + 1:
                    reversible_checked += 1
                    back = Transfer(move.dst, move.length, move.src)
                    if back not in legal_moves(child) or apply(child, back)[0] != state:
                        reversibility += 1
            state = child
    assert (conservation, reversibility, fixpoint) == (0, 0, 0), (conservation, reversibility, fixpoint)
    return f"{moves} moves, {reversible_checked} reversals checked, 0 violations"


def criterion_5():
    suite = micro_suite()
    assert len(suite) >= 200
    disagreements, bad_plans, over_bound = [], [], []
    solvable = 0
    bound = move_bound(2)
    for index, task in enumerate(suite):
        oracle = solve_exhaustive(task)
        dfs = solve(task)
        if isinstance(oracle, Solvable) != isinstance(dfs, Solvable) or type(oracle) is not type(dfs):
            disagreements.append(index)
        for verdict in (oracle, dfs):
            if isinstance(verdict, Solvable) and not verify_plan(task, verdict.plan):
                bad_plans.append(index)
        if isinstance(oracle, Solvable):
            solvable += 1
            if len(oracle.plan) > bound:
                over_bound.append((index, len(oracle.plan)))
    assert not over_bound, f"bound falsified (move_bound(2) = {bound}): {over_bound}"
    assert not disagreements, f"solver disagreement on tasks {disagreements}"
    assert not bad_plans, f"plans failing replay on tasks {bad_plans}"
    return f"{len(suite)} tasks, {solvable} solvable, full agreement, all plans <= {bound}"


def criterion_6():
    rng = random.Random(6)
    for _ in range(500):
        f = random_formula(rng, 6, 8, min_vars=1, min_clauses=0)
        task, report = build_task(f)
        nv, nc = f.num_vars, len(f.clauses)
        for check in ("width formula", "exact-two inventory", "single gadget copy",
                      "mutual exclusion", "chain arithmetic"):
            assert report.checks[check], (check, report.format())
        assert task.w == 6 * nc + 2 * nv + 10
        assert task.cards() == full_deck(task.n)
        sched = value_schedule(f)
        occ = occurrence_table(f).occ
        for k in range(1, 2 * nv + 1):
            assert sched.val[k] - 2 * occ[k] == sched.val[k - 1] + 2
        smap = SlotMap(nv, nc)
        outside = Counter()
        for slot in range(task.w):
            if slot == smap.big or slot in smap.foundations:
                continue
            outside.update(task.initial[slot])
        outside.update(task.initial[smap.big][len(task.initial[smap.big]) - nc:])
        assert max(outside.values(), default=1) == 1
        for i in range(1, nv + 1):
            pair = {tuple(sorted(c.value for c in task.initial[k][1:])) for k in (2 * i - 1, 2 * i)}
            assert pair == {(sched.val_s - 2 * i, sched.val_s - 2 * i + 1)}, pair
    return "500 formulas: width, inventory, single copy, exclusion, chain arithmetic hold"


def criterion_7():
    rng = random.Random(7)
    sat = 0
    for _ in range(100):
        f = random_formula(rng, 4, 4)
        if brute_force_sat(f) is None:
            continue
        sat += 1
        cert = reduce_and_certify(f)
        assert cert.plan is not None and verify_plan(cert.task, cert.plan), f
    assert sat > 0
    return f"{sat}/100 formulas satisfiable, every certified plan verifies"


def criterion_8():
    cert = reduce_and_certify(UNSAT_PROBE, probe_nodes=10_000_000)
    assert cert.plan is None
    assert not isinstance(cert.verdict, Solvable), cert.verdict
    text = cert.format()
    assert f"[verdict]\n{cert.verdict}\n" in text
    assert text.startswith("CERT unsat-probe")
    return f"probe verdict {cert.verdict} (352 cards, cap 10^7)"


def criterion_9():
    rng = random.Random(9)
    for _ in range(1000):
        n = rng.randint(1, 13)
        task = random_task(n, rng.randint(1, 12), rng.randint(0, 8 * n), rng.getrandbits(64))
        text = format_task(task)
        again = format_task(parse_task(text))
        assert again == text and parse_task(text) == task
    for _ in range(1000):
        plan = tuple(
            DEAL if rng.random() < 0.2 else Transfer(rng.randrange(40), rng.randint(1, 40), rng.randrange(40))
            for _ in range(rng.randrange(30))
        )
        text = format_plan(plan)
        assert parse_plan(text) == plan and format_plan(parse_plan(text)) == text
    return "1000 tasks and 1000 plans round-trip byte-identically"


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "spidersat", *args], cwd=cwd,
                          capture_output=True, text=True, check=True)


def criterion_10():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "ref.cnf").write_text(F_REF_CNF)
        for name in ("r1.sp", "r2.sp"):
            _cli("random", "3", "6", "5", name, "--seed", "20241014", cwd=tmp)
        assert (tmp / "r1.sp").read_bytes() == (tmp / "r2.sp").read_bytes()
        for name in ("a.sp", "b.sp"):
            _cli("reduce", "ref.cnf", name, "--certify", cwd=tmp)
        cert = (tmp / "a.sp.cert").read_bytes()
        assert cert == (tmp / "b.sp.cert").read_bytes()
        assert cert.startswith(b"CERT sat")
        assert (tmp / "a.sp").read_bytes() == (tmp / "b.sp").read_bytes()
    return "random and reduce --certify outputs byte-identical across runs"


CRITERIA = [
    (1, "value schedule of the reference formula", criterion_1, 1),
    (2, "move bound table", criterion_2, 1),
    (3, "n=1 triviality", criterion_3, 1),
    (4, "engine property suite", criterion_4, 30),
    (5, "oracle agreement on the n=2 micro-suite", criterion_5, 300),
    (6, "reduction structural fuzz", criterion_6, 60),
    (7, "constructive direction end to end", criterion_7, 600),
    (8, "unsatisfiable probe", criterion_8, 900),
    (9, "format round trips", criterion_9, 10),
    (10, "CLI determinism", criterion_10, 60),
]


def run_criterion(fn, limit):
    start = time.perf_counter()
    detail = fn()
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    return f"{detail} [{elapsed:.2f}s < {limit}s]"


@pytest.mark.parametrize("number, title, fn, limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, limit, capsys):
    try:
        detail = run_criterion(fn, limit)
    except AssertionError as exc:
        with capsys.disabled():
            print(f"\nFAIL criterion {number} ({title}): {exc}")
        raise
    with capsys.disabled():
        print(f"\nPASS criterion {number} ({title}): {detail}")


if __name__ == "__main__":
    failures = 0
    for number, title, fn, limit in CRITERIA:
        try:
            print(f"PASS criterion {number} ({title}): {run_criterion(fn, limit)}", flush=True)
        except AssertionError as exc:
            failures += 1
            print(f"FAIL criterion {number} ({title}): {exc}", flush=True)
    sys.exit(1 if failures else 0)
