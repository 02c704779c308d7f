import random

import pytest

from spidersat.cnf import CnfFormula, brute_force_sat, random_formula
from spidersat.engine import Card, State, Suit, Transfer, apply, initial_state, is_won
from spidersat.reduction import SlotMap, build_task
from spidersat.solver import Solvable, Unsolvable, verify_plan
from spidersat.strategy import (
    StrategyError,
    SweepStalled,
    cascade_sweep,
    extract_plan,
    reduce_and_certify,
    replay_transcript,
)

S, H, D, C = Suit
FFT = (False, False, True)


def test_reference_phases(f_ref):
    task, _ = build_task(f_ref)
    p1, p2, p3 = extract_plan(f_ref, FFT, task)
    assert len(p1) == 6 and len(p3) == 6
    # v1 false: literal 2 unloads first, top card (H, 10) then (C, 9)
    assert p1[:2] == [Transfer(2, 1, 0)] * 2
    state = initial_state(task)
    first, _ = apply(state, p1[0])
    assert first.slots[0][-1] == Card(H, 10)
    # literal 5 (v3) has two occurrences: four moves onto slot 5
    assert sum(1 for m in p2 if m.dst == 5) == 4


def test_phase3_milestone(f_ref):
    task, _ = build_task(f_ref)
    smap = SlotMap(3, 3)
    state = initial_state(task)
    for moves in extract_plan(f_ref, FFT, task):
        for move in moves:
            state, removals = apply(state, move)
            assert not removals
    assert [state.slots[smap.clause(i, 4)][-1].value for i in (1, 2, 3)] == [63, 67, 71]
    sweep = cascade_sweep(state)
    for move in sweep:
        state, _ = apply(state, move)
    assert is_won(state)


def test_extract_rejects_non_satisfying(f_ref):
    task, _ = build_task(f_ref)
    with pytest.raises(StrategyError, match="does not satisfy"):
        extract_plan(f_ref, (True, False, False), task)


def test_sweep_feeds_foundation_directly():
    state = State(3, ((Card(S, 3),), (Card(S, 2),), (Card(S, 1),)))
    assert cascade_sweep(state) == [Transfer(1, 1, 0), Transfer(2, 1, 0)]


def test_sweep_stalls_on_mutual_burial():
    # each chain needs the card buried under the other chain's next card
    slots = (
        (Card(S, 5),), (Card(H, 5),),
        (Card(S, 4), Card(H, 2)), (Card(H, 4), Card(S, 2)),
    )
    with pytest.raises(SweepStalled) as info:
        cascade_sweep(State(5, slots))
    assert "stalled after 0 moves" in str(info.value)
    assert "S4 H2" in info.value.dump()


def test_certificate_sat(f_ref):
    cert = reduce_and_certify(f_ref, assignment=FFT)
    assert cert.kind == "sat" and cert.won
    assert verify_plan(cert.task, cert.plan)
    assert isinstance(cert.verdict, Solvable)
    text = cert.format()
    assert text.startswith("CERT sat vars=3 clauses=3\n")
    assert "val 15 21 27 31 37 41" in text and "won yes" in text
    assert cert.format() == reduce_and_certify(f_ref, assignment=FFT).format()
    _, removed, digest = replay_transcript(cert.task, cert.plan)
    assert removed == 8 and digest == cert.digest


def test_certificate_default_assignment(f_ref):
    cert = reduce_and_certify(f_ref)
    assert cert.assignment == brute_force_sat(f_ref)
    assert cert.won


def test_empty_formula_solves_by_sweep():
    cert = reduce_and_certify(CnfFormula(2, ()))
    assert cert.won
    assert [len(v) for k, v in cert.phases.items() if k != "sweep"] == [4, 0, 0]


def test_random_sat_formulas():
    rng = random.Random(5)
    done = 0
    while done < 25:
        f = random_formula(rng, 4, 4)
        if brute_force_sat(f) is None:
            continue
        cert = reduce_and_certify(f)
        assert cert.won and verify_plan(cert.task, cert.plan)
        done += 1


def test_unsat_probe_tiny_budget(unsat_probe):
    cert = reduce_and_certify(unsat_probe, probe_nodes=1000)
    assert cert.plan is None and cert.kind == "unsat-probe"
    assert str(cert.verdict) == "UNKNOWN nodes 1000"
    assert cert.format().startswith("CERT unsat-probe")


def test_unsat_probe_exhausts_on_exact_forms(unsat_probe):
    # independent of the 64-bit digests used by the DFS
    from spidersat.solver import solve_exhaustive
    task, _ = build_task(unsat_probe)
    assert isinstance(solve_exhaustive(task, node_cap=5_000_000), Unsolvable)


def test_sweep_on_larger_formulas():
    rng = random.Random(11)
    checked = 0
    for _ in range(150):
        f = random_formula(rng, 6, 8)
        assignment = brute_force_sat(f)
        if assignment is None:
            continue
        cert = reduce_and_certify(f, assignment=assignment)
        assert cert.won
        checked += 1
    assert checked > 100
