"""Winning plans for compiled tasks and the certification pipeline.

A satisfying assignment drives three scripted phases (unload the true
literals' selection piles, peel their occurrences off the clause piles,
release the blockers); ``cascade_sweep`` then plays the endgame onto the
eight foundation cards.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .cnf import (
    Assignment,
    CnfFormula,
    Literal,
    brute_force_sat,
    format_assignment,
    format_dimacs,
    literal_index,
    occurrence_table,
)
from .engine import State, Task, Transfer, apply, initial_state, is_won, run_length
from .formats import format_state
from .reduction import LayoutReport, SlotMap, ValueSchedule, build_task, value_schedule
from .solver import SearchConfig, Solvable, Verdict, solve


class StrategyError(RuntimeError):
    pass


class SweepStalled(StrategyError):
    def __init__(self, reason: str, state: State, moves: list):
        super().__init__(f"sweep stalled after {len(moves)} moves: {reason}")
        self.reason = reason
        self.state = state
        self.moves = moves

    def dump(self) -> str:
        return f"{self}\n{format_state(self.state)}"


def true_literals(assignment: Assignment) -> list[int]:
    return [literal_index(Literal(v, val)) for v, val in enumerate(assignment, start=1)]


def extract_plan(formula: CnfFormula, assignment: Assignment, task: Task) -> list[list[Transfer]]:
    """Scripted phases 1-3 as three move lists; every move is replay-checked."""
    if not formula.satisfied_by(assignment):
        raise StrategyError("assignment does not satisfy the formula")
    table = occurrence_table(formula)
    sched = value_schedule(formula, table)
    smap = SlotMap(formula.num_vars, len(formula.clauses))
    chosen = true_literals(assignment)

    phase1 = []
    for k in chosen:
        phase1 += [Transfer(smap.literal(k), 1, 0)] * 2

    phase2 = []
    for k in sorted(chosen):
        for i, j in table.occurrences(k):
            phase2 += [Transfer(smap.clause(i, j), 1, smap.literal(k))] * 2

    opened = {ij for k in chosen for ij in table.occurrences(k)}
    phase3 = []
    for i in range(1, len(formula.clauses) + 1):
        j = min(j for j in (1, 2, 3) if (i, j) in opened)
        phase3.append(Transfer(smap.clause(i, 4), 1, smap.clause(i, j)))
        phase3.append(Transfer(smap.big, 1, smap.clause(i, 4)))

    state = initial_state(task)
    for phase, moves in enumerate((phase1, phase2, phase3), start=1):
        for move in moves:
            try:
                state, removals = apply(state, move)
            except Exception as exc:
                raise StrategyError(f"phase {phase}: scripted move {move} illegal: {exc}") from exc
            if removals:
                raise StrategyError(f"phase {phase}: move {move} triggered a removal")
    return [phase1, phase2, phase3]


def _chain_slots(state: State) -> list[int]:
    n = state.n
    return [i for i, s in enumerate(state.slots) if s and s[0].value == n and run_length(s) == len(s)]


def _sweep_step(state: State, chains: list[int]) -> Transfer | None:
    """Next endgame move, or None when nothing useful is left."""
    slots = state.slots
    chain_set = set(chains)
    wanted: dict[tuple, int] = {}
    for c in chains:
        s = slots[c]
        if s and run_length(s) == len(s) and s[0].value == state.n:
            key = (s[-1].suit, s[-1].value - 1)
            wanted.setdefault(key, c)

    # feed: any exposed run whose bottom card extends a chain
    for src, slot in enumerate(slots):
        if not slot or src in chain_set:
            continue
        for length in range(1, run_length(slot) + 1):
            card = slot[-length]
            dst = wanted.get((card.suit, card.value))
            if dst is not None:
                return Transfer(src, length, dst)

    # dig: uncover the highest wanted card that is buried
    targets = []
    for src, slot in enumerate(slots):
        if src in chain_set:
            continue
        for pos, card in enumerate(slot):
            if (card.suit, card.value) in wanted:
                targets.append((-card.value, len(slot) - 1 - pos, src))
    for _, _, src in sorted(targets):
        move = _parking_for(state, src, chain_set, wanted)
        if move is not None:
            return move
    if targets:
        return _consolidation(state, chain_set, wanted)
    return None


def _consolidation(state: State, chain_set: set, wanted: dict) -> Transfer | None:
    """Free a slot by stacking a lone run onto any card one above its bottom."""
    slots = state.slots
    best = None
    for src, slot in enumerate(slots):
        if not slot or src in chain_set or run_length(slot) != len(slot):
            continue
        low = slot[0]
        for dst, target in enumerate(slots):
            if dst == src or dst in chain_set or not target:
                continue
            top = target[-1]
            if top.value == low.value + 1 and (top.suit, top.value) not in wanted:
                cand = (low.value, src, dst)
                if best is None or cand < best:
                    best = cand
                break
    if best is None:
        return None
    _, src, dst = best
    return Transfer(src, len(slots[src]), dst)


def _parking_for(state: State, src: int, chain_set: set, wanted: dict) -> Transfer | None:
    slots = state.slots
    slot = slots[src]
    length = run_length(slot)
    low = slot[-length]
    same_suit = empty = any_match = None
    for dst, target in enumerate(slots):
        if dst == src or dst in chain_set and target:
            continue
        if not target:
            if empty is None:
                empty = dst
        elif target[-1].value == low.value + 1:
            if target[-1].suit == low.suit and same_suit is None:
                same_suit = dst
            elif any_match is None and (target[-1].suit, target[-1].value) not in wanted:
                any_match = dst
    for dst in (same_suit, empty, any_match):
        if dst is not None:
            return Transfer(src, length, dst)
    return None


def cascade_sweep(state: State) -> list[Transfer]:
    """Play the endgame after phase 3 onto the foundation chains.

    Loop: feed any exposed card onto the chain of its suit that is one above
    it; otherwise uncover the highest-valued card some chain is waiting for,
    parking the run above it on a same-suit successor, an empty slot, or any
    card one higher, in that order.  Raises SweepStalled when no rule applies
    or after 3 * 8 * n moves.
    """
    chains = _chain_slots(state)
    budget = 3 * 8 * state.n
    moves: list[Transfer] = []
    while not is_won(state):
        if len(moves) >= budget:
            raise SweepStalled(f"move budget {budget} exhausted", state, moves)
        move = _sweep_step(state, chains)
        if move is None:
            raise SweepStalled("no feeding or digging move available", state, moves)
        state, _ = apply(state, move)
        moves.append(move)
    return moves


@dataclass
class Certificate:
    formula: CnfFormula
    schedule: ValueSchedule
    task: Task
    layout: LayoutReport
    assignment: Assignment | None = None
    phases: dict[str, list] = field(default_factory=dict)
    verdict: Verdict | None = None
    won: bool = False
    removals: int = 0
    digest: str = ""

    @property
    def kind(self) -> str:
        return "sat" if self.assignment is not None else "unsat-probe"

    @property
    def plan(self) -> tuple | None:
        if self.assignment is None:
            return None
        return tuple(m for moves in self.phases.values() for m in moves)

    def format(self) -> str:
        f, s = self.formula, self.schedule
        out = [f"CERT {self.kind} vars={f.num_vars} clauses={len(f.clauses)}", "[formula]"]
        out += format_dimacs(f).splitlines()
        out += ["[assignment]", format_assignment(self.assignment) if self.assignment is not None else "none"]
        out += [
            "[schedule]",
            f"val_s {s.val_s}",
            "val " + " ".join(map(str, s.val[1:])),
            f"val_c {s.val_c}",
            f"val_b {s.val_b}",
            f"val_f {s.val_f}",
            "base " + " ".join(map(str, s.base)),
            "bottom " + " ".join(map(str, s.bottom)),
            "blocker " + " ".join(map(str, s.blocker)),
            "[task]",
            f"n {self.task.n}",
            f"w {self.task.w}",
            f"cards {sum(self.task.cards().values())}",
            "[layout]",
        ]
        out += self.layout.format().splitlines()
        if self.plan is not None:
            out.append("[plan]")
            out += [f"{name} {len(moves)}" for name, moves in self.phases.items()]
            out.append(f"total {len(self.plan)}")
        out += ["[verdict]", str(self.verdict)]
        if self.plan is not None:
            out += [
                "[replay]",
                f"moves {len(self.plan)}",
                f"removals {self.removals}",
                f"won {'yes' if self.won else 'no'}",
                f"digest sha256:{self.digest}",
            ]
        return "\n".join(out) + "\n"


def replay_transcript(task: Task, plan) -> tuple[State, int, str]:
    """Replay ``plan`` and return (final state, removal count, transcript digest)."""
    state = initial_state(task)
    digest = hashlib.sha256()
    removed = 0
    for i, move in enumerate(plan):
        state, removals = apply(state, move)
        removed += len(removals)
        digest.update(f"{i} {move} {''.join(s.letter for s in removals)}\n".encode())
    digest.update(format_state(state).encode())
    return state, removed, digest.hexdigest()


def winning_plan(formula: CnfFormula, assignment: Assignment, task: Task) -> dict[str, list]:
    phases = extract_plan(formula, assignment, task)
    state = initial_state(task)
    for moves in phases:
        for move in moves:
            state, _ = apply(state, move)
    names = ("phase1", "phase2", "phase3")
    return {**dict(zip(names, phases)), "sweep": cascade_sweep(state)}


def reduce_and_certify(formula: CnfFormula, probe_nodes: int = 10_000_000,
                       assignment: Assignment | None = None,
                       probe_config: SearchConfig | None = None) -> Certificate:
    """Compile ``formula`` and certify one direction of the reduction on it.

    With a satisfying assignment (given or found by brute force) the
    certificate carries a replay-verified winning plan.  Otherwise the
    compiled task is searched under ``probe_nodes``; an Unknown verdict is
    reported as such, never as unsolvability.
    """
    task, layout = build_task(formula)
    cert = Certificate(formula, value_schedule(formula), task, layout)
    if assignment is None:
        assignment = brute_force_sat(formula)
    if assignment is not None:
        cert.assignment = tuple(assignment)
        cert.phases = winning_plan(formula, cert.assignment, task)
        final, cert.removals, cert.digest = replay_transcript(task, cert.plan)
        cert.won = is_won(final)
        if not cert.won:
            raise StrategyError("certified plan does not win the compiled task")
        cert.verdict = Solvable(cert.plan, 0)
    else:
        config = probe_config or SearchConfig(max_nodes=probe_nodes)
        cert.verdict = solve(task, config)
    return cert
