"""Solvability search over Spider tasks.

Two independent routes: ``solve_exhaustive`` is a breadth-first oracle keyed
on exact canonical forms (shortest plans, tiny tasks only); ``solve`` is a
depth-capped DFS with a transposition table keyed on 64-bit state digests.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Literal, Union

from . import engine
from .engine import (
    Deal,
    State,
    Task,
    Transfer,
    _complete_block,
    apply,
    canonical_form,
    combine_key,
    initial_state,
    is_won,
    legal_moves,
    slot_hash,
    splitmix64,
    validate_task,
)
from .formats import InvalidTask

log = logging.getLogger(__name__)

_MASK = (1 << 64) - 1


def move_bound(n: int) -> int:
    """Upper bound on the length of a shortest winning plan for suit length ``n``."""
    if n < 1:
        raise ValueError(f"suit length must be >= 1, got {n}")
    return 64 * n * n - 72 * n + 8


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int | None = None  # None -> move_bound(n)
    max_nodes: int = 1_000_000
    transposition_capacity: int = 20_000_000
    move_ordering: Literal["enumeration", "removal_first"] = "enumeration"

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive")
        if self.max_nodes < 1 or self.transposition_capacity < 1:
            raise ValueError("caps must be positive")
        if self.move_ordering not in ("enumeration", "removal_first"):
            raise ValueError(f"unknown move ordering {self.move_ordering!r}")


@dataclass(frozen=True)
class Solvable:
    plan: tuple
    nodes: int

    def __str__(self) -> str:
        return f"SOLVABLE {len(self.plan)} {self.nodes}"


@dataclass(frozen=True)
class Unsolvable:
    nodes: int
    exhausted: bool = True

    def __str__(self) -> str:
        return f"UNSOLVABLE {self.nodes}"


@dataclass(frozen=True)
class Unknown:
    limit: Literal["depth", "nodes"]
    nodes: int

    def __str__(self) -> str:
        return f"UNKNOWN {self.limit} {self.nodes}"


Verdict = Union[Solvable, Unsolvable, Unknown]


def format_verdict(verdict: Verdict) -> str:
    return f"{verdict}\n"


def parse_verdict(line: str) -> tuple:
    """Parse a verdict line back into its fields (the plan travels separately)."""
    words = line.split()
    if words[:1] == ["SOLVABLE"] and len(words) == 3:
        return ("SOLVABLE", int(words[1]), int(words[2]))
    if words[:1] == ["UNSOLVABLE"] and len(words) == 2:
        return ("UNSOLVABLE", int(words[1]))
    if words[:1] == ["UNKNOWN"] and len(words) == 3 and words[1] in ("depth", "nodes"):
        return ("UNKNOWN", words[1], int(words[2]))
    raise ValueError(f"not a verdict line: {line!r}")


def _checked_start(task: Task) -> State:
    report = validate_task(task)
    if not report.ok:
        raise InvalidTask(report.violations)
    return initial_state(task)


def solve_exhaustive(task: Task, node_cap: int = 2_000_000) -> Verdict:
    """Breadth-first search; a Solvable verdict carries a shortest plan."""
    start = _checked_start(task)
    if is_won(start):
        return Solvable((), 0)
    root = canonical_form(start)
    parents: dict = {root: None}
    frontier = deque([(start, root)])
    nodes = 0
    while frontier:
        state, form = frontier.popleft()
        for move in legal_moves(state):
            child, _ = apply(state, move)
            nodes += 1
            cform = canonical_form(child)
            if cform in parents:
                continue
            parents[cform] = (form, move)
            if is_won(child):
                plan = []
                cur = cform
                while parents[cur] is not None:
                    cur, mv = parents[cur]
                    plan.append(mv)
                return Solvable(tuple(reversed(plan)), nodes)
            if nodes >= node_cap:
                return Unknown("nodes", nodes)
            frontier.append((child, cform))
    return Unsolvable(nodes)


def _removal_rank(state: State, move) -> int:
    if isinstance(move, Deal):
        return 3
    dst = state.slots[move.dst]
    run = state.slots[move.src][-move.length:]
    if run[-1].value == 1 and _complete_block(dst + run, state.n):
        return 0
    return 1 if dst else 2


def ordered_moves(state: State, ordering: str) -> list:
    moves = legal_moves(state)
    if ordering == "removal_first":
        moves.sort(key=lambda m: _removal_rank(state, m))
    return moves


class _Zobrist:
    """Memoized per-(card, position) hash terms for incremental updates."""

    def __init__(self):
        self.table: dict[int, int] = {}

    def run_sum(self, cards, start: int) -> int:
        table = self.table
        total = 0
        for offset, card in enumerate(cards):
            code = (start + offset) << 24 | card.value << 2 | card.suit
            z = table.get(code)
            if z is None:
                z = table[code] = engine.zobrist(card, start + offset)
            total += z
        return total


def _child_hashes(zob: _Zobrist, state: State, hashes: tuple, move, child: State, removals) -> tuple:
    if isinstance(move, Deal) or removals:
        return tuple(
            h if new is old else slot_hash(new)
            for h, old, new in zip(hashes, state.slots, child.slots)
        )
    src = state.slots[move.src]
    run = src[-move.length:]
    new = list(hashes)
    new[move.src] = (hashes[move.src] - zob.run_sum(run, len(src) - move.length)) & _MASK
    new[move.dst] = (hashes[move.dst] + zob.run_sum(run, len(state.slots[move.dst]))) & _MASK
    return tuple(new)


def solve(task: Task, config: SearchConfig | None = None) -> Verdict:
    """Depth-first search with a transposition table.

    The first pass expands every state at most once.  If it finishes without
    refusing any new state at the depth cap, the reachable space is exhausted.
    Otherwise a second pass re-runs with entries holding the best-known depth,
    re-expanding states reached at a shallower depth.  Unsolvable is only
    reported when no state was left unexpanded because of the depth cap.
    """
    config = config or SearchConfig()
    start = _checked_start(task)
    if is_won(start):
        return Solvable((), 0)
    max_depth = config.max_depth if config.max_depth is not None else move_bound(task.n)
    verdict = _dfs(start, config, max_depth, config.max_nodes, reexpand=False)
    if isinstance(verdict, Unknown) and verdict.limit == "depth":
        spent = verdict.nodes
        second = _dfs(start, config, max_depth, config.max_nodes - spent, reexpand=True)
        verdict = replace(second, nodes=second.nodes + spent)
    return verdict


def _dfs(start: State, config: SearchConfig, max_depth: int, max_nodes: int, reexpand: bool) -> Verdict:
    ordering = config.move_ordering
    capacity = config.transposition_capacity
    zob = _Zobrist()
    hashes = tuple(slot_hash(s) for s in start.slots)
    key = combine_key(hashes, start.deck)
    tt: dict[int, int] = {key: 0}
    cut: set[int] = set()
    # frame: [state, hashes, key, depth, moves, next index]
    stack = [[start, hashes, key, 0, ordered_moves(start, ordering), 0]]
    path: list = []
    nodes = 0
    if max_nodes < 1:
        return Unknown("nodes", 0)

    while stack:
        frame = stack[-1]
        moves = frame[4]
        if frame[5] == len(moves):
            stack.pop()
            if path:
                path.pop()
            continue
        move = moves[frame[5]]
        frame[5] += 1
        state, hashes, key, depth = frame[0], frame[1], frame[2], frame[3]

        child, removals = apply(state, move)
        nodes += 1
        if is_won(child):
            return Solvable(tuple(path) + (move,), nodes)
        if nodes >= max_nodes:
            return Unknown("nodes", nodes)

        chashes = _child_hashes(zob, state, hashes, move, child, removals)
        if child.deck or state.deck:
            ckey = combine_key(chashes, child.deck)
        else:
            ckey = key
            for i in {move.src, move.dst} if not removals else range(len(chashes)):
                if chashes[i] != hashes[i]:
                    ckey += splitmix64(chashes[i]) - splitmix64(hashes[i])
            ckey &= _MASK

        cdepth = depth + 1
        prev = tt.get(ckey)
        if prev is not None and (prev <= cdepth or not reexpand):
            continue
        if cdepth >= max_depth:
            if prev is None:
                cut.add(ckey)
            continue
        if prev is None and len(tt) >= capacity:
            log.info("transposition table full at %d entries", len(tt))
            return Unknown("nodes", nodes)
        tt[ckey] = cdepth
        cut.discard(ckey)
        stack.append([child, chashes, ckey, cdepth, ordered_moves(child, ordering), 0])
        path.append(move)

    if cut:
        return Unknown("depth", nodes)
    return Unsolvable(nodes)


def plan_diagnostic(task: Task, plan) -> str | None:
    """None when ``plan`` wins ``task``; otherwise a one-line reason."""
    try:
        final = engine.replay(task, plan)
    except engine.ReplayError as exc:
        return str(exc)
    if not is_won(final):
        left = sum(len(s) for s in final.slots) + len(final.deck)
        return f"not won: {left} cards remain after {len(plan)} moves"
    return None


def verify_plan(task: Task, plan) -> bool:
    reason = plan_diagnostic(task, plan)
    if reason is not None:
        log.debug("plan rejected: %s", reason)
    return reason is None
