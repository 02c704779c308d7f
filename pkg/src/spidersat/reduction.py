"""Compile a 3-CNF formula into a Spider task and audit the resulting layout.

Slot order of a compiled task (``V`` variables, ``C`` clauses)::

    0                 selection root (S, val_s)
    1 .. 2V           literal selection piles, one per literal index k
    2V+1 .. 2V+6C     clause groups, six slots each
    next 8            foundation cards (suit, val_f)
    last              big pile: everything else, ascending, blockers on top
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .cnf import CnfFormula, OccurrenceTable, occurrence_table
from .engine import CLUBS, DIAMONDS, HEARTS, SPADES, Card, Suit, Task, full_deck, validate_task

FOUNDATION_SUITS = (SPADES, HEARTS, DIAMONDS, CLUBS) * 2


class ConstructionError(RuntimeError):
    """The layout could not be built; indicates a defect in the construction itself."""


@dataclass(frozen=True)
class ValueSchedule:
    val_s: int
    val: tuple[int, ...]  # val[k] for literal index k, val[0] = val_s
    val_c: int
    val_b: int
    val_f: int
    base: tuple[int, ...]  # base[i - 1] for clause i
    bottom: tuple[int, ...]
    blocker: tuple[int, ...]

    @property
    def num_literals(self) -> int:
        return len(self.val) - 1


def value_schedule(formula: CnfFormula, table: OccurrenceTable | None = None) -> ValueSchedule:
    table = table or occurrence_table(formula)
    nv, nc = formula.num_vars, len(formula.clauses)
    val_s = nc + 2 * nv + 2
    val = (val_s,) + tuple(val_s + 2 * k + 2 * table.cum[k] for k in range(1, 2 * nv + 1))
    val_c = val[-1] + 2
    val_b = val_c + 6 * nc
    val_f = val_b + 4 * nc
    base = tuple(val_c + 6 * i for i in range(nc))
    bottom = tuple(val_b + 4 * i for i in range(nc))
    blocker = tuple(b + 2 for b in bottom)
    sched = ValueSchedule(val_s, val, val_c, val_b, val_f, base, bottom, blocker)
    problems = schedule_ordering_problems(sched)
    if problems:
        raise ConstructionError("value schedule ordering violated: " + "; ".join(problems))
    return sched


def schedule_ordering_problems(s: ValueSchedule) -> list[str]:
    problems = []
    chain = list(s.val) + [s.val_c]
    if any(a >= b for a, b in zip(chain, chain[1:])):
        problems.append(f"literal values not strictly increasing: {chain}")
    for i, (ba, bo, bl) in enumerate(zip(s.base, s.bottom, s.blocker), start=1):
        if not s.val_c <= ba < s.val_b:
            problems.append(f"base[{i}]={ba} outside [val_c, val_b)")
        if not s.val_b <= bo < s.val_f:
            problems.append(f"bottom[{i}]={bo} outside [val_b, val_f)")
        if bl > s.val_f - 2:
            problems.append(f"blocker[{i}]={bl} > val_f - 2")
    return problems


@dataclass(frozen=True)
class SlotMap:
    num_vars: int
    num_clauses: int

    @property
    def num_literals(self) -> int:
        return 2 * self.num_vars

    def literal(self, k: int) -> int:
        return k

    def clause(self, i: int, pile: int) -> int:
        return 2 * self.num_vars + 1 + 6 * (i - 1) + (pile - 1)

    @property
    def foundations(self) -> range:
        start = 2 * self.num_vars + 1 + 6 * self.num_clauses
        return range(start, start + 8)

    @property
    def big(self) -> int:
        return self.width - 1

    @property
    def width(self) -> int:
        return 6 * self.num_clauses + 2 * self.num_vars + 10

    def groups(self) -> dict[str, list[int]]:
        groups = {"selection": list(range(self.num_literals + 1))}
        for i in range(1, self.num_clauses + 1):
            groups[f"clause {i}"] = [self.clause(i, p) for p in range(1, 7)]
        groups["foundation"] = list(self.foundations)
        groups["big"] = [self.big]
        return groups


def selection_pile(sched: ValueSchedule, k: int) -> tuple[Card, ...]:
    """Literal pile k, bottom to top: the choice card under a value pair."""
    val_s = sched.val_s
    if k % 2:
        return (Card(SPADES, sched.val[k]), Card(SPADES, val_s - k - 1), Card(DIAMONDS, val_s - k))
    return (Card(SPADES, sched.val[k]), Card(CLUBS, val_s - k), Card(HEARTS, val_s - k + 1))


def occurrence_pair(sched: ValueSchedule, k: int, m: int) -> tuple[Card, Card]:
    """Top two cards of the clause pile holding the m-th occurrence of literal k."""
    top = sched.val[k] - 2 * m
    return (Card(SPADES, top), Card(DIAMONDS, top + 1))


class _Inventory:
    """Hands out gadget cards: at most one copy of each (suit, value) outside the big pile."""

    def __init__(self, n: int):
        self.n = n
        self.used: set[Card] = set()
        self.cursor = 0

    def take(self, card: Card) -> Card:
        if not 1 <= card.value <= self.n:
            raise ConstructionError(f"card {card} outside suit length {self.n}")
        if card in self.used:
            raise ConstructionError(f"value {card.value}: {card} needed twice outside the big pile")
        self.used.add(card)
        return card

    def draw(self, value: int) -> Card:
        for step in range(4):
            suit = Suit((self.cursor + step) % 4)
            card = Card(suit, value)
            if card not in self.used:
                self.cursor = (suit + 1) % 4
                return self.take(card)
        raise ConstructionError(f"value {value}: suit inventory exhausted")


def build_task(formula: CnfFormula) -> tuple[Task, "LayoutReport"]:
    table = occurrence_table(formula)
    sched = value_schedule(formula, table)
    nv, nc = formula.num_vars, len(formula.clauses)
    smap = SlotMap(nv, nc)
    inv = _Inventory(sched.val_f)
    slots: list[tuple[Card, ...]] = [()] * smap.width

    slots[0] = (inv.take(Card(SPADES, sched.val_s)),)
    for k in range(1, 2 * nv + 1):
        slots[smap.literal(k)] = tuple(inv.take(c) for c in selection_pile(sched, k))

    for i in range(1, nc + 1):
        bottom, base = sched.bottom[i - 1], sched.base[i - 1]
        fillers = (inv.take(Card(CLUBS, bottom + 2)), inv.take(Card(HEARTS, bottom + 2)))
        for j in range(1, 4):
            k, m = table.position[(i, j)]
            pile = (inv.draw(bottom), inv.draw(base + 1))
            slots[smap.clause(i, j)] = pile + tuple(inv.take(c) for c in occurrence_pair(sched, k, m))
        slots[smap.clause(i, 4)] = (inv.draw(base),)
        slots[smap.clause(i, 5)] = (fillers[0],)
        slots[smap.clause(i, 6)] = (fillers[1],)
    blockers = [inv.draw(b) for b in sched.blocker]

    for f, suit in zip(smap.foundations, FOUNDATION_SUITS):
        slots[f] = (Card(suit, sched.val_f),)

    rest = full_deck(sched.val_f)
    for slot in slots:
        rest.subtract(slot)
    rest.subtract(blockers)
    if any(c < 0 for c in rest.values()):
        short = sorted(card for card, c in rest.items() if c < 0)
        raise ConstructionError(f"card inventory exceeded for {short}")
    big = sorted(rest.elements(), key=lambda c: (c.value, c.suit))
    slots[smap.big] = tuple(big) + tuple(reversed(blockers))

    task = Task(sched.val_f, smap.width, (), tuple(slots))
    report = validate_layout(task, formula)
    return task, report


@dataclass
class LayoutReport:
    groups: dict[str, list[int]] = field(default_factory=dict)
    usage: Counter = field(default_factory=Counter)
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks[name] = bool(passed)
        if not passed and detail:
            self.details[name] = detail

    def format(self) -> str:
        lines = []
        for name, passed in self.checks.items():
            line = f"{name}: {'pass' if passed else 'FAIL'}"
            if name in self.details:
                line += f" ({self.details[name]})"
            lines.append(line)
        return "\n".join(lines) + "\n"


def validate_layout(task: Task, formula: CnfFormula) -> LayoutReport:
    """Audit ``task`` against the layout ``formula`` should compile to."""
    table = occurrence_table(formula)
    sched = value_schedule(formula, table)
    nv, nc = formula.num_vars, len(formula.clauses)
    smap = SlotMap(nv, nc)
    report = LayoutReport(groups=smap.groups(), usage=task.cards())
    slots = list(task.initial) + [()] * max(0, task.w - len(task.initial))

    def check(name, fn):
        try:
            result = fn()
        except (IndexError, KeyError, ValueError) as exc:
            report.record(name, False, f"malformed layout: {exc}")
            return
        passed, detail = result if isinstance(result, tuple) else (result, "")
        report.record(name, passed, detail)

    arity = [len(smap.groups()["selection"]), 6 * nc, 8, 1]
    check("group arity", lambda: (sum(arity) == task.w == len(slots), f"groups {arity} vs w={task.w}"))
    check("width formula", lambda: (task.w == 6 * nc + 2 * nv + 10, f"w={task.w}"))
    check("suit length", lambda: (task.n == sched.val_f, f"n={task.n}, val_f={sched.val_f}"))
    check("deck empty", lambda: not task.deck)
    check("schedule ordering", lambda: (not schedule_ordering_problems(sched),
                                        "; ".join(schedule_ordering_problems(sched))))

    def inventory():
        tv = validate_task(task)
        total = sum(report.usage.values())
        return tv.ok and total == 8 * sched.val_f, "; ".join(tv.violations[:5]) or f"{total} cards"
    check("exact-two inventory", inventory)

    def selection():
        bad = [k for k in range(1, 2 * nv + 1) if slots[smap.literal(k)][0] != Card(SPADES, sched.val[k])]
        ok = slots[0] == (Card(SPADES, sched.val_s),) and not bad
        return ok, f"slot 0 or literal piles {bad}"
    check("selection piles", selection)

    def choice_depth():
        bad = [k for k in range(1, 2 * nv + 1) if slots[smap.literal(k)] != selection_pile(sched, k)]
        return not bad, f"literal piles {bad}"
    check("choice card depth", choice_depth)

    def mutual_exclusion():
        bad = []
        for i in range(1, nv + 1):
            a = {c.value for c in slots[smap.literal(2 * i - 1)][1:]}
            b = {c.value for c in slots[smap.literal(2 * i)][1:]}
            if not (a == b == {sched.val_s - 2 * i, sched.val_s - 2 * i + 1}):
                bad.append(i)
        return not bad, f"variables {bad}"
    check("mutual exclusion", mutual_exclusion)

    def chain_arithmetic():
        bad = [k for k in range(1, 2 * nv + 1)
               if sched.val[k] - 2 * table.occ[k] != sched.val[k - 1] + 2]
        return not bad, f"literals {bad}"
    check("chain arithmetic", chain_arithmetic)

    def clause_piles():
        bad = []
        for i in range(1, nc + 1):
            bottom, base = sched.bottom[i - 1], sched.base[i - 1]
            for j in range(1, 4):
                pile = slots[smap.clause(i, j)]
                k, m = table.position[(i, j)]
                if (len(pile) != 4 or pile[0].value != bottom or pile[1].value != base + 1
                        or tuple(pile[2:]) != occurrence_pair(sched, k, m)):
                    bad.append(f"{i}.{j}")
            p4 = slots[smap.clause(i, 4)]
            if len(p4) != 1 or p4[0].value != base:
                bad.append(f"{i}.4")
            for p in (5, 6):
                pile = slots[smap.clause(i, p)]
                if len(pile) != 1 or pile[0].value != bottom + 2:
                    bad.append(f"{i}.{p}")
        return not bad, f"piles {bad}"
    check("clause piles", clause_piles)

    def foundations():
        cards = [slots[f] for f in smap.foundations]
        expected = [(Card(s, sched.val_f),) for s in FOUNDATION_SUITS]
        return cards == expected, "foundation slots differ"
    check("foundations", foundations)

    def big_pile():
        pile = slots[smap.big]
        body = pile[: len(pile) - nc]
        ascending = all((a.value, a.suit) <= (b.value, b.suit) for a, b in zip(body, body[1:]))
        tops = [c.value for c in reversed(pile[len(pile) - nc:])] if nc else []
        return ascending and tops == list(sched.blocker), f"blockers {tops}, ascending={ascending}"
    check("big pile order", big_pile)

    def blockers():
        pile = slots[smap.big]
        values = [c.value for c in pile[len(pile) - nc:]] if nc else []
        adjacent = any(abs(a - b) == 1 for x, a in enumerate(values) for b in values[x + 1:])
        cheat = any(v >= sched.val_f - 1 for v in values)
        tops = {s[-1].value for i, s in enumerate(slots) if s and i != smap.big}
        exposed = bool(values) and (values[-1] + 1 in tops or values[-1] - 1 in tops)
        return not (adjacent or cheat or exposed), f"values {values}"
    check("blocker adjacency/exposure", blockers)

    def exposure():
        # without clauses there are no blockers and no foundation cheat to prevent
        tops = [s[-1] for s in slots if s] if nc else []
        return all(c.value != sched.val_f - 1 for c in tops), "a val_f-1 card is exposed"
    check("no val_f-1 exposed", exposure)

    def single_copy():
        outside = Counter()
        skip = set(smap.foundations) | {smap.big}
        for i, slot in enumerate(slots):
            if i not in skip:
                outside.update(slot)
        pile = slots[smap.big]
        outside.update(pile[len(pile) - nc:] if nc else ())
        dup = sorted(str(c) for c, k in outside.items() if k > 1)
        return not dup, f"duplicated {dup[:5]}"
    check("single gadget copy", single_copy)

    return report
