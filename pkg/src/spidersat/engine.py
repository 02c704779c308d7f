"""Immutable game model and rules of generalized Spider Solitaire.

A position is a fixed array of ``w`` slots (index 0 bottom, last element top),
an undealt deck and the list of suits whose runs have been removed.  Every
operation here is a pure function; states are never mutated.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import NamedTuple, Union


class Suit(IntEnum):
    SPADES = 0
    HEARTS = 1
    DIAMONDS = 2
    CLUBS = 3

    @property
    def letter(self) -> str:
        return "SHDC"[self]

    @property
    def is_black(self) -> bool:
        return self in (Suit.SPADES, Suit.CLUBS)

    @property
    def is_red(self) -> bool:
        return not self.is_black

    @classmethod
    def from_letter(cls, letter: str) -> "Suit":
        try:
            return cls("SHDC".index(letter))
        except ValueError:
            raise ValueError(f"unknown suit letter {letter!r}") from None


SPADES, HEARTS, DIAMONDS, CLUBS = Suit.SPADES, Suit.HEARTS, Suit.DIAMONDS, Suit.CLUBS


class Card(NamedTuple):
    suit: Suit
    value: int

    def __str__(self) -> str:
        return f"{self.suit.letter}{self.value}"


Slot = tuple[Card, ...]


class EngineError(ValueError):
    """Base class for rule violations and malformed positions."""


class IllegalMove(EngineError):
    def __init__(self, reason: str, move: "Move | None" = None):
        super().__init__(reason)
        self.reason = reason
        self.move = move


@dataclass(frozen=True)
class Deal:
    def __str__(self) -> str:
        return "deal"


@dataclass(frozen=True)
class Transfer:
    src: int
    length: int
    dst: int

    def __str__(self) -> str:
        return f"t {self.src} {self.length} {self.dst}"


DEAL = Deal()
Move = Union[Deal, Transfer]
Plan = tuple[Move, ...]


@dataclass(frozen=True)
class Task:
    """A Spider task: suit length, width, deck (front = next dealt), initial tableau."""

    n: int
    w: int
    deck: tuple[Card, ...]
    initial: tuple[Slot, ...]

    def __post_init__(self):
        object.__setattr__(self, "deck", tuple(self.deck))
        object.__setattr__(self, "initial", tuple(tuple(s) for s in self.initial))

    @property
    def d(self) -> int:
        return len(self.deck)

    def cards(self) -> Counter:
        counts: Counter = Counter(self.deck)
        for slot in self.initial:
            counts.update(slot)
        return counts


@dataclass(frozen=True)
class State:
    n: int
    slots: tuple[Slot, ...]
    deck: tuple[Card, ...] = ()
    removed: tuple[Suit, ...] = field(default=())

    @property
    def w(self) -> int:
        return len(self.slots)

    def cards(self) -> Counter:
        counts: Counter = Counter(self.deck)
        for slot in self.slots:
            counts.update(slot)
        return counts


def full_deck(n: int) -> Counter:
    """The n-deck as a multiset: two copies of every (suit, value)."""
    return Counter({Card(s, v): 2 for s in Suit for v in range(1, n + 1)})


def matches(card: Card, slot: Slot) -> bool:
    if not slot:
        raise EngineError("no top card")
    return card.value == slot[-1].value - 1


def liftable_run_lengths(slot: Slot) -> set[int]:
    return set(range(1, run_length(slot) + 1))


def run_length(slot: Slot) -> int:
    """Length of the maximal same-suit run that ends at the top of ``slot``."""
    if not slot:
        return 0
    top = slot[-1]
    suit, value = top.suit, top.value
    length = 1
    for i in range(len(slot) - 2, -1, -1):
        card = slot[i]
        if card.suit != suit or card.value != value + length:
            break
        length += 1
    return length


def _complete_block(slot: Slot, n: int) -> bool:
    if len(slot) < n or slot[-1].value != 1:
        return False
    suit = slot[-1].suit
    for j in range(n):
        card = slot[-1 - j]
        if card.suit != suit or card.value != j + 1:
            return False
    return True


def auto_remove(state: State) -> tuple[State, list[Suit]]:
    """Remove complete n..1 same-suit blocks at slot tops until none is left."""
    n = state.n
    slots = None
    removals: list[Suit] = []
    changed = True
    while changed:
        changed = False
        current = slots if slots is not None else state.slots
        for i, slot in enumerate(current):
            if _complete_block(slot, n):
                if slots is None:
                    slots = list(state.slots)
                removals.append(slot[-1].suit)
                slots[i] = slot[:-n]
                changed = True
    if not removals:
        return state, removals
    return State(n, tuple(slots), state.deck, state.removed + tuple(removals)), removals


def initial_state(task: Task) -> State:
    state, _ = auto_remove(State(task.n, task.initial, task.deck))
    return state


def legal_moves(state: State) -> list[Move]:
    """All legal moves, ascending by (src, length, dst), with Deal last."""
    slots = state.slots
    w = len(slots)
    tops = [s[-1].value if s else None for s in slots]
    moves: list[Move] = []
    for src, slot in enumerate(slots):
        if not slot:
            continue
        for length in range(1, run_length(slot) + 1):
            need = slot[-length].value + 1
            for dst in range(w):
                if dst != src and (tops[dst] is None or tops[dst] == need):
                    moves.append(Transfer(src, length, dst))
    if state.deck:
        moves.append(DEAL)
    return moves


def check_move(state: State, move: Move) -> None:
    """Raise IllegalMove naming the violated rule, or return if legal."""
    if isinstance(move, Deal):
        if not state.deck:
            raise IllegalMove("deal with empty deck", move)
        return
    if not isinstance(move, Transfer):
        raise IllegalMove(f"not a move: {move!r}", move)
    w = len(state.slots)
    if not (0 <= move.src < w and 0 <= move.dst < w):
        raise IllegalMove("slot index out of range", move)
    if move.src == move.dst:
        raise IllegalMove("source and destination are the same slot", move)
    slot = state.slots[move.src]
    if not slot:
        raise IllegalMove("empty source slot", move)
    if move.length < 1 or move.length > run_length(slot):
        raise IllegalMove("bad run: cards are not a same-suit descending run", move)
    target = state.slots[move.dst]
    if target and target[-1].value != slot[-move.length].value + 1:
        raise IllegalMove("non-match: moved card is not one below the target top", move)


def apply(state: State, move: Move) -> tuple[State, list[Suit]]:
    check_move(state, move)
    slots = list(state.slots)
    deck = state.deck
    if isinstance(move, Deal):
        count = min(len(slots), len(deck))
        for i in range(count):
            slots[i] = slots[i] + (deck[i],)
        deck = deck[count:]
    else:
        run = slots[move.src][-move.length:]
        slots[move.src] = slots[move.src][: -move.length]
        slots[move.dst] = slots[move.dst] + run
    return auto_remove(State(state.n, tuple(slots), deck, state.removed))


def is_won(state: State) -> bool:
    return not state.deck and not any(state.slots)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(self.violations)


def validate_task(task: Task) -> ValidationReport:
    report = ValidationReport()
    if task.n < 1:
        report.violations.append(f"suit length {task.n} < 1")
    if task.w < 0:
        report.violations.append(f"width {task.w} < 0")
    if len(task.initial) > task.w:
        report.violations.append(f"more than w slots: {len(task.initial)} > {task.w}")
    counts = task.cards()
    for card in sorted(counts):
        if not 1 <= card.value <= task.n:
            report.violations.append(f"value out of range for {card} (n={task.n})")
    for card in sorted(full_deck(task.n)):
        if counts.get(card, 0) != 2:
            report.violations.append(f"count={counts.get(card, 0)} for {card}")
    return report


class ReplayError(EngineError):
    def __init__(self, index: int, reason: str, state: State):
        super().__init__(f"illegal move at index {index}: {reason}")
        self.index = index
        self.reason = reason
        self.state = state


def replay(task: Task, plan) -> State:
    """Fold ``apply`` over ``plan``; raises ReplayError at the first illegal move."""
    state = initial_state(task)
    for i, move in enumerate(plan):
        try:
            state, _ = apply(state, move)
        except IllegalMove as exc:
            raise ReplayError(i, exc.reason, state) from None
    return state


def canonical_form(state: State) -> tuple:
    """Slot order is irrelevant once the deck is exhausted; deals address slots by index."""
    if state.deck:
        return (state.slots, state.deck)
    return (tuple(sorted(state.slots)), ())


# -- state digests ---------------------------------------------------------

_MASK = (1 << 64) - 1
_ZOBRIST_SALT = 0x5D1E_50_117A_1E


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def zobrist(card: Card, pos: int) -> int:
    return splitmix64((pos << 24 | card.value << 2 | card.suit) ^ _ZOBRIST_SALT)


@lru_cache(maxsize=64)
def _slot_salt(index: int) -> int:
    return splitmix64(index ^ 0xA5A5_0000_0000_0001)


def slot_hash(slot: Slot) -> int:
    h = 0
    for pos, card in enumerate(slot):
        h += zobrist(card, pos)
    return h & _MASK


def _deck_hash(deck: tuple[Card, ...]) -> int:
    h = splitmix64(len(deck) ^ 0xDEC0_0000)
    for pos, card in enumerate(deck):
        h += zobrist(card, pos + (1 << 20))
    return h & _MASK


def combine_key(slot_hashes, deck: tuple[Card, ...]) -> int:
    """Fold per-slot hashes into a state key (order-free when the deck is empty)."""
    if not deck:
        return sum(map(splitmix64, slot_hashes)) & _MASK
    key = _deck_hash(deck)
    for i, h in enumerate(slot_hashes):
        key += splitmix64(h ^ _slot_salt(i))
    return key & _MASK


def canonical_key(state: State) -> int:
    """64-bit digest of ``canonical_form(state)``."""
    return combine_key([slot_hash(s) for s in state.slots], state.deck)
