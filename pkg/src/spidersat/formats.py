"""Line-oriented instance and plan files.

Instance::

    spider 1
    n <int>
    w <int>
    pile <tokens bottom->top>     (one line per slot)
    deck <tokens, first = next dealt>

Plan: one ``t <from> <len> <to>`` or ``deal`` per line.  ``#`` starts a comment
in both formats.  Output is LF-terminated with single spaces.
"""

from __future__ import annotations

import re

from .engine import DEAL, Card, EngineError, Move, Task, Transfer, Suit, validate_task


_TOKEN = re.compile(r"\S+")


class FormatError(EngineError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class InvalidTask(EngineError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid task: " + "; ".join(violations))
        self.violations = violations


def _tokens(text: str):
    """Yield (line_no, [(col, token), ...]) for each non-blank line, comments stripped."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]
        if toks:
            yield lineno, toks


def parse_card(token: str, line: int = 0, col: int = 1) -> Card:
    if len(token) < 2:
        raise FormatError(f"malformed card token {token!r}", line, col)
    letter, digits = token[0], token[1:]
    if letter not in "SHDC":
        raise FormatError(f"unknown suit letter {letter!r} in {token!r}", line, col)
    if not (digits.isascii() and digits.isdigit()) or digits.startswith("0"):
        raise FormatError(f"bad card value in {token!r}", line, col)
    return Card(Suit.from_letter(letter), int(digits))


def _int_arg(toks, line: int, key: str) -> int:
    if len(toks) != 2:
        raise FormatError(f"expected '{key} <int>'", line, toks[0][0])
    col, raw = toks[1]
    if not (raw.isascii() and raw.isdigit()):
        raise FormatError(f"expected integer after '{key}', got {raw!r}", line, col)
    return int(raw)


def parse_task(text: str, validate: bool = True) -> Task:
    lines = list(_tokens(text))
    if not lines:
        raise FormatError("empty instance file", 1)
    line, toks = lines[0]
    if [t for _, t in toks] != ["spider", "1"]:
        raise FormatError("expected header 'spider 1'", line, toks[0][0])
    n = w = None
    piles: list[tuple[Card, ...]] = []
    deck = None
    for line, toks in lines[1:]:
        key = toks[0][1]
        if deck is not None:
            raise FormatError(f"unexpected {key!r} after deck line", line, toks[0][0])
        if key == "n":
            if n is not None or piles:
                raise FormatError("misplaced 'n' line", line, toks[0][0])
            n = _int_arg(toks, line, "n")
        elif key == "w":
            if w is not None or piles:
                raise FormatError("misplaced 'w' line", line, toks[0][0])
            w = _int_arg(toks, line, "w")
        elif key in ("pile", "deck"):
            if n is None or w is None:
                raise FormatError(f"'{key}' before 'n' and 'w'", line, toks[0][0])
            cards = tuple(parse_card(tok, line, col) for col, tok in toks[1:])
            if key == "pile":
                piles.append(cards)
            else:
                deck = cards
        else:
            raise FormatError(f"unknown directive {key!r}", line, toks[0][0])
    if n is None or w is None:
        raise FormatError("missing 'n' or 'w' line", lines[-1][0])
    if deck is None:
        raise FormatError("missing 'deck' line", lines[-1][0])
    piles.extend(() for _ in range(w - len(piles)))
    task = Task(n, w, deck, tuple(piles))
    if validate:
        report = validate_task(task)
        if not report.ok:
            raise InvalidTask(report.violations)
    return task


def format_task(task: Task) -> str:
    out = ["spider 1", f"n {task.n}", f"w {task.w}"]
    for slot in task.initial:
        out.append(" ".join(["pile", *map(str, slot)]))
    out.extend(["pile"] * (task.w - len(task.initial)))
    out.append(" ".join(["deck", *map(str, task.deck)]))
    return "\n".join(out) + "\n"


def parse_plan(text: str) -> tuple[Move, ...]:
    moves: list[Move] = []
    for line, toks in _tokens(text):
        words = [t for _, t in toks]
        if words == ["deal"]:
            moves.append(DEAL)
        elif words[0] == "t" and len(words) == 4:
            for col, raw in toks[1:]:
                if not (raw.isascii() and raw.isdigit()):
                    raise FormatError(f"expected non-negative integer, got {raw!r}", line, col)
            src, length, dst = map(int, words[1:])
            moves.append(Transfer(src, length, dst))
        else:
            raise FormatError(f"expected 't <from> <len> <to>' or 'deal', got {' '.join(words)!r}",
                              line, toks[0][0])
    return tuple(moves)


def format_plan(plan) -> str:
    return "".join(f"{move}\n" for move in plan)


def format_state(state) -> str:
    """Human-readable dump used in traces and error reports."""
    lines = [f"n {state.n} deck {len(state.deck)} removed {len(state.removed)}"]
    for i, slot in enumerate(state.slots):
        lines.append(f"{i:3d}: " + " ".join(map(str, slot)))
    if state.deck:
        lines.append("deck: " + " ".join(map(str, state.deck)))
    return "\n".join(lines) + "\n"
