"""Seeded random instances.

The generator is PCG64 (numpy's bit generator, seeded with the 64-bit seed)
read through ``random_raw``.  The full 8n-card multiset is listed in suit
order S, H, D, C, values ascending, two copies each, then shuffled with a
Fisher-Yates pass where step i swaps position i with ``raw % (i + 1)``.  The
first ``deck_size`` shuffled cards form the deck (first = next dealt); the
rest go round-robin to slots 0..w-1, bottom first.  Only raw 64-bit outputs
are consumed, so the stream is portable to any PCG64 implementation.
"""

from __future__ import annotations

import numpy as np

from .engine import Card, Suit, Task

SEED_LIMIT = 1 << 64


def ordered_cards(n: int) -> list[Card]:
    return [Card(suit, value) for suit in Suit for value in range(1, n + 1) for _ in range(2)]


def shuffled(cards: list, seed: int) -> list:
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    bits = np.random.PCG64(seed)
    out = list(cards)
    for i in range(len(out) - 1, 0, -1):
        j = int(bits.random_raw()) % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def random_task(n: int, w: int, deck_size: int, seed: int) -> Task:
    if n < 1:
        raise ValueError(f"suit length must be >= 1, got {n}")
    if w < 1:
        raise ValueError(f"width must be >= 1, got {w}")
    if not 0 <= deck_size <= 8 * n:
        raise ValueError(f"deck size {deck_size} outside 0..{8 * n}")
    cards = shuffled(ordered_cards(n), seed)
    deck, rest = cards[:deck_size], cards[deck_size:]
    piles = [tuple(rest[i::w]) for i in range(w)]
    return Task(n, w, tuple(deck), tuple(piles))


def compositions(total: int, parts: int):
    """Ordered splits of ``total`` into ``parts`` non-negative sizes, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


MICRO_SEEDS = (4, 5)


def micro_orders() -> list[list[Card]]:
    base = ordered_cards(2)
    return [base, base[::-1]] + [shuffled(base, seed) for seed in MICRO_SEEDS]


def micro_suite() -> list[Task]:
    """Enumerated n=2 test suite: 680 deck-empty tasks.

    Four card orders (the 16-card multiset in listing order, reversed, and
    shuffled with seeds 4 and 5) are each cut into consecutive piles by every
    composition of 16 into w = 2 and w = 3 parts (17 + 153 splits), empty
    piles allowed.
    """
    tasks = []
    for order in micro_orders():
        for w in (2, 3):
            for sizes in compositions(len(order), w):
                piles, at = [], 0
                for size in sizes:
                    piles.append(tuple(order[at:at + size]))
                    at += size
                tasks.append(Task(2, w, (), tuple(piles)))
    return tasks
