import random

import pytest

from spidersat.cnf import CnfFormula
from spidersat.engine import apply, initial_state, legal_moves
from spidersat.generate import random_task

F_REF_CLAUSES = [(1, -1, 2), (-1, 2, 3), (3, -2, -3)]
UNSAT_PROBE_CLAUSES = [(1, 1, 1), (-1, -1, -1)]


@pytest.fixture
def f_ref():
    return CnfFormula.from_ints(3, F_REF_CLAUSES)


@pytest.fixture
def unsat_probe():
    return CnfFormula.from_ints(1, UNSAT_PROBE_CLAUSES)


def random_playout_states(seed: int, count: int, max_len: int = 40):
    """Yield (state, move, child, removals) transitions from random playouts."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        n = rng.randint(1, 4)
        w = rng.randint(1, 8)
        task = random_task(n, w, rng.randint(0, 8 * n), rng.getrandbits(64))
        state = initial_state(task)
        for _ in range(max_len):
            moves = legal_moves(state)
            if not moves or made >= count:
                break
            move = rng.choice(moves)
            child, removals = apply(state, move)
            yield state, move, child, removals
            made += 1
            state = child
