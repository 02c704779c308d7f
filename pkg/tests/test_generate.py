import pytest

from spidersat.engine import validate_task
from spidersat.formats import format_task
from spidersat.generate import compositions, micro_suite, random_task, shuffled

SEED_42 = (
    "spider 1\nn 2\nw 3\n"
    "pile S1 H1 C1 S1 C1 D1\n"
    "pile C2 S2 S2 D1 C2\n"
    "pile H2 D2 D2 H2 H1\n"
    "deck\n"
)


def test_frozen_fixture():
    assert format_task(random_task(2, 3, 0, 42)) == SEED_42


def test_valid_and_deterministic():
    for seed in range(30):
        task = random_task(3, 5, seed % 25, seed)
        assert validate_task(task).ok
        assert task.d == seed % 25
        assert random_task(3, 5, seed % 25, seed) == task
    assert random_task(2, 3, 0, 1) != random_task(2, 3, 0, 2)


def test_argument_errors():
    with pytest.raises(ValueError, match="deck size"):
        random_task(2, 3, 17, 0)
    with pytest.raises(ValueError, match="seed"):
        random_task(2, 3, 0, 2**64)
    with pytest.raises(ValueError):
        random_task(0, 3, 0, 0)


def test_shuffle_is_permutation():
    items = list(range(50))
    out = shuffled(items, 123)
    assert sorted(out) == items and out != items


def test_compositions():
    assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(compositions(16, 3))) == 153


def test_micro_suite_shape():
    suite = micro_suite()
    assert len(suite) == 680
    assert all(t.n == 2 and t.d == 0 and validate_task(t).ok for t in suite)
    assert len(set(suite)) == len(suite)
