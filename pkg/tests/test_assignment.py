import itertools

import numpy as np
import pytest

from d2dpa.assignment import Assignment, RateTable, hungarian_max


def enumerate_best(table: np.ndarray) -> float:
    d, k = table.shape
    best = -np.inf
    for perm in itertools.permutations(range(k), d):
        total = sum(table[r, c] for r, c in enumerate(perm))
        best = max(best, total)
    return best


def test_two_by_two_diagonal():
    assignment, total = hungarian_max(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert assignment.pair_to_cu == (0, 1)
    assert total == 4.0


def test_all_equal_table_lexicographic():
    assignment, total = hungarian_max(np.full((3, 5), 7.0))
    assert assignment.pair_to_cu == (0, 1, 2)
    assert total == 21.0


def test_seeded_rectangular_vs_enumeration():
    rng = np.random.default_rng(71)
    table = rng.uniform(0.0, 1.0, (5, 20))
    assignment, total = hungarian_max(table)
    # vectorized enumeration over all 20*19*18*17*16 injections
    perms = np.array(list(itertools.permutations(range(20), 5)))
    totals = table[np.arange(5)[None, :], perms].sum(axis=1)
    assert total == pytest.approx(float(totals.max()), rel=1e-12)


def test_random_small_tables_vs_enumeration():
    rng = np.random.default_rng(72)
    for _ in range(60):
        d = rng.integers(1, 7)
        k = rng.integers(d, 11)
        table = rng.uniform(0.0, 5.0, (d, k))
        _, total = hungarian_max(table)
        assert total == pytest.approx(enumerate_best(table), rel=1e-12)


def test_row_constant_shift_keeps_argmax():
    rng = np.random.default_rng(73)
    for _ in range(30):
        table = rng.uniform(0.0, 1.0, (4, 7))
        base, _ = hungarian_max(table)
        shifted = table.copy()
        shifted[2] += 3.5
        after, _ = hungarian_max(shifted)
        assert base.pair_to_cu == after.pair_to_cu


def test_dimension_error():
    with pytest.raises(ValueError):
        hungarian_max(np.zeros((3, 2)))


def test_empty_table():
    assignment, total = hungarian_max(np.zeros((0, 4)))
    assert assignment.pair_to_cu == ()
    assert total == 0.0


def test_tie_break_is_lexicographically_smallest():
    # two optimal assignments: (0->0, 1->1) and (0->1, 1->0)
    table = np.array([[1.0, 1.0], [1.0, 1.0]])
    assignment, _ = hungarian_max(table)
    assert assignment.pair_to_cu == (0, 1)
    table = np.array([[5.0, 5.0, 0.0], [5.0, 5.0, 0.0]])
    assignment, _ = hungarian_max(table)
    assert assignment.pair_to_cu == (0, 1)


def test_assignment_validation():
    with pytest.raises(ValueError):
        Assignment((1, 1))


class TestRateTable:
    def test_infeasible_entries_must_be_zero(self):
        rates = np.array([[1.0, 2.0]])
        bad = np.array([[True, False]])
        with pytest.raises(ValueError):
            RateTable(rates, infeasible=bad)
        RateTable(np.array([[0.0, 2.0]]), infeasible=bad)

    def test_shape_and_sign_checks(self):
        with pytest.raises(ValueError):
            RateTable(np.zeros((3, 2)))
        with pytest.raises(ValueError):
            RateTable(np.array([[-1.0, 0.0]]))
        with pytest.raises(ValueError):
            RateTable(np.zeros((2, 3)), sic_applied=np.zeros((1, 3), dtype=bool))

    def test_hungarian_accepts_rate_table(self):
        table = RateTable(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assignment, total = hungarian_max(table)
        assert assignment.pair_to_cu == (0, 1)
        assert total == 4.0
