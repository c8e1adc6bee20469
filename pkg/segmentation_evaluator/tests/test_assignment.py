"""Tests for the maximum one-to-one assignment solvers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from segmentation_evaluator.evaluation_utils.assignment import (
    brute_force_assignment_total,
    max_assignment_total,
)
from segmentation_evaluator.evaluation_utils.config_file import ASSIGNMENT_METHODS

METHODS = list(ASSIGNMENT_METHODS)

count_matrices = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(
    lambda shape: arrays(np.int64, shape, elements=st.integers(0, 50))
)


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize(
    ("sub", "expected"),
    [
        ([[1, 1], [0, 1]], 2),
        ([[5]], 5),
        ([[3, 3, 3]], 3),
        ([[2], [7], [1]], 7),
        ([[10, 9], [9, 0]], 18),
        ([[0, 0], [0, 0]], 0),
    ],
)
def test_small_examples(method, sub, expected):
    assert max_assignment_total(sub, method).total == expected


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("sub", [[], np.zeros((0, 3)), np.zeros((2, 0))])
def test_empty_matrix_total_is_zero(method, sub):
    result = max_assignment_total(sub, method)
    assert result.total == 0
    assert result.matched_pairs == ()


def test_matches_brute_force_on_random_matrices():
    rng = np.random.default_rng(21)
    for _ in range(500):
        rows, cols = rng.integers(1, 8, size=2)
        sub = rng.integers(0, 101, size=(rows, cols)) * (rng.random((rows, cols)) < 0.6)
        expected = brute_force_assignment_total(sub)
        for method in METHODS:
            assert max_assignment_total(sub, method).total == expected


@pytest.mark.parametrize("method", METHODS)
def test_matched_pairs_are_one_to_one(method):
    rng = np.random.default_rng(22)
    for _ in range(100):
        sub = rng.integers(0, 20, size=tuple(rng.integers(1, 8, size=2)))
        result = max_assignment_total(sub, method)
        rows = [r for r, _ in result.matched_pairs]
        cols = [c for _, c in result.matched_pairs]
        assert len(set(rows)) == len(rows)
        assert len(set(cols)) == len(cols)
        assert sum(int(sub[r, c]) for r, c in result.matched_pairs) == result.total


@settings(max_examples=100, deadline=None)
@given(sub=count_matrices)
def test_transpose_keeps_total(sub):
    assert max_assignment_total(sub).total == max_assignment_total(sub.T).total


@settings(max_examples=100, deadline=None)
@given(sub=count_matrices)
def test_total_is_bounded(sub):
    total = max_assignment_total(sub).total
    assert 0 <= total <= int(sub.sum())
    assert total <= int(sub.max(axis=1).sum())
    assert total <= int(sub.max(axis=0).sum())
    assert total >= int(sub.max())


@settings(max_examples=100, deadline=None)
@given(sub=count_matrices, data=st.data())
def test_row_and_column_permutations_keep_total(sub, data):
    row_order = data.draw(st.permutations(range(sub.shape[0])))
    col_order = data.draw(st.permutations(range(sub.shape[1])))
    shuffled = sub[np.ix_(row_order, col_order)]
    assert max_assignment_total(shuffled).total == max_assignment_total(sub).total


@settings(max_examples=100, deadline=None)
@given(sub=count_matrices, data=st.data())
def test_raising_an_entry_never_lowers_total(sub, data):
    row = data.draw(st.integers(0, sub.shape[0] - 1))
    col = data.draw(st.integers(0, sub.shape[1] - 1))
    raised = sub.copy()
    raised[row, col] += data.draw(st.integers(1, 20))
    for method in METHODS:
        before = max_assignment_total(sub, method).total
        assert max_assignment_total(raised, method).total >= before


def test_unknown_method():
    with pytest.raises(ValueError, match="Unknown assignment method"):
        max_assignment_total([[1]], "greedy")


def test_negative_entries_rejected():
    with pytest.raises(ValueError):
        max_assignment_total([[1, -1]])


def test_brute_force_limit():
    with pytest.raises(ValueError):
        brute_force_assignment_total(np.ones((10, 10)))
