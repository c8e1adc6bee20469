"""Best one-to-one matching of truth regions to test regions.

Given the non-background block of a confusion matrix, find the highest total
taking at most one value from any row and at most one from any column. Rows and
columns may stay unmatched. Only the total is needed for scoring; the matched
pairs are returned as a witness.
"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .config_file import ASSIGNMENT_METHODS, DEFAULT_METHOD

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 9


@dataclass(frozen=True)
class AssignmentResult:
    """Assignment total I and one matching that achieves it."""

    total: int
    matched_pairs: tuple[tuple[int, int], ...] = ()


def _as_count_matrix(sub: np.ndarray | list) -> np.ndarray:
    counts = np.asarray(sub, dtype=np.int64)
    if counts.size == 0:
        return counts.reshape(0, 0) if counts.ndim != 2 else counts
    if counts.ndim != 2:
        raise ValueError(f"Expected a 2D matrix, got shape {counts.shape}")
    if counts.min() < 0:
        raise ValueError("Assignment entries must be non-negative")
    return counts


def max_assignment_total(
    sub: np.ndarray | list,
    method: str = DEFAULT_METHOD,
) -> AssignmentResult:
    """Exact maximum total of a one-per-row, one-per-column selection.

    Args:
        sub: Non-negative integer matrix, rows are truth regions and columns test regions.
        method: "hungarian" (scipy rectangular linear sum assignment) or "branch_and_bound".

    Returns:
        The AssignmentResult. An empty matrix gives a total of 0.

    """
    if method not in ASSIGNMENT_METHODS:
        raise ValueError(
            f"Unknown assignment method {method!r}, expected one of {ASSIGNMENT_METHODS}"
        )

    counts = _as_count_matrix(sub)
    if counts.size == 0:
        return AssignmentResult(0)

    if method == "hungarian":
        rows, cols = linear_sum_assignment(counts, maximize=True)
        pairs = [(int(r), int(c)) for r, c in zip(rows, cols, strict=True)]
    else:
        pairs = _branch_and_bound(counts)

    total = int(sum(counts[r, c] for r, c in pairs))
    logger.debug("Assignment total %d over %s matrix (%s)", total, counts.shape, method)
    return AssignmentResult(total, tuple(pairs))


def _branch_and_bound(counts: np.ndarray) -> list[tuple[int, int]]:
    """Depth-first search over rows, pruned by the sum of remaining row maxima."""
    transposed = counts.shape[0] > counts.shape[1]
    work = counts.T if transposed else counts
    values = work.tolist()
    n_cols = work.shape[1]
    # rows with large values first so good totals are found early
    order = sorted(range(work.shape[0]), key=lambda r: -max(values[r]))
    col_orders = {r: sorted(range(n_cols), key=lambda c: -values[r][c]) for r in order}

    used = [False] * n_cols
    best_total = -1
    best_pairs: list[tuple[int, int]] = []
    chosen: list[tuple[int, int]] = []

    def bound(depth: int) -> int:
        return sum(
            max((values[r][c] for c in range(n_cols) if not used[c]), default=0)
            for r in order[depth:]
        )

    def search(depth: int, total: int) -> None:
        nonlocal best_total, best_pairs
        if depth == len(order):
            if total > best_total:
                best_total = total
                best_pairs = list(chosen)
            return
        if total + bound(depth) <= best_total:
            return

        row = order[depth]
        for col in col_orders[row]:
            value = values[row][col]
            if value == 0:
                break  # a zero pick scores the same as leaving the row unmatched
            if used[col]:
                continue
            used[col] = True
            chosen.append((row, col))
            search(depth + 1, total + value)
            chosen.pop()
            used[col] = False
        search(depth + 1, total)

    search(0, 0)
    if transposed:
        return [(c, r) for r, c in best_pairs]
    return best_pairs


def brute_force_assignment_total(sub: np.ndarray | list) -> int:
    """Best total by enumerating every injective matching. Test oracle only.

    Args:
        sub: Non-negative integer matrix with min(rows, cols) <= 9.

    Returns:
        The maximum total.

    """
    counts = _as_count_matrix(sub)
    if counts.size == 0:
        return 0
    if counts.shape[0] > counts.shape[1]:
        counts = counts.T
    if counts.shape[0] > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"Brute force is limited to min(rows, cols) <= {BRUTE_FORCE_LIMIT}, got {counts.shape}"
        )

    rows = counts.tolist()
    best = 0
    for cols in itertools.permutations(range(counts.shape[1]), counts.shape[0]):
        best = max(best, sum(row[c] for row, c in zip(rows, cols, strict=True)))
    return best
