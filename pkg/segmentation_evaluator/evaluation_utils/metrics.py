"""Scores for one object comparison, all read from a single confusion matrix.

S is the set of object (non-background) pixels of the test image and T that of
the truth image. I is the best one-to-one assignment total between truth and
test regions. Ratios are formed exactly as fractions and emitted as floats. When
both images are entirely background every similarity score is 1.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .assignment import max_assignment_total
from .config_file import DEFAULT_METHOD
from .confusion import ConfusionMatrix, build_confusion
from .label_io import LabelImage

logger = logging.getLogger(__name__)

TRUTH_TO_TEST = "truth_to_test"
TEST_TO_TRUTH = "test_to_truth"


class RegionCounts(NamedTuple):
    truth_count: int
    test_count: int
    difference: int


@dataclass(frozen=True)
class MetricsReport:
    """Every score and count for one truth/test comparison."""

    test_region_count: int
    truth_region_count: int
    count_difference: int
    object_jaccard: float
    subset_jaccard: float
    object_dice: float
    subset_dice: float
    symmetric_best_dice: float

    def as_dict(self) -> dict[str, int | float]:
        return dataclasses.asdict(self)


def _ratio(numerator: int, denominator: int) -> float:
    """Exact numerator/denominator as a float, 1 for the empty/empty case."""
    if denominator == 0:
        return 1.0
    return float(Fraction(numerator, denominator))


def region_counts(confusion: ConfusionMatrix) -> RegionCounts:
    """Region counts of both images and their signed difference m - n.

    A negative difference means the test image is over-segmented.
    """
    return RegionCounts(
        truth_count=confusion.m - 1,
        test_count=confusion.n - 1,
        difference=confusion.m - confusion.n,
    )


def object_jaccard(confusion: ConfusionMatrix) -> float:
    """|S n T| / |S u T|."""
    return _ratio(confusion.intersection, confusion.union)


def subset_matched_jaccard(confusion: ConfusionMatrix, method: str = DEFAULT_METHOD) -> float:
    """I / |S u T|, each region matched to at most one region of the other image."""
    assignment = max_assignment_total(confusion.submatrix, method)
    return _ratio(assignment.total, confusion.union)


def object_dice(confusion: ConfusionMatrix) -> float:
    """2|S n T| / (|S| + |T|)."""
    return _ratio(
        2 * confusion.intersection,
        confusion.test_object_size + confusion.truth_object_size,
    )


def subset_matched_dice(confusion: ConfusionMatrix, method: str = DEFAULT_METHOD) -> float:
    """2I / (|S| + |T|)."""
    assignment = max_assignment_total(confusion.submatrix, method)
    return _ratio(
        2 * assignment.total,
        confusion.test_object_size + confusion.truth_object_size,
    )


def best_dice(confusion: ConfusionMatrix, direction: str = TRUTH_TO_TEST) -> float:
    """Mean over the regions of one image of their best Dice against any region of the other.

    A region may be the best match of several regions, so the two directions can differ.

    Args:
        confusion: Confusion matrix of the pair.
        direction: TRUTH_TO_TEST averages over truth regions, TEST_TO_TRUTH over test regions.

    Returns:
        The one-directional best Dice.

    """
    if direction == TEST_TO_TRUTH:
        confusion = confusion.transposed()
    elif direction != TRUTH_TO_TEST:
        raise ValueError(f"Unknown best dice direction {direction!r}")

    from_count, to_count = confusion.m - 1, confusion.n - 1
    if from_count == 0 or to_count == 0:
        return 1.0 if from_count == to_count else 0.0

    from_sizes = confusion.truth_region_sizes[1:]
    to_sizes = confusion.test_region_sizes[1:]
    dice = 2 * confusion.submatrix / (from_sizes[:, np.newaxis] + to_sizes[np.newaxis, :])
    best = dice.max(axis=1).tolist()
    return math.fsum(best) / len(best)


def symmetric_best_dice(confusion: ConfusionMatrix) -> float:
    """The worse of the two best Dice directions."""
    return min(best_dice(confusion, TRUTH_TO_TEST), best_dice(confusion, TEST_TO_TRUTH))


def evaluate_confusion(
    confusion: ConfusionMatrix,
    method: str = DEFAULT_METHOD,
) -> MetricsReport:
    """Fill every MetricsReport field from one confusion matrix.

    Args:
        confusion: Confusion matrix of the pair.
        method: Assignment solver used for I.

    Returns:
        The MetricsReport.

    """
    counts = region_counts(confusion)
    assignment_total = max_assignment_total(confusion.submatrix, method).total
    object_sizes = confusion.test_object_size + confusion.truth_object_size

    return MetricsReport(
        test_region_count=counts.test_count,
        truth_region_count=counts.truth_count,
        count_difference=counts.difference,
        object_jaccard=object_jaccard(confusion),
        subset_jaccard=_ratio(assignment_total, confusion.union),
        object_dice=object_dice(confusion),
        subset_dice=_ratio(2 * assignment_total, object_sizes),
        symmetric_best_dice=symmetric_best_dice(confusion),
    )


def evaluate_pair(
    truth: LabelImage,
    test: LabelImage,
    method: str = DEFAULT_METHOD,
    chunks: int = 1,
) -> MetricsReport:
    """Evaluate a test image against a truth image holding one object.

    Args:
        truth: Ground truth label image.
        test: Label image being evaluated.
        method: Assignment solver used for I.
        chunks: Pixel bands used to build the confusion matrix.

    Returns:
        The MetricsReport of the pair.

    """
    confusion = build_confusion(truth, test, chunks=chunks)
    report = evaluate_confusion(confusion, method)
    logger.debug("Evaluated pair: %s", report)
    return report
