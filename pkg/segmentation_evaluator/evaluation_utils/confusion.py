"""Pixel classification confusion matrix between a truth image and a test image.

Rows follow the truth image's region index, columns the test image's. Both
indexes hold the background label first, so cell (0, 0) counts pixels that are
background in both images.
"""

import functools
import logging
from dataclasses import dataclass

import numpy as np

from .errors import BackgroundMismatchError, DimensionMismatchError
from .label_io import LabelImage

logger = logging.getLogger(__name__)

# a label -> position table is used instead of sorting when labels fit 24-bit colours
# and the table is no larger than a few times the image
DENSE_LOOKUP_LIMIT = 1 << 24
DENSE_LOOKUP_RATIO = 8


@dataclass(frozen=True)
class RegionIndex:
    """Distinct labels of one image, background first, the rest ascending."""

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("A region index needs at least the background label")
        regions = self.labels[1:]
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"Duplicate labels in region index {self.labels}")
        if list(regions) != sorted(regions):
            raise ValueError(f"Region labels must be ascending, got {regions}")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def background(self) -> int:
        return self.labels[0]

    @property
    def region_count(self) -> int:
        """Number of non-background regions."""
        return len(self.labels) - 1

    @functools.cached_property
    def positions(self) -> dict[int, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def position(self, label: int) -> int:
        return self.positions[label]


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """m x n pixel counts, truth regions on rows and test regions on columns."""

    truth_index: RegionIndex
    test_index: RegionIndex
    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.array(self.counts, dtype=np.int64)
        if counts.shape != (len(self.truth_index), len(self.test_index)):
            raise ValueError(
                f"Counts shape {counts.shape} does not match indexes "
                f"({len(self.truth_index)}, {len(self.test_index)})"
            )
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def m(self) -> int:
        return len(self.truth_index)

    @property
    def n(self) -> int:
        return len(self.test_index)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def submatrix(self) -> np.ndarray:
        """Counts between non-background truth rows and non-background test columns."""
        return self.counts[1:, 1:]

    @property
    def intersection(self) -> int:
        """|S n T|, pixels that are object in both images."""
        return int(self.submatrix.sum())

    @property
    def union(self) -> int:
        """|S u T|, pixels that are object in either image."""
        return self.total - int(self.counts[0, 0])

    @property
    def test_object_size(self) -> int:
        """|S|, object pixels of the test image."""
        return int(self.counts[:, 1:].sum())

    @property
    def truth_object_size(self) -> int:
        """|T|, object pixels of the truth image."""
        return int(self.counts[1:, :].sum())

    @property
    def truth_region_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def test_region_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def transposed(self) -> "ConfusionMatrix":
        """The matrix with truth and test roles swapped."""
        return ConfusionMatrix(self.test_index, self.truth_index, self.counts.T)

    def merge(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        """Add partial counts built over a different pixel range of the same pair."""
        if self.truth_index != other.truth_index or self.test_index != other.test_index:
            raise ValueError("Only matrices sharing both region indexes can be merged")
        return ConfusionMatrix(self.truth_index, self.test_index, self.counts + other.counts)


def build_region_index(image: LabelImage) -> RegionIndex:
    """List the labels used in an image, background first even if no pixel has it.

    Args:
        image: Label image to index.

    Returns:
        The image's RegionIndex.

    """
    return _index_positions(image)[0]


def _index_positions(image: LabelImage) -> tuple[RegionIndex, np.ndarray]:
    """Region index of an image and each pixel's position in it, flattened row-major."""
    background = image.background_label
    flat = image.labels.ravel()
    top = int(flat.max())
    dense = top < DENSE_LOOKUP_LIMIT and top <= DENSE_LOOKUP_RATIO * flat.size
    if dense:
        present = np.zeros(top + 1, dtype=bool)
        present[flat] = True
        unique = np.flatnonzero(present)
    else:
        unique, inverse = np.unique(flat, return_inverse=True)

    is_background = unique == background
    regions = unique[~is_background]
    lookup = np.zeros(len(unique), dtype=np.int64)
    lookup[~is_background] = np.arange(1, len(regions) + 1)
    index = RegionIndex((background, *regions.tolist()))

    if dense:
        table = np.zeros(top + 1, dtype=np.int32)
        table[unique] = lookup
        return index, table[flat].astype(np.int64)
    return index, lookup[inverse.ravel()]


def build_confusion(truth: LabelImage, test: LabelImage, chunks: int = 1) -> ConfusionMatrix:
    """Count pixel classifications between a truth image and a test image.

    Each image is indexed once, then the pixel pairs are counted in one pass.

    Args:
        truth: Ground truth label image.
        test: Label image being evaluated.
        chunks: Number of row-major pixel bands counted separately and merged.

    Returns:
        The ConfusionMatrix of the pair.

    """
    if truth.labels.shape != test.labels.shape:
        raise DimensionMismatchError(f"Truth image is {truth.size} but test image is {test.size}")
    if truth.background_label != test.background_label:
        raise BackgroundMismatchError(
            f"Truth background label {truth.background_label} differs from "
            f"test background label {test.background_label}"
        )
    if chunks < 1:
        raise ValueError(f"chunks must be >= 1, got {chunks}")

    truth_index, truth_positions = _index_positions(truth)
    test_index, test_positions = _index_positions(test)
    m, n = len(truth_index), len(test_index)
    pair_codes = truth_positions * n + test_positions

    partials = [
        ConfusionMatrix(
            truth_index,
            test_index,
            np.bincount(band, minlength=m * n).reshape(m, n),
        )
        for band in np.array_split(pair_codes, chunks)
    ]
    confusion = functools.reduce(ConfusionMatrix.merge, partials)
    logger.debug("Built %dx%d confusion matrix over %d pixels", m, n, confusion.total)
    return confusion
