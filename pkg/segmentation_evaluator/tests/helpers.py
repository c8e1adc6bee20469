"""Synthetic label images and pixel-set oracles shared by the tests."""

import numpy as np

from segmentation_evaluator.evaluation_utils.assignment import brute_force_assignment_total
from segmentation_evaluator.evaluation_utils.label_io import LabelImage


def image(rows: list[list[int]], background: int = 0) -> LabelImage:
    return LabelImage(np.array(rows), background)


def row_image(labels: list[int], background: int = 0) -> LabelImage:
    """A one-pixel-high image, labels left to right."""
    return image([labels], background)


def random_labels(
    rng: np.random.Generator,
    max_size: int = 24,
    max_regions: int = 6,
    blocky: bool = True,
) -> np.ndarray:
    """Random label grid with up to max_regions non-background labels.

    Labels are sparse (not consecutive) values. Blocky grids paint rectangles so regions
    have realistic overlaps; otherwise each pixel is drawn independently.
    """
    height, width = rng.integers(1, max_size + 1, size=2)
    region_count = int(rng.integers(0, max_regions + 1))
    palette = rng.choice(np.arange(1, 5000), size=region_count, replace=False)
    if not blocky or region_count == 0:
        choices = np.concatenate([[0], palette])
        return rng.choice(choices, size=(height, width))

    labels = np.zeros((height, width), dtype=np.int64)
    for label in palette:
        top, left = rng.integers(0, height), rng.integers(0, width)
        bottom = rng.integers(top + 1, height + 1)
        right = rng.integers(left + 1, width + 1)
        labels[top:bottom, left:right] = label
    return labels


def random_pair(
    rng: np.random.Generator,
    max_size: int = 24,
    max_regions: int = 6,
) -> tuple[LabelImage, LabelImage]:
    """Two random same-size images; the test image perturbs a copy of the truth."""
    truth = random_labels(rng, max_size, max_regions, blocky=bool(rng.integers(0, 2)))
    height, width = truth.shape
    test = random_labels(rng, max_size, max_regions)
    test = np.resize(test, (height, width))
    keep = rng.random((height, width)) < rng.random()
    test = np.where(keep, truth, test)
    return LabelImage(truth), LabelImage(test)


def relabel(img: LabelImage, rng: np.random.Generator) -> LabelImage:
    """Injective relabeling of the non-background labels, background fixed."""
    regions = [label for label in np.unique(img.labels) if label != img.background_label]
    targets = rng.choice(np.arange(10_000, 20_000), size=len(regions), replace=False)
    mapping = dict(zip(regions, targets, strict=True))
    labels = np.vectorize(lambda v: mapping.get(v, v))(img.labels) if regions else img.labels
    return LabelImage(labels, img.background_label)


def region_masks(img: LabelImage) -> list[np.ndarray]:
    regions = [label for label in np.unique(img.labels) if label != img.background_label]
    return [img.labels == label for label in regions]


def set_scores(truth: LabelImage, test: LabelImage) -> dict[str, float]:
    """Scores straight from pixel sets and exhaustive region matching."""
    s = test.labels != test.background_label
    t = truth.labels != truth.background_label
    both = int(np.sum(s & t))
    union = int(np.sum(s | t))
    sizes = int(s.sum()) + int(t.sum())

    truth_masks, test_masks = region_masks(truth), region_masks(test)
    overlaps = [[int(np.sum(a & b)) for b in test_masks] for a in truth_masks]
    matched = brute_force_assignment_total(overlaps) if truth_masks and test_masks else 0

    def best_dice(from_masks: list[np.ndarray], to_masks: list[np.ndarray]) -> float:
        if not from_masks or not to_masks:
            return 1.0 if len(from_masks) == len(to_masks) else 0.0
        best = [
            max(2 * np.sum(a & b) / (a.sum() + b.sum()) for b in to_masks) for a in from_masks
        ]
        return float(np.mean(best))

    return {
        "object_jaccard": 1.0 if union == 0 else both / union,
        "subset_jaccard": 1.0 if union == 0 else matched / union,
        "object_dice": 1.0 if sizes == 0 else 2 * both / sizes,
        "subset_dice": 1.0 if sizes == 0 else 2 * matched / sizes,
        "symmetric_best_dice": min(
            best_dice(truth_masks, test_masks), best_dice(test_masks, truth_masks)
        ),
    }
