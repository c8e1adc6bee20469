"""Full and summary result files for a grid (or directory) of evaluated objects.

Over- and under-segmentation amounts are only given where they occur, and their
means are taken over the populated cells only, so over- and under-segmented
objects do not cancel each other out.
"""

import csv
import io
import logging
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import TextIO

from .config_file import (
    FULL_COLUMNS,
    MEAN_ROW_ID,
    RATIO_DECIMALS,
    SCORE_COLUMNS,
    SOURCE_COLUMN,
    SUMMARY_COLUMNS,
)
from .metrics import MetricsReport

logger = logging.getLogger(__name__)

COUNT_COLUMNS = ["test_region_count", "truth_region_count", "count_difference"]


@dataclass(frozen=True)
class FullRow:
    """One object's scores with the derived agreement and segmentation columns."""

    cell_id: int
    report: MetricsReport
    counts_agree: int | None
    over_segmentation: int | None
    under_segmentation: int | None
    source: str | None = None


@dataclass(frozen=True)
class SummaryReport:
    """Aggregates over all objects of a run."""

    object_count: int
    agree_count: int
    over_count: int
    under_count: int
    mean_over: float | None
    mean_under: float | None
    mean_test_region_count: float
    mean_truth_region_count: float
    mean_object_jaccard: float
    mean_subset_jaccard: float
    mean_object_dice: float
    mean_subset_dice: float
    mean_symmetric_best_dice: float

    def as_dict(self) -> dict[str, int | float | None]:
        return {field.name: getattr(self, field.name) for field in fields(self)}


def make_full_row(cell_id: int, report: MetricsReport, source: str | None = None) -> FullRow:
    """Split the signed count difference into agreement, over and under columns."""
    difference = report.count_difference
    return FullRow(
        cell_id=cell_id,
        report=report,
        counts_agree=1 if difference == 0 else None,
        over_segmentation=-difference if difference < 0 else None,
        under_segmentation=difference if difference > 0 else None,
        source=source,
    )


def make_full_rows(
    reports: list[MetricsReport],
    sources: list[str] | None = None,
) -> list[FullRow]:
    """One FullRow per object, cell ids following the given (grid) order.

    Args:
        reports: Metrics of each object in grid order.
        sources: Optional originating filename of each object.

    Returns:
        The full result rows.

    """
    if sources is not None and len(sources) != len(reports):
        raise ValueError("sources must have one entry per report")
    return [
        make_full_row(i, report, sources[i] if sources is not None else None)
        for i, report in enumerate(reports)
    ]


def _mean(values: list[float]) -> float | None:
    if not values:
        return None
    return math.fsum(values) / len(values)


def summarize(rows: list[FullRow]) -> SummaryReport:
    """Aggregate full rows into the summary.

    Args:
        rows: Full result rows, at least one.

    Returns:
        The SummaryReport.

    """
    if not rows:
        raise ValueError("Cannot summarize an empty set of results")

    overs = [row.over_segmentation for row in rows if row.over_segmentation is not None]
    unders = [row.under_segmentation for row in rows if row.under_segmentation is not None]
    reports = [row.report for row in rows]

    def column_mean(name: str) -> float:
        return _mean([getattr(report, name) for report in reports])

    return SummaryReport(
        object_count=len(rows),
        agree_count=sum(1 for row in rows if row.counts_agree == 1),
        over_count=len(overs),
        under_count=len(unders),
        mean_over=_mean(overs),
        mean_under=_mean(unders),
        mean_test_region_count=column_mean("test_region_count"),
        mean_truth_region_count=column_mean("truth_region_count"),
        mean_object_jaccard=column_mean("object_jaccard"),
        mean_subset_jaccard=column_mean("subset_jaccard"),
        mean_object_dice=column_mean("object_dice"),
        mean_subset_dice=column_mean("subset_dice"),
        mean_symmetric_best_dice=column_mean("symmetric_best_dice"),
    )


def format_ratio(value: float | None) -> str:
    """Fixed decimal text, empty for a missing value."""
    if value is None:
        return ""
    return f"{value:.{RATIO_DECIMALS}f}"


def format_count(value: int | None) -> str:
    return "" if value is None else str(value)


def full_row_fields(row: FullRow) -> list[str]:
    """CSV fields of a full row in FULL_COLUMNS order."""
    report = row.report
    return [
        str(row.cell_id),
        *(format_count(getattr(report, name)) for name in COUNT_COLUMNS),
        *(format_ratio(getattr(report, name)) for name in SCORE_COLUMNS),
        format_count(row.counts_agree),
        format_count(row.over_segmentation),
        format_count(row.under_segmentation),
    ]


def mean_row_fields(summary: SummaryReport) -> list[str]:
    """Trailing full-file row with score means, agree count and over/under means."""
    return [
        MEAN_ROW_ID,
        format_ratio(summary.mean_test_region_count),
        format_ratio(summary.mean_truth_region_count),
        "",
        *(format_ratio(getattr(summary, f"mean_{name}")) for name in SCORE_COLUMNS),
        str(summary.agree_count),
        format_ratio(summary.mean_over),
        format_ratio(summary.mean_under),
    ]


def summary_fields(summary: SummaryReport) -> list[str]:
    """CSV fields of the summary in SUMMARY_COLUMNS order."""
    values = summary.as_dict()
    return [
        str(values[name]) if isinstance(values[name], int) else format_ratio(values[name])
        for name in SUMMARY_COLUMNS
    ]


def _write_full(
    f: TextIO,
    rows: list[FullRow],
    summary: SummaryReport | None,
) -> None:
    with_source = any(row.source is not None for row in rows)
    writer = csv.writer(f)
    writer.writerow(FULL_COLUMNS + [SOURCE_COLUMN] if with_source else FULL_COLUMNS)
    for row in rows:
        fields_out = full_row_fields(row)
        if with_source:
            fields_out.append(row.source or "")
        writer.writerow(fields_out)
    if summary is not None:
        fields_out = mean_row_fields(summary)
        if with_source:
            fields_out.append("")
        writer.writerow(fields_out)


def format_full_csv(rows: list[FullRow], summary: SummaryReport | None = None) -> str:
    """The full results as CSV text."""
    buffer = io.StringIO(newline="")
    _write_full(buffer, rows, summary)
    return buffer.getvalue()


def write_full_csv(
    rows: list[FullRow],
    path: str | Path,
    summary: SummaryReport | None = None,
) -> None:
    """Write the full results file.

    Args:
        rows: Full result rows in grid order.
        path: Output CSV path. Parent folders are created if missing.
        summary: If given, a trailing mean row is appended.

    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        _write_full(f, rows, summary)
    logger.info("Wrote %d result rows to %s", len(rows), path)


def write_summary_csv(summary: SummaryReport, path: str | Path) -> None:
    """Write the one-row summary results file.

    Args:
        summary: Aggregated results.
        path: Output CSV path. Parent folders are created if missing.

    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_COLUMNS)
        writer.writerow(summary_fields(summary))
    logger.info("Wrote summary to %s", path)


def _parse_int(text: str) -> int | None:
    return int(text) if text else None


def read_full_csv(path: str | Path) -> list[FullRow]:
    """Read a full results file back into rows. A trailing mean row is skipped.

    Args:
        path: Full results CSV path.

    Returns:
        The rows, scores at the written precision.

    """
    rows = []
    with open(path, newline="", encoding="utf-8") as f:
        for record in csv.DictReader(f):
            if record["cell_id"] == MEAN_ROW_ID:
                continue
            report = MetricsReport(
                **{name: int(record[name]) for name in COUNT_COLUMNS},
                **{name: float(record[name]) for name in SCORE_COLUMNS},
            )
            rows.append(
                FullRow(
                    cell_id=int(record["cell_id"]),
                    report=report,
                    counts_agree=_parse_int(record["counts_agree"]),
                    over_segmentation=_parse_int(record["over_segmentation"]),
                    under_segmentation=_parse_int(record["under_segmentation"]),
                    source=record.get(SOURCE_COLUMN) or None,
                )
            )
    return rows
