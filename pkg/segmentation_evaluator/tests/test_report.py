"""Tests for full and summary result files."""

import csv

import pytest

from segmentation_evaluator.evaluation_utils.config_file import FULL_COLUMNS, SUMMARY_COLUMNS
from segmentation_evaluator.evaluation_utils.metrics import MetricsReport, evaluate_pair
from segmentation_evaluator.evaluation_utils.report import (
    format_full_csv,
    make_full_row,
    make_full_rows,
    read_full_csv,
    summarize,
    write_full_csv,
    write_summary_csv,
)
from segmentation_evaluator.tests.helpers import image, row_image

PERFECT = MetricsReport(3, 3, 0, 1.0, 1.0, 1.0, 1.0, 1.0)


def with_difference(difference: int) -> MetricsReport:
    return MetricsReport(3 - difference, 3, difference, 0.9, 0.8, 0.9, 0.85, 0.7)


def tray_reports() -> list[MetricsReport]:
    # 20 objects, three over-segmented by 2, 1 and 3 regions
    reports = [PERFECT] * 20
    for cell_id, over in [(2, 2), (9, 1), (15, 3)]:
        reports[cell_id] = with_difference(-over)
    return reports


def test_over_segmented_row():
    row = make_full_row(4, with_difference(-2))
    assert (row.counts_agree, row.over_segmentation, row.under_segmentation) == (None, 2, None)


def test_under_segmented_row():
    row = make_full_row(0, with_difference(1))
    assert (row.counts_agree, row.over_segmentation, row.under_segmentation) == (None, None, 1)


def test_agreeing_row():
    row = make_full_row(0, PERFECT)
    assert (row.counts_agree, row.over_segmentation, row.under_segmentation) == (1, None, None)


def test_tray_rows_mark_only_over_segmented_cells():
    rows = make_full_rows(tray_reports())
    assert [row.cell_id for row in rows] == list(range(20))
    assert [row.over_segmentation for row in rows if row.over_segmentation] == [2, 1, 3]


def test_tray_summary_mean_over():
    summary = summarize(make_full_rows(tray_reports()))
    assert summary.object_count == 20
    assert summary.over_count == 3
    assert summary.under_count == 0
    assert summary.agree_count == 17
    assert summary.mean_over == 2.0
    assert summary.mean_under is None


def test_over_and_under_do_not_cancel():
    summary = summarize(make_full_rows([with_difference(-1), with_difference(1)]))
    assert summary.mean_over == 1.0
    assert summary.mean_under == 1.0
    assert summary.agree_count + summary.over_count + summary.under_count == 2


def test_perfect_objects_summary():
    summary = summarize(make_full_rows([PERFECT] * 4))
    assert summary.agree_count == 4
    assert summary.mean_object_jaccard == 1.0
    assert summary.mean_symmetric_best_dice == 1.0


def test_summarize_requires_rows():
    with pytest.raises(ValueError):
        summarize([])


def test_sources_must_match_reports():
    with pytest.raises(ValueError):
        make_full_rows([PERFECT], sources=["a.png", "b.png"])


def test_perfect_pair_csv_row():
    report = evaluate_pair(row_image([0, 1]), row_image([0, 1]))
    lines = format_full_csv(make_full_rows([report])).splitlines()
    assert lines[0] == ",".join(FULL_COLUMNS)
    assert lines[1].endswith(",0,1.000000,1.000000,1.000000,1.000000,1.000000,1,,")


def test_ratio_fields_have_six_decimals():
    report = evaluate_pair(image([[0, 1], [1, 2]]), image([[0, 5], [6, 6]]))
    text = format_full_csv(make_full_rows([report]))
    record = next(csv.DictReader(text.splitlines()))
    assert record["subset_jaccard"] == "0.666667"
    assert record["object_jaccard"] == "1.000000"


def test_written_full_csv_reads_back(tmp_path):
    rows = make_full_rows(tray_reports())
    path = tmp_path / "out" / "full.csv"
    write_full_csv(rows, path)
    assert read_full_csv(path) == rows


def test_mean_row_is_appended_and_skipped_on_read(tmp_path):
    rows = make_full_rows(tray_reports())
    path = tmp_path / "full.csv"
    write_full_csv(rows, path, summarize(rows))
    with open(path, newline="", encoding="utf-8") as f:
        records = list(csv.DictReader(f))
    mean_row = records[-1]
    assert mean_row["cell_id"] == "mean"
    assert mean_row["count_difference"] == ""
    assert mean_row["counts_agree"] == "17"
    assert mean_row["over_segmentation"] == "2.000000"
    assert mean_row["under_segmentation"] == ""
    assert len(read_full_csv(path)) == 20


def test_source_column_written_when_given():
    rows = make_full_rows([PERFECT, PERFECT], sources=["a.png", "b.png"])
    records = list(csv.DictReader(format_full_csv(rows).splitlines()))
    assert [record["source"] for record in records] == ["a.png", "b.png"]


def test_no_source_column_by_default():
    header = format_full_csv(make_full_rows([PERFECT])).splitlines()[0]
    assert "source" not in header.split(",")


def test_summary_csv(tmp_path):
    path = tmp_path / "summary.csv"
    write_summary_csv(summarize(make_full_rows(tray_reports())), path)
    with open(path, newline="", encoding="utf-8") as f:
        records = list(csv.DictReader(f))
    assert len(records) == 1
    assert list(records[0]) == SUMMARY_COLUMNS
    assert records[0]["over_count"] == "3"
    assert records[0]["mean_over"] == "2.000000"
    assert records[0]["mean_under"] == ""


def test_summary_recomputed_from_full_csv(tmp_path):
    rows = make_full_rows(tray_reports())
    path = tmp_path / "full.csv"
    write_full_csv(rows, path)
    assert summarize(read_full_csv(path)) == summarize(rows)
