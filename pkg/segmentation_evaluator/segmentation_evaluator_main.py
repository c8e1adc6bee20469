"""Command line driver: evaluate one image pair, a tray grid, or a directory of pairs."""

import argparse
import logging
import sys
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .evaluation_utils import config_file
from .evaluation_utils import report as rpt
from .evaluation_utils.errors import (
    ConfigError,
    DimensionMismatchError,
    EvaluationError,
    GridError,
    PairingError,
)
from .evaluation_utils.label_io import GridSpec, crop_grid, load_label_image, parse_background
from .evaluation_utils.metrics import MetricsReport, evaluate_pair

logger = logging.getLogger(__name__)

# save file defaults
JSON_SAVE_FILE = config_file.JSON_SAVE_FILE
BACKGROUND_KEY = config_file.BACKGROUND_KEY
GRID_KEY = config_file.GRID_KEY
WORKERS_KEY = config_file.WORKERS_KEY

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one run."""

    truth_path: Path
    test_path: Path
    grid: GridSpec | None = None
    background: tuple[int, int, int] | None = None
    full_path: Path | None = None
    summary_path: Path | None = None
    workers: int = config_file.DEFAULT_WORKERS
    method: str = config_file.DEFAULT_METHOD
    append_means: bool = False
    view: bool = False

    @property
    def directory_mode(self) -> bool:
        return self.truth_path.is_dir()


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="segmentation-evaluator",
        description=(
            "Evaluate a multi-region segmentation against a ground truth label map: "
            "region counts, object and subset-matched Jaccard/Dice, symmetric best Dice."
        ),
    )
    parser.add_argument("--truth", required=True, type=Path, help="Truth PNG or directory")
    parser.add_argument("--test", required=True, type=Path, help="Test PNG or directory")
    parser.add_argument("--grid", help="Split images into RxC cells (down x across)")
    parser.add_argument("--background", help="Background colour as RRGGBB hex (default 000000)")
    parser.add_argument("--full", type=Path, help="Full results CSV path")
    parser.add_argument("--summary", type=Path, help="Summary results CSV path")
    parser.add_argument("--workers", type=int, help="Threads used to evaluate pairs or cells")
    parser.add_argument(
        "--method",
        choices=config_file.ASSIGNMENT_METHODS,
        default=config_file.DEFAULT_METHOD,
        help="Assignment solver for the subset-matched scores",
    )
    parser.add_argument(
        "--append-means",
        action="store_true",
        help="Append a mean row to the full results",
    )
    parser.add_argument("--view", action="store_true", help="Open the results viewer (PySide6)")
    parser.add_argument(
        "--save-defaults",
        action="store_true",
        help="Remember --background, --grid and --workers for later runs",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level for diagnostics on stderr",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Same as --log-level INFO")
    return parser.parse_args(argv)


def build_config(args: argparse.Namespace, saved: dict) -> RunConfig:
    """Merge command line flags over saved defaults and validate them.

    Args:
        args: Parsed command line.
        saved: Defaults from the save file.

    Returns:
        The validated RunConfig.

    """
    background_text = args.background or saved[BACKGROUND_KEY]
    background = parse_background(background_text)

    grid_text = args.grid or saved[GRID_KEY]
    if grid_text and not args.grid:
        logger.info("Using saved grid %s", grid_text)
    grid = GridSpec.parse(grid_text) if grid_text else None

    workers = args.workers if args.workers is not None else saved[WORKERS_KEY]
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError(f"--workers must be a positive integer, got {workers!r}")

    truth_path, test_path = args.truth, args.test
    for path in (truth_path, test_path):
        if not path.exists():
            raise ConfigError(f"{path} does not exist")
    if truth_path.is_dir() != test_path.is_dir():
        raise ConfigError(f"{truth_path} and {test_path} must both be files or both directories")

    inputs = {truth_path.resolve(), test_path.resolve()}
    outputs = [path for path in (args.full, args.summary) if path is not None]
    for path in outputs:
        if path.resolve() in inputs:
            raise ConfigError(f"Output path {path} is also an input path")
    if len(outputs) == 2 and outputs[0].resolve() == outputs[1].resolve():
        raise ConfigError(f"--full and --summary both point to {outputs[0]}")

    return RunConfig(
        truth_path=truth_path,
        test_path=test_path,
        grid=grid,
        background=background,
        full_path=args.full,
        summary_path=args.summary,
        workers=workers,
        method=args.method,
        append_means=args.append_means,
        view=args.view,
    )


def save_settings(args: argparse.Namespace, save_file: str | Path = JSON_SAVE_FILE) -> None:
    """Store the given --background, --grid and --workers in the save file."""
    if args.background:
        config_file.json_saver(BACKGROUND_KEY, args.background, save_file)
    if args.grid:
        config_file.json_saver(GRID_KEY, str(GridSpec.parse(args.grid)), save_file)
    if args.workers is not None:
        config_file.json_saver(WORKERS_KEY, args.workers, save_file)


def _map(func: Callable, items: Iterable, workers: int) -> list:
    """Map in input order, on a thread pool when more than one worker is asked for."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def evaluate_files(
    truth_path: Path,
    test_path: Path,
    config: RunConfig,
    workers: int = 1,
) -> list[MetricsReport]:
    """Evaluate one file pair, as one object or cell by cell.

    Args:
        truth_path: Ground truth PNG.
        test_path: Test PNG.
        config: Run settings (background, grid, method).
        workers: Threads used across grid cells.

    Returns:
        One MetricsReport, or one per grid cell in row-major order.

    """
    truth = load_label_image(truth_path, config.background)
    test = load_label_image(test_path, config.background)
    if truth.labels.shape != test.labels.shape:
        raise DimensionMismatchError(f"{truth_path} is {truth.size} but {test_path} is {test.size}")

    if config.grid is None:
        return [evaluate_pair(truth, test, config.method)]

    try:
        cell_pairs = list(zip(crop_grid(truth, config.grid), crop_grid(test, config.grid)))
    except GridError as e:
        raise GridError(f"{truth_path}: {e}") from e
    reports = _map(lambda pair: evaluate_pair(*pair, config.method), cell_pairs, workers)
    logger.info("Evaluated %d grid cells of %s", len(reports), truth_path)
    return reports


def _png_files(folder: Path) -> dict[str, Path]:
    """PNG files of a folder by name, the suffix matched in any letter case."""
    return {
        path.name: path
        for path in folder.iterdir()
        if path.is_file() and path.suffix.lower() == config_file.PNG_SUFFIX
    }


def pair_directory(truth_dir: Path, test_dir: Path) -> list[tuple[str, Path, Path]]:
    """Pair PNG files of two directories by identical filename.

    Args:
        truth_dir: Directory of ground truth PNGs.
        test_dir: Directory of test PNGs.

    Returns:
        (filename, truth path, test path) tuples in filename order.

    """
    truth_files = _png_files(truth_dir)
    test_files = _png_files(test_dir)

    unmatched = sorted(
        [truth_files[name] for name in truth_files.keys() - test_files.keys()]
        + [test_files[name] for name in test_files.keys() - truth_files.keys()]
    )
    if unmatched:
        listed = ", ".join(str(path) for path in unmatched)
        raise PairingError(f"No file with the same name in the other directory for: {listed}")
    if not truth_files:
        raise PairingError(f"No .png files (any letter case) found in {truth_dir} or {test_dir}")

    return [(name, truth_files[name], test_files[name]) for name in sorted(truth_files)]


def evaluate_directory(config: RunConfig) -> tuple[list[MetricsReport], list[str]]:
    """Evaluate every filename-matched pair of two directories.

    Returns:
        Reports in filename then cell order, and the filename of each report.

    """
    pairs = pair_directory(config.truth_path, config.test_path)
    per_pair = _map(
        lambda pair: evaluate_files(pair[1], pair[2], config),
        pairs,
        config.workers,
    )
    if config.grid is not None and len({len(reports) for reports in per_pair}) > 1:
        raise GridError("Grid mode needs the same grid in every image pair")

    reports, sources = [], []
    for (name, _, _), pair_reports in zip(pairs, per_pair, strict=True):
        reports.extend(pair_reports)
        sources.extend([name] * len(pair_reports))
    logger.info("Evaluated %d image pairs from %s", len(pairs), config.truth_path)
    return reports, sources


def print_report(report: MetricsReport) -> None:
    """Print one comparison's fields to stdout."""
    print("===== Segmentation Evaluation =====")
    for name, value in report.as_dict().items():
        text = rpt.format_ratio(value) if isinstance(value, float) else str(value)
        print(f"{name}: {text}")
    row = rpt.make_full_row(0, report)
    if row.over_segmentation:
        print(f"segmentation: over-segmented by {row.over_segmentation}")
    elif row.under_segmentation:
        print(f"segmentation: under-segmented by {row.under_segmentation}")
    else:
        print("segmentation: region counts agree")


def show_results(rows: list[rpt.FullRow], summary: rpt.SummaryReport | None) -> None:
    """Open the PySide6 results viewer."""
    try:
        from .viewer_utils import results_viewer
    except ImportError as e:
        raise ConfigError(f"--view needs PySide6, install the 'viewer' extra ({e})") from e
    results_viewer.show_results(rows, summary)


def run(config: RunConfig) -> int:
    """Evaluate and report according to the run settings.

    Args:
        config: Validated run settings.

    Returns:
        Exit status, 0 on success and 1 on any evaluation or I/O error.

    """
    try:
        if config.directory_mode:
            reports, sources = evaluate_directory(config)
        else:
            reports = evaluate_files(
                config.truth_path,
                config.test_path,
                config,
                workers=config.workers,
            )
            sources = None
        rows = rpt.make_full_rows(reports, sources)
        summary = rpt.summarize(rows)

        single_object = not config.directory_mode and config.grid is None
        if single_object:
            print_report(reports[0])
            if config.full_path:
                rpt.write_full_csv(rows, config.full_path)
        elif config.full_path:
            rpt.write_full_csv(rows, config.full_path, summary if config.append_means else None)
        else:
            sys.stdout.write(rpt.format_full_csv(rows, summary if config.append_means else None))

        if config.summary_path:
            rpt.write_summary_csv(summary, config.summary_path)

        if config.view:
            show_results(rows, summary)
    except (EvaluationError, OSError) as e:
        logger.error("%s", e)
        return 1
    return 0


def main(argv: list[str] | None = None, save_file: str | Path = JSON_SAVE_FILE) -> int:
    """Entry point for the segmentation-evaluator command.

    Args:
        argv: Command line arguments, sys.argv[1:] when None.
        save_file: Json file holding saved defaults.

    Returns:
        Process exit status.

    """
    args = parse_args(argv)
    level = getattr(logging, args.log_level)
    if args.verbose:
        level = min(level, logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    try:
        config = build_config(args, config_file.load_saver(save_file))
        if args.save_defaults:
            save_settings(args, save_file)
    except (EvaluationError, OSError) as e:
        logger.error("%s", e)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
