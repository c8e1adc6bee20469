"""Config module holding defaults for the Segmentation Evaluator."""

import json
import logging
from pathlib import Path

logger = logging.getLogger(__name__)

# file paths
DATA_FOLDER_PATH = Path(__file__).parents[1] / "data"
JSON_SAVE_FILE = DATA_FOLDER_PATH / "save_file.json"
PNG_SUFFIX = ".png"

# label defaults
DEFAULT_BACKGROUND = "000000"

# run defaults
DEFAULT_WORKERS = 1
DEFAULT_METHOD = "hungarian"
ASSIGNMENT_METHODS = ("hungarian", "branch_and_bound")

# report defaults
RATIO_DECIMALS = 6
MEAN_ROW_ID = "mean"
SOURCE_COLUMN = "source"
SCORE_COLUMNS = [
    "object_jaccard",
    "subset_jaccard",
    "object_dice",
    "subset_dice",
    "symmetric_best_dice",
]
FULL_COLUMNS = [
    "cell_id",
    "test_region_count",
    "truth_region_count",
    "count_difference",
    *SCORE_COLUMNS,
    "counts_agree",
    "over_segmentation",
    "under_segmentation",
]
SUMMARY_COLUMNS = [
    "object_count",
    "agree_count",
    "over_count",
    "under_count",
    "mean_over",
    "mean_under",
    "mean_test_region_count",
    "mean_truth_region_count",
    *[f"mean_{column}" for column in SCORE_COLUMNS],
]

# save file keys
BACKGROUND_KEY = "background"
GRID_KEY = "grid"
WORKERS_KEY = "workers"
SAVED_DEFAULTS = {
    BACKGROUND_KEY: DEFAULT_BACKGROUND,
    GRID_KEY: None,
    WORKERS_KEY: DEFAULT_WORKERS,
}
SAVED_TYPES = {
    BACKGROUND_KEY: (str,),
    GRID_KEY: (str, type(None)),
    WORKERS_KEY: (int,),
}


def load_saver(save_file: str | Path = JSON_SAVE_FILE) -> dict:
    """Load saved run defaults from save_file.json.

    Missing keys, a missing file, a malformed file or a value of the wrong type fall back
    to the built-in defaults.

    Args:
        save_file: Path to the json save file.

    Returns:
        A dictionary with the background, grid and workers defaults.

    """
    saved = dict(SAVED_DEFAULTS)
    try:
        with open(save_file, encoding="utf-8") as f:
            json_dict = json.load(f)
    except (FileNotFoundError, json.JSONDecodeError):
        return saved

    if not isinstance(json_dict, dict):
        logger.warning("Ignoring save file with unexpected content: %s", save_file)
        return saved

    for key in SAVED_DEFAULTS:
        if key not in json_dict:
            continue
        value = json_dict[key]
        # bool is an int subclass but never a worker count
        if isinstance(value, bool) or not isinstance(value, SAVED_TYPES[key]):
            logger.warning(
                "Ignoring saved %s=%r in %s, using %r", key, value, save_file, saved[key]
            )
            continue
        saved[key] = value
    return saved


def json_saver(
    save_key: str,
    save_value: str | int | None,
    save_file: str | Path = JSON_SAVE_FILE,
) -> None:
    """Update one key of the json save file, creating the file if missing.

    Args:
        save_key: Json dictionary key.
        save_value: Value stored under the key.
        save_file: Path to the json save file.

    """
    save_file = Path(save_file)
    save_file.parent.mkdir(parents=True, exist_ok=True)

    try:
        with open(save_file, encoding="utf-8") as f:
            json_dict = json.load(f)
    except (FileNotFoundError, json.JSONDecodeError):
        json_dict = {}

    json_dict[save_key] = save_value

    with open(save_file, "w", encoding="utf-8") as f:
        json.dump(json_dict, f, indent=4)
    logger.info("Saved %s=%r to %s", save_key, save_value, save_file)
