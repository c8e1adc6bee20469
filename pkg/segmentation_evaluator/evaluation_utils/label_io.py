"""Read and write label-map PNG files, and crop tray images into per-object cells.

Every pixel colour is packed into one integer label. RGB colours pack as
2^16*R + 2^8*G + B (alpha ignored), grayscale values are used directly and
paletted images are resolved through their palette before packing.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ConfigError, GridError, LabelImageError

logger = logging.getLogger(__name__)

RGB_MODES = ("RGB", "RGBA")
PALETTE_MODES = ("P", "PA")
GRAY_MODES = ("L", "LA")
MAX_RGB_LABEL = 0xFFFFFF
HEX_COLOR = re.compile(r"#?([0-9a-fA-F]{6})")
GRID_TEXT = re.compile(r"\s*(\d+)\s*[xX]\s*(\d+)\s*")


def pack_rgb(rgb: tuple[int, int, int]) -> int:
    """Pack an 8-bit RGB triple into a single label value."""
    red, green, blue = rgb
    return (red << 16) | (green << 8) | blue


def parse_background(text: str) -> tuple[int, int, int]:
    """Parse an RRGGBB (optionally #RRGGBB) colour into an RGB triple.

    Args:
        text: Hex colour text, e.g. "000000" or "#00ff00".

    Returns:
        The (red, green, blue) triple.

    """
    match = HEX_COLOR.fullmatch(text.strip())
    if not match:
        raise ConfigError(f"Background colour must be RRGGBB hex, got {text!r}")
    value = int(match.group(1), 16)
    return (value >> 16) & 255, (value >> 8) & 255, value & 255


@dataclass(frozen=True, eq=False)
class LabelImage:
    """A decoded label map, one non-negative integer label per pixel.

    Attributes:
        labels: Read-only (height, width) int64 array in row-major order.
        background_label: Label treated as background. It need not occur in the grid.

    """

    labels: np.ndarray
    background_label: int = 0

    def __post_init__(self) -> None:
        labels = np.array(self.labels, dtype=np.int64)
        if labels.ndim != 2 or labels.shape[0] < 1 or labels.shape[1] < 1:
            raise LabelImageError(f"Label grid must be 2D and non-empty, got shape {labels.shape}")
        if labels.min() < 0:
            raise LabelImageError("Labels must be non-negative")
        if self.background_label < 0:
            raise LabelImageError(f"Invalid background label {self.background_label}")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "background_label", int(self.background_label))

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def size(self) -> str:
        """Size as WIDTHxHEIGHT text for messages."""
        return f"{self.width}x{self.height}"

    def upscale(self, factor: int) -> "LabelImage":
        """Nearest-neighbour upscale, every pixel becomes a factor x factor block."""
        if factor < 1:
            raise ValueError(f"Upscale factor must be >= 1, got {factor}")
        labels = np.repeat(np.repeat(self.labels, factor, axis=0), factor, axis=1)
        return LabelImage(labels, self.background_label)


@dataclass(frozen=True)
class GridSpec:
    """Number of evenly spaced objects across and down a tray image."""

    cells_across: int
    cells_down: int

    def __post_init__(self) -> None:
        if self.cells_across < 1 or self.cells_down < 1:
            raise GridError(f"Grid counts must be >= 1, got {self}")

    def __str__(self) -> str:
        return f"{self.cells_down}x{self.cells_across}"

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse RxC grid text, R cells down and C cells across.

        Args:
            text: Grid text such as "5x4".

        Returns:
            The parsed GridSpec.

        """
        match = GRID_TEXT.fullmatch(text)
        if not match:
            raise GridError(f"Grid must be given as RxC (cells down x across), got {text!r}")
        down, across = (int(value) for value in match.groups())
        return cls(cells_across=across, cells_down=down)

    def validate_for(self, image: LabelImage) -> None:
        """Raise GridError if the grid has more cells than pixels along either axis."""
        if self.cells_across > image.width or self.cells_down > image.height:
            raise GridError(f"Grid {self} does not fit a {image.size} image")


def load_label_image(
    path: str | Path,
    background: tuple[int, int, int] | None = None,
) -> LabelImage:
    """Decode a label-map PNG.

    Args:
        path: File path to an 8-bit RGB, RGBA, grayscale or paletted PNG.
        background: Background colour override. Defaults to black.

    Returns:
        The decoded LabelImage.

    """
    path = Path(path)
    try:
        with Image.open(path) as img:
            img_format = img.format
            mode = img.mode
            if img_format != "PNG":
                raise LabelImageError(f"{path} is not a PNG file (found {img_format})")
            if img.width < 1 or img.height < 1:
                raise LabelImageError(f"{path} has zero size")
            rgb = gray = None
            if mode in RGB_MODES or mode in PALETTE_MODES:
                # palette entries resolve to their colours here
                rgb = np.asarray(img.convert("RGB"))
            elif mode in GRAY_MODES:
                gray = np.asarray(img.getchannel("L"))
            else:
                raise LabelImageError(f"{path} has unsupported mode/bit depth {mode!r}")
    except (FileNotFoundError, UnidentifiedImageError, OSError) as e:
        raise LabelImageError(f"Cannot read label image {path}: {e}") from e

    if rgb is not None:
        rgb = rgb.astype(np.int64)
        labels = (rgb[..., 0] << 16) | (rgb[..., 1] << 8) | rgb[..., 2]
        background_label = pack_rgb(background) if background is not None else 0
    else:
        labels = gray
        background_label = _gray_background(background, path)

    image = LabelImage(labels, background_label)
    logger.info("Loaded %s (%s, mode %s)", path, image.size, mode)
    return image


def _gray_background(background: tuple[int, int, int] | None, path: Path) -> int:
    if background is None:
        return 0
    red, green, blue = background
    if not red == green == blue:
        raise LabelImageError(
            f"{path} is grayscale; background override must be a gray colour, got {background}"
        )
    return red


def save_label_image(image: LabelImage, path: str | Path) -> None:
    """Write labels as an 8-bit RGB PNG that load_label_image decodes back to the same labels.

    Args:
        image: Label image to encode.
        path: Output PNG path.

    """
    labels = image.labels
    if labels.max() > MAX_RGB_LABEL:
        raise LabelImageError(f"Label {labels.max()} cannot be encoded as an RGB colour")
    rgb = np.stack([(labels >> 16) & 255, (labels >> 8) & 255, labels & 255], axis=-1)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(rgb.astype(np.uint8)).save(path, format="PNG")
    logger.info("Saved %s (%s)", path, image.size)


def crop_grid(image: LabelImage, grid: GridSpec) -> list[LabelImage]:
    """Split an image into grid cells, one object per cell.

    Cell boundaries are floor(i * size / count), so cells tile the image exactly.

    Args:
        image: Tray image holding several evenly spaced objects.
        grid: Number of cells across and down.

    Returns:
        cells_across * cells_down cells in row-major order, each with the image's background.

    """
    grid.validate_for(image)
    col_bounds = [c * image.width // grid.cells_across for c in range(grid.cells_across + 1)]
    row_bounds = [r * image.height // grid.cells_down for r in range(grid.cells_down + 1)]

    cells = []
    for r in range(grid.cells_down):
        for c in range(grid.cells_across):
            rows = slice(row_bounds[r], row_bounds[r + 1])
            cols = slice(col_bounds[c], col_bounds[c + 1])
            cells.append(LabelImage(image.labels[rows, cols], image.background_label))
    return cells
