"""Occupancy grid core: cell categories, one-hot encoding, text I/O, statistics.

Grids are plain 2D numpy arrays of dtype uint8, row-major with (row 0, col 0)
at the top-left. Three storable categories exist; the agent position is a
rendering overlay and never stored in a grid.
"""
from __future__ import annotations

import numpy as np

FREE = 0
OBSTACLE = 1
UNKNOWN = 2

CATEGORIES = (FREE, OBSTACLE, UNKNOWN)

# text format characters, one per category
CHAR_FOR = {FREE: ".", OBSTACLE: "#", UNKNOWN: "?"}
CATEGORY_FOR = {v: k for k, v in CHAR_FOR.items()}


class GridFormatError(ValueError):
    """Malformed grid text (ragged rows, bad characters, empty input)."""


def new_unknown(height: int, width: int) -> np.ndarray:
    """All-unknown grid, the state before any observation."""
    return np.full((height, width), UNKNOWN, dtype=np.uint8)


def as_grid(cells) -> np.ndarray:
    """Coerce a nested list / array of category codes into a grid array."""
    g = np.asarray(cells, dtype=np.uint8)
    if g.ndim != 2:
        raise GridFormatError(f"grid must be 2D, got shape {g.shape}")
    if not np.isin(g, CATEGORIES).all():
        raise GridFormatError("grid contains codes outside {FREE, OBSTACLE, UNKNOWN}")
    return g


def is_ground_truth(grid: np.ndarray) -> bool:
    """True if the grid could be a ground-truth map: fully known, closed boundary."""
    if (grid == UNKNOWN).any():
        return False
    border = np.concatenate([grid[0], grid[-1], grid[:, 0], grid[:, -1]])
    return bool((border == OBSTACLE).all())


def encode_one_hot(grid: np.ndarray) -> np.ndarray:
    """3xHxW float32 one-hot tensor, channel order [free, obstacle, unknown]."""
    return np.stack([(grid == c) for c in CATEGORIES]).astype(np.float32)


def decode_one_hot(one_hot: np.ndarray) -> np.ndarray:
    """Inverse of encode_one_hot; argmax over the channel axis."""
    if one_hot.shape[0] != 3:
        raise ValueError(f"expected 3 channels, got {one_hot.shape[0]}")
    return np.argmax(one_hot, axis=0).astype(np.uint8)


def load_grid(text: str) -> np.ndarray:
    """Parse the '.grid' text format: '#'=obstacle, '.'=free, '?'=unknown."""
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GridFormatError("empty grid text")
    width = len(lines[0])
    rows = []
    for i, line in enumerate(lines):
        if len(line) != width:
            raise GridFormatError(f"ragged row {i}: expected width {width}, got {len(line)}")
        try:
            rows.append([CATEGORY_FOR[ch] for ch in line])
        except KeyError as exc:
            raise GridFormatError(f"unknown character {exc.args[0]!r} in row {i}") from None
    return np.array(rows, dtype=np.uint8)


def save_grid(grid: np.ndarray) -> str:
    """Serialize a grid to the '.grid' text format (newline-terminated rows)."""
    return "".join("".join(CHAR_FOR[c] for c in row) + "\n" for row in grid)


def read_grid_file(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        return load_grid(fh.read())


def write_grid_file(path, grid: np.ndarray) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(save_grid(grid))


def load_metadata(path) -> dict:
    """Read a key=value sidecar file; values stay strings."""
    meta = {}
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            meta[key.strip()] = value.strip()
    return meta


def write_metadata(path, meta: dict) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for key, value in meta.items():
            fh.write(f"{key}={value}\n")


def fraction_of_walls(grid: np.ndarray) -> float:
    """Fraction of obstacle cells in a fully-known grid."""
    if (grid == UNKNOWN).any():
        raise ValueError("fraction_of_walls requires a fully-known grid")
    return float(np.count_nonzero(grid == OBSTACLE)) / grid.size
