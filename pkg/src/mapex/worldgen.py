"""Deterministic synthetic floorplan generator.

Recursive binary space partition of a walled rectangle: each split carves a
1-cell-thick wall with at least one door gap, yielding rectangular rooms with
low variance in size and wall fraction across seeds. Every free cell ends up
in a single 8-connected component.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import FREE, OBSTACLE

_MAX_ATTEMPTS = 16


class GeneratorConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    height: int = 64
    width: int = 64
    min_room_side: int = 5
    door_width: int = 2
    split_depth_range: tuple[int, int] = (3, 5)

    def __post_init__(self):
        if self.min_room_side < 3:
            raise GeneratorConfigError("min_room_side must be >= 3")
        if self.door_width < 1:
            raise GeneratorConfigError("door_width must be >= 1")
        if self.height < 2 * self.min_room_side or self.width < 2 * self.min_room_side:
            raise GeneratorConfigError("grid must be at least 2*min_room_side on each axis")
        lo, hi = self.split_depth_range
        if lo < 0 or hi < lo:
            raise GeneratorConfigError("split_depth_range must be a nonempty interval of nonnegative ints")


def _split_region(grid, walls, rng, r0, c0, r1, c1, depth, min_side):
    """Recursively wall off [r0,r1)x[c0,c1); record wall segments for door carving."""
    if depth <= 0:
        return
    h, w = r1 - r0, c1 - c0
    # a split needs min_side free cells on both sides of a 1-cell wall
    can_h = h >= 2 * min_side + 1
    can_v = w >= 2 * min_side + 1
    if not can_h and not can_v:
        return
    if can_h and can_v:
        vertical = bool(rng.integers(2)) if h == w else (w > h)
    else:
        vertical = can_v
    if vertical:
        col = int(rng.integers(c0 + min_side, c1 - min_side))
        grid[r0:r1, col] = OBSTACLE
        walls.append(("v", col, r0, r1))
        _split_region(grid, walls, rng, r0, c0, r1, col, depth - 1, min_side)
        _split_region(grid, walls, rng, r0, col + 1, r1, c1, depth - 1, min_side)
    else:
        row = int(rng.integers(r0 + min_side, r1 - min_side))
        grid[row, c0:c1] = OBSTACLE
        walls.append(("h", row, c0, c1))
        _split_region(grid, walls, rng, r0, c0, row, c1, depth - 1, min_side)
        _split_region(grid, walls, rng, row + 1, c0, r1, c1, depth - 1, min_side)


def _door_candidates(grid, axis, line, lo, hi, door_width):
    """Starts of door_width runs that are all wall with free cells on both sides."""
    starts = []
    for s in range(lo, hi - door_width + 1):
        run = range(s, s + door_width)
        if axis == "v":
            ok = all(
                grid[r, line] == OBSTACLE and grid[r, line - 1] == FREE and grid[r, line + 1] == FREE
                for r in run
            )
        else:
            ok = all(
                grid[line, c] == OBSTACLE and grid[line - 1, c] == FREE and grid[line + 1, c] == FREE
                for c in run
            )
        if ok:
            starts.append(s)
    return starts


def _carve_doors(grid, walls, rng, door_width):
    for axis, line, lo, hi in walls:
        for width in range(door_width, 0, -1):
            starts = _door_candidates(grid, axis, line, lo, hi, width)
            if starts:
                s = int(starts[rng.integers(len(starts))])
                if axis == "v":
                    grid[s:s + width, line] = FREE
                else:
                    grid[line, s:s + width] = FREE
                break
        else:
            return False
    return True


def _free_single_component(grid) -> bool:
    from scipy.ndimage import label

    free = grid == FREE
    _, count = label(free, structure=np.ones((3, 3), dtype=int))
    return count == 1


def generate_floorplan(config: GeneratorConfig) -> np.ndarray:
    """Generate one ground-truth floorplan; pure function of the config."""
    for attempt in range(_MAX_ATTEMPTS):
        rng = np.random.default_rng([config.seed, attempt])
        grid = np.full((config.height, config.width), FREE, dtype=np.uint8)
        grid[0, :] = grid[-1, :] = OBSTACLE
        grid[:, 0] = grid[:, -1] = OBSTACLE
        lo, hi = config.split_depth_range
        depth = int(rng.integers(lo, hi + 1))
        walls = []
        _split_region(grid, walls, rng, 1, 1, config.height - 1, config.width - 1,
                      depth, config.min_room_side)
        if _carve_doors(grid, walls, rng, config.door_width) and _free_single_component(grid):
            return grid
    raise RuntimeError(f"could not generate a connected floorplan for seed {config.seed}")


def generate_dataset(config: GeneratorConfig, count: int) -> list[np.ndarray]:
    """count floorplans from consecutive seeds seed, seed+1, ..."""
    if count < 1:
        raise ValueError("count must be >= 1")
    from dataclasses import replace

    return [generate_floorplan(replace(config, seed=config.seed + i)) for i in range(count)]
