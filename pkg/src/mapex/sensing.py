"""Raycast range sensing and observation accumulation.

Beams are traversed on precomputed integer offset tables built by sampling the
ray at half-cell increments and rounding to the nearest cell. Diagonal jumps
carry the two orthogonal corner cells so that a sealed corner (both corners
obstacle) blocks the beam instead of letting it leak through. Offsets for
beams outside [0, 90) degrees are exact 90-degree rotations of first-quadrant
tables, so the visible set is rotation-symmetric on open ground.

All beams of a rig live in one flat table; per-beam first-hit resolution is a
segmented minimum, which keeps a full sensing sweep at a handful of numpy
calls.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import FREE, OBSTACLE, UNKNOWN, new_unknown


class ObservationConflictError(RuntimeError):
    """A reading contradicts an already-observed cell (impossible when noise-free)."""


@dataclass(frozen=True)
class SensorRig:
    beam_count: int = 16
    angular_spacing_deg: float = 22.5
    range_cells: float = 20.0
    first_beam_azimuth_deg: float = 0.0

    def __post_init__(self):
        if abs(self.beam_count * self.angular_spacing_deg - 360.0) > 1e-9:
            raise ValueError("beams must cover the full circle: count * spacing == 360")


def _quadrant_offsets(azimuth_deg: float, range_cells: float) -> np.ndarray:
    """Rounded, deduplicated cell offsets along a ray with azimuth in [0, 90)."""
    a = np.deg2rad(azimuth_deg)
    t = np.arange(0.5, range_cells + 1e-9, 0.5)
    rows = np.rint(-t * np.sin(a)).astype(np.int64)
    cols = np.rint(t * np.cos(a)).astype(np.int64)
    cells = []
    prev = (0, 0)
    for rc in zip(rows.tolist(), cols.tolist()):
        # rounding can push a cell just past the range disc; keep it inside
        if rc != prev and np.hypot(*rc) <= range_cells + 1e-9:
            cells.append(rc)
            prev = rc
    return np.array(cells, dtype=np.int64).reshape(-1, 2)


def _rotate_ccw(offsets: np.ndarray, quarter_turns: int) -> np.ndarray:
    out = offsets.copy()
    for _ in range(quarter_turns % 4):
        out = np.stack([-out[:, 1], out[:, 0]], axis=1)
    return out


@dataclass(frozen=True)
class _RigTable:
    """All beams flattened into one array with segment bookkeeping."""
    offsets: np.ndarray    # (N, 2) cell offsets, beam segments back to back
    starts: np.ndarray     # (B,) segment start index per beam
    seg_end: np.ndarray    # (N,) index one past the end of the owning segment
    order: np.ndarray      # (N,) global traversal index (arange)
    diagonal: np.ndarray   # (N,) step from previous cell moves on both axes
    corner_a: np.ndarray   # (N, 2) corner offsets, valid where diagonal
    corner_b: np.ndarray


@lru_cache(maxsize=8)
def _rig_table(rig: SensorRig) -> _RigTable:
    offs, starts, diag, ca, cb = [], [], [], [], []
    n = 0
    for k in range(rig.beam_count):
        az = (rig.first_beam_azimuth_deg + k * rig.angular_spacing_deg) % 360.0
        quarter, rem = divmod(az, 90.0)
        cells = _rotate_ccw(_quadrant_offsets(rem, rig.range_cells), int(quarter))
        prev = np.vstack([[0, 0], cells[:-1]])
        step = cells - prev
        starts.append(n)
        offs.append(cells)
        diag.append((step[:, 0] != 0) & (step[:, 1] != 0))
        ca.append(np.stack([prev[:, 0], cells[:, 1]], axis=1))
        cb.append(np.stack([cells[:, 0], prev[:, 1]], axis=1))
        n += len(cells)
    starts = np.array(starts + [n])
    seg_end = np.repeat(starts[1:], np.diff(starts))
    return _RigTable(
        offsets=np.concatenate(offs), starts=starts[:-1], seg_end=seg_end,
        order=np.arange(n), diagonal=np.concatenate(diag),
        corner_a=np.concatenate(ca), corner_b=np.concatenate(cb))


def _gather(grid, cells):
    """(values, oob mask); out-of-bounds cells read as FREE with oob set."""
    h, w = grid.shape
    oob = (cells[..., 0] < 0) | (cells[..., 0] >= h) | \
          (cells[..., 1] < 0) | (cells[..., 1] >= w)
    safe = np.where(oob[..., None], 0, cells)
    return grid[safe[..., 0], safe[..., 1]], oob


def _first_stop(stop: np.ndarray, table: _RigTable) -> np.ndarray:
    """Per entry, the global index of its beam's first stop (or segment end)."""
    n = len(table.order)
    candidates = np.where(stop, table.order, np.minimum(table.seg_end, n))
    first = np.minimum.reduceat(candidates, table.starts, axis=-1)
    return np.repeat(first, np.diff(np.append(table.starts, n)), axis=-1)


def sense(truth: np.ndarray, pose: tuple[int, int], rig: SensorRig) -> dict:
    """One sensing action: {cell: category} for everything visible from pose."""
    r, c = pose
    if not (0 <= r < truth.shape[0] and 0 <= c < truth.shape[1]):
        raise ValueError(f"pose {pose} out of bounds")
    if truth[r, c] != FREE:
        raise ValueError(f"pose {pose} is not on free space")
    t = _rig_table(rig)
    cells = t.offsets + (r, c)
    vals, oob = _gather(truth, cells)
    obst = (vals != FREE) & ~oob

    sealed = np.zeros(len(cells), dtype=bool)
    d = t.diagonal
    if d.any():
        va, oa = _gather(truth, t.corner_a[d] + (r, c))
        vb, ob = _gather(truth, t.corner_b[d] + (r, c))
        sealed[d] = ((va != FREE) | oa) & ((vb != FREE) | ob)

    # a sealed corner hides free space beyond it but wall corners stay visible
    stop_before = oob | (sealed & ~obst)
    first = _first_stop(stop_before | obst, t)
    reported = (t.order < first) | ((t.order == first) & obst & ~stop_before)

    readings = {(r, c): FREE}
    for (rr, cc), v in zip(cells[reported].tolist(), vals[reported].tolist()):
        readings[(rr, cc)] = int(v)
    return readings


def accumulate(obs: np.ndarray, readings: dict) -> np.ndarray:
    """Union new readings into an observation map; observed cells never change."""
    out = obs.copy()
    for (r, c), v in readings.items():
        if out[r, c] != UNKNOWN and out[r, c] != v:
            raise ObservationConflictError(
                f"cell ({r},{c}) observed as {out[r, c]} now read as {v}")
        out[r, c] = v
    return out


def observe(truth: np.ndarray, obs: np.ndarray, pose, rig: SensorRig) -> np.ndarray:
    """sense + accumulate in one call."""
    return accumulate(obs, sense(truth, pose, rig))


def empty_observation(truth: np.ndarray) -> np.ndarray:
    return new_unknown(*truth.shape)


def tree_observations(truth: np.ndarray, rig: SensorRig, rng: np.random.Generator,
                      count: int) -> list[np.ndarray]:
    """Accumulate sensing poses in a random tree; snapshot after each pose.

    The first pose is a uniformly random free cell; every later pose is a
    random free cell visible from a random already-visited pose. Returns one
    observation map per pose count 1..count.
    """
    free = np.argwhere(truth == FREE)
    if len(free) == 0:
        raise ValueError("map has no free cell")
    pose = tuple(free[rng.integers(len(free))])
    poses = [pose]
    obs = new_unknown(*truth.shape)
    snapshots = []
    footprints = {}
    for _ in range(count):
        readings = sense(truth, pose, rig)
        footprints[pose] = [cell for cell, v in readings.items() if v == FREE]
        obs = accumulate(obs, readings)
        snapshots.append(obs)
        parent = poses[rng.integers(len(poses))]
        candidates = footprints[parent]
        pose = tuple(candidates[rng.integers(len(candidates))])
        poses.append(pose)
    return snapshots


def count_visible_unknown(grid: np.ndarray, poses: np.ndarray, rig: SensorRig) -> np.ndarray:
    """Per pose, the number of distinct unknown cells visible by the rig.

    Raycast runs over the given (planning) map with unknown cells transparent;
    obstacles and the map border block. Vectorized across poses.
    """
    poses = np.asarray(poses, dtype=np.int64).reshape(-1, 2)
    h, w = grid.shape
    t = _rig_table(rig)
    cells = poses[:, None, :] + t.offsets[None, :, :]           # (P, N, 2)
    vals, oob = _gather(grid, cells)
    obst = (vals == OBSTACLE) & ~oob

    sealed = np.zeros_like(obst)
    d = t.diagonal
    if d.any():
        va, oa = _gather(grid, poses[:, None, :] + t.corner_a[None, d, :])
        vb, ob = _gather(grid, poses[:, None, :] + t.corner_b[None, d, :])
        sealed[:, d] = ((va == OBSTACLE) | oa) & ((vb == OBSTACLE) | ob)

    first = _first_stop(oob | obst | (sealed & ~obst), t)
    visible_unknown = (t.order[None, :] < first) & (vals == UNKNOWN) & ~oob

    counts = np.zeros(len(poses), dtype=np.int64)
    p_idx, c_idx = np.nonzero(visible_unknown)
    if len(p_idx):
        flat = cells[p_idx, c_idx, 0] * w + cells[p_idx, c_idx, 1]
        uniq = np.unique(p_idx * (h * w) + flat)
        np.add.at(counts, uniq // (h * w), 1)
    return counts
