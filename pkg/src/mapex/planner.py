"""Vacancy-graph shortest paths, frontier detection, and waypoint planners.

The planning map's free cells form an undirected graph with 8-neighbour
edges: weight 1 orthogonally, sqrt(2) diagonally. A diagonal edge is dropped
when both orthogonal corner cells are obstacles (no corner cutting). All
tie-breaking is row-major for reproducibility.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _dijkstra

from .grid import FREE, OBSTACLE, UNKNOWN
from .sensing import SensorRig, count_visible_unknown

SQRT2 = float(np.sqrt(2.0))


def vacancy_edges(grid: np.ndarray):
    """(rows, cols, weights) of one direction per undirected edge."""
    h, w = grid.shape
    free = grid == FREE
    obst = grid == OBSTACLE
    idx = np.arange(h * w).reshape(h, w)

    rows, cols, wts = [], [], []

    def add(mask, a, b, weight):
        rows.append(a[mask])
        cols.append(b[mask])
        wts.append(np.full(np.count_nonzero(mask), weight))

    # east / south orthogonal edges
    add(free[:, :-1] & free[:, 1:], idx[:, :-1], idx[:, 1:], 1.0)
    add(free[:-1, :] & free[1:, :], idx[:-1, :], idx[1:, :], 1.0)
    # south-east / south-west diagonals, minus corner-cutting pairs
    se = free[:-1, :-1] & free[1:, 1:] & ~(obst[:-1, 1:] & obst[1:, :-1])
    add(se, idx[:-1, :-1], idx[1:, 1:], SQRT2)
    sw = free[:-1, 1:] & free[1:, :-1] & ~(obst[:-1, :-1] & obst[1:, 1:])
    add(sw, idx[:-1, 1:], idx[1:, :-1], SQRT2)

    return np.concatenate(rows), np.concatenate(cols), np.concatenate(wts)


def shortest_paths(grid: np.ndarray, source: tuple[int, int]):
    """Dijkstra distance and predecessor fields from source over the vacancy graph.

    Returns (dist, pred): dist is HxW float64 with inf for unreachable cells,
    pred is HxW int32 of flat predecessor indices (-1 for source/unreachable).
    """
    h, w = grid.shape
    r, c = source
    if grid[r, c] != FREE:
        raise ValueError(f"source {source} is not free")
    rows, cols, wts = vacancy_edges(grid)
    graph = coo_matrix((wts, (rows, cols)), shape=(h * w, h * w)).tocsr()
    dist, pred = _dijkstra(graph, directed=False, indices=r * w + c,
                           return_predecessors=True)
    pred = pred.astype(np.int32)
    pred[pred < 0] = -1
    return dist.reshape(h, w), pred.reshape(h, w)


def reconstruct_path(pred: np.ndarray, source, target) -> list[tuple[int, int]]:
    """Cell sequence from source to target inclusive, via the predecessor field."""
    h, w = pred.shape
    path = [tuple(target)]
    while path[-1] != tuple(source):
        p = pred[path[-1]]
        if p < 0:
            raise ValueError(f"target {target} unreachable from {source}")
        path.append((int(p) // w, int(p) % w))
    path.reverse()
    return path


def detect_frontier(grid: np.ndarray) -> np.ndarray:
    """Free cells with at least one unknown 4-neighbour, row-major order (N, 2)."""
    unk = np.pad(grid == UNKNOWN, 1, constant_values=False)
    near_unknown = unk[:-2, 1:-1] | unk[2:, 1:-1] | unk[1:-1, :-2] | unk[1:-1, 2:]
    return np.argwhere((grid == FREE) & near_unknown)


@dataclass
class PlannerState:
    """Everything a planner decides from; dist/pred cache the latest solve."""
    pose: tuple[int, int]
    planning_map: np.ndarray
    rng: np.random.Generator = field(default_factory=np.random.default_rng)
    dist: np.ndarray = None
    pred: np.ndarray = None

    def solve(self):
        self.dist, self.pred = shortest_paths(self.planning_map, self.pose)
        return self


def _reachable_frontier(state: PlannerState):
    """(cells, dists) of reachable frontier cells, row-major order."""
    if state.dist is None:
        state.solve()
    cells = detect_frontier(state.planning_map)
    if len(cells) == 0:
        return cells, np.empty(0)
    d = state.dist[cells[:, 0], cells[:, 1]]
    keep = np.isfinite(d)
    return cells[keep], d[keep]


def plan_random(state: PlannerState):
    """Full shortest path to a uniformly random reachable frontier cell, or None."""
    cells, _ = _reachable_frontier(state)
    if len(cells) == 0:
        return None
    target = tuple(int(v) for v in cells[state.rng.integers(len(cells))])
    return target, reconstruct_path(state.pred, state.pose, target)


def _greedy_pick(state: PlannerState, reward):
    cells, d = _reachable_frontier(state)
    if len(cells) == 0:
        return None
    utility = reward(cells) / (1.0 + d)
    target = tuple(int(v) for v in cells[int(np.argmax(utility))])
    if target == state.pose:
        # already standing on the best frontier cell; hold position
        return target, target
    path = reconstruct_path(state.pred, state.pose, target)
    return target, path[1]


def plan_nearest_frontier(state: PlannerState):
    """One step toward the closest reachable frontier cell (reward == 1), or None."""
    return _greedy_pick(state, lambda cells: 1.0)


def plan_cost_utility(state: PlannerState, rig: SensorRig):
    """One step toward the frontier cell maximizing visible-unknown / (1 + dist)."""
    return _greedy_pick(
        state,
        lambda cells: count_visible_unknown(state.planning_map, cells, rig).astype(np.float64),
    )


def failsafe_check(state: PlannerState, obs: np.ndarray) -> bool:
    """True when the planning map strands the agent but observations do not.

    Triggers when no frontier cell is reachable on the planning map while the
    observation-only map still has a reachable frontier; the caller should
    replan on the observation map.
    """
    cells, _ = _reachable_frontier(state)
    if len(cells) > 0:
        return False
    obs_state = PlannerState(pose=state.pose, planning_map=obs).solve()
    obs_cells, _ = _reachable_frontier(obs_state)
    return len(obs_cells) > 0
