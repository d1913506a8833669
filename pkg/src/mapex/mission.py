"""End-to-end mapping missions, F1 evaluation, and the batch benchmark.

A mission loops sense -> accumulate -> predict -> threshold -> synthesize ->
plan -> move until the constructed map's coverage reaches the goal. Mapping
time is the cumulative Euclidean path length (diagonal steps cost sqrt(2)).
"""
from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .grid import FREE, OBSTACLE, UNKNOWN
from .neuralnet import LearnedPredictor
from .planner import (PlannerState, detect_frontier, failsafe_check,
                      plan_cost_utility, plan_nearest_frontier, plan_random)
from .predictor import (NullPredictor, OraclePredictor, ThresholdConfig,
                        synthesize, threshold)
from .sensing import SensorRig, empty_observation, observe, tree_observations

PLANNERS = ("random", "nearest", "cost-utility")

GOAL_REACHED = "goal_reached"
FRONTIER_EXHAUSTED = "frontier_exhausted"
STEP_CAP = "step_cap"
SEALED = "sealed"


@dataclass(frozen=True)
class MissionConfig:
    planner: str = "nearest"
    thresholds: ThresholdConfig = field(default_factory=ThresholdConfig)
    coverage_goal: float = 0.98
    rig: SensorRig = field(default_factory=SensorRig)
    start: tuple[int, int] | None = None   # None: first free cell, row-major
    seed: int = 0
    step_cap: int | None = None            # None: 10 * height * width
    failsafe: bool = True
    f1_floor: float = 0.8

    def __post_init__(self):
        if not (0.0 < self.coverage_goal <= 1.0):
            raise ValueError("coverage_goal must lie in (0, 1]")
        if self.step_cap is not None and self.step_cap <= 0:
            raise ValueError("step_cap must be positive")
        if self.planner not in PLANNERS:
            raise ValueError(f"unknown planner {self.planner!r}")


@dataclass
class StepEntry:
    pose: tuple[int, int]
    path_length: float
    coverage: float
    frontier_size: int


@dataclass
class MissionRecord:
    steps: list[StepEntry]
    path_length: float
    coverage: float
    precision: float
    recall: float
    f1: float
    success: bool
    cause: str

    @property
    def step_count(self) -> int:
        return len(self.steps)


def start_pose(truth: np.ndarray) -> tuple[int, int]:
    """Top-left interior free cell: first free cell in row-major order."""
    free = np.argwhere(truth == FREE)
    if len(free) == 0:
        raise ValueError("map has no free cell")
    return (int(free[0][0]), int(free[0][1]))


def f1_score(predicted: np.ndarray, truth: np.ndarray):
    """(precision, recall, f1) with obstacle as the positive class.

    Unknown predicted cells count as negatives: unexposed walls are misses.
    """
    if predicted.shape != truth.shape:
        raise ValueError(f"shape mismatch: {predicted.shape} vs {truth.shape}")
    pos = predicted == OBSTACLE
    true = truth == OBSTACLE
    tp = np.count_nonzero(pos & true)
    fp = np.count_nonzero(pos & ~true)
    fn = np.count_nonzero(~pos & true)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * tp / (2 * tp + fn + fp) if 2 * tp + fn + fp else 0.0
    return precision, recall, f1


def coverage_of(grid: np.ndarray) -> float:
    """Fraction of the bounded environment classified non-unknown."""
    return float(np.count_nonzero(grid != UNKNOWN)) / grid.size


def _step_valid(planning_map, pose, nxt) -> bool:
    if planning_map[nxt] != FREE:
        return False
    dr, dc = nxt[0] - pose[0], nxt[1] - pose[1]
    if dr and dc:  # diagonal: both corners walled means the move is impossible
        if planning_map[pose[0], nxt[1]] == OBSTACLE and planning_map[nxt[0], pose[1]] == OBSTACLE:
            return False
    return True


def run_mission(truth: np.ndarray, predictor, cfg: MissionConfig) -> MissionRecord:
    """Run one mapping mission; predictor=None plans directly on observations."""
    pose = cfg.start if cfg.start is not None else start_pose(truth)
    if truth[pose] != FREE:
        raise ValueError(f"start {pose} is not free in the ground truth")
    cap = cfg.step_cap if cfg.step_cap is not None else 10 * truth.size
    rng = np.random.default_rng(cfg.seed)

    obs = empty_observation(truth)
    steps: list[StepEntry] = []
    path_length = 0.0
    pending: deque = deque()
    cause = STEP_CAP
    constructed = obs

    while len(steps) < cap:
        obs = observe(truth, obs, pose, cfg.rig)
        if predictor is None:
            constructed = obs
        else:
            prob = predictor.predict(obs)
            constructed = synthesize(obs, threshold(prob, cfg.thresholds))
        cov = coverage_of(constructed)
        steps.append(StepEntry(pose, path_length, cov, len(detect_frontier(constructed))))
        if cov >= cfg.coverage_goal:
            cause = GOAL_REACHED
            break

        nxt = None
        if pending:
            cand = pending.popleft()
            if _step_valid(constructed, pose, cand):
                nxt = cand
            else:
                pending.clear()
        if nxt is None:
            nxt = _plan_step(constructed, obs, pose, rng, cfg, pending)
            if nxt is None:
                obs_reachable = len(detect_frontier(obs)) > 0 and failsafe_check(
                    PlannerState(pose=pose, planning_map=constructed).solve(), obs)
                cause = SEALED if (predictor is not None and obs_reachable) else FRONTIER_EXHAUSTED
                break
        path_length += np.hypot(nxt[0] - pose[0], nxt[1] - pose[1])
        pose = nxt

    precision, recall, f1 = f1_score(constructed, truth)
    success = cause == GOAL_REACHED and f1 >= cfg.f1_floor
    return MissionRecord(steps=steps, path_length=path_length,
                         coverage=steps[-1].coverage if steps else 0.0,
                         precision=precision, recall=recall, f1=f1,
                         success=success, cause=cause)


def _plan_step(constructed, obs, pose, rng, cfg: MissionConfig, pending: deque):
    """Plan on the constructed map, falling back to observations if sealed off."""
    for planning_map in (constructed, obs):
        state = PlannerState(pose=pose, planning_map=planning_map, rng=rng).solve()
        if cfg.planner == "random":
            result = plan_random(state)
            if result is not None:
                _, path = result
                pending.extend(path[1:])
                return pending.popleft() if pending else None
        elif cfg.planner == "nearest":
            result = plan_nearest_frontier(state)
            if result is not None:
                return result[1]
        else:
            result = plan_cost_utility(state, cfg.rig)
            if result is not None:
                return result[1]
        if not cfg.failsafe or planning_map is obs or not failsafe_check(state, obs):
            return None
    return None


# ---------------------------------------------------------------------------
# predictor resolution and the batch benchmark

def resolve_predictor(spec: str, truth: np.ndarray):
    """Predictor from a spec string: none | null | oracle | learned:PATH."""
    if spec == "none":
        return None
    if spec == "null":
        return NullPredictor()
    if spec == "oracle":
        return OraclePredictor(truth)
    if spec.startswith("learned:"):
        return _load_learned(spec.split(":", 1)[1])
    raise ValueError(f"unknown predictor spec {spec!r}")


_learned_cache: dict = {}


def _load_learned(path):
    if path not in _learned_cache:
        _learned_cache[path] = LearnedPredictor.from_file(path)
    return _learned_cache[path]


BENCH_COLUMNS = ("dataset", "map_id", "planner", "predictor", "seed",
                 "path_length", "coverage", "f1", "precision", "recall",
                 "success", "cause")


def _run_task(args):
    dataset, map_id, truth, planner, pred_spec, seed, cfg = args
    predictor = resolve_predictor(pred_spec, truth)
    rec = run_mission(truth, predictor, replace(cfg, planner=planner, seed=seed))
    return {
        "dataset": dataset, "map_id": map_id, "planner": planner,
        "predictor": pred_spec, "seed": seed,
        "path_length": rec.path_length, "coverage": rec.coverage,
        "f1": rec.f1, "precision": rec.precision, "recall": rec.recall,
        "success": rec.success, "cause": rec.cause,
    }


def run_benchmark(maps, planners=PLANNERS, predictors=("null",),
                  cfg: MissionConfig = None, dataset: str = "d1",
                  random_runs: int = 10, workers: int = 1):
    """Run every planner x predictor over the map suite; returns result rows.

    maps: list of (map_id, truth grid). The stochastic random planner runs
    random_runs seeds per map; the deterministic planners run once.
    """
    if not maps:
        raise ValueError("benchmark needs at least one map")
    cfg = cfg or MissionConfig()
    tasks = []
    for map_id, truth in maps:
        for planner in planners:
            for pred in predictors:
                seeds = range(random_runs) if planner == "random" else [cfg.seed]
                for seed in seeds:
                    tasks.append((dataset, map_id, truth, planner, pred, seed, cfg))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_task, tasks, chunksize=4))
    else:
        rows = [_run_task(t) for t in tasks]
    rows.sort(key=lambda r: (r["dataset"], r["map_id"], r["planner"], r["predictor"], r["seed"]))
    return rows


def summarize_benchmark(rows, baseline=("nearest", "null")):
    """Per planner x predictor aggregate, with reduction vs the baseline cell.

    The stochastic planner is first averaged per map across its seeds, then
    across maps, mirroring the 10-run averaging protocol.
    """
    per_map: dict = {}
    for r in rows:
        key = (r["dataset"], r["planner"], r["predictor"])
        per_map.setdefault(key, {}).setdefault(r["map_id"], []).append(r)

    cells = {}
    for (dataset, planner, pred), by_map in sorted(per_map.items()):
        times = np.array([np.mean([r["path_length"] for r in runs])
                          for runs in by_map.values()])
        f1s = np.array([np.mean([r["f1"] for r in runs]) for runs in by_map.values()])
        succ = np.mean([all(r["success"] for r in runs) for runs in by_map.values()])
        cells[(dataset, planner, pred)] = {
            "dataset": dataset, "planner": planner, "predictor": pred,
            "maps": len(by_map),
            "mean_time": float(times.mean()), "median_time": float(np.median(times)),
            "mean_f1": float(f1s.mean()), "success_rate": float(succ),
        }
    summary = []
    for (dataset, planner, pred), cell in sorted(cells.items()):
        base = cells.get((dataset,) + baseline)
        for stat in ("mean", "median"):
            if base and base[f"{stat}_time"] > 0:
                cell[f"{stat}_reduction"] = 1.0 - cell[f"{stat}_time"] / base[f"{stat}_time"]
            else:
                cell[f"{stat}_reduction"] = float("nan")
        summary.append(cell)
    return summary


def write_csv(path, rows, columns=None):
    if not rows:
        raise ValueError("no rows to write")
    columns = columns or list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# predictor quality curve (F1 vs number of observations)

def evaluate_f1_curve(maps, predictor_spec: str, counts=(1, 2, 4, 8, 16, 32),
                      thresholds: ThresholdConfig = None, rig: SensorRig = None,
                      seed: int = 0):
    """F1 of raw observations vs the constructed map at growing observation counts."""
    thresholds = thresholds or ThresholdConfig()
    rig = rig or SensorRig()
    rows = []
    for map_id, truth in maps:
        rng = np.random.default_rng([seed, map_id if isinstance(map_id, int) else hash(map_id) % 2**32])
        predictor = resolve_predictor(predictor_spec, truth)
        snapshots = tree_observations(truth, rig, rng, max(counts))
        for n in counts:
            obs = snapshots[n - 1]
            _, _, base_f1 = f1_score(obs, truth)
            if predictor is None:
                pred_f1 = base_f1
            else:
                constructed = synthesize(obs, threshold(predictor.predict(obs), thresholds))
                _, _, pred_f1 = f1_score(constructed, truth)
            rows.append({"map_id": map_id, "observations": n,
                         "baseline_f1": base_f1, "predicted_f1": pred_f1})
    return rows
