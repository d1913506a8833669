"""Acceptance suite: one test per top-level acceptance criterion.

Run with -v for one pass/fail line per criterion. The two benchmark-scale
criteria share a single 50-map run computed once per session.
"""
import numpy as np
import pytest

from mapex.grid import FREE, OBSTACLE, UNKNOWN, as_grid
from mapex.mission import (GOAL_REACHED, SEALED, MissionConfig, f1_score,
                           run_benchmark, run_mission, summarize_benchmark)
from mapex.neuralnet import (KIND_CONV, KIND_TRANSPOSED_CONV, LayerSpec,
                             conv2d, transposed_conv2d)
from mapex.planner import detect_frontier, shortest_paths
from mapex.predictor import (NullPredictor, ThresholdConfig, null_predict,
                             threshold)
from mapex.sensing import SensorRig
from mapex.worldgen import GeneratorConfig, generate_floorplan
from oracles import (bellman_ford_distances, conv2d_reference, frontier_scan,
                     random_partial_map, transposed_conv2d_reference)


def test_acceptance_oracle_equivalence():
    rng = np.random.default_rng(0)
    # shortest paths: exact agreement with relaxation-to-fixpoint distances
    for _ in range(200):
        g = random_partial_map(rng)
        free = np.argwhere(g == FREE)
        if len(free) == 0:
            continue
        src = tuple(free[rng.integers(len(free))])
        dist, _ = shortest_paths(g, src)
        assert (dist == bellman_ford_distances(g, src)).all()
    # convolution layers: within 1e-5 of the direct-loop references
    for _ in range(100):
        ci, co = rng.integers(1, 4, size=2)
        h, w = rng.integers(2, 7, size=2)
        stride = int(rng.integers(1, 3))
        x = rng.normal(size=(ci, h, w)).astype(np.float32)
        k = rng.normal(size=(co, ci, 3, 3)).astype(np.float32)
        b = rng.normal(size=co).astype(np.float32)
        layer = LayerSpec(KIND_CONV, ci, co, (3, 3), stride=stride, has_bias=True,
                          weights=k, bias=b)
        assert np.abs(conv2d(x, layer) - conv2d_reference(x, k, b, stride)).max() < 1e-5
        tlayer = LayerSpec(KIND_TRANSPOSED_CONV, ci, co, (3, 3), stride=2,
                           has_bias=True, weights=k, bias=b)
        out_hw = (2 * h - int(rng.integers(0, 2)), 2 * w - int(rng.integers(0, 2)))
        got = transposed_conv2d(x, tlayer, out_hw)
        assert np.abs(got - transposed_conv2d_reference(x, k, b, 2, out_hw)).max() < 1e-5
    # frontier detection: exact agreement with the per-cell scan
    for _ in range(200):
        g = random_partial_map(rng)
        assert [tuple(c) for c in detect_frontier(g)] == frontier_scan(g)


def test_acceptance_pipeline_identity():
    rng = np.random.default_rng(1)
    configs = (ThresholdConfig(), ThresholdConfig(0.85, 0.85), ThresholdConfig(0.01, 0.01))
    for _ in range(1000):
        obs = rng.integers(0, 3, size=(12, 12)).astype(np.uint8)
        for cfg in configs:
            assert (threshold(null_predict(obs), cfg) == obs).all()
    # full missions with the null predictor match the predictor-free control
    for seed in range(20):
        truth = generate_floorplan(GeneratorConfig(seed=500 + seed, height=48, width=48))
        a = run_mission(truth, NullPredictor(), MissionConfig())
        b = run_mission(truth, None, MissionConfig())
        assert [s.pose for s in a.steps] == [s.pose for s in b.steps]
        assert a.path_length == b.path_length
        assert (a.coverage, a.f1, a.cause) == (b.coverage, b.f1, b.cause)


def test_acceptance_unit_vectors():
    # thresholding cut-points at the default confidence pair
    cfg = ThresholdConfig(0.93, 0.95)
    assert abs(cfg.free_cutoff - 0.035) < 1e-12
    assert abs(cfg.obstacle_cutoff - 0.975) < 1e-12
    assert threshold(np.array([[0.02, 0.98, 0.5]]), cfg).tolist() == \
        [[FREE, OBSTACLE, UNKNOWN]]
    # F1 worked example: TP=3 FP=1 FN=2
    truth = as_grid([[OBSTACLE] * 5 + [FREE] * 3])
    pred = as_grid([[OBSTACLE] * 3 + [UNKNOWN, FREE, OBSTACLE] + [FREE] * 2])
    precision, recall, f1 = f1_score(pred, truth)
    assert abs(precision - 0.75) < 1e-12
    assert abs(recall - 0.6) < 1e-12
    assert abs(f1 - 2 / 3) < 1e-12
    # waypoint utility: reward 10 at distance 4 loses to reward 3 at distance 0
    far, near = 10 / (1.0 + 4.0), 3 / (1.0 + 0.0)
    assert abs(far - 2.0) < 1e-12 and abs(near - 3.0) < 1e-12
    assert near > far


def test_acceptance_determinism():
    truth = generate_floorplan(GeneratorConfig(seed=77))
    cfg = MissionConfig(planner="random", seed=9)
    a = run_mission(truth, NullPredictor(), cfg)
    b = run_mission(truth, NullPredictor(), cfg)
    assert [s.pose for s in a.steps] == [s.pose for s in b.steps]
    assert a == b
    rows_a = run_benchmark([(0, truth)], planners=("random",), random_runs=2, cfg=cfg)
    rows_b = run_benchmark([(0, truth)], planners=("random",), random_runs=2, cfg=cfg)
    assert rows_a == rows_b


@pytest.fixture(scope="module")
def benchmark_suite():
    maps = [(i, generate_floorplan(GeneratorConfig(seed=1000 + i))) for i in range(50)]
    rows = run_benchmark(maps, planners=("random", "nearest", "cost-utility"),
                         predictors=("none",), random_runs=10)
    rows += run_benchmark(maps, planners=("nearest", "cost-utility"),
                          predictors=("oracle",), random_runs=10)
    summary = summarize_benchmark(rows, baseline=("nearest", "none"))
    return {(c["planner"], c["predictor"]): c for c in summary}


def test_acceptance_directional_reduction(benchmark_suite):
    # oracle-informed planning vs the observation-based nearest-frontier baseline
    assert benchmark_suite[("cost-utility", "oracle")]["mean_reduction"] >= 0.40
    assert benchmark_suite[("nearest", "oracle")]["mean_reduction"] >= 0.30


def test_acceptance_planner_ordering(benchmark_suite):
    cu = benchmark_suite[("cost-utility", "none")]["mean_time"]
    nf = benchmark_suite[("nearest", "none")]["mean_time"]
    rnd = benchmark_suite[("random", "none")]["mean_time"]
    assert cu <= nf <= rnd


class _SealingPredictor:
    """Confidently fills the left chamber but falsely walls off its exit."""

    def __init__(self, truth, door, boundary_col):
        self.truth = truth
        self.door = door
        self.boundary_col = boundary_col

    def predict(self, obs):
        prob = null_predict(obs)
        unknown = obs == UNKNOWN
        left = np.zeros_like(unknown)
        left[:, : self.boundary_col + 1] = True
        fill = unknown & left
        prob[fill] = (self.truth[fill] == OBSTACLE).astype(np.float64)
        prob[self.door] = 1.0 if obs[self.door] == UNKNOWN else prob[self.door]
        return prob


def _seal_fixture():
    truth = np.full((7, 30), OBSTACLE, np.uint8)
    truth[1:6, 1:29] = FREE
    truth[1:6, 20] = OBSTACLE
    door = (3, 20)
    truth[door] = FREE
    predictor = _SealingPredictor(truth, door, boundary_col=20)
    rig = SensorRig(beam_count=16, angular_spacing_deg=22.5, range_cells=4.0)
    return truth, predictor, rig


def test_acceptance_failsafe_recovery():
    truth, predictor, rig = _seal_fixture()
    cfg = MissionConfig(rig=rig, start=(3, 2), coverage_goal=0.98)
    rec = run_mission(truth, predictor, cfg)
    assert rec.cause == GOAL_REACHED
    assert rec.success
    sealed = run_mission(truth, predictor,
                         MissionConfig(rig=rig, start=(3, 2), failsafe=False))
    assert sealed.cause == SEALED
    assert not sealed.success
