import numpy as np
import pytest

from mapex.grid import FREE, OBSTACLE, UNKNOWN, new_unknown
from mapex.sensing import (ObservationConflictError, SensorRig, accumulate,
                           empty_observation, sense, tree_observations)
from mapex.worldgen import GeneratorConfig, generate_floorplan

RIG = SensorRig()


def open_room(n=45):
    g = np.full((n, n), FREE, dtype=np.uint8)
    g[0, :] = g[-1, :] = g[:, 0] = g[:, -1] = OBSTACLE
    return g


def test_east_beam_open_ground():
    g = open_room()
    r = c = 22
    readings = sense(g, (r, c), RIG)
    for k in range(1, 21):
        assert readings[(r, c + k)] == FREE
    assert (r, c + 21) not in readings


def test_east_beam_blocked_by_wall():
    g = open_room()
    r = c = 22
    g[r, c + 5] = OBSTACLE
    readings = sense(g, (r, c), RIG)
    for k in range(1, 5):
        assert readings[(r, c + k)] == FREE
    assert readings[(r, c + 5)] == OBSTACLE
    assert (r, c + 6) not in readings


def test_single_cell_pocket_sees_its_walls():
    g = np.full((5, 5), OBSTACLE, dtype=np.uint8)
    g[2, 2] = FREE
    readings = sense(g, (2, 2), RIG)
    expected = {(r, c) for r in (1, 2, 3) for c in (1, 2, 3)}
    assert set(readings) == expected
    assert readings[(2, 2)] == FREE
    assert all(readings[cell] == OBSTACLE for cell in expected - {(2, 2)})


def test_pose_on_obstacle_rejected():
    g = open_room()
    with pytest.raises(ValueError):
        sense(g, (0, 0), RIG)
    with pytest.raises(ValueError):
        sense(g, (-1, 3), RIG)


def test_visibility_within_range_disc():
    readings = sense(open_room(), (22, 22), RIG)
    for (r, c) in readings:
        assert np.hypot(r - 22, c - 22) <= RIG.range_cells + 1e-9


def test_rotation_symmetry_on_open_ground():
    readings = sense(open_room(61), (30, 30), RIG)
    offsets = {(r - 30, c - 30) for (r, c) in readings}
    rotated = {(-dc, dr) for (dr, dc) in offsets}
    assert offsets == rotated


def test_sealed_corner_hides_free_space_beyond():
    g = open_room()
    # both cells flanking the NE 45-degree ray are walls: the corner is sealed
    g[22, 23] = OBSTACLE
    g[21, 22] = OBSTACLE
    readings = sense(g, (22, 22), RIG)
    assert readings[(22, 23)] == OBSTACLE
    assert readings[(21, 22)] == OBSTACLE
    assert (21, 23) not in readings  # free cell behind the sealed corner
    assert (20, 24) not in readings


def test_sealed_corner_still_shows_a_wall_corner():
    g = open_room()
    g[22, 23] = OBSTACLE
    g[21, 22] = OBSTACLE
    g[21, 23] = OBSTACLE  # the diagonal cell itself is wall: it stays visible
    readings = sense(g, (22, 22), RIG)
    assert readings[(21, 23)] == OBSTACLE
    assert (20, 24) not in readings


def test_soundness_against_truth():
    rng = np.random.default_rng(5)
    for seed in range(5):
        truth = generate_floorplan(GeneratorConfig(seed=seed))
        free = np.argwhere(truth == FREE)
        for pose in free[rng.integers(len(free), size=10)]:
            for cell, v in sense(truth, tuple(pose), RIG).items():
                assert truth[cell] == v


def test_accumulate_identity_and_union():
    g = open_room()
    obs = empty_observation(g)
    assert (accumulate(obs, {}) == UNKNOWN).all()
    readings = sense(g, (22, 22), RIG)
    merged = accumulate(obs, readings)
    for cell, v in readings.items():
        assert merged[cell] == v
    assert np.count_nonzero(merged != UNKNOWN) == len(readings)


def test_accumulate_idempotent():
    g = open_room()
    readings = sense(g, (22, 22), RIG)
    once = accumulate(empty_observation(g), readings)
    twice = accumulate(once, readings)
    assert (once == twice).all()


def test_accumulate_conflict_raises():
    obs = accumulate(empty_observation(open_room()), {(3, 3): FREE})
    with pytest.raises(ObservationConflictError):
        accumulate(obs, {(3, 3): OBSTACLE})


def test_observation_monotone_growth():
    g = generate_floorplan(GeneratorConfig(seed=2))
    obs = empty_observation(g)
    known = obs != UNKNOWN
    rng = np.random.default_rng(0)
    free = np.argwhere(g == FREE)
    for pose in free[rng.integers(len(free), size=8)]:
        obs = accumulate(obs, sense(g, tuple(pose), RIG))
        now_known = obs != UNKNOWN
        assert (now_known | ~known).all()  # nothing un-observed
        known = now_known


def test_tree_observations_consistent_and_distinct():
    truth = generate_floorplan(GeneratorConfig(seed=4))
    runs = [tree_observations(truth, RIG, np.random.default_rng(s), 6)[-1]
            for s in range(5)]
    for obs in runs:
        known = obs != UNKNOWN
        assert (obs[known] == truth[known]).all()
    for i in range(5):
        for j in range(i + 1, 5):
            assert not (runs[i] == runs[j]).all()


def test_single_depth_tree_is_one_footprint():
    truth = generate_floorplan(GeneratorConfig(seed=4))
    snaps = tree_observations(truth, RIG, np.random.default_rng(1), 1)
    assert len(snaps) == 1
    pose = tuple(np.argwhere(snaps[0] == FREE)[0])  # some observed free cell
    assert snaps[0][pose] == FREE


def test_rig_must_cover_circle():
    with pytest.raises(ValueError):
        SensorRig(beam_count=16, angular_spacing_deg=20.0)
