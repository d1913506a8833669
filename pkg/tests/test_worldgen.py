import numpy as np
import pytest

from mapex.grid import FREE, OBSTACLE, UNKNOWN, fraction_of_walls, is_ground_truth
from mapex.worldgen import GeneratorConfig, GeneratorConfigError, generate_dataset, generate_floorplan
from oracles import flood_fill_components


def test_determinism_same_seed():
    a = generate_floorplan(GeneratorConfig(seed=7))
    b = generate_floorplan(GeneratorConfig(seed=7))
    assert (a == b).all()


def test_zero_depth_is_empty_rectangle():
    g = generate_floorplan(GeneratorConfig(seed=3, split_depth_range=(0, 0)))
    assert (g[1:-1, 1:-1] == FREE).all()
    assert is_ground_truth(g)


@pytest.mark.parametrize("seed", range(12))
def test_generated_map_invariants(seed):
    g = generate_floorplan(GeneratorConfig(seed=seed))
    assert not (g == UNKNOWN).any()
    assert is_ground_truth(g)
    assert flood_fill_components(g == FREE) == 1


def test_invalid_configs_rejected():
    with pytest.raises(GeneratorConfigError):
        GeneratorConfig(min_room_side=2)
    with pytest.raises(GeneratorConfigError):
        GeneratorConfig(door_width=0)
    with pytest.raises(GeneratorConfigError):
        GeneratorConfig(height=8, min_room_side=5)
    with pytest.raises(GeneratorConfigError):
        GeneratorConfig(split_depth_range=(3, 1))


def test_dataset_singleton_matches_single():
    cfg = GeneratorConfig(seed=11)
    assert (generate_dataset(cfg, 1)[0] == generate_floorplan(cfg)).all()


def test_nearby_seeds_differ():
    base = generate_floorplan(GeneratorConfig(seed=100))
    for k in range(1, 11):
        other = generate_floorplan(GeneratorConfig(seed=100 + k))
        assert not (base == other).all()


def test_wall_fraction_variance_is_low():
    # threshold frozen after the first 500-map generation run: observed std 0.023
    maps = generate_dataset(GeneratorConfig(seed=0), 500)
    fractions = [fraction_of_walls(g) for g in maps]
    assert np.std(fractions) < 0.05


def test_count_must_be_positive():
    with pytest.raises(ValueError):
        generate_dataset(GeneratorConfig(), 0)
