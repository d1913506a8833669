import numpy as np
import pytest
from hypothesis import given, strategies as st

from mapex.grid import (FREE, OBSTACLE, UNKNOWN, GridFormatError, as_grid,
                        decode_one_hot, encode_one_hot, fraction_of_walls,
                        is_ground_truth, load_grid, save_grid)

grids = st.integers(1, 12).flatmap(
    lambda h: st.integers(1, 12).flatmap(
        lambda w: st.lists(st.lists(st.sampled_from([FREE, OBSTACLE, UNKNOWN]),
                                    min_size=w, max_size=w),
                           min_size=h, max_size=h)))


def test_one_hot_single_free_cell():
    g = as_grid([[FREE]])
    oh = encode_one_hot(g)
    assert oh.tolist() == [[[1.0]], [[0.0]], [[0.0]]]


def test_one_hot_obstacle_unknown_row():
    oh = encode_one_hot(as_grid([[OBSTACLE, UNKNOWN]]))
    assert oh[0].tolist() == [[0.0, 0.0]]
    assert oh[1].tolist() == [[1.0, 0.0]]
    assert oh[2].tolist() == [[0.0, 1.0]]


@given(grids)
def test_one_hot_round_trip_and_sum(cells):
    g = as_grid(cells)
    oh = encode_one_hot(g)
    assert (oh.sum(axis=0) == 1.0).all()
    assert (decode_one_hot(oh) == g).all()


def test_load_all_obstacle():
    assert (load_grid("##\n##\n") == OBSTACLE).all()


def test_load_mixed_row():
    assert load_grid("#.#\n").tolist() == [[OBSTACLE, FREE, OBSTACLE]]


def test_load_ragged_rows_rejected():
    with pytest.raises(GridFormatError):
        load_grid("#?\n#")


def test_load_unknown_character_rejected():
    with pytest.raises(GridFormatError):
        load_grid("#x\n##\n")


def test_load_empty_rejected():
    with pytest.raises(GridFormatError):
        load_grid("")


@given(grids)
def test_save_load_round_trip(cells):
    g = as_grid(cells)
    assert (load_grid(save_grid(g)) == g).all()
    assert save_grid(load_grid(save_grid(g))) == save_grid(g)


def test_fraction_of_walls_saturated():
    assert fraction_of_walls(as_grid([[OBSTACLE] * 2] * 2)) == 1.0


def test_fraction_of_walls_quarter():
    g = as_grid([[OBSTACLE, FREE], [FREE, FREE]])
    assert fraction_of_walls(g) == 0.25


def test_fraction_of_walls_rejects_unknown():
    with pytest.raises(ValueError):
        fraction_of_walls(as_grid([[UNKNOWN]]))


@given(grids.filter(lambda cells: all(c != UNKNOWN for row in cells for c in row)))
def test_fraction_of_walls_complements_free(cells):
    g = as_grid(cells)
    walls = fraction_of_walls(g)
    assert 0.0 <= walls <= 1.0
    free = np.count_nonzero(g == FREE) / g.size
    assert walls == pytest.approx(1.0 - free)


def test_is_ground_truth():
    assert is_ground_truth(as_grid([[OBSTACLE] * 3,
                                    [OBSTACLE, FREE, OBSTACLE],
                                    [OBSTACLE] * 3]))
    assert not is_ground_truth(as_grid([[OBSTACLE, UNKNOWN], [OBSTACLE, OBSTACLE]]))
    assert not is_ground_truth(as_grid([[FREE]]))
