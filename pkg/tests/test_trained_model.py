"""Cross-implementation checks on the committed trained weight file.

The training pipeline (trainer/, TypeScript) exports MPW1 weights plus a
recording of its own forward outputs on fixed inputs; the inference engine
here must load the file and agree within 1e-4 per cell.
"""
import json
import pathlib

import numpy as np
import pytest

from mapex.grid import encode_one_hot, load_grid
from mapex.neuralnet import forward, read_weights_file

TRAINER_DIR = pathlib.Path(__file__).parent.parent / "trainer"
MODEL = TRAINER_DIR / "model.mpw1"
RECORDED = TRAINER_DIR / "expected_forward.json"

pytestmark = pytest.mark.skipif(
    not (MODEL.exists() and RECORDED.exists()),
    reason="trained model artifacts not present",
)


def test_trained_model_loads():
    net = read_weights_file(MODEL)
    assert net.input_hw == (64, 64)
    assert len(net.layers) == 20


def test_forward_agrees_with_training_side():
    net = read_weights_file(MODEL)
    with open(RECORDED) as fh:
        recorded = json.load(fh)
    assert len(recorded["cases"]) >= 10
    for case in recorded["cases"]:
        obs = load_grid(case["grid"])
        out = forward(net, encode_one_hot(obs))
        want = np.asarray(case["output"])
        assert np.abs(out - want).max() < 1e-4
