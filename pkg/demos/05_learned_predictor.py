#!/usr/bin/env python3
"""Load a weight file, complete a partial map, and compare F1 against raw
observations.

Expects an MPW1 weight file as the first argument; without one it falls
back to random weights, which demonstrates the machinery but of course
predicts noise.
"""
import sys

import numpy as np

from mapex import (GeneratorConfig, LearnedPredictor, SensorRig,
                   ThresholdConfig, f1_score, generate_floorplan, random_weights,
                   synthesize, threshold, tree_observations)

if len(sys.argv) > 1:
    predictor = LearnedPredictor.from_file(sys.argv[1])
    print(f"loaded weights from {sys.argv[1]}")
else:
    predictor = LearnedPredictor(random_weights((64, 64), seed=0))
    print("no weight file given; using untrained random weights")

thresholds = ThresholdConfig()
rig = SensorRig()

for seed in range(3):
    truth = generate_floorplan(GeneratorConfig(seed=900 + seed))
    print(f"--- map {seed} ---")
    for n, obs in enumerate(tree_observations(truth, rig, np.random.default_rng(seed), 16)):
        if n + 1 not in (1, 4, 16):
            continue
        constructed = synthesize(obs, threshold(predictor.predict(obs), thresholds))
        _, _, base = f1_score(obs, truth)
        _, _, pred = f1_score(constructed, truth)
        print(f"  {n + 1:2d} observations: baseline f1 {base:.3f}  "
              f"with predictor {pred:.3f}")
