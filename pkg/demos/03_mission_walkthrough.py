#!/usr/bin/env python3
"""Run one full mapping mission and print its step log.

The mission loops sense -> accumulate -> predict -> threshold -> synthesize
-> plan -> move until 98% of the map is classified. Mapping time is the
cumulative Euclidean path length, with diagonal moves costing sqrt(2).
"""
from mapex import (GeneratorConfig, MissionConfig, NullPredictor,
                   OraclePredictor, generate_floorplan, run_mission)

truth = generate_floorplan(GeneratorConfig(seed=12))

for label, predictor in (("no predictor", None),
                         ("null predictor", NullPredictor()),
                         ("oracle predictor", OraclePredictor(truth))):
    rec = run_mission(truth, predictor, MissionConfig(planner="nearest"))
    print(f"--- {label} ---")
    for i, s in enumerate(rec.steps):
        if i % 25 == 0 or i == rec.step_count - 1:
            print(f"  step {i:4d}: pose={s.pose} "
                  f"path={s.path_length:7.2f} coverage={s.coverage:.3f} "
                  f"frontier={s.frontier_size}")
    print(f"  done: cause={rec.cause} path_length={rec.path_length:.2f} "
          f"f1={rec.f1:.3f} success={rec.success}")

# the null predictor plans purely from observations; the oracle already
# knows the map, so its mission ends after the very first sweep
