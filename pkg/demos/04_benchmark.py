#!/usr/bin/env python3
"""Small planner benchmark: mapping time of the three planners on 5 maps.

The stochastic random planner is averaged over 5 seeds per map before
comparing; reductions are relative to nearest-frontier planning without
any predictor.
"""
from mapex import (GeneratorConfig, generate_floorplan, run_benchmark,
                   summarize_benchmark)

maps = [(i, generate_floorplan(GeneratorConfig(seed=200 + i))) for i in range(5)]

rows = run_benchmark(maps, predictors=("none", "oracle"), random_runs=5)
summary = summarize_benchmark(rows, baseline=("nearest", "none"))

print(f"{'planner':>13} {'predictor':>9} {'mean':>8} {'median':>8} "
      f"{'reduction':>10} {'success':>8}")
for cell in summary:
    print(f"{cell['planner']:>13} {cell['predictor']:>9} "
          f"{cell['mean_time']:8.1f} {cell['median_time']:8.1f} "
          f"{cell['mean_reduction']:+10.1%} {cell['success_rate']:8.0%}")
