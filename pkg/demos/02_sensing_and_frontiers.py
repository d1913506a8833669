#!/usr/bin/env python3
"""Take a few sensor sweeps on a generated map and watch the frontier move.

The sensor casts 16 beams over 360 degrees out to 20 cells. Observed cells
accumulate into the observation map; the frontier is the set of observed
free cells that still touch unknown territory.
"""
import numpy as np

from mapex import (FREE, UNKNOWN, GeneratorConfig, SensorRig, accumulate,
                   detect_frontier, empty_observation, generate_floorplan,
                   sense, start_pose)


def render(obs, pose, frontier):
    chars = np.full(obs.shape, "?", dtype="<U1")
    chars[obs == FREE] = "."
    chars[obs == 1] = "#"
    for r, c in frontier:
        chars[r, c] = "F"
    chars[pose] = "@"
    return "\n".join("".join(row) for row in chars)


truth = generate_floorplan(GeneratorConfig(seed=5, height=24, width=48))
rig = SensorRig()
obs = empty_observation(truth)
pose = start_pose(truth)

for i in range(4):
    obs = accumulate(obs, sense(truth, pose, rig))
    frontier = detect_frontier(obs)
    known = np.count_nonzero(obs != UNKNOWN)
    print(f"--- sweep {i} from {pose}: {known}/{obs.size} cells known, "
          f"{len(frontier)} frontier cells ---")
    print(render(obs, pose, frontier))
    if len(frontier) == 0:
        break
    # hop straight to a frontier cell for the next sweep (demo shortcut;
    # a real mission walks there through free space)
    pose = tuple(frontier[len(frontier) // 2])
