/** Training-example synthesis: partial observations of ground-truth maps.
 *
 * Observations accumulate along a random tree of sensing poses (depth
 * uniform in [1, dMax]); each floorplan contributes `runs` independent
 * examples. Everything is seed-deterministic.
 */
import * as fs from 'node:fs';
import * as path from 'node:path';

import { Grid, UNKNOWN, at, obstacleMask, oneHot, readGridFile } from './grid.js';
import { DEFAULT_RIG, SensorRig, treeObservations } from './sensing.js';
import { makeRng, randInt } from './rng.js';

export interface TrainingExample {
  observation: Grid;
  target: Grid; // ground truth
}

export function listGridFiles(dir: string): string[] {
  const names = fs
    .readdirSync(dir)
    .filter((f) => f.endsWith('.grid'))
    .sort();
  if (names.length === 0) throw new Error(`no .grid files in ${dir}`);
  return names.map((n) => path.join(dir, n));
}

export interface DatasetConfig {
  runs: number; // observation runs per floorplan
  dMax: number; // max tree depth
  seed: number;
  rig: SensorRig;
}

export const DEFAULT_DATASET: DatasetConfig = {
  runs: 5,
  dMax: 24,
  seed: 0,
  rig: DEFAULT_RIG,
};

/** One observation run: a snapshot at a random depth in [1, dMax]. */
export function observationRun(truth: Grid, cfg: DatasetConfig, runSeed: number): Grid {
  const rng = makeRng(runSeed);
  const depth = 1 + randInt(rng, cfg.dMax);
  const snapshots = treeObservations(truth, cfg.rig, rng, depth);
  return snapshots[snapshots.length - 1];
}

export function* generateExamples(
  mapFiles: string[],
  cfg: DatasetConfig,
): Generator<TrainingExample & { mapFile: string; run: number }> {
  for (let m = 0; m < mapFiles.length; m++) {
    const truth = readGridFile(mapFiles[m]);
    for (let run = 0; run < cfg.runs; run++) {
      const observation = observationRun(truth, cfg, cfg.seed * 1000003 + m * 101 + run);
      yield { observation, target: truth, mapFile: mapFiles[m], run };
    }
  }
}

export function checkExample(ex: TrainingExample): void {
  for (let i = 0; i < ex.observation.cells.length; i++) {
    const v = ex.observation.cells[i];
    if (v !== UNKNOWN && v !== ex.target.cells[i]) {
      throw new Error(`observation disagrees with target at cell ${i}`);
    }
  }
}

export interface Batch {
  inputs: Float32Array; // [n, H, W, 3]
  targets: Float32Array; // [n, H, W, 1]
  size: number;
}

export function toBatch(examples: TrainingExample[]): Batch {
  const { height, width } = examples[0].observation;
  const inputs = new Float32Array(examples.length * height * width * 3);
  const targets = new Float32Array(examples.length * height * width);
  examples.forEach((ex, i) => {
    inputs.set(oneHot(ex.observation), i * height * width * 3);
    targets.set(obstacleMask(ex.target), i * height * width);
  });
  return { inputs, targets, size: examples.length };
}
