/** F1-vs-observation-count evaluation of a trained predictor.
 *
 * Mirrors the inference side: probabilities are thresholded into
 * free/obstacle/unknown with per-class confidence bands, observations are
 * overlaid on top, and F1 treats obstacle as the positive class with
 * unknown cells counting as negatives.
 */
import * as tf from '@tensorflow/tfjs';

import { FREE, Grid, OBSTACLE, UNKNOWN, newGrid, oneHot } from './grid.js';
import { Model, predict } from './model.js';
import { DEFAULT_RIG, SensorRig, treeObservations } from './sensing.js';
import { makeRng } from './rng.js';

export interface Thresholds {
  deltaFree: number;
  deltaObstacle: number;
}

export const DEFAULT_THRESHOLDS: Thresholds = { deltaFree: 0.93, deltaObstacle: 0.95 };

export function threshold(prob: Float32Array, hw: [number, number], t: Thresholds): Grid {
  const freeCut = (1 - t.deltaFree) / 2;
  const obstacleCut = (1 + t.deltaObstacle) / 2;
  const g = newGrid(hw[0], hw[1]);
  for (let i = 0; i < prob.length; i++) {
    // the obstacle rule wins when both bands touch a shared cut point
    if (prob[i] >= obstacleCut) g.cells[i] = OBSTACLE;
    else if (prob[i] <= freeCut) g.cells[i] = FREE;
    else g.cells[i] = UNKNOWN;
  }
  return g;
}

export function synthesize(obs: Grid, predicted: Grid): Grid {
  const out = newGrid(obs.height, obs.width);
  for (let i = 0; i < obs.cells.length; i++) {
    out.cells[i] = obs.cells[i] !== UNKNOWN ? obs.cells[i] : predicted.cells[i];
  }
  return out;
}

export function f1Score(predicted: Grid, truth: Grid): number {
  let tp = 0;
  let fp = 0;
  let fn = 0;
  for (let i = 0; i < truth.cells.length; i++) {
    const pos = predicted.cells[i] === OBSTACLE;
    const real = truth.cells[i] === OBSTACLE;
    if (pos && real) tp++;
    else if (pos && !real) fp++;
    else if (!pos && real) fn++;
  }
  return 2 * tp + fp + fn === 0 ? 0 : (2 * tp) / (2 * tp + fp + fn);
}

export function predictGrid(model: Model, obs: Grid): Float32Array {
  return tf.tidy(() => {
    const x = tf.tensor4d(oneHot(obs), [1, obs.height, obs.width, 3]);
    return predict(model, x).dataSync() as Float32Array;
  });
}

export interface CurveRow {
  mapId: string;
  observations: number;
  baselineF1: number;
  predictedF1: number;
}

export function f1Curve(
  maps: { id: string; truth: Grid }[],
  model: Model,
  counts: number[],
  thresholds: Thresholds = DEFAULT_THRESHOLDS,
  rig: SensorRig = DEFAULT_RIG,
  seed = 0,
): CurveRow[] {
  const rows: CurveRow[] = [];
  for (const { id, truth } of maps) {
    const rng = makeRng(seed ^ hashString(id));
    const snapshots = treeObservations(truth, rig, rng, Math.max(...counts));
    for (const n of counts) {
      const obs = snapshots[n - 1];
      const constructed = synthesize(
        obs,
        threshold(predictGrid(model, obs), [truth.height, truth.width], thresholds),
      );
      rows.push({
        mapId: id,
        observations: n,
        baselineF1: f1Score(obs, truth),
        predictedF1: f1Score(constructed, truth),
      });
    }
  }
  return rows;
}

function hashString(s: string): number {
  let h = 2166136261;
  for (let i = 0; i < s.length; i++) {
    h = Math.imul(h ^ s.charCodeAt(i), 16777619);
  }
  return h >>> 0;
}
