import * as fs from 'node:fs';
import * as path from 'node:path';
import { fileURLToPath } from 'node:url';

import * as tf from '@tensorflow/tfjs';
import { describe, expect, it } from 'vitest';

import { UNKNOWN, newGrid, oneHot } from '../src/grid.js';
import { buildModel, exportModel, importModel, layerTable, predict } from '../src/model.js';
import { decodeMpw1, encodeMpw1 } from '../src/mpw1.js';

const here = path.dirname(fileURLToPath(import.meta.url));
const primaryFixtures = path.join(here, '..', '..', 'tests', 'fixtures');

describe('architecture', () => {
  it('matches the canonical 20-layer table', () => {
    const table = layerTable();
    expect(table.length).toBe(20);
    const strided = table.map((l, i) => (l.stride === 2 ? i : -1)).filter((i) => i >= 0);
    expect(strided).toEqual([3, 6, 9, 10, 13, 16]);
    expect(table[18].inChannels).toBe(26);
    expect(table[0].hasBias).toBe(false);
  });
});

describe('cross-implementation forward agreement', () => {
  it('reproduces the inference engine output on the shared fixture', () => {
    const file = decodeMpw1(fs.readFileSync(path.join(primaryFixtures, 'random_16x16.mpw1')));
    const model = importModel(file);
    const recorded = JSON.parse(
      fs.readFileSync(path.join(primaryFixtures, 'random_16x16_expected.json'), 'utf8'),
    ) as { observation: number[][]; output: number[][] };

    const g = newGrid(16, 16);
    recorded.observation.forEach((row, r) =>
      row.forEach((v, c) => (g.cells[r * 16 + c] = v)),
    );
    const out = predict(model, tf.tensor4d(oneHot(g), [1, 16, 16, 3])).dataSync();
    let worst = 0;
    recorded.output.forEach((row, r) =>
      row.forEach((v, c) => {
        worst = Math.max(worst, Math.abs(out[r * 16 + c] - v));
      }),
    );
    expect(worst).toBeLessThan(1e-4);
  });

  it('round-trips its own export through MPW1 with identical outputs', () => {
    const model = buildModel([16, 16], 11);
    const again = importModel(decodeMpw1(encodeMpw1(exportModel(model))));
    const x = tf.tensor4d(oneHot(newGrid(16, 16, UNKNOWN)), [1, 16, 16, 3]);
    const a = predict(model, x).dataSync();
    const b = predict(again, x).dataSync();
    expect(Array.from(a)).toEqual(Array.from(b));
  });
});

describe('loss', () => {
  it('BCE of indifferent logits on balanced labels is ln 2', () => {
    const logits = tf.zeros([1, 4, 4, 1]);
    const labels = tf.tensor4d(
      Array.from({ length: 16 }, (_, i) => (i % 2 === 0 ? 1 : 0)),
      [1, 4, 4, 1],
    );
    const loss = (tf.losses.sigmoidCrossEntropy(labels, logits) as tf.Scalar).dataSync()[0];
    expect(Math.abs(loss - Math.LN2)).toBeLessThan(1e-6);
  });
});
