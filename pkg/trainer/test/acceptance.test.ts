/** End-to-end checks on the committed trained model: it must beat the
 * raw-observation baseline on held-out floorplans, not just fit the train
 * set. The 20 maps under fixtures/heldout were generated from a disjoint
 * seed range from the training corpus.
 */
import * as fs from 'node:fs';
import * as path from 'node:path';
import { fileURLToPath } from 'node:url';

import { beforeAll, describe, expect, it } from 'vitest';

import { initBackend } from '../src/backend.js';
import { f1Curve } from '../src/evalF1.js';
import { loadGrid } from '../src/grid.js';
import { Model, importModel } from '../src/model.js';
import { decodeMpw1 } from '../src/mpw1.js';

const here = path.dirname(fileURLToPath(import.meta.url));
const modelPath = path.join(here, '..', 'model.mpw1');
const heldoutDir = path.join(here, 'fixtures', 'heldout');

const COUNTS = [1, 2, 4, 8, 16];

describe.skipIf(!fs.existsSync(modelPath))('held-out F1 dominance', () => {
  let model: Model;
  beforeAll(async () => {
    await initBackend();
    model = importModel(decodeMpw1(fs.readFileSync(modelPath)));
  });

  it('strictly improves F1 at >= 80% of map/count points', { timeout: 300_000 }, () => {
    const maps = fs
      .readdirSync(heldoutDir)
      .filter((f) => f.endsWith('.grid'))
      .sort()
      .map((f) => ({
        id: f,
        truth: loadGrid(fs.readFileSync(path.join(heldoutDir, f), 'utf8')),
      }));
    expect(maps.length).toBeGreaterThanOrEqual(20);

    const rows = f1Curve(maps, model, COUNTS, undefined, undefined, 2024);
    const total = rows.length;
    const strictWins = rows.filter((r) => r.predictedF1 > r.baselineF1).length;
    const regressions = rows.filter((r) => r.predictedF1 < r.baselineF1).length;

    expect(total).toBe(maps.length * COUNTS.length);
    expect(strictWins / total).toBeGreaterThanOrEqual(0.8);
    expect(regressions).toBe(0);
  });
});
