/** Record the trainer-side forward outputs of a model on fixed random
 * inputs, so the inference engine can verify cross-implementation agreement
 * without running Node.
 *
 *   tsx src/recordForward.ts --model model.mpw1 --out expected_forward.json
 *        [--cases 10] [--seed 7]
 */
import * as fs from 'node:fs';

import * as tf from '@tensorflow/tfjs';
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { initBackend } from './backend.js';
import { newGrid, oneHot, saveGrid } from './grid.js';
import { importModel, predict } from './model.js';
import { decodeMpw1 } from './mpw1.js';
import { makeRng, randInt } from './rng.js';

async function main() {
  const argv = await yargs(hideBin(process.argv))
    .option('model', { type: 'string', demandOption: true })
    .option('out', { type: 'string', demandOption: true })
    .option('cases', { type: 'number', default: 10 })
    .option('seed', { type: 'number', default: 7 })
    .strict()
    .parse();

  console.log(`backend: ${await initBackend()}`);
  const file = decodeMpw1(fs.readFileSync(argv.model));
  const model = importModel(file);
  const [h, w] = file.inputHw;

  const rng = makeRng(argv.seed);
  const cases = [];
  for (let k = 0; k < argv.cases; k++) {
    const g = newGrid(h, w);
    for (let i = 0; i < g.cells.length; i++) g.cells[i] = randInt(rng, 3);
    const out = predict(model, tf.tensor4d(oneHot(g), [1, h, w, 3])).dataSync();
    const rows: number[][] = [];
    for (let r = 0; r < h; r++) {
      rows.push(Array.from(out.subarray(r * w, (r + 1) * w), (v) => Number(v.toFixed(8))));
    }
    cases.push({ grid: saveGrid(g), output: rows });
  }
  fs.writeFileSync(argv.out, JSON.stringify({ model: 'mpw1', cases }));
  console.log(`recorded ${cases.length} forward cases to ${argv.out}`);
}

main().catch((e) => {
  console.error(e);
  process.exit(1);
});
