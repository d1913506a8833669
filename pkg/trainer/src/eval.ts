/** CLI: F1-vs-observations curve for a trained model on held-out maps.
 *
 *   tsx src/eval.ts --model model.mpw1 --maps heldout/ --out curve.csv
 *        [--counts 1,2,4,8,16,32] [--delta-free F] [--delta-obstacle F]
 *        [--train-maps DIR]   (refuses maps that also appear in DIR)
 */
import * as fs from 'node:fs';
import * as path from 'node:path';

import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { initBackend } from './backend.js';
import { listGridFiles } from './dataset.js';
import { f1Curve } from './evalF1.js';
import { readGridFile } from './grid.js';
import { importModel } from './model.js';
import { decodeMpw1 } from './mpw1.js';

async function main() {
  const argv = await yargs(hideBin(process.argv))
    .option('model', { type: 'string', demandOption: true })
    .option('maps', { type: 'string', demandOption: true })
    .option('out', { type: 'string', demandOption: true })
    .option('counts', { type: 'string', default: '1,2,4,8,16,32' })
    .option('delta-free', { type: 'number', default: 0.93 })
    .option('delta-obstacle', { type: 'number', default: 0.95 })
    .option('seed', { type: 'number', default: 0 })
    .option('train-maps', { type: 'string', describe: 'training map dir, for the disjointness check' })
    .strict()
    .parse();

  const backend = await initBackend();
  console.log(`backend: ${backend}`);

  const files = listGridFiles(argv.maps);
  if (argv.trainMaps) {
    const trainNames = new Set(listGridFiles(argv.trainMaps).map((f) => path.basename(f)));
    const overlap = files.filter((f) => trainNames.has(path.basename(f)));
    if (overlap.length > 0) {
      throw new Error(`held-out maps overlap the training set: ${overlap.join(', ')}`);
    }
  }
  const maps = files.map((f) => ({ id: path.basename(f, '.grid'), truth: readGridFile(f) }));
  const model = importModel(decodeMpw1(fs.readFileSync(argv.model)));
  const counts = argv.counts.split(',').map(Number);
  const rows = f1Curve(maps, model, counts, {
    deltaFree: argv.deltaFree,
    deltaObstacle: argv.deltaObstacle,
  }, undefined, argv.seed);

  const lines = ['map_id,observations,baseline_f1,predicted_f1'];
  for (const r of rows) {
    lines.push(`${r.mapId},${r.observations},${r.baselineF1.toFixed(6)},${r.predictedF1.toFixed(6)}`);
  }
  fs.writeFileSync(argv.out, lines.join('\n') + '\n');

  for (const n of counts) {
    const rs = rows.filter((r) => r.observations === n);
    const base = rs.reduce((s, r) => s + r.baselineF1, 0) / rs.length;
    const pred = rs.reduce((s, r) => s + r.predictedF1, 0) / rs.length;
    const wins = rs.filter((r) => r.predictedF1 > r.baselineF1).length;
    console.log(
      `observations=${n}: baseline_f1=${base.toFixed(4)} predicted_f1=${pred.toFixed(4)} ` +
        `strict_wins=${wins}/${rs.length}`,
    );
  }
  console.log(`wrote ${rows.length} rows to ${argv.out}`);
}

main().catch((e) => {
  console.error(e);
  process.exit(1);
});
