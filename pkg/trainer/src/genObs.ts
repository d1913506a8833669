/** CLI: write observation grids for a directory of ground-truth maps.
 *
 *   tsx src/genObs.ts --data maps/ --out obs/ [--runs 5] [--dmax 24] [--seed 0]
 *
 * Each run writes <map>__runN.grid next to nothing else; unknown cells are
 * '?' so the files round-trip through the shared .grid format.
 */
import * as fs from 'node:fs';
import * as path from 'node:path';

import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { DEFAULT_DATASET, checkExample, generateExamples, listGridFiles } from './dataset.js';
import { writeGridFile } from './grid.js';

async function main() {
  const argv = await yargs(hideBin(process.argv))
    .option('data', { type: 'string', demandOption: true })
    .option('out', { type: 'string', demandOption: true })
    .option('runs', { type: 'number', default: 5 })
    .option('dmax', { type: 'number', default: 24 })
    .option('seed', { type: 'number', default: 0 })
    .strict()
    .parse();

  fs.mkdirSync(argv.out, { recursive: true });
  const cfg = { ...DEFAULT_DATASET, runs: argv.runs, dMax: argv.dmax, seed: argv.seed };
  let n = 0;
  for (const ex of generateExamples(listGridFiles(argv.data), cfg)) {
    checkExample(ex);
    const stem = path.basename(ex.mapFile, '.grid');
    writeGridFile(path.join(argv.out, `${stem}__run${ex.run}.grid`), ex.observation);
    n++;
  }
  console.log(`wrote ${n} observation grids to ${argv.out}`);
}

main().catch((e) => {
  console.error(e);
  process.exit(1);
});
