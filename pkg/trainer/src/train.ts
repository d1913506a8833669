/** CLI: train the map-completion network and export MPW1 weights.
 *
 *   tsx src/train.ts --data maps/ --out model.mpw1 [--epochs N] [--batch N]
 *        [--lr F] [--runs N] [--dmax N] [--val-frac F] [--seed N] [--steps N]
 *
 * Defaults are deliberately modest (single-core wasm backend): 5 observation
 * runs per floorplan, depth up to 24 poses, Adam at 1e-3.
 */
import * as fs from 'node:fs';

import * as tf from '@tensorflow/tfjs';
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { initBackend } from './backend.js';
import {
  DEFAULT_DATASET,
  TrainingExample,
  checkExample,
  generateExamples,
  listGridFiles,
  toBatch,
} from './dataset.js';
import { readGridFile } from './grid.js';
import { Model, buildModel, exportModel, forwardLogits, trainableVariables } from './model.js';
import { encodeMpw1 } from './mpw1.js';
import { makeRng, randInt } from './rng.js';

export function bceLoss(model: Model, batch: ReturnType<typeof toBatch>, hw: [number, number]) {
  return tf.tidy(() => {
    const x = tf.tensor4d(batch.inputs, [batch.size, hw[0], hw[1], 3]);
    const y = tf.tensor4d(batch.targets, [batch.size, hw[0], hw[1], 1]);
    const logits = forwardLogits(model, x);
    return tf.losses.sigmoidCrossEntropy(y, logits) as tf.Scalar;
  });
}

export interface TrainOptions {
  epochs: number;
  batchSize: number;
  learningRate: number;
  seed: number;
  maxSteps: number | null; // cap for smoke tests
  valFrac: number;
  log: (msg: string) => void;
}

export interface TrainResult {
  model: Model;
  initialValLoss: number;
  finalValLoss: number;
  steps: number;
}

export async function trainModel(
  examples: TrainingExample[],
  opts: TrainOptions,
): Promise<TrainResult> {
  if (examples.length === 0) throw new Error('empty training corpus');
  const hw: [number, number] = [examples[0].observation.height, examples[0].observation.width];
  const rng = makeRng(opts.seed + 77);
  const shuffled = examples.slice();
  for (let i = shuffled.length - 1; i > 0; i--) {
    const j = randInt(rng, i + 1);
    [shuffled[i], shuffled[j]] = [shuffled[j], shuffled[i]];
  }
  const nVal = Math.max(1, Math.floor(shuffled.length * opts.valFrac));
  const val = shuffled.slice(0, nVal);
  const train = shuffled.slice(nVal);

  const model = buildModel(hw, opts.seed);
  const optimizer = tf.train.adam(opts.learningRate);
  const vars = trainableVariables(model);

  const valLoss = () => {
    let total = 0;
    for (let i = 0; i < val.length; i += opts.batchSize) {
      const b = toBatch(val.slice(i, i + opts.batchSize));
      const l = bceLoss(model, b, hw);
      total += l.dataSync()[0] * b.size;
      l.dispose();
    }
    return total / val.length;
  };

  const initialValLoss = valLoss();
  opts.log(`corpus: ${train.length} train / ${val.length} val, initial val BCE ${initialValLoss.toFixed(4)}`);

  let steps = 0;
  let stop = false;
  for (let epoch = 0; epoch < opts.epochs && !stop; epoch++) {
    for (let i = 0; i < train.length - (train.length % opts.batchSize); i += opts.batchSize) {
      const b = toBatch(train.slice(i, i + opts.batchSize));
      const loss = optimizer.minimize(() => bceLoss(model, b, hw), true, vars)!;
      const value = loss.dataSync()[0];
      loss.dispose();
      if (!Number.isFinite(value)) throw new Error(`training diverged at step ${steps} (loss ${value})`);
      steps++;
      if (steps % 25 === 0) opts.log(`epoch ${epoch} step ${steps}: train BCE ${value.toFixed(4)}`);
      if (opts.maxSteps !== null && steps >= opts.maxSteps) {
        stop = true;
        break;
      }
    }
    opts.log(`epoch ${epoch} done: val BCE ${valLoss().toFixed(4)}`);
  }
  const finalValLoss = valLoss();
  opts.log(`final val BCE ${finalValLoss.toFixed(4)} after ${steps} steps`);
  return { model, initialValLoss, finalValLoss, steps };
}

async function main() {
  const argv = await yargs(hideBin(process.argv))
    .option('data', { type: 'string', demandOption: true, describe: 'directory of .grid maps' })
    .option('out', { type: 'string', demandOption: true, describe: 'MPW1 output path' })
    .option('epochs', { type: 'number', default: 2 })
    .option('batch', { type: 'number', default: 8 })
    .option('lr', { type: 'number', default: 1e-3 })
    .option('runs', { type: 'number', default: 5 })
    .option('dmax', { type: 'number', default: 24 })
    .option('val-frac', { type: 'number', default: 0.05 })
    .option('seed', { type: 'number', default: 0 })
    .option('steps', { type: 'number', describe: 'stop after this many optimizer steps' })
    .strict()
    .parse();

  const backend = await initBackend();
  console.log(`backend: ${backend}`);

  const files = listGridFiles(argv.data);
  console.log(`synthesizing observations for ${files.length} maps x ${argv.runs} runs ...`);
  const examples: TrainingExample[] = [];
  const cfg = { ...DEFAULT_DATASET, runs: argv.runs, dMax: argv.dmax, seed: argv.seed };
  for (const ex of generateExamples(files, cfg)) {
    checkExample(ex);
    examples.push(ex);
    if (examples.length % 250 === 0) console.log(`  ${examples.length} examples`);
  }

  const result = await trainModel(examples, {
    epochs: argv.epochs,
    batchSize: argv.batch,
    learningRate: argv.lr,
    seed: argv.seed,
    maxSteps: argv.steps ?? null,
    valFrac: argv.valFrac,
    log: (m) => console.log(m),
  });
  if (!(result.finalValLoss < result.initialValLoss)) {
    console.warn('warning: validation BCE did not improve over initialization');
  }
  fs.writeFileSync(argv.out, encodeMpw1(exportModel(result.model)));
  console.log(`wrote ${argv.out}`);
}

const entry = process.argv[1] ?? '';
if (entry.endsWith('train.ts') || entry.endsWith('train.js')) {
  main().catch((e) => {
    console.error(e);
    process.exit(1);
  });
}

export { readGridFile };
