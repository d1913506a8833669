/** The 20-layer convolutional map-completion network, defined once by its
 * MPW1 layer table and realized here as tfjs tensors.
 *
 * 0      input embed: 1x1 conv over the 3 one-hot channels, no bias, linear
 * 1..9   encoder: 3x3 convs, 25 channels, ReLU; stride 2 at 3, 6, 9
 * 10..18 decoder: transposed 3x3 stride-2 convs at 10/13/16 with additive
 *        skips from encoder outputs 8/5/2 (added before the ReLU); layer 18
 *        sees the embedded input concatenated as a 26th channel
 * 19     output head: 3x3 conv to one channel; sigmoid applied by predict()
 *
 * Convolutions use SAME padding throughout; on the even sizes produced by a
 * 64x64 (or 16x16) input, tfjs' conv2dTranspose is the exact adjoint the
 * inference engine implements, so weights round-trip across the MPW1
 * boundary bit-for-bit and activations agree to float precision.
 */
import * as tf from '@tensorflow/tfjs';

import {
  KIND_CONV,
  KIND_INPUT_EMBED,
  KIND_OUTPUT_HEAD,
  KIND_TRANSPOSED_CONV,
  Mpw1File,
  Mpw1Layer,
} from './mpw1.js';

export const HIDDEN_CHANNELS = 25;

export interface ModelLayer {
  kind: number;
  inChannels: number;
  outChannels: number;
  stride: number;
  skipSource: number | null;
  stacksInput: boolean;
  hasBias: boolean;
  kernel: [number, number];
  filter: tf.Variable; // conv: [kh,kw,in,out]; tconv: [kh,kw,out,in]
  bias: tf.Variable | null;
}

export interface Model {
  inputHw: [number, number];
  layers: ModelLayer[];
}

interface LayerShape {
  kind: number;
  inChannels: number;
  outChannels: number;
  stride: number;
  skipSource: number | null;
  stacksInput: boolean;
  hasBias: boolean;
  kernel: [number, number];
}

export function layerTable(): LayerShape[] {
  const c = HIDDEN_CHANNELS;
  const layers: LayerShape[] = [
    {
      kind: KIND_INPUT_EMBED, inChannels: 3, outChannels: 1, stride: 1,
      skipSource: null, stacksInput: false, hasBias: false, kernel: [1, 1],
    },
  ];
  for (let i = 1; i <= 9; i++) {
    layers.push({
      kind: KIND_CONV, inChannels: i === 1 ? 1 : c, outChannels: c,
      stride: i % 3 === 0 ? 2 : 1, skipSource: null, stacksInput: false,
      hasBias: true, kernel: [3, 3],
    });
  }
  const skips: Record<number, number> = { 10: 8, 13: 5, 16: 2 };
  for (let i = 10; i <= 18; i++) {
    const transposed = i === 10 || i === 13 || i === 16;
    layers.push({
      kind: transposed ? KIND_TRANSPOSED_CONV : KIND_CONV,
      inChannels: i === 18 ? c + 1 : c, outChannels: c,
      stride: transposed ? 2 : 1, skipSource: skips[i] ?? null,
      stacksInput: i === 18, hasBias: true, kernel: [3, 3],
    });
  }
  layers.push({
    kind: KIND_OUTPUT_HEAD, inChannels: c, outChannels: 1, stride: 1,
    skipSource: null, stacksInput: false, hasBias: true, kernel: [3, 3],
  });
  return layers;
}

function filterShape(l: LayerShape): [number, number, number, number] {
  // tfjs conv2dTranspose filters are [kh, kw, out, in]; plain convs [kh, kw, in, out]
  return l.kind === KIND_TRANSPOSED_CONV
    ? [l.kernel[0], l.kernel[1], l.outChannels, l.inChannels]
    : [l.kernel[0], l.kernel[1], l.inChannels, l.outChannels];
}

export function buildModel(inputHw: [number, number], seed = 0): Model {
  const layers = layerTable().map((l, i) => {
    const fanIn = l.inChannels * l.kernel[0] * l.kernel[1];
    const filter = tf.variable(
      tf.randomNormal(filterShape(l), 0, Math.sqrt(2 / fanIn), 'float32', seed * 100 + i), true);
    const bias = l.hasBias
      ? tf.variable(tf.zeros([l.outChannels]), true)
      : null;
    return { ...l, filter, bias };
  });
  return { inputHw, layers };
}

export function trainableVariables(model: Model): tf.Variable[] {
  const vars: tf.Variable[] = [];
  for (const l of model.layers) {
    vars.push(l.filter);
    if (l.bias) vars.push(l.bias);
  }
  return vars;
}

/** Forward pass to pre-sigmoid logits; x is [batch, H, W, 3] one-hot. */
export function forwardLogits(model: Model, x: tf.Tensor4D): tf.Tensor4D {
  return tf.tidy(() => {
    const outputs: tf.Tensor4D[] = [];
    const sizeStack: [number, number][] = [];
    let cur = x;
    let embedded: tf.Tensor4D | null = null;
    let logits: tf.Tensor4D | null = null;
    model.layers.forEach((l, i) => {
      if (l.stacksInput) cur = tf.concat([cur, embedded!], 3);
      let z: tf.Tensor4D;
      if (l.kind === KIND_TRANSPOSED_CONV) {
        const [oh, ow] = sizeStack.pop()!;
        z = tf.conv2dTranspose(
          cur,
          l.filter as unknown as tf.Tensor4D,
          [cur.shape[0], oh, ow, l.outChannels],
          l.stride,
          'same',
        );
      } else {
        if (l.stride === 2) sizeStack.push([cur.shape[1], cur.shape[2]]);
        z = tf.conv2d(cur, l.filter as unknown as tf.Tensor4D, l.stride, 'same');
      }
      if (l.bias) z = tf.add(z, l.bias);
      if (l.skipSource !== null) z = tf.add(z, outputs[l.skipSource]);
      if (l.kind === KIND_INPUT_EMBED) {
        cur = z; // linear
        embedded = z;
      } else if (l.kind === KIND_OUTPUT_HEAD) {
        logits = z;
        cur = z;
      } else {
        cur = tf.relu(z);
      }
      outputs.push(cur);
    });
    return logits!;
  });
}

/** Obstacle probabilities [batch, H, W, 1]. */
export function predict(model: Model, x: tf.Tensor4D): tf.Tensor4D {
  return tf.tidy(() => tf.sigmoid(forwardLogits(model, x)));
}

// --- MPW1 conversion -------------------------------------------------------

function toMpw1Order(l: ModelLayer, data: Float32Array): Float32Array {
  const [kh, kw] = l.kernel;
  const ci = l.inChannels;
  const co = l.outChannels;
  const out = new Float32Array(data.length);
  // source index: conv [a][b][i][o], tconv [a][b][o][i]; target [o][i][a][b]
  for (let a = 0; a < kh; a++) {
    for (let b = 0; b < kw; b++) {
      for (let i = 0; i < ci; i++) {
        for (let o = 0; o < co; o++) {
          const src =
            l.kind === KIND_TRANSPOSED_CONV
              ? ((a * kw + b) * co + o) * ci + i
              : ((a * kw + b) * ci + i) * co + o;
          out[((o * ci + i) * kh + a) * kw + b] = data[src];
        }
      }
    }
  }
  return out;
}

function fromMpw1Order(l: Mpw1Layer): Float32Array {
  const [kh, kw] = l.kernel;
  const ci = l.inChannels;
  const co = l.outChannels;
  const out = new Float32Array(l.weights.length);
  for (let a = 0; a < kh; a++) {
    for (let b = 0; b < kw; b++) {
      for (let i = 0; i < ci; i++) {
        for (let o = 0; o < co; o++) {
          const dst =
            l.kind === KIND_TRANSPOSED_CONV
              ? ((a * kw + b) * co + o) * ci + i
              : ((a * kw + b) * ci + i) * co + o;
          out[dst] = l.weights[((o * ci + i) * kh + a) * kw + b];
        }
      }
    }
  }
  return out;
}

export function exportModel(model: Model): Mpw1File {
  const layers: Mpw1Layer[] = model.layers.map((l) => ({
    kind: l.kind,
    inChannels: l.inChannels,
    outChannels: l.outChannels,
    kernel: l.kernel,
    stride: l.stride,
    hasBias: l.hasBias,
    stacksInput: l.stacksInput,
    skipSource: l.skipSource,
    weights: toMpw1Order(l, l.filter.dataSync() as Float32Array),
    bias: l.bias ? (l.bias.dataSync() as Float32Array) : null,
  }));
  return { inputHw: model.inputHw, layers };
}

export function importModel(file: Mpw1File): Model {
  const table = layerTable();
  if (file.layers.length !== table.length) {
    throw new Error(`expected ${table.length} layers, file has ${file.layers.length}`);
  }
  const layers = file.layers.map((fl, i) => {
    const shape = table[i];
    if (fl.kind !== shape.kind || fl.inChannels !== shape.inChannels ||
        fl.outChannels !== shape.outChannels || fl.stride !== shape.stride) {
      throw new Error(`layer ${i} does not match the canonical architecture`);
    }
    const filter = tf.variable(
      tf.tensor4d(fromMpw1Order(fl), filterShape(shape)), true);
    const bias = fl.hasBias
      ? tf.variable(tf.tensor1d(fl.bias!), true)
      : null;
    return { ...shape, filter, bias };
  });
  return { inputHw: file.inputHw, layers };
}
