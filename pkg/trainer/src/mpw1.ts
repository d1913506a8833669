/** MPW1 binary weight-file codec (little-endian, CRC32-checked).
 *
 * Layout: magic "MPW1" | version u32 | input_h u16 | input_w u16 |
 * layer_count u32 | per-layer 10-byte headers | per-layer f32 kernel blocks
 * in (out, in, kh, kw) order plus optional bias | crc32 u32.
 */
import CRC32 from 'crc-32';

export const KIND_INPUT_EMBED = 0;
export const KIND_CONV = 1;
export const KIND_TRANSPOSED_CONV = 2;
export const KIND_OUTPUT_HEAD = 3;

const MAGIC = 'MPW1';
const FORMAT_VERSION = 1;
const NO_SKIP = 0xff;

export interface Mpw1Layer {
  kind: number;
  inChannels: number;
  outChannels: number;
  kernel: [number, number];
  stride: number;
  hasBias: boolean;
  stacksInput: boolean;
  skipSource: number | null;
  weights: Float32Array; // (out, in, kh, kw) row-major
  bias: Float32Array | null;
}

export interface Mpw1File {
  inputHw: [number, number];
  layers: Mpw1Layer[];
}

export function encodeMpw1(file: Mpw1File): Buffer {
  const headerLen = 4 + 4 + 2 + 2 + 4 + file.layers.length * 10;
  let paramLen = 0;
  for (const l of file.layers) {
    paramLen += 4 * l.weights.length + (l.hasBias ? 4 * l.outChannels : 0);
  }
  const buf = Buffer.alloc(headerLen + paramLen + 4);
  let pos = buf.write(MAGIC, 0, 'ascii');
  pos = buf.writeUInt32LE(FORMAT_VERSION, pos);
  pos = buf.writeUInt16LE(file.inputHw[0], pos);
  pos = buf.writeUInt16LE(file.inputHw[1], pos);
  pos = buf.writeUInt32LE(file.layers.length, pos);
  for (const l of file.layers) {
    pos = buf.writeUInt8(l.kind, pos);
    pos = buf.writeUInt16LE(l.inChannels, pos);
    pos = buf.writeUInt16LE(l.outChannels, pos);
    pos = buf.writeUInt8(l.kernel[0], pos);
    pos = buf.writeUInt8(l.kernel[1], pos);
    pos = buf.writeUInt8(l.stride, pos);
    const flags =
      (l.hasBias ? 1 : 0) | (l.stacksInput ? 2 : 0) | (l.skipSource !== null ? 4 : 0);
    pos = buf.writeUInt8(flags, pos);
    pos = buf.writeUInt8(l.skipSource ?? NO_SKIP, pos);
  }
  for (const l of file.layers) {
    const expected = l.outChannels * l.inChannels * l.kernel[0] * l.kernel[1];
    if (l.weights.length !== expected) {
      throw new Error(`layer kernel block has ${l.weights.length} values, expected ${expected}`);
    }
    for (const v of l.weights) pos = buf.writeFloatLE(v, pos);
    if (l.hasBias) {
      if (!l.bias || l.bias.length !== l.outChannels) throw new Error('bad bias block');
      for (const v of l.bias) pos = buf.writeFloatLE(v, pos);
    }
  }
  buf.writeUInt32LE(CRC32.buf(buf.subarray(0, pos)) >>> 0, pos);
  return buf;
}

export function decodeMpw1(buf: Buffer): Mpw1File {
  if (buf.length < 8 || buf.toString('ascii', 0, 4) !== MAGIC) {
    throw new Error('bad magic: not an MPW1 weight file');
  }
  const crc = buf.readUInt32LE(buf.length - 4);
  if ((CRC32.buf(buf.subarray(0, buf.length - 4)) >>> 0) !== crc) {
    throw new Error('checksum mismatch');
  }
  let pos = 4;
  const version = buf.readUInt32LE(pos);
  pos += 4;
  if (version !== FORMAT_VERSION) throw new Error(`unsupported format version ${version}`);
  const h = buf.readUInt16LE(pos);
  pos += 2;
  const w = buf.readUInt16LE(pos);
  pos += 2;
  const count = buf.readUInt32LE(pos);
  pos += 4;
  const layers: Mpw1Layer[] = [];
  for (let i = 0; i < count; i++) {
    const kind = buf.readUInt8(pos);
    const inChannels = buf.readUInt16LE(pos + 1);
    const outChannels = buf.readUInt16LE(pos + 3);
    const kh = buf.readUInt8(pos + 5);
    const kw = buf.readUInt8(pos + 6);
    const stride = buf.readUInt8(pos + 7);
    const flags = buf.readUInt8(pos + 8);
    const skip = buf.readUInt8(pos + 9);
    pos += 10;
    layers.push({
      kind,
      inChannels,
      outChannels,
      kernel: [kh, kw],
      stride,
      hasBias: (flags & 1) !== 0,
      stacksInput: (flags & 2) !== 0,
      skipSource: (flags & 4) !== 0 ? skip : null,
      weights: new Float32Array(0),
      bias: null,
    });
  }
  for (const l of layers) {
    const n = l.outChannels * l.inChannels * l.kernel[0] * l.kernel[1];
    l.weights = new Float32Array(n);
    for (let i = 0; i < n; i++) {
      l.weights[i] = buf.readFloatLE(pos);
      pos += 4;
    }
    if (l.hasBias) {
      l.bias = new Float32Array(l.outChannels);
      for (let i = 0; i < l.outChannels; i++) {
        l.bias[i] = buf.readFloatLE(pos);
        pos += 4;
      }
    }
  }
  if (pos !== buf.length - 4) throw new Error('trailing bytes after parameter blocks');
  return { inputHw: [h, w], layers };
}
