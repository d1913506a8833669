import { describe, expect, it } from 'vitest';

import { buildModel, exportModel, importModel } from '../src/model.js';
import { decodeMpw1, encodeMpw1 } from '../src/mpw1.js';

describe('mpw1 codec', () => {
  it('round-trips an exported model byte-for-byte', () => {
    const file = exportModel(buildModel([16, 16], 3));
    const blob = encodeMpw1(file);
    const again = decodeMpw1(blob);
    expect(again.inputHw).toEqual(file.inputHw);
    expect(again.layers.length).toBe(file.layers.length);
    again.layers.forEach((l, i) => {
      const orig = file.layers[i];
      expect(l.kind).toBe(orig.kind);
      expect(l.stride).toBe(orig.stride);
      expect(l.skipSource).toBe(orig.skipSource);
      expect(Array.from(l.weights)).toEqual(Array.from(orig.weights));
    });
    expect(encodeMpw1(again).equals(blob)).toBe(true);
  });

  it('rejects a bad magic', () => {
    expect(() => decodeMpw1(Buffer.from('NOPE....................'))).toThrow(/magic/);
  });

  it('detects corruption via the checksum', () => {
    const blob = encodeMpw1(exportModel(buildModel([16, 16], 3)));
    blob[200] ^= 0xff;
    expect(() => decodeMpw1(blob)).toThrow(/checksum/);
  });
});
