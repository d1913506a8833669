/** Three-category occupancy grids and the `.grid` text format. */
import * as fs from 'node:fs';

export const FREE = 0;
export const OBSTACLE = 1;
export const UNKNOWN = 2;

export interface Grid {
  height: number;
  width: number;
  cells: Uint8Array; // row-major
}

export function newGrid(height: number, width: number, fill = UNKNOWN): Grid {
  return { height, width, cells: new Uint8Array(height * width).fill(fill) };
}

export function cloneGrid(g: Grid): Grid {
  return { height: g.height, width: g.width, cells: g.cells.slice() };
}

export function at(g: Grid, r: number, c: number): number {
  return g.cells[r * g.width + c];
}

export function set(g: Grid, r: number, c: number, v: number): void {
  g.cells[r * g.width + c] = v;
}

const TO_CHAR = ['.', '#', '?'];
const FROM_CHAR: Record<string, number> = { '.': FREE, '#': OBSTACLE, '?': UNKNOWN };

export function loadGrid(text: string): Grid {
  const lines = text.split('\n').filter((l) => l.length > 0);
  if (lines.length === 0) throw new Error('empty grid text');
  const width = lines[0].length;
  const g = newGrid(lines.length, width);
  lines.forEach((line, r) => {
    if (line.length !== width) throw new Error(`ragged row ${r}`);
    for (let c = 0; c < width; c++) {
      const v = FROM_CHAR[line[c]];
      if (v === undefined) throw new Error(`bad character '${line[c]}' at row ${r}`);
      set(g, r, c, v);
    }
  });
  return g;
}

export function saveGrid(g: Grid): string {
  let out = '';
  for (let r = 0; r < g.height; r++) {
    for (let c = 0; c < g.width; c++) out += TO_CHAR[at(g, r, c)];
    out += '\n';
  }
  return out;
}

export function readGridFile(path: string): Grid {
  return loadGrid(fs.readFileSync(path, 'utf8'));
}

export function writeGridFile(path: string, g: Grid): void {
  fs.writeFileSync(path, saveGrid(g));
}

/** One-hot [H, W, 3] encoding (free, obstacle, unknown), flattened row-major. */
export function oneHot(g: Grid): Float32Array {
  const out = new Float32Array(g.height * g.width * 3);
  for (let i = 0; i < g.cells.length; i++) out[i * 3 + g.cells[i]] = 1;
  return out;
}

/** Binary obstacle mask [H, W]. */
export function obstacleMask(g: Grid): Float32Array {
  const out = new Float32Array(g.height * g.width);
  for (let i = 0; i < g.cells.length; i++) out[i] = g.cells[i] === OBSTACLE ? 1 : 0;
  return out;
}
