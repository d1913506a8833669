/** Raycast range sensor matching the inference engine's visibility rules.
 *
 * Beams follow precomputed integer offset tables sampled at half-cell
 * increments with round-half-to-even; beams outside the first quadrant are
 * exact 90-degree rotations, and a diagonal jump whose two flanking corner
 * cells are both obstacles seals the beam (wall corners stay visible).
 */
import { FREE, Grid, UNKNOWN, at, cloneGrid, newGrid } from './grid.js';
import { Rng, randInt } from './rng.js';

export interface SensorRig {
  beamCount: number;
  angularSpacingDeg: number;
  rangeCells: number;
  firstBeamAzimuthDeg: number;
}

export const DEFAULT_RIG: SensorRig = {
  beamCount: 16,
  angularSpacingDeg: 22.5,
  rangeCells: 20.0,
  firstBeamAzimuthDeg: 0.0,
};

/** numpy-style rint: round half to even. */
export function rintHalfEven(x: number): number {
  const floor = Math.floor(x);
  const frac = x - floor;
  if (frac > 0.5) return floor + 1;
  if (frac < 0.5) return floor;
  return floor % 2 === 0 ? floor : floor + 1;
}

function quadrantOffsets(azimuthDeg: number, rangeCells: number): number[][] {
  const a = (azimuthDeg * Math.PI) / 180;
  const cells: number[][] = [];
  let prev = [0, 0];
  for (let t = 0.5; t <= rangeCells + 1e-9; t += 0.5) {
    const r = rintHalfEven(-t * Math.sin(a));
    const c = rintHalfEven(t * Math.cos(a));
    if ((r !== prev[0] || c !== prev[1]) && Math.hypot(r, c) <= rangeCells + 1e-9) {
      cells.push([r, c]);
      prev = [r, c];
    }
  }
  return cells;
}

function rotateCcw(cells: number[][], quarterTurns: number): number[][] {
  let out = cells.map((rc) => [rc[0], rc[1]]);
  for (let q = 0; q < ((quarterTurns % 4) + 4) % 4; q++) {
    out = out.map(([r, c]) => [-c, r]);
  }
  return out;
}

interface Beam {
  cells: number[][];
  diagonal: boolean[];
  cornerA: number[][];
  cornerB: number[][];
}

const tableCache = new Map<string, Beam[]>();

function rigTable(rig: SensorRig): Beam[] {
  const key = `${rig.beamCount}:${rig.angularSpacingDeg}:${rig.rangeCells}:${rig.firstBeamAzimuthDeg}`;
  const cached = tableCache.get(key);
  if (cached) return cached;
  const beams: Beam[] = [];
  for (let k = 0; k < rig.beamCount; k++) {
    const az = (((rig.firstBeamAzimuthDeg + k * rig.angularSpacingDeg) % 360) + 360) % 360;
    const quarter = Math.floor(az / 90);
    const cells = rotateCcw(quadrantOffsets(az - quarter * 90, rig.rangeCells), quarter);
    const diagonal: boolean[] = [];
    const cornerA: number[][] = [];
    const cornerB: number[][] = [];
    let prev = [0, 0];
    for (const cell of cells) {
      diagonal.push(cell[0] !== prev[0] && cell[1] !== prev[1]);
      cornerA.push([prev[0], cell[1]]);
      cornerB.push([cell[0], prev[1]]);
      prev = cell;
    }
    beams.push({ cells, diagonal, cornerA, cornerB });
  }
  tableCache.set(key, beams);
  return beams;
}

function blocking(g: Grid, r: number, c: number): boolean {
  // out-of-bounds or non-free; used for the corner seal test
  if (r < 0 || r >= g.height || c < 0 || c >= g.width) return true;
  return at(g, r, c) !== FREE;
}

export type Readings = Map<string, number>; // "r,c" -> category

export function cellKey(r: number, c: number): string {
  return `${r},${c}`;
}

export function sense(truth: Grid, pose: [number, number], rig: SensorRig): Readings {
  const [pr, pc] = pose;
  if (pr < 0 || pr >= truth.height || pc < 0 || pc >= truth.width) {
    throw new Error(`pose ${pose} out of bounds`);
  }
  if (at(truth, pr, pc) !== FREE) throw new Error(`pose ${pose} is not on free space`);
  const readings: Readings = new Map([[cellKey(pr, pc), FREE]]);
  for (const beam of rigTable(rig)) {
    for (let i = 0; i < beam.cells.length; i++) {
      const r = pr + beam.cells[i][0];
      const c = pc + beam.cells[i][1];
      if (r < 0 || r >= truth.height || c < 0 || c >= truth.width) break;
      const val = at(truth, r, c);
      const obst = val !== FREE;
      if (beam.diagonal[i] && !obst) {
        const sealed =
          blocking(truth, pr + beam.cornerA[i][0], pc + beam.cornerA[i][1]) &&
          blocking(truth, pr + beam.cornerB[i][0], pc + beam.cornerB[i][1]);
        if (sealed) break;
      }
      readings.set(cellKey(r, c), val);
      if (obst) break;
    }
  }
  return readings;
}

export function accumulate(obs: Grid, readings: Readings): Grid {
  const out = cloneGrid(obs);
  for (const [key, v] of readings) {
    const [r, c] = key.split(',').map(Number);
    const cur = at(out, r, c);
    if (cur !== UNKNOWN && cur !== v) {
      throw new Error(`cell (${r},${c}) observed as ${cur} now read as ${v}`);
    }
    out.cells[r * out.width + c] = v;
  }
  return out;
}

/** Random-tree observation accumulation; one snapshot per pose count 1..count. */
export function treeObservations(
  truth: Grid,
  rig: SensorRig,
  rng: Rng,
  count: number,
): Grid[] {
  const free: [number, number][] = [];
  for (let r = 0; r < truth.height; r++) {
    for (let c = 0; c < truth.width; c++) {
      if (at(truth, r, c) === FREE) free.push([r, c]);
    }
  }
  if (free.length === 0) throw new Error('map has no free cell');
  let pose = free[randInt(rng, free.length)];
  const poses: [number, number][] = [pose];
  const footprints = new Map<string, [number, number][]>();
  let obs = newGrid(truth.height, truth.width);
  const snapshots: Grid[] = [];
  for (let i = 0; i < count; i++) {
    const readings = sense(truth, pose, rig);
    const foot: [number, number][] = [];
    for (const [key, v] of readings) {
      if (v === FREE) {
        const [r, c] = key.split(',').map(Number);
        foot.push([r, c]);
      }
    }
    footprints.set(cellKey(pose[0], pose[1]), foot);
    obs = accumulate(obs, readings);
    snapshots.push(obs);
    const parent = poses[randInt(rng, poses.length)];
    const candidates = footprints.get(cellKey(parent[0], parent[1]))!;
    pose = candidates[randInt(rng, candidates.length)];
    poses.push(pose);
  }
  return snapshots;
}
