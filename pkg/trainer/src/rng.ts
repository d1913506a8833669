/** Small deterministic PRNG (splitmix-seeded mulberry32) for dataset synthesis. */

export type Rng = () => number;

export function makeRng(seed: number): Rng {
  let a = seed >>> 0;
  // scramble once so that nearby seeds diverge immediately
  a = Math.imul(a ^ (a >>> 16), 0x45d9f3b) >>> 0;
  return function () {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randInt(rng: Rng, n: number): number {
  return Math.floor(rng() * n);
}
