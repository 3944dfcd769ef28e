/** Seeded deterministic force-directed layout.
 *
 * Fruchterman-Reingold with seeded initial positions, a fixed iteration
 * budget, and linear cooling; every arithmetic step is sequential double
 * math, so a fixed seed reproduces positions exactly.
 */

import type { GraphEdge } from "./graph";

export interface Point {
  x: number;
  y: number;
}

/** splitmix32 PRNG: integer-only state updates, uniform doubles in [0, 1). */
export function splitmix32(seed: number): () => number {
  let s = seed >>> 0;
  return () => {
    s = (s + 0x9e3779b9) >>> 0;
    let z = s;
    z ^= z >>> 16;
    z = Math.imul(z, 0x21f0aaad);
    z ^= z >>> 15;
    z = Math.imul(z, 0x735a2d97);
    z ^= z >>> 15;
    return (z >>> 0) / 4294967296;
  };
}

export const LAYOUT_ITERATIONS = 250;

export function computeLayout(
  n: number,
  edges: GraphEdge[],
  seed: number,
  width = 800,
  height = 600,
  iterations = LAYOUT_ITERATIONS,
): Point[] {
  if (n === 0) {
    return [];
  }
  const rand = splitmix32(seed);
  const x = new Float64Array(n);
  const y = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    x[i] = width * (0.25 + 0.5 * rand());
    y[i] = height * (0.25 + 0.5 * rand());
  }
  if (n === 1) {
    return [{ x: width / 2, y: height / 2 }];
  }

  const area = width * height;
  const k = 0.8 * Math.sqrt(area / n);
  const k2 = k * k;
  const dx = new Float64Array(n);
  const dy = new Float64Array(n);
  const t0 = width / 10;

  for (let iter = 0; iter < iterations; iter++) {
    dx.fill(0);
    dy.fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let ddx = x[i] - x[j];
        let ddy = y[i] - y[j];
        let d2 = ddx * ddx + ddy * ddy;
        if (d2 < 1e-12) {
          // coincident points: deterministic tiny separation by index
          ddx = 1e-6 * (i - j);
          ddy = 1e-6;
          d2 = ddx * ddx + ddy * ddy;
        }
        const rep = k2 / d2;
        dx[i] += ddx * rep;
        dy[i] += ddy * rep;
        dx[j] -= ddx * rep;
        dy[j] -= ddy * rep;
      }
    }
    for (const e of edges) {
      const i = e.source;
      const j = e.target;
      const ddx = x[i] - x[j];
      const ddy = y[i] - y[j];
      const d = Math.sqrt(ddx * ddx + ddy * ddy) || 1e-9;
      const att = d / k;
      dx[i] -= ddx * att;
      dy[i] -= ddy * att;
      dx[j] += ddx * att;
      dy[j] += ddy * att;
    }
    const t = t0 * (1 - iter / iterations) + 0.01;
    for (let i = 0; i < n; i++) {
      const d = Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
      if (d > 0) {
        const cap = Math.min(d, t) / d;
        x[i] += dx[i] * cap;
        y[i] += dy[i] * cap;
      }
      x[i] = Math.min(width - 10, Math.max(10, x[i]));
      y[i] = Math.min(height - 10, Math.max(10, y[i]));
    }
  }

  const out: Point[] = new Array(n);
  for (let i = 0; i < n; i++) {
    out[i] = { x: x[i], y: y[i] };
  }
  return out;
}
