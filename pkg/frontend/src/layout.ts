/** Vertex positions for the quiver view.
 *
 * When vertices carry (k, l) labels the layout is the 2 x n grid of the
 * GL_n pictures (k increasing left to right, the l = 1 row above the l = 0
 * row); anything unlabeled falls back to a circle.
 */

import type { Vertex } from "./api.js";

export interface Point {
  x: number;
  y: number;
}

const CELL = 110;
const MARGIN = 70;

export function layoutPositions(indices: Vertex[]): Map<string, Point> {
  const out = new Map<string, Point>();
  const labeled = indices.every((v) => Array.isArray(v));
  if (labeled) {
    const ks = indices.map((v) => (v as [number, number])[0]);
    const maxK = Math.max(...ks);
    for (const v of indices as [number, number][]) {
      const [k, l] = v;
      out.set(JSON.stringify(v), {
        x: MARGIN + (k - 1) * CELL,
        y: MARGIN + (1 - l) * CELL + (maxK - 1) * 0,
      });
    }
    return out;
  }
  const n = indices.length;
  const radius = Math.max(90, n * 26);
  indices.forEach((v, i) => {
    const angle = (2 * Math.PI * i) / Math.max(1, n) - Math.PI / 2;
    out.set(JSON.stringify(v), {
      x: radius + MARGIN + radius * Math.cos(angle),
      y: radius + MARGIN + radius * Math.sin(angle),
    });
  });
  return out;
}

export interface Arrow {
  from: Vertex;
  to: Vertex;
  multiplicity: number;
}

/** Arrows from the exchange matrix: b_ij = #(j -> i) - #(i -> j). */
export function arrowsFromMatrix(indices: Vertex[], frozen: Vertex[], B: number[][]): Arrow[] {
  const frozenKeys = new Set(frozen.map((v) => JSON.stringify(v)));
  const exchangeable = indices.filter((v) => !frozenKeys.has(JSON.stringify(v)));
  const colOf = new Map(exchangeable.map((v, c) => [JSON.stringify(v), c]));
  const out: Arrow[] = [];
  indices.forEach((rowVertex, i) => {
    const rowKey = JSON.stringify(rowVertex);
    exchangeable.forEach((colVertex) => {
      const colKey = JSON.stringify(colVertex);
      if (rowKey === colKey) return;
      const b = B[i][colOf.get(colKey)!];
      // record each unfrozen pair once; frozen rows only appear as rows
      const rowIsFrozen = frozenKeys.has(rowKey);
      if (!rowIsFrozen && colOf.has(rowKey) && colOf.get(rowKey)! < colOf.get(colKey)!) return;
      if (b > 0) out.push({ from: colVertex, to: rowVertex, multiplicity: b });
      else if (b < 0) out.push({ from: rowVertex, to: colVertex, multiplicity: -b });
    });
  });
  return out;
}
