/** SVG rendering of the framed quiver state: vertices on the (k, l) grid,
 * frozen vertices boxed, multiplicities drawn as parallel arrows, colors
 * straight from the service. */

import type { SessionState, Vertex } from "./api.js";
import { arrowsFromMatrix, layoutPositions } from "./layout.js";
import type { Point } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const COLORS: Record<string, string> = {
  green: "#7bd88f",
  red: "#f28b82",
  frozen: "#d5d5e0",
  unknown: "#cccccc",
};

export interface RenderCallbacks {
  onVertexClick(vertex: Vertex): void;
  onVertexSelect(vertex: Vertex): void;
  colorOf(vertex: Vertex): string;
}

function svg<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, String(value));
  return el;
}

export function renderQuiver(
  container: SVGSVGElement,
  state: SessionState,
  callbacks: RenderCallbacks,
): void {
  container.innerHTML = "";
  const positions = layoutPositions(state.indices);
  const xs = [...positions.values()].map((p) => p.x);
  const ys = [...positions.values()].map((p) => p.y);
  container.setAttribute("viewBox", `0 0 ${Math.max(...xs) + 80} ${Math.max(...ys) + 80}`);

  const defs = svg("defs", {});
  const marker = svg("marker", {
    id: "arrowhead",
    markerWidth: 9,
    markerHeight: 7,
    refX: 8,
    refY: 3.5,
    orient: "auto",
  });
  marker.appendChild(svg("polygon", { points: "0 0, 9 3.5, 0 7", fill: "#444" }));
  defs.appendChild(marker);
  container.appendChild(defs);

  const pos = (v: Vertex): Point => positions.get(JSON.stringify(v))!;

  for (const arrow of arrowsFromMatrix(state.indices, state.frozen, state.B)) {
    const a = pos(arrow.from);
    const b = pos(arrow.to);
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const len = Math.hypot(dx, dy) || 1;
    const nx = -dy / len;
    const ny = dx / len;
    const shrink = 26 / len;
    for (let m = 0; m < arrow.multiplicity; m++) {
      const offset = (m - (arrow.multiplicity - 1) / 2) * 7;
      const line = svg("line", {
        x1: a.x + dx * shrink + nx * offset,
        y1: a.y + dy * shrink + ny * offset,
        x2: b.x - dx * shrink + nx * offset,
        y2: b.y - dy * shrink + ny * offset,
        stroke: "#444",
        "stroke-width": 1.6,
        "marker-end": "url(#arrowhead)",
      });
      container.appendChild(line);
    }
  }

  for (const vertex of state.indices) {
    const p = pos(vertex);
    const frozen = state.frozen.some((f) => JSON.stringify(f) === JSON.stringify(vertex));
    const color = COLORS[callbacks.colorOf(vertex)] ?? COLORS.unknown;
    const group = svg("g", { cursor: frozen ? "default" : "pointer" });
    const shape = frozen
      ? svg("rect", { x: p.x - 20, y: p.y - 16, width: 40, height: 32, fill: color, stroke: "#333", rx: 3 })
      : svg("circle", { cx: p.x, cy: p.y, r: 19, fill: color, stroke: "#333" });
    group.appendChild(shape);
    const label = svg("text", {
      x: p.x,
      y: p.y + 4,
      "text-anchor": "middle",
      "font-size": 12,
      "font-family": "monospace",
    });
    label.textContent = Array.isArray(vertex) ? `${vertex[0]},${vertex[1]}` : String(vertex);
    group.appendChild(label);
    if (!frozen) {
      group.addEventListener("click", () => callbacks.onVertexClick(vertex));
    }
    group.addEventListener("contextmenu", (event) => {
      event.preventDefault();
      callbacks.onVertexSelect(vertex);
    });
    container.appendChild(group);
  }
}
