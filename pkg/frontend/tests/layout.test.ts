import assert from "node:assert/strict";
import { test } from "node:test";

import { arrowsFromMatrix, layoutPositions } from "../src/layout.js";
import { formatCoefficient, formatElement, formatQPower } from "../src/format.js";
import { kedemSlotSequence, muSlotSequence } from "../src/model.js";
import type { VariablePayload, Vertex } from "../src/api.js";

test("grid layout for (k, l) labels", () => {
  const indices: Vertex[] = [[1, 0], [2, 0], [1, 1], [2, 1]];
  const pos = layoutPositions(indices);
  const p10 = pos.get(JSON.stringify([1, 0]))!;
  const p11 = pos.get(JSON.stringify([1, 1]))!;
  const p20 = pos.get(JSON.stringify([2, 0]))!;
  assert.ok(p11.y < p10.y, "l = 1 row sits above l = 0");
  assert.ok(p20.x > p10.x, "k increases to the right");
  assert.equal(p10.x, p11.x);
});

test("circle fallback for unlabeled vertices", () => {
  const pos = layoutPositions([1, 2, 3, 4]);
  assert.equal(pos.size, 4);
});

test("arrows follow b_ij = #(j->i) - #(i->j)", () => {
  // reordered GL_2 example: B = [[0,2],[-2,0],[1,0],[0,-1]]
  const indices: Vertex[] = [[1, 1], [1, 0], [2, 0], [2, 1]];
  const frozen: Vertex[] = [[2, 0], [2, 1]];
  const B = [
    [0, 2],
    [-2, 0],
    [1, 0],
    [0, -1],
  ];
  const arrows = arrowsFromMatrix(indices, frozen, B);
  const find = (from: Vertex, to: Vertex) =>
    arrows.find((a) => JSON.stringify(a.from) === JSON.stringify(from) && JSON.stringify(a.to) === JSON.stringify(to));
  assert.equal(find([1, 0], [1, 1])?.multiplicity, 2);
  assert.equal(find([1, 1], [2, 0])?.multiplicity, 1);
  assert.equal(find([2, 1], [1, 0])?.multiplicity, 1);
  assert.equal(arrows.length, 3);
});

test("q-power and coefficient formatting", () => {
  assert.equal(formatQPower(0), "1");
  assert.equal(formatQPower(2), "q");
  assert.equal(formatQPower(-4), "q^-2");
  assert.equal(formatQPower(3), "q^(3/2)");
  assert.equal(formatCoefficient([[0, "1"]]), "1");
  assert.equal(formatCoefficient([[2, "1"]]), "q");
  assert.equal(formatCoefficient([[-2, "1"], [2, "1"]]), "(q^-1 + q)");
});

test("element formatting", () => {
  const payload: VariablePayload = {
    vertex: [1, 1],
    element: {
      torus: "t",
      terms: [
        { v: [0, 1, -1, 0], coeff: [[0, "1"]] },
        { v: [2, 0, -1, 0], coeff: [[0, "1"]] },
      ],
    },
    terms: 2,
    truncated: false,
    specialized: { nvars: 2, terms: [[[0, 1], 1], [[2, 0], 1]] },
  };
  assert.equal(formatElement(payload), "X2*X3^-1 + X1^2*X3^-1");
});

test("preset slot schedules", () => {
  assert.deepEqual(kedemSlotSequence(2), [[1, 0], [1, 1]]);
  assert.deepEqual(kedemSlotSequence(3), [[1, 0], [2, 0], [1, 1], [2, 1], [1, 0], [2, 0]]);
  assert.equal(kedemSlotSequence(5).length, 20);
  assert.deepEqual(muSlotSequence(3), [[1, 0], [2, 0], [1, 1]]);
});
