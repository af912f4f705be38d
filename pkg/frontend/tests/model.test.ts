/** Controller round-trips against the real engine service (spawned here). */

import assert from "node:assert/strict";
import { after, before, test } from "node:test";
import { spawn, type ChildProcess } from "node:child_process";
import { once } from "node:events";

import { ApiClient, colorKey } from "../src/api.js";
import { ExplorerController } from "../src/model.js";
import type { Toast } from "../src/model.js";

let service: ChildProcess;
let base = "";

before(async () => {
  service = spawn("python3", ["-m", "qcluster", "serve", "--port", "0"], {
    stdio: ["ignore", "pipe", "inherit"],
  });
  const [chunk] = (await once(service.stdout!, "data")) as [Buffer];
  const match = /127\.0\.0\.1:(\d+)/.exec(chunk.toString());
  assert.ok(match, `no port line in: ${chunk}`);
  base = `http://127.0.0.1:${match[1]}`;
});

after(() => {
  service.kill();
});

test("A15 round trip: mutate, inspect, undo, kedem replay", async () => {
  const controller = new ExplorerController(new ApiClient(base));
  await controller.createSession({ type: "gln", n: 2 });
  const initial = controller.initialFingerprint;
  assert.ok(initial);

  // click-mutate at (1,1): the inspector must show the engine's two-term x'
  assert.equal(await controller.mutateAt([1, 1]), true);
  await controller.select([1, 1]);
  assert.ok(controller.inspector);
  assert.equal(controller.inspector!.terms, 2);
  assert.equal(controller.inspector!.element, "X2*X3^-1 + X1^2*X3^-1");
  // frozen variables are (2,0) and (2,1); the X3 = x_{(1,1)} factor survives
  assert.equal(controller.inspector!.specialized, "X2^-1 + X1^2*X2^-1");
  assert.equal(controller.colorOf([1, 1]), "red");
  assert.equal(controller.colorOf([1, 0]), "green");
  assert.ok(controller.replayMatchesServer());

  // undo restores the initial fingerprint
  await controller.undo();
  assert.equal(controller.state!.fingerprint, initial);
  assert.equal(controller.log.length, 0);
  assert.equal(controller.colorOf([1, 1]), "green");

  // kedem preset replays step by step with green -> red transitions
  const snapshots = await controller.runPreset("kedem");
  assert.equal(snapshots.length, 2);
  assert.equal(snapshots[0][colorKey([1, 0])], "red");
  assert.equal(snapshots[0][colorKey([1, 1])], "green");
  assert.equal(snapshots[1][colorKey([1, 0])], "red");
  assert.equal(snapshots[1][colorKey([1, 1])], "red");
  assert.ok(controller.replayMatchesServer());
});

test("frozen and red-vertex mutations surface as warnings, not crashes", async () => {
  const controller = new ExplorerController(new ApiClient(base));
  const toasts: Toast[] = [];
  controller.onToast((t) => toasts.push(t));
  controller.greenMode = true;
  await controller.createSession({ type: "gln", n: 2 });

  assert.equal(await controller.mutateAt([2, 0]), false);
  assert.equal(toasts.at(-1)?.kind, "warning");

  assert.equal(await controller.mutateAt([1, 0]), true);
  // (1,0) is now red; in green mode the service answers 409
  assert.equal(await controller.mutateAt([1, 0]), false);
  assert.equal(toasts.at(-1)?.kind, "warning");
  assert.match(toasts.at(-1)!.message, /RedVertexMutation/);
});

test("colors and matrices always mirror the last server response", async () => {
  const controller = new ExplorerController(new ApiClient(base));
  await controller.createSession({ type: "gln", n: 3 });
  const before_ = controller.state!.B.map((row) => [...row]);
  await controller.mutateAt([2, 0]);
  const server = await new ApiClient(base).getSession(controller.state!.id);
  assert.deepEqual(controller.state!.B, server.B);
  assert.notDeepEqual(controller.state!.B, before_);
  assert.deepEqual(controller.state!.green, server.green);
});
