/** Bootstrap: wires the controller to the page. */

import { ApiClient } from "./api.js";
import { ExplorerController } from "./model.js";
import { renderQuiver } from "./render.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "http://127.0.0.1:8764";
const api = new ApiClient(base);
const controller = new ExplorerController(api);

const svgRoot = el<HTMLElement>("quiver") as unknown as SVGSVGElement;
const logList = el<HTMLUListElement>("log");
const inspector = el<HTMLPreElement>("inspector");
const toastBox = el<HTMLDivElement>("toasts");
const debugBox = el<HTMLSpanElement>("debug");

controller.onToast((toast) => {
  const div = document.createElement("div");
  div.className = `toast ${toast.kind}`;
  div.textContent = toast.message;
  toastBox.appendChild(div);
  setTimeout(() => div.remove(), 4500);
});

controller.onChange(() => {
  const state = controller.state;
  if (!state) return;
  renderQuiver(svgRoot, state, {
    onVertexClick: (v) => void controller.mutateAt(v),
    onVertexSelect: (v) => void controller.select(v),
    colorOf: (v) => controller.colorOf(v),
  });
  logList.innerHTML = "";
  controller.log.forEach((entry, i) => {
    const item = document.createElement("li");
    item.textContent = `${i + 1}. mutate ${JSON.stringify(entry.vertex)} [${entry.fingerprint.slice(0, 8)}]`;
    logList.appendChild(item);
  });
  if (controller.inspector) {
    inspector.textContent =
      `X[${JSON.stringify(controller.selected)}] (${controller.inspector.terms} terms)\n` +
      `${controller.inspector.element}\n\nq = 1, frozen = 1:\n${controller.inspector.specialized}`;
  } else {
    inspector.textContent = "right-click a vertex to inspect its variable";
  }
  debugBox.textContent = controller.replayMatchesServer()
    ? `fingerprint ✓ ${state.fingerprint.slice(0, 12)}`
    : "fingerprint MISMATCH";
});

el<HTMLButtonElement>("new-session").addEventListener("click", () => {
  const n = Number(el<HTMLInputElement>("rank").value);
  controller.greenMode = el<HTMLInputElement>("green-mode").checked;
  void controller.createSession({ type: "gln", n });
});

el<HTMLButtonElement>("undo").addEventListener("click", () => void controller.undo());
el<HTMLButtonElement>("preset-kedem").addEventListener("click", () => void controller.runPreset("kedem"));
el<HTMLButtonElement>("preset-mu").addEventListener("click", () => void controller.runPreset("mu"));

void controller.createSession({ type: "gln", n: 3 });
