/** The explorer's view-state controller: DOM-free and fully testable.
 *
 * Colors and matrices always mirror the last server response; the client
 * performs no mutation math. At most one request per session is in flight;
 * further clicks are rejected until the current one settles.
 */

import { ApiClient, ServiceError, colorKey, sameVertex } from "./api.js";
import type { SessionSpec, SessionState, VariablePayload, Vertex } from "./api.js";
import { formatElement, formatSpecialized } from "./format.js";

export interface LogEntry {
  vertex: Vertex;
  fingerprint: string;
}

export interface Toast {
  kind: "info" | "warning" | "error";
  message: string;
}

export type PresetName = "kedem" | "mu";

/** Kedem slot schedule: X_{k,m} sits in slot (k, m mod 2), so round j hits
 * column j mod 2; pure scheduling, no algebra. */
export function kedemSlotSequence(n: number): [number, number][] {
  const out: [number, number][] = [];
  for (let j = 0; j < n; j++) {
    for (let k = 1; k < n; k++) out.push([k, j % 2]);
  }
  return out;
}

export function muSlotSequence(n: number): [number, number][] {
  const out: [number, number][] = [];
  for (let step = 1; step < n; step++) {
    for (let k = 1; k <= n - step; k++) out.push([k, (step - 1) % 2]);
  }
  return out;
}

export class ExplorerController {
  state: SessionState | null = null;
  initialFingerprint: string | null = null;
  log: LogEntry[] = [];
  selected: Vertex | null = null;
  inspector: { element: string; specialized: string; terms: number } | null = null;
  busy = false;
  greenMode = false;
  private listeners: (() => void)[] = [];
  private toastListeners: ((t: Toast) => void)[] = [];

  constructor(readonly api: ApiClient) {}

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  onToast(fn: (t: Toast) => void): void {
    this.toastListeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  private toast(kind: Toast["kind"], message: string): void {
    for (const fn of this.toastListeners) fn({ kind, message });
  }

  async createSession(spec: SessionSpec): Promise<void> {
    this.state = await this.api.createSession({ ...spec, green_mode: this.greenMode });
    this.initialFingerprint = this.state.fingerprint;
    this.log = [];
    this.selected = null;
    this.inspector = null;
    this.emit();
  }

  isFrozen(vertex: Vertex): boolean {
    return !!this.state && this.state.frozen.some((f) => sameVertex(f, vertex));
  }

  colorOf(vertex: Vertex): string {
    if (!this.state) return "unknown";
    if (this.isFrozen(vertex)) return "frozen";
    return this.state.green[colorKey(vertex)] ?? "unknown";
  }

  /** Click-to-mutate. 409s (frozen, or red in green mode) surface as
   * non-fatal warnings; other failures as errors. */
  async mutateAt(vertex: Vertex): Promise<boolean> {
    if (!this.state || this.busy) return false;
    if (this.isFrozen(vertex)) {
      this.toast("warning", `${colorKey(vertex)} is frozen`);
      return false;
    }
    this.busy = true;
    try {
      this.state = await this.api.mutate(this.state.id, vertex);
      this.log.push({ vertex, fingerprint: this.state.fingerprint });
      if (this.selected !== null) await this.refreshInspector();
      this.emit();
      return true;
    } catch (err) {
      if (err instanceof ServiceError && err.status === 409) {
        this.toast("warning", `mutation rejected: ${JSON.stringify(err.payload)}`);
        return false;
      }
      this.toast("error", String(err));
      return false;
    } finally {
      this.busy = false;
    }
  }

  async undo(): Promise<void> {
    if (!this.state || this.busy || this.log.length === 0) return;
    this.busy = true;
    try {
      this.state = await this.api.undo(this.state.id);
      this.log.pop();
      if (this.selected !== null) await this.refreshInspector();
      this.emit();
    } finally {
      this.busy = false;
    }
  }

  async select(vertex: Vertex): Promise<void> {
    this.selected = vertex;
    await this.refreshInspector();
    this.emit();
  }

  private async refreshInspector(): Promise<void> {
    if (!this.state || this.selected === null) return;
    const payload: VariablePayload = await this.api.variable(this.state.id, this.selected);
    this.inspector = {
      element: formatElement(payload),
      specialized: formatSpecialized(payload),
      terms: payload.terms,
    };
  }

  /** Replay a preset step by step; yields the color map after each step so
   * callers (and tests) can watch green flip to red. */
  async runPreset(name: PresetName): Promise<Record<string, string>[]> {
    if (!this.state) return [];
    const n = Number(this.state.spec["n"]);
    if (!Number.isFinite(n)) {
      this.toast("error", "presets need a gln session");
      return [];
    }
    const seq = name === "kedem" ? kedemSlotSequence(n) : muSlotSequence(n);
    const snapshots: Record<string, string>[] = [];
    for (const vertex of seq) {
      const ok = await this.mutateAt(vertex);
      if (!ok) break;
      snapshots.push({ ...this.state!.green });
    }
    return snapshots;
  }

  /** Debug panel: client log replay must match the server's state. */
  replayMatchesServer(): boolean {
    if (!this.state) return true;
    const last = this.log.length ? this.log[this.log.length - 1].fingerprint : this.initialFingerprint;
    return last === this.state.fingerprint;
  }
}
