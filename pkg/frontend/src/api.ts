/** Typed client for the qcluster session service. All algebra lives server-side. */

export type Vertex = [number, number] | number;

export interface SessionSpec {
  type: "gln" | "gls";
  n?: number;
  cartan?: number[][];
  word?: number[];
  green_mode?: boolean;
}

export interface SessionState {
  id: string;
  spec: Record<string, unknown>;
  indices: Vertex[];
  frozen: Vertex[];
  B: number[][];
  L: number[][];
  /** color per unfrozen vertex, keyed by the python tuple repr, e.g. "(1, 1)" */
  green: Record<string, string>;
  history: Vertex[];
  fingerprint: string;
}

export interface VariablePayload {
  vertex: Vertex;
  element: { torus: string; terms: { v: number[]; coeff: [number, string][] }[] };
  terms: number;
  truncated: boolean;
  specialized: { nvars: number; terms: [number[], number][] };
}

export class ServiceError extends Error {
  constructor(readonly status: number, readonly payload: Record<string, unknown>) {
    super(`${status}: ${JSON.stringify(payload)}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const isJson = (response.headers.get("content-type") ?? "").includes("json");
  const body = isJson ? await response.json() : await response.text();
  if (!response.ok) {
    throw new ServiceError(response.status, isJson ? body : { error: body });
  }
  return body as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  createSession(spec: SessionSpec): Promise<SessionState> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(spec),
    });
  }

  getSession(id: string): Promise<SessionState> {
    return request(`${this.baseUrl}/sessions/${id}`);
  }

  mutate(id: string, vertex: Vertex): Promise<SessionState> {
    return request(`${this.baseUrl}/sessions/${id}/mutate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ vertex }),
    });
  }

  undo(id: string): Promise<SessionState> {
    return request(`${this.baseUrl}/sessions/${id}/undo`, { method: "POST" });
  }

  variable(id: string, vertex: Vertex): Promise<VariablePayload> {
    const key = Array.isArray(vertex) ? vertex.join(",") : String(vertex);
    return request(`${this.baseUrl}/sessions/${id}/variable/${key}`);
  }

  exportDot(id: string): Promise<string> {
    return fetch(`${this.baseUrl}/sessions/${id}/export.dot`).then(async (r) => {
      if (!r.ok) throw new ServiceError(r.status, await r.json());
      return r.text();
    });
  }
}

/** The service's key for a vertex in the `green` map: python tuple repr. */
export function colorKey(vertex: Vertex): string {
  return Array.isArray(vertex) ? `(${vertex[0]}, ${vertex[1]})` : String(vertex);
}

export function sameVertex(a: Vertex, b: Vertex): boolean {
  if (Array.isArray(a) && Array.isArray(b)) return a[0] === b[0] && a[1] === b[1];
  return a === b;
}
