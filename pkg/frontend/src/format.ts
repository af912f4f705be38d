/** Pretty-printing of serialized torus elements and specializations.
 *
 * q-exponents arrive as integer counts of q^(1/2) units and are displayed
 * as e/2; nothing here does arithmetic beyond formatting.
 */

import type { VariablePayload } from "./api.js";

export function formatQPower(halfUnits: number): string {
  if (halfUnits === 0) return "1";
  if (halfUnits % 2 === 0) {
    const e = halfUnits / 2;
    return e === 1 ? "q" : `q^${e}`;
  }
  return `q^(${halfUnits}/2)`;
}

export function formatCoefficient(coeff: [number, string][]): string {
  const parts = coeff.map(([half, c]) => {
    const qpart = formatQPower(half);
    if (c === "1" && qpart !== "1") return qpart;
    if (c === "-1" && qpart !== "1") return `-${qpart}`;
    return qpart === "1" ? c : `${c}*${qpart}`;
  });
  return parts.length === 1 ? parts[0] : `(${parts.join(" + ")})`;
}

export function formatMonomial(v: number[]): string {
  const bits = v.flatMap((e, i) => (e === 0 ? [] : [e === 1 ? `X${i + 1}` : `X${i + 1}^${e}`]));
  return bits.length ? bits.join("*") : "1";
}

export function formatElement(payload: VariablePayload): string {
  const terms = payload.element.terms.map((t) => {
    const coeff = formatCoefficient(t.coeff);
    const mono = formatMonomial(t.v);
    if (coeff === "1") return mono;
    return mono === "1" ? coeff : `${coeff}*${mono}`;
  });
  const suffix = payload.truncated ? ` + ... (${payload.terms} terms total)` : "";
  return terms.join(" + ") + suffix;
}

export function formatSpecialized(payload: VariablePayload): string {
  const terms = payload.specialized.terms.map(([v, c]) => {
    const mono = formatMonomial(v);
    if (c === 1) return mono;
    return mono === "1" ? String(c) : `${c}*${mono}`;
  });
  return terms.join(" + ") || "0";
}
