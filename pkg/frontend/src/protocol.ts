// Session protocol v1: one JSON object per message, "v": 1 everywhere,
// unknown fields ignored. The client never infers anything itself; every
// number it shows comes from these messages.

export const PROTOCOL_VERSION = 1;

export interface LayoutMsg {
  v: 1;
  layout: { t: number; targets: { x: number; y: number }[] };
}

export interface BeliefMsg {
  v: 1;
  belief: { probs: number[]; entropy_bits: number };
}

export interface DecisionMsg {
  v: 1;
  decision: { target: number };
}

export interface ErrorMsg {
  v: 1;
  error: { code: string; message: string };
}

export type OutMsg = LayoutMsg | BeliefMsg | DecisionMsg | ErrorMsg;

export interface ModelSpec {
  kind: "step" | "logistic" | "empirical";
  lam?: number;
  steepness?: number;
}

export interface SessionConfig {
  n_targets: number;
  shape?: { kind: "circle"; radius: number } | { kind: "polygon"; vertices: [number, number][] };
  speed_deg_s?: number;
  directions?: ("cw" | "ccw")[];
  measure?: string;
  model?: ModelSpec;
  window?: number;
  h_threshold?: number;
  sample_rate_hz?: number;
}

export type InMsg =
  | { v: 1; config: SessionConfig }
  | { v: 1; input: { t: number; x: number; y: number } }
  | { v: 1; reset: Record<string, never> };

const isFiniteNumber = (x: unknown): x is number => typeof x === "number" && Number.isFinite(x);

/** Entropy in bits of a probability vector (0 log 0 = 0). */
export function entropyBits(probs: number[]): number {
  let h = 0;
  for (const p of probs) {
    if (p > 0) h -= p * Math.log2(p);
  }
  return h;
}

export type MsgKind = "layout" | "belief" | "decision" | "error";

export function messageKind(msg: OutMsg): MsgKind {
  if ("layout" in msg) return "layout";
  if ("belief" in msg) return "belief";
  if ("decision" in msg) return "decision";
  return "error";
}

/**
 * Validate one server message against the v1 schema. Returns the typed
 * message, or a string describing the violation.
 */
export function parseOutMsg(raw: unknown): OutMsg | string {
  if (typeof raw !== "object" || raw === null) return "message is not an object";
  const msg = raw as Record<string, unknown>;
  if (msg.v !== PROTOCOL_VERSION) return `expected v=${PROTOCOL_VERSION}`;

  if ("layout" in msg) {
    const body = msg.layout as Record<string, unknown>;
    if (typeof body !== "object" || body === null) return "layout is not an object";
    if (!isFiniteNumber(body.t)) return "layout.t is not a number";
    if (!Array.isArray(body.targets)) return "layout.targets is not an array";
    for (const p of body.targets) {
      if (!isFiniteNumber((p as any).x) || !isFiniteNumber((p as any).y)) {
        return "layout target is not an {x, y} point";
      }
    }
    return msg as unknown as LayoutMsg;
  }

  if ("belief" in msg) {
    const body = msg.belief as Record<string, unknown>;
    if (typeof body !== "object" || body === null) return "belief is not an object";
    const probs = body.probs;
    if (!Array.isArray(probs) || probs.length < 2 || !probs.every(isFiniteNumber)) {
      return "belief.probs is not a numeric vector";
    }
    if (probs.some((p) => p < 0)) return "belief.probs has negative entries";
    const total = probs.reduce((a, b) => a + b, 0);
    if (Math.abs(total - 1) > 1e-6) return "belief.probs does not sum to 1";
    if (!isFiniteNumber(body.entropy_bits)) return "belief.entropy_bits is not a number";
    if (Math.abs(entropyBits(probs) - body.entropy_bits) > 1e-6) {
      return "belief.entropy_bits does not match probs";
    }
    return msg as unknown as BeliefMsg;
  }

  if ("decision" in msg) {
    const body = msg.decision as Record<string, unknown>;
    if (typeof body !== "object" || body === null) return "decision is not an object";
    if (!Number.isInteger(body.target) || (body.target as number) < 1) {
      return "decision.target is not a positive integer";
    }
    return msg as unknown as DecisionMsg;
  }

  if ("error" in msg) {
    const body = msg.error as Record<string, unknown>;
    if (typeof body !== "object" || body === null) return "error is not an object";
    if (typeof body.code !== "string" || typeof body.message !== "string") {
      return "error needs string code and message";
    }
    return msg as unknown as ErrorMsg;
  }

  return "unknown message kind";
}

export function configMsg(config: SessionConfig): InMsg {
  return { v: 1, config };
}

export function inputMsg(t: number, x: number, y: number): InMsg {
  return { v: 1, input: { t, x, y } };
}

export function resetMsg(): InMsg {
  return { v: 1, reset: {} };
}

export function serialize(msg: InMsg): string {
  return JSON.stringify(msg) + "\n";
}
