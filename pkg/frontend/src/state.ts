// UI state is a pure fold over server messages: nothing here computes
// probabilities or entropy, it only records what the engine said.

import { messageKind, OutMsg } from "./protocol.js";

export type SessionPhase = "idle" | "running" | "decided";

export interface UiState {
  phase: SessionPhase;
  targets: { x: number; y: number }[];
  layoutT: number;
  /** Last belief vector [none, target 1..N]; empty before the first belief. */
  probs: number[];
  entropyBits: number;
  selected: number | null;
  lastError: { code: string; message: string } | null;
  messagesSeen: number;
}

export function initialState(): UiState {
  return {
    phase: "idle",
    targets: [],
    layoutT: 0,
    probs: [],
    entropyBits: 0,
    selected: null,
    lastError: null,
    messagesSeen: 0,
  };
}

export function applyMessage(state: UiState, msg: OutMsg): UiState {
  const next: UiState = { ...state, messagesSeen: state.messagesSeen + 1 };
  switch (messageKind(msg)) {
    case "layout": {
      const { layout } = msg as Extract<OutMsg, { layout: unknown }>;
      next.targets = layout.targets;
      next.layoutT = layout.t;
      if (next.phase === "idle") next.phase = "running";
      return next;
    }
    case "belief": {
      const { belief } = msg as Extract<OutMsg, { belief: unknown }>;
      next.probs = belief.probs;
      next.entropyBits = belief.entropy_bits;
      // fresh evidence after a decision puts the session back in play
      if (next.phase === "decided") {
        next.phase = "running";
        next.selected = null;
      }
      return next;
    }
    case "decision": {
      const { decision } = msg as Extract<OutMsg, { decision: unknown }>;
      next.phase = "decided";
      next.selected = decision.target;
      return next;
    }
    case "error": {
      const { error } = msg as Extract<OutMsg, { error: unknown }>;
      next.lastError = error;
      return next;
    }
  }
}

/** Ring radius around target i (1-based), monotone in its probability. */
export function ringRadius(state: UiState, target: number, base = 14, gain = 46): number {
  const p = state.probs.length > target ? state.probs[target] : 0;
  return base + gain * p;
}

/** Entropy gauge fill in [0, 1]; full when maximally uncertain. */
export function entropyGaugeFraction(state: UiState): number {
  const states = state.probs.length;
  if (states < 2) return 0;
  const maxBits = Math.log2(states);
  return Math.min(1, Math.max(0, state.entropyBits / maxBits));
}
