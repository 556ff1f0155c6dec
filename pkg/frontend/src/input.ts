// Pointer capture: raw move events are decimated to the session sample
// rate on a fixed clock, so a stationary pointer still produces a steady
// stream of constant samples. Timestamps are monotone by construction.
// A scripted playback mode pushes a recorded t,x,y CSV through the exact
// same emit path, so tests and demos need no human.

import { InMsg, inputMsg } from "./protocol.js";

export type SendFn = (msg: InMsg) => boolean; // false = transport down

export interface SamplerOptions {
  rateHz: number;
  send: SendFn;
  /** Clock in seconds; defaults to performance.now()/1000. */
  now?: () => number;
  /** How much to buffer while disconnected before dropping (seconds). */
  bufferSeconds?: number;
  onDrop?: (dropped: number) => void;
}

export class PointerSampler {
  private readonly rateHz: number;
  private readonly send: SendFn;
  private readonly now: () => number;
  private readonly maxBuffered: number;
  private readonly onDrop?: (dropped: number) => void;

  private position: { x: number; y: number } | null = null;
  private t0: number | null = null;
  private lastT = -Infinity;
  private pending: InMsg[] = [];
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(opts: SamplerOptions) {
    this.rateHz = opts.rateHz;
    this.send = opts.send;
    this.now = opts.now ?? (() => performance.now() / 1000);
    this.maxBuffered = Math.ceil((opts.bufferSeconds ?? 2) * opts.rateHz);
    this.onDrop = opts.onDrop;
  }

  /** Record the latest raw pointer position (any event rate). */
  update(x: number, y: number): void {
    this.position = { x, y };
  }

  start(): void {
    if (this.timer !== null) return;
    this.t0 = null;
    this.lastT = -Infinity;
    this.timer = setInterval(() => this.sampleNow(), 1000 / this.rateHz);
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
    this.position = null;
    this.pending = [];
  }

  /** Emit one sample at the current clock; exposed for deterministic tests. */
  sampleNow(): void {
    if (this.position === null) return;
    const wall = this.now();
    if (this.t0 === null) this.t0 = wall;
    let t = wall - this.t0;
    if (t <= this.lastT) t = this.lastT + 0.5 / this.rateHz; // clock stalls stay monotone
    this.lastT = t;
    this.emit(inputMsg(t, this.position.x, this.position.y));
  }

  private emit(msg: InMsg): void {
    if (this.pending.length > 0) {
      // try to flush the backlog first so ordering is preserved
      while (this.pending.length > 0 && this.send(this.pending[0])) {
        this.pending.shift();
      }
    }
    if (this.pending.length === 0 && this.send(msg)) return;
    this.pending.push(msg);
    if (this.pending.length > this.maxBuffered) {
      const dropped = this.pending.length - this.maxBuffered;
      this.pending.splice(0, dropped);
      this.onDrop?.(dropped);
    }
  }

  get bufferedCount(): number {
    return this.pending.length;
  }
}

export interface TrajectoryRecord {
  t: number;
  x: number;
  y: number;
}

/** Parse a trajectory CSV: optional # metadata lines, then t,x,y rows. */
export function parseTrajectoryCsv(text: string): TrajectoryRecord[] {
  const lines = text.split(/\r\n|\r|\n/);
  let i = 0;
  while (i < lines.length && lines[i].startsWith("#")) i++;
  if (i >= lines.length || lines[i].trim() !== "t,x,y") {
    throw new Error(`line ${i + 1}: expected header 't,x,y'`);
  }
  const records: TrajectoryRecord[] = [];
  for (let k = i + 1; k < lines.length; k++) {
    const line = lines[k].trim();
    if (line === "") continue;
    const parts = line.split(",");
    if (parts.length !== 3) throw new Error(`line ${k + 1}: expected 3 values`);
    const [t, x, y] = parts.map(Number);
    if (![t, x, y].every(Number.isFinite)) throw new Error(`line ${k + 1}: non-numeric value`);
    if (records.length > 0 && t <= records[records.length - 1].t) {
      throw new Error(`line ${k + 1}: timestamps must be strictly increasing`);
    }
    records.push({ t, x, y });
  }
  return records;
}

/**
 * Replay a recorded trajectory through the same send path as live input.
 * Returns the number of samples delivered.
 */
export function playback(records: TrajectoryRecord[], send: SendFn): number {
  let sent = 0;
  for (const rec of records) {
    if (send(inputMsg(rec.t, rec.x, rec.y))) sent++;
  }
  return sent;
}

/** Serialize captured samples back to the trajectory CSV format. */
export function toTrajectoryCsv(records: TrajectoryRecord[], rateHz: number): string {
  const lines = [`# rate=${rateHz} closed=0`, "t,x,y"];
  for (const rec of records) lines.push(`${rec.t},${rec.x},${rec.y}`);
  return lines.join("\n") + "\n";
}
