// Canvas drawing. Target positions arrive in session coordinates
// (circle of the configured radius around the origin); a fixed viewport
// transform maps them onto the canvas. Pointer input is sent back in the
// same canvas coordinates, uncalibrated: the engine's measures are chosen
// to tolerate the offset and scaling that introduces.

import { ringRadius, entropyGaugeFraction, UiState } from "./state.js";

export interface Viewport {
  width: number;
  height: number;
  /** Canvas pixels per session unit. */
  scale: number;
}

export function sessionToCanvas(v: Viewport, x: number, y: number): [number, number] {
  // session y points up, canvas y points down
  return [v.width / 2 + x * v.scale, v.height / 2 - y * v.scale];
}

const TARGET_COLORS = [
  "#e4572e", "#2e86ab", "#58a55c", "#a05195", "#e6b33c",
  "#46b5a6", "#c4554d", "#6b6ecf", "#8ca252", "#bd9e39",
];

export function targetColor(i: number): string {
  return TARGET_COLORS[i % TARGET_COLORS.length];
}

export function drawFrame(ctx: CanvasRenderingContext2D, state: UiState, v: Viewport, stale: boolean): void {
  ctx.clearRect(0, 0, v.width, v.height);
  ctx.fillStyle = "#101418";
  ctx.fillRect(0, 0, v.width, v.height);

  state.targets.forEach((p, i) => {
    const [cx, cy] = sessionToCanvas(v, p.x, p.y);
    const targetId = i + 1;
    // growing ring: radius follows the target's probability
    ctx.beginPath();
    ctx.arc(cx, cy, ringRadius(state, targetId), 0, 2 * Math.PI);
    ctx.strokeStyle = targetColor(i);
    ctx.lineWidth = state.phase === "decided" && state.selected === targetId ? 5 : 1.5;
    ctx.stroke();

    ctx.beginPath();
    ctx.arc(cx, cy, 9, 0, 2 * Math.PI);
    ctx.fillStyle = targetColor(i);
    ctx.fill();
    if (state.phase === "decided" && state.selected === targetId) {
      ctx.beginPath();
      ctx.arc(cx, cy, 12, 0, 2 * Math.PI);
      ctx.strokeStyle = "#ffffff";
      ctx.lineWidth = 3;
      ctx.stroke();
    }
  });

  drawBeliefBars(ctx, state, v);
  drawEntropyGauge(ctx, state);

  if (stale) {
    ctx.fillStyle = "#f2c14e";
    ctx.font = "14px system-ui, sans-serif";
    ctx.fillText("reconnecting…", 12, 22);
  }
  if (state.lastError) {
    ctx.fillStyle = "#e4572e";
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText(`${state.lastError.code}: ${state.lastError.message}`, 12, v.height - 10);
  }
}

function drawBeliefBars(ctx: CanvasRenderingContext2D, state: UiState, v: Viewport): void {
  const n = state.probs.length;
  if (n === 0) return;
  const barW = 18;
  const maxH = 90;
  const x0 = v.width - n * (barW + 6) - 14;
  const y0 = 16;
  ctx.font = "10px system-ui, sans-serif";
  for (let i = 0; i < n; i++) {
    const h = Math.max(1, state.probs[i] * maxH);
    const x = x0 + i * (barW + 6);
    ctx.fillStyle = i === 0 ? "#7a8289" : targetColor(i - 1);
    ctx.fillRect(x, y0 + maxH - h, barW, h);
    ctx.fillStyle = "#c9d1d9";
    ctx.fillText(i === 0 ? "∅" : String(i), x + 5, y0 + maxH + 12);
  }
}

function drawEntropyGauge(ctx: CanvasRenderingContext2D, state: UiState): void {
  const frac = entropyGaugeFraction(state);
  const w = 160;
  const x0 = 14;
  const y0 = 40;
  ctx.strokeStyle = "#454d54";
  ctx.strokeRect(x0, y0, w, 12);
  ctx.fillStyle = frac < 0.3 ? "#58a55c" : "#e6b33c";
  ctx.fillRect(x0 + 1, y0 + 1, (w - 2) * frac, 10);
  ctx.fillStyle = "#c9d1d9";
  ctx.font = "12px system-ui, sans-serif";
  ctx.fillText(`entropy ${state.entropyBits.toFixed(2)} bits`, x0, y0 - 6);
}
