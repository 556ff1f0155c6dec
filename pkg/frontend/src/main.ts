// App wiring: config form -> WebSocket session -> canvas loop.

import { PointerSampler, parseTrajectoryCsv, playback, toTrajectoryCsv, TrajectoryRecord } from "./input.js";
import { SessionSocket, defaultSessionUrl } from "./net.js";
import { configMsg, messageKind, resetMsg, SessionConfig } from "./protocol.js";
import { applyMessage, initialState, UiState } from "./state.js";
import { drawFrame, Viewport } from "./render.js";

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusEl = document.getElementById("status")!;
const form = document.getElementById("config-form") as HTMLFormElement;
const resetBtn = document.getElementById("reset") as HTMLButtonElement;
const exportBtn = document.getElementById("export") as HTMLButtonElement;
const playbackArea = document.getElementById("playback-csv") as HTMLTextAreaElement;
const playbackBtn = document.getElementById("play") as HTMLButtonElement;

const viewport: Viewport = { width: canvas.width, height: canvas.height, scale: 150 };

let state: UiState = initialState();
let lastLayoutWall = 0;
let sampler: PointerSampler | null = null;
const captured: TrajectoryRecord[] = [];

const socket = new SessionSocket(defaultSessionUrl(), {
  onMessage: (msg) => {
    state = applyMessage(state, msg);
    if (messageKind(msg) === "layout") lastLayoutWall = performance.now();
    if (messageKind(msg) === "decision") {
      statusEl.textContent = `selected target ${state.selected}`;
    }
  },
  onProtocolViolation: (reason) => {
    statusEl.textContent = `protocol violation: ${reason}`;
  },
  onOpen: () => {
    statusEl.textContent = "connected";
  },
  onClose: () => {
    statusEl.textContent = "disconnected";
    sampler?.stop();
  },
});

function readConfig(): SessionConfig {
  const data = new FormData(form);
  const num = (name: string) => Number(data.get(name));
  return {
    n_targets: num("n_targets"),
    shape: { kind: "circle", radius: 1.0 },
    speed_deg_s: num("speed"),
    measure: String(data.get("measure")),
    model: { kind: data.get("model") as "step" | "logistic", lam: num("lam") },
    window: num("window"),
    h_threshold: num("threshold"),
    sample_rate_hz: num("rate"),
  };
}

form.addEventListener("submit", (ev) => {
  ev.preventDefault();
  const cfg = readConfig();
  state = initialState();
  captured.length = 0;
  if (!socket.isOpen) socket.connect();
  const trySend = () => {
    if (!socket.send(configMsg(cfg))) {
      setTimeout(trySend, 100);
      return;
    }
    sampler?.stop();
    sampler = new PointerSampler({
      rateHz: cfg.sample_rate_hz ?? 30,
      send: (msg) => {
        if ("input" in msg) captured.push(msg.input);
        return socket.send(msg);
      },
      onDrop: (n) => (statusEl.textContent = `connection stalled, dropped ${n} samples`),
    });
    sampler.start();
  };
  trySend();
});

resetBtn.addEventListener("click", () => {
  socket.send(resetMsg());
  state = { ...state, phase: "running", selected: null };
});

exportBtn.addEventListener("click", () => {
  const rate = readConfig().sample_rate_hz ?? 30;
  const blob = new Blob([toTrajectoryCsv(captured, rate)], { type: "text/csv" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "session-input.csv";
  a.click();
  URL.revokeObjectURL(a.href);
});

playbackBtn.addEventListener("click", () => {
  try {
    const records = parseTrajectoryCsv(playbackArea.value);
    const sent = playback(records, (msg) => socket.send(msg));
    statusEl.textContent = `replayed ${sent}/${records.length} samples`;
  } catch (err) {
    statusEl.textContent = String(err);
  }
});

canvas.addEventListener("pointermove", (ev) => {
  const rect = canvas.getBoundingClientRect();
  // canvas pixels -> session coordinates (same frame the targets use)
  const x = (ev.clientX - rect.left - viewport.width / 2) / viewport.scale;
  const y = (viewport.height / 2 - (ev.clientY - rect.top)) / viewport.scale;
  sampler?.update(x, y);
});

function frame(): void {
  const stale = state.phase !== "idle" && performance.now() - lastLayoutWall > 1000;
  drawFrame(ctx, state, viewport, stale);
  requestAnimationFrame(frame);
}

requestAnimationFrame(frame);
