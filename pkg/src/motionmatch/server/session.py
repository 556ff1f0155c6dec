"""Transport-independent engine for one live selection session.

The engine consumes protocol-v1 messages (dicts) and returns the
messages to send back; a transport layer (the WebSocket route, a test)
owns the clock and the byte stream. Targets move on the configured
shape; input samples are matched to target positions by timestamp with
nearest-sample indexing, and every half window the inference pipeline
runs over the newest window of input.
"""

from __future__ import annotations

import numpy as np

from ..inference import BeliefState, LikelihoodModel, bayes_update, decide, fit_kde, uniform_belief
from ..similarity import Measure, score as measure_score
from ..trajectory import Trajectory, Window, gen_circle, gen_polygon
from .schemas import PROTOCOL_VERSION, ModelSpec, SessionConfig

__all__ = ["SessionEngine", "build_targets", "build_model"]


def _error(code: str, message: str) -> dict:
    return {"v": PROTOCOL_VERSION, "error": {"code": code, "message": message}}


def build_targets(cfg: SessionConfig) -> list[Trajectory]:
    """One revolution per target, phase-offset uniformly, per-target direction."""
    n = int(round(cfg.sample_rate_hz * 360.0 / cfg.speed_deg_s))
    n = max(n, 4)
    directions = cfg.directions or ["ccw"] * cfg.n_targets
    if len(directions) != cfg.n_targets:
        raise ValueError("directions must list one entry per target")
    targets = []
    for i in range(cfg.n_targets):
        phase = 360.0 * i / cfg.n_targets
        if cfg.shape.kind == "circle":
            targets.append(
                gen_circle(cfg.shape.radius, n, phase, directions[i], (0.0, 0.0), cfg.sample_rate_hz)
            )
        else:
            base = gen_polygon(cfg.shape.vertices, n, cfg.sample_rate_hz)
            pts = base.samples
            if directions[i] == "cw":
                pts = np.roll(pts[::-1], 1, axis=0)
            shift = int(round(i * n / cfg.n_targets))
            targets.append(Trajectory(np.roll(pts, -shift, axis=0), cfg.sample_rate_hz, closed=True))
    return targets


def build_model(spec: ModelSpec) -> LikelihoodModel:
    pdfs = {}
    for role in ("follow", "null", "other"):
        ps = getattr(spec, f"pdf_{role}")
        if ps is not None:
            pdfs[f"pdf_{role}"] = fit_kde(ps.samples, ps.bandwidth, label=role)
    return LikelihoodModel(kind=spec.kind, lam=spec.lam, steepness=spec.steepness, **pdfs)


class SessionEngine:
    """State machine for one session; handle() maps InMsg -> [OutMsg]."""

    def __init__(self):
        self.config: SessionConfig | None = None
        self.targets: list[Trajectory] = []
        self.model: LikelihoodModel | None = None
        self.measure: Measure | None = None
        self.prior: BeliefState | None = None
        self._buffer: list[tuple[float, float, float]] = []
        self._count = 0
        self._last_t: float | None = None

    # -- protocol ----------------------------------------------------------

    def handle(self, msg) -> list[dict]:
        if not isinstance(msg, dict):
            return [_error("bad-message", "message must be a JSON object")]
        if msg.get("v") != PROTOCOL_VERSION:
            return [_error("bad-version", f"expected v={PROTOCOL_VERSION}")]
        kinds = [k for k in ("config", "input", "reset") if k in msg]
        if len(kinds) != 1:
            return [_error("bad-message", "expected exactly one of config/input/reset")]
        kind = kinds[0]
        if kind == "config":
            return self._handle_config(msg["config"])
        if kind == "reset":
            return self._handle_reset()
        return self._handle_input(msg["input"])

    def _handle_config(self, raw) -> list[dict]:
        try:
            cfg = SessionConfig.model_validate(raw)
            targets = build_targets(cfg)
            model = build_model(cfg.model)
            if cfg.window > len(targets[0]):
                raise ValueError("window longer than one revolution of the targets")
        except Exception as exc:
            return [_error("bad-config", str(exc))]
        self.config = cfg
        self.targets = targets
        self.model = model
        self.measure = Measure(cfg.measure, sample_rate_hz=cfg.sample_rate_hz)
        self.prior = uniform_belief(cfg.n_targets)
        self._buffer = []
        self._count = 0
        self._last_t = None
        return [self.layout_msg(0.0)]

    def _handle_reset(self) -> list[dict]:
        if self.config is None:
            return [_error("no-session", "configure the session first")]
        self._buffer = []
        self._count = 0
        return []

    def _handle_input(self, raw) -> list[dict]:
        if self.config is None:
            return [_error("no-session", "configure the session first")]
        try:
            t, x, y = float(raw["t"]), float(raw["x"]), float(raw["y"])
        except (TypeError, KeyError, ValueError):
            return [_error("bad-input", "input needs numeric t, x, y")]
        if self._last_t is not None and t <= self._last_t:
            return [_error("out-of-order", f"t={t} is not after t={self._last_t}; sample dropped")]
        self._last_t = t
        self._buffer.append((t, x, y))
        self._count += 1
        w = self.config.window
        if len(self._buffer) > w:
            self._buffer = self._buffer[-w:]
        hop = max(1, w // 2)
        if self._count >= w and (self._count - w) % hop == 0:
            return self._step()
        return []

    # -- inference ---------------------------------------------------------

    def _step(self) -> list[dict]:
        cfg = self.config
        rate = cfg.sample_rate_hz
        n = len(self.targets[0])
        ts = np.array([s[0] for s in self._buffer])
        pts = np.array([(s[1], s[2]) for s in self._buffer])
        uw = Window(pts)
        # nearest-sample alignment of input timestamps onto target phase
        idx = np.round(ts * rate).astype(int) % n
        scores = [measure_score(self.measure, uw, Window(t.samples[idx])) for t in self.targets]
        belief = bayes_update(self.prior, scores, self.model)
        out = [
            {
                "v": PROTOCOL_VERSION,
                "belief": {
                    "probs": [float(p) for p in belief.probs],
                    "entropy_bits": belief.entropy_bits,
                },
            }
        ]
        decision = decide(belief, cfg.h_threshold)
        if not decision.undecided:
            out.append({"v": PROTOCOL_VERSION, "decision": {"target": decision.selected}})
            # deciding phase ends: fresh evidence is required for the next one
            self._buffer = []
            self._count = 0
        return out

    # -- layout ------------------------------------------------------------

    def target_positions(self, t: float) -> list[tuple[float, float]]:
        n = len(self.targets[0])
        k = int(round(t * self.config.sample_rate_hz)) % n
        return [(float(tr.samples[k, 0]), float(tr.samples[k, 1])) for tr in self.targets]

    def layout_msg(self, t: float) -> dict:
        pos = self.target_positions(t)
        return {
            "v": PROTOCOL_VERSION,
            "layout": {"t": t, "targets": [{"x": x, "y": y} for x, y in pos]},
        }

    @property
    def configured(self) -> bool:
        return self.config is not None
