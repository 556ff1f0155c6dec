"""FastAPI service: REST endpoints over the core package plus the live
WebSocket session protocol. The web client is served from / when a
frontend build is present."""

from __future__ import annotations

import asyncio
import json
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .. import __version__
from ..analysis import (
    capacity_report,
    entropy_profile,
    mean_entropy_vs_window,
    noise_entropy_sweep,
    pairwise_target_similarity,
    rotation_sensitivity,
)
from ..inference import fit_kde, run_pipeline
from ..similarity import Measure
from ..trajectory import (
    DistortionModel,
    NullBehaviorModel,
    Trajectory,
    distort,
    gen_circle,
    gen_null_behavior,
    gen_polygon,
)
from . import schemas as sc
from .session import SessionEngine, build_model


def _traj_from_payload(p: sc.TrajectoryPayload) -> Trajectory:
    return Trajectory(np.asarray(p.samples, dtype=float), p.sample_rate_hz, p.closed)


def _traj_to_payload(t: Trajectory) -> sc.TrajectoryPayload:
    return sc.TrajectoryPayload(
        samples=[(float(x), float(y)) for x, y in t.samples],
        sample_rate_hz=t.sample_rate_hz,
        closed=t.closed,
    )


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=422, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(title="motionmatch", version=__version__)

    @app.get("/api/health", response_model=sc.HealthResponse)
    def health():
        return sc.HealthResponse(status="ok", version=__version__)

    # -- trajectory generation ---------------------------------------------

    @app.post("/api/trajectory/circle", response_model=sc.TrajectoryPayload)
    def api_circle(req: sc.CircleRequest):
        try:
            return _traj_to_payload(
                gen_circle(req.radius, req.n, req.phase_deg, req.direction, req.center, req.sample_rate_hz)
            )
        except ValueError as exc:
            raise _bad_request(exc)

    @app.post("/api/trajectory/polygon", response_model=sc.TrajectoryPayload)
    def api_polygon(req: sc.PolygonRequest):
        try:
            return _traj_to_payload(gen_polygon(req.vertices, req.n, req.sample_rate_hz))
        except ValueError as exc:
            raise _bad_request(exc)

    @app.post("/api/trajectory/distort", response_model=sc.TrajectoryPayload)
    def api_distort(req: sc.DistortRequest):
        try:
            model = DistortionModel(
                A=np.asarray(req.a, dtype=float),
                translation=req.translation,
                tau=req.tau,
                noise_sd=req.noise_sd,
                seed=req.seed,
            )
            return _traj_to_payload(distort(_traj_from_payload(req.trajectory), model))
        except ValueError as exc:
            raise _bad_request(exc)

    @app.post("/api/trajectory/null-behavior", response_model=sc.TrajectoryPayload)
    def api_null_behavior(req: sc.NullBehaviorRequest):
        try:
            model = NullBehaviorModel(
                req.fixation_duration_mean, req.saccade_amplitude_sd, req.fixation_jitter_sd, req.seed
            )
            return _traj_to_payload(gen_null_behavior(req.n, model, req.sample_rate_hz))
        except ValueError as exc:
            raise _bad_request(exc)

    # -- analysis ------------------------------------------------------------

    @app.post("/api/analysis/capacity", response_model=sc.CapacityResponse)
    def api_capacity(req: sc.CapacityRequest):
        try:
            row = capacity_report(
                req.speed_deg_s,
                req.sample_rate_hz,
                req.lam,
                req.window,
                Measure(sc.resolve_measure_kind(req.measure), sample_rate_hz=req.sample_rate_hz),
            )
        except ValueError as exc:
            raise _bad_request(exc)
        return sc.CapacityResponse(**row.__dict__)

    @app.post("/api/analysis/entropy-profile", response_model=sc.EntropyProfileResponse)
    def api_entropy_profile(req: sc.EntropyProfileRequest):
        try:
            traj = _traj_from_payload(req.trajectory)
            prof = entropy_profile(
                traj,
                req.window,
                Measure(sc.resolve_measure_kind(req.measure), sample_rate_hz=traj.sample_rate_hz),
                req.lambda_free,
                req.lam,
            )
        except ValueError as exc:
            raise _bad_request(exc)
        return sc.EntropyProfileResponse(window=prof.window_size, entropies=list(prof.per_window_entropy))

    @app.post("/api/analysis/window-sweep", response_model=sc.WindowSweepResponse)
    def api_window_sweep(req: sc.WindowSweepRequest):
        try:
            traj = _traj_from_payload(req.trajectory)
            sweep = mean_entropy_vs_window(
                traj,
                Measure(sc.resolve_measure_kind(req.measure), sample_rate_hz=traj.sample_rate_hz),
                req.w_min,
                req.w_max,
                req.lambda_free,
                req.lam,
            )
        except ValueError as exc:
            raise _bad_request(exc)
        return sc.WindowSweepResponse(
            window_sizes=[int(w) for w in sweep.window_sizes],
            mean_entropy=list(sweep.mean_entropy),
            best_window=sweep.best_window,
        )

    @app.post("/api/analysis/pairwise", response_model=sc.PairwiseResponse)
    def api_pairwise(req: sc.PairwiseRequest):
        try:
            traj = _traj_from_payload(req.trajectory)
            scores = pairwise_target_similarity(
                traj,
                req.n_targets,
                req.window_start,
                req.window,
                Measure(sc.resolve_measure_kind(req.measure), sample_rate_hz=traj.sample_rate_hz),
                req.reference,
            )
        except (ValueError, IndexError) as exc:
            raise _bad_request(exc)
        return sc.PairwiseResponse(
            reference=req.reference,
            scores=[s.value for s in scores],
            degenerate=[s.degenerate for s in scores],
        )

    @app.post("/api/analysis/rotation", response_model=sc.RotationResponse)
    def api_rotation(req: sc.RotationRequest):
        try:
            curve = rotation_sensitivity(
                Measure(sc.resolve_measure_kind(req.measure), sample_rate_hz=30.0),
                req.radius,
                req.n,
                req.window,
                req.noise_sd,
                req.seed,
                req.thetas_deg,
            )
        except ValueError as exc:
            raise _bad_request(exc)
        return sc.RotationResponse(
            thetas_deg=list(curve.thetas_deg), scores=list(curve.scores), value_range=curve.value_range
        )

    @app.post("/api/analysis/noise-sweep", response_model=sc.NoiseSweepResponse)
    def api_noise_sweep(req: sc.NoiseSweepRequest):
        try:
            points = noise_entropy_sweep(
                req.n_targets,
                req.speed_deg_s,
                req.sample_rate_hz,
                req.window,
                req.noise_fractions,
                req.reps,
                req.seed,
                req.lam,
            )
        except ValueError as exc:
            raise _bad_request(exc)
        return sc.NoiseSweepResponse(points=[p.__dict__ for p in points])

    # -- densities and simulation -------------------------------------------

    @app.post("/api/pdf/fit", response_model=sc.FitPdfResponse)
    def api_fit_pdf(req: sc.FitPdfRequest):
        try:
            pdf = fit_kde(req.samples, req.bandwidth, req.label)
        except ValueError as exc:
            raise _bad_request(exc)
        return sc.FitPdfResponse(
            measure=sc.resolve_measure_kind(req.measure),
            label=pdf.label,
            bandwidth=pdf.bandwidth,
            samples=[float(v) for v in pdf.sample_values],
        )

    @app.post("/api/simulate", response_model=sc.SimulateResponse)
    def api_simulate(req: sc.SimulateRequest):
        try:
            input_traj = _traj_from_payload(req.input)
            targets = [_traj_from_payload(t) for t in req.targets]
            model = build_model(req.model)
            steps = run_pipeline(
                input_traj,
                targets,
                Measure(sc.resolve_measure_kind(req.measure), sample_rate_hz=input_traj.sample_rate_hz),
                model,
                req.window,
                req.h_threshold,
                stride=req.stride,
            )
        except ValueError as exc:
            raise _bad_request(exc)
        return sc.SimulateResponse(
            steps=[
                sc.SimulateStep(
                    start=st.start,
                    scores=[s.value for s in st.scores],
                    probs=[float(p) for p in st.belief.probs],
                    entropy_bits=st.belief.entropy_bits,
                    selected=st.decision.selected,
                )
                for st in steps
            ]
        )

    # -- live session --------------------------------------------------------

    @app.websocket("/ws/session")
    async def ws_session(ws: WebSocket):
        await ws.accept()
        engine = SessionEngine()
        queue: asyncio.Queue = asyncio.Queue()
        loop = asyncio.get_running_loop()
        layout_task: asyncio.Task | None = None

        async def sender():
            while True:
                msg = await queue.get()
                await ws.send_text(json.dumps(msg) + "\n")

        async def layout_clock():
            t0 = loop.time()
            period = 1.0 / engine.config.sample_rate_hz
            while True:
                await asyncio.sleep(period)
                await queue.put(engine.layout_msg(loop.time() - t0))

        send_task = asyncio.create_task(sender())
        try:
            while True:
                raw = await ws.receive_text()
                for line in raw.splitlines():
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        msg = json.loads(line)
                    except json.JSONDecodeError:
                        await queue.put(
                            {"v": sc.PROTOCOL_VERSION, "error": {"code": "bad-json", "message": "not valid JSON"}}
                        )
                        continue
                    was_configured = engine.configured
                    for out in engine.handle(msg):
                        await queue.put(out)
                    if engine.configured and not was_configured:
                        layout_task = asyncio.create_task(layout_clock())
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            if layout_task is not None:
                layout_task.cancel()

    # -- static frontend ------------------------------------------------------

    # catch-all mount goes last so /api and /ws keep precedence
    dist = Path(__file__).resolve().parents[3] / "frontend" / "dist"
    if dist.is_dir():
        app.mount("/", StaticFiles(directory=dist, html=True), name="frontend")

    return app
