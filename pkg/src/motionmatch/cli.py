"""Command-line surface: generation, analysis, density fitting, simulation,
and serving. The CLI is a thin client of the core package; all numeric work
lives in the library modules.

Exit codes: 0 success, 1 runtime/validation failure, 2 usage error.
Randomized commands require --seed and echo it in the output metadata, so
a fixed seed and fixed inputs reproduce output byte for byte.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import __version__
from .analysis import (
    capacity_report,
    entropy_profile,
    mean_entropy_vs_window,
    noise_entropy_sweep,
    pairwise_target_similarity,
    rotation_sensitivity,
)
from .inference import LikelihoodModel, fit_kde, run_pipeline
from .io_files import (
    ParseError,
    format_table_csv,
    format_table_json,
    pdf_to_json,
    read_pdf,
    read_trajectory,
    trajectory_to_text,
)
from .similarity import Measure, resolve_measure_kind
from .trajectory import DistortionModel, Trajectory, gen_circle, gen_polygon
from .trajectory import distort as distort_op


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _write_out(text: str, out: str | None):
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit_trajectory(traj: Trajectory, out: str | None, fmt: str, extra_meta: dict | None = None):
    """csv -> the t,x,y interchange format; json -> the REST payload shape."""
    if fmt == "csv":
        _write_out(trajectory_to_text(traj, extra_meta), out)
        return
    doc = {
        "meta": extra_meta or {},
        "samples": [[float(x), float(y)] for x, y in traj.samples],
        "sample_rate_hz": traj.sample_rate_hz,
        "closed": traj.closed,
    }
    _write_out(json.dumps(doc, indent=2) + "\n", out)


def _emit_table(rows: list[dict], meta: dict, out: str | None, fmt: str):
    meta = {"tool": "motionmatch", "version": __version__, **meta}
    text = format_table_csv(rows, meta) if fmt == "csv" else format_table_json(rows, meta)
    _write_out(text, out)


def _measure_option(name: str, rate: float) -> Measure:
    return Measure(resolve_measure_kind(name), sample_rate_hz=rate)


def _load_or_make_path(input_path, shape, n, radius, rate) -> Trajectory:
    if input_path:
        return read_trajectory(input_path)
    if shape == "circle":
        return gen_circle(radius, n, sample_rate_hz=rate)
    if shape == "square":
        r = radius
        return gen_polygon([(-r, -r), (r, -r), (r, r), (-r, r)], n, sample_rate_hz=rate)
    raise ValueError("provide --input or --shape {circle,square}")


out_option = click.option("--out", default=None, help="output path (default stdout)")
format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", help="output format"
)


@click.group()
@click.version_option(__version__)
def cli():
    """Probabilistic moving-target selection toolkit."""


# ---------------------------------------------------------------------------
# generation


@cli.command("gen-circle")
@click.option("--radius", type=float, default=1.0, show_default=True)
@click.option("--n", type=int, required=True, help="samples per revolution")
@click.option("--phase", type=float, default=0.0, show_default=True)
@click.option("--direction", type=click.Choice(["cw", "ccw"]), default="ccw", show_default=True)
@click.option("--center", type=(float, float), default=(0.0, 0.0), show_default=True)
@click.option("--rate", type=float, default=30.0, show_default=True, help="sample rate (Hz)")
@out_option
@format_option
def cmd_gen_circle(radius, n, phase, direction, center, rate, out, fmt):
    """Generate a circular target trajectory."""
    try:
        traj = gen_circle(radius, n, phase, direction, center, rate)
    except ValueError as exc:
        _fail(str(exc))
    _emit_trajectory(traj, out, fmt)


@cli.command("gen-polygon")
@click.option("--vertices", required=True, help="semicolon-separated x,y pairs, e.g. '0,0;1,0;1,1;0,1'")
@click.option("--n", type=int, required=True, help="number of constant-speed samples")
@click.option("--rate", type=float, default=30.0, show_default=True)
@out_option
@format_option
def cmd_gen_polygon(vertices, n, rate, out, fmt):
    """Generate a constant-speed closed polygon trajectory."""
    try:
        verts = [tuple(float(v) for v in pair.split(",")) for pair in vertices.split(";") if pair.strip()]
        traj = gen_polygon(verts, n, rate)
    except ValueError as exc:
        _fail(str(exc))
    _emit_trajectory(traj, out, fmt)


@cli.command("distort")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--a", default="1,0,0,1", show_default=True, help="row-major 2x2 transform")
@click.option("--translate", type=(float, float), default=(0.0, 0.0), show_default=True)
@click.option("--tau", type=int, default=0, show_default=True, help="delay in samples")
@click.option("--noise-sd", type=float, default=0.0, show_default=True, help="fraction of path scale")
@click.option("--seed", type=int, required=True)
@out_option
@format_option
def cmd_distort(input_path, a, translate, tau, noise_sd, seed, out, fmt):
    """Pass a trajectory through the linear distortion channel."""
    try:
        coeffs = [float(v) for v in a.split(",")]
        if len(coeffs) != 4:
            raise ValueError("--a needs 4 comma-separated values")
        traj = read_trajectory(input_path)
        model = DistortionModel(
            A=np.array(coeffs).reshape(2, 2), translation=translate, tau=tau, noise_sd=noise_sd, seed=seed
        )
        result = distort_op(traj, model)
    except (ValueError, ParseError, OSError) as exc:
        _fail(str(exc))
    meta = {"tool": f"motionmatch {__version__}", "cmd": "distort", "seed": seed, "noise_sd": noise_sd, "tau": tau}
    _emit_trajectory(result, out, fmt, meta)


# ---------------------------------------------------------------------------
# density fitting


@cli.command("fit-pdf")
@click.option("--samples", "samples_path", required=True, type=click.Path(exists=True), help="one score per line")
@click.option("--label", type=click.Choice(["follow", "null", "other"]), default="follow", show_default=True)
@click.option("--measure", default="pearson_min_axis", show_default=True)
@click.option("--bandwidth", default="auto", show_default=True)
@out_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", help="output format")
def cmd_fit_pdf(samples_path, label, measure, bandwidth, out, fmt):
    """Fit a Gaussian kernel density to similarity scores (JSON by default)."""
    try:
        with open(samples_path, "r", encoding="utf-8") as fh:
            values = [float(line) for line in fh if line.strip() and not line.startswith("#")]
        bw = "auto" if bandwidth == "auto" else float(bandwidth)
        pdf = fit_kde(values, bw, label)
        kind = resolve_measure_kind(measure)
    except (ValueError, OSError) as exc:
        _fail(str(exc))
    if fmt == "json":
        _write_out(pdf_to_json(pdf, kind), out)
    else:
        meta = {"tool": "motionmatch", "version": __version__, "cmd": "fit-pdf",
                "measure": kind, "label": label, "bandwidth": pdf.bandwidth}
        rows = [{"sample": float(v)} for v in pdf.sample_values]
        _write_out(format_table_csv(rows, meta), out)


# ---------------------------------------------------------------------------
# analyses


@cli.group("analyze")
def analyze():
    """Design-space analyses over target paths."""


@analyze.command("capacity")
@click.option("--speed", type=float, required=True, help="target speed (deg/s)")
@click.option("--rate", type=float, default=30.0, show_default=True)
@click.option("--lambda", "lam", type=float, default=0.8, show_default=True)
@click.option("--window", type=int, default=30, show_default=True)
@click.option("--measure", default="pearson_min_axis", show_default=True)
@out_option
@format_option
def cmd_capacity(speed, rate, lam, window, measure, out, fmt):
    """Supported target count for a circular design at a threshold."""
    try:
        row = capacity_report(speed, rate, lam, window, _measure_option(measure, rate))
    except ValueError as exc:
        _fail(str(exc))
    meta = {"cmd": "analyze capacity", "speed": speed, "rate": rate, "lambda": lam, "window": window, "measure": measure}
    _emit_table([row.__dict__], meta, out, fmt)


_path_options = [
    click.option("--input", "input_path", type=click.Path(exists=True), default=None),
    click.option("--shape", type=click.Choice(["circle", "square"]), default=None),
    click.option("--n", type=int, default=120, show_default=True),
    click.option("--radius", type=float, default=1.0, show_default=True, help="circle radius / square half-side"),
    click.option("--rate", type=float, default=30.0, show_default=True),
]


def _with_path_options(fn):
    for opt in reversed(_path_options):
        fn = opt(fn)
    return fn


@analyze.command("entropy-profile")
@_with_path_options
@click.option("--window", type=int, required=True)
@click.option("--measure", default="pearson_min_axis", show_default=True)
@click.option("--thresholded", is_flag=True, help="spread probability over scores above --lambda")
@click.option("--lambda", "lam", type=float, default=0.8, show_default=True)
@out_option
@format_option
def cmd_entropy_profile(input_path, shape, n, radius, rate, window, measure, thresholded, lam, out, fmt):
    """Per-window-start entropy of a closed path's self-similarity."""
    try:
        traj = _load_or_make_path(input_path, shape, n, radius, rate)
        prof = entropy_profile(traj, window, _measure_option(measure, traj.sample_rate_hz), not thresholded, lam)
    except (ValueError, ParseError, OSError) as exc:
        _fail(str(exc))
    rows = [{"start": i, "entropy_bits": float(h)} for i, h in enumerate(prof.per_window_entropy)]
    meta = {"cmd": "analyze entropy-profile", "window": window, "measure": measure, "thresholded": thresholded, "lambda": lam}
    _emit_table(rows, meta, out, fmt)


@analyze.command("window-sweep")
@_with_path_options
@click.option("--w-min", type=int, default=5, show_default=True)
@click.option("--w-max", type=int, default=None, help="default: path length")
@click.option("--measure", default="pearson_min_axis", show_default=True)
@out_option
@format_option
def cmd_window_sweep(input_path, shape, n, radius, rate, w_min, w_max, measure, out, fmt):
    """Mean entropy per window size; reports the minimising size."""
    try:
        traj = _load_or_make_path(input_path, shape, n, radius, rate)
        sweep = mean_entropy_vs_window(traj, _measure_option(measure, traj.sample_rate_hz), w_min, w_max)
    except (ValueError, ParseError, OSError) as exc:
        _fail(str(exc))
    rows = [
        {"window": int(w), "mean_entropy_bits": float(h)}
        for w, h in zip(sweep.window_sizes, sweep.mean_entropy)
    ]
    meta = {"cmd": "analyze window-sweep", "measure": measure, "best_window": sweep.best_window}
    _emit_table(rows, meta, out, fmt)


@analyze.command("pairwise")
@_with_path_options
@click.option("--targets", "n_targets", type=int, required=True)
@click.option("--window", type=int, required=True)
@click.option("--start", type=int, default=0, show_default=True)
@click.option("--reference", type=int, default=0, show_default=True)
@click.option("--measure", default="pearson_min_axis", show_default=True)
@out_option
@format_option
def cmd_pairwise(input_path, shape, n, radius, rate, n_targets, window, start, reference, measure, out, fmt):
    """Confusion of one target's window against every co-moving target."""
    try:
        traj = _load_or_make_path(input_path, shape, n, radius, rate)
        scores = pairwise_target_similarity(
            traj, n_targets, start, window, _measure_option(measure, traj.sample_rate_hz), reference
        )
    except (ValueError, IndexError, ParseError, OSError) as exc:
        _fail(str(exc))
    rows = [
        {"target": i, "similarity": s.value, "degenerate": int(s.degenerate)} for i, s in enumerate(scores)
    ]
    meta = {"cmd": "analyze pairwise", "n_targets": n_targets, "window": window, "start": start, "reference": reference, "measure": measure}
    _emit_table(rows, meta, out, fmt)


@analyze.command("rotation")
@click.option("--measure", required=True)
@click.option("--radius", type=float, default=1.0, show_default=True)
@click.option("--n", type=int, default=60, show_default=True)
@click.option("--window", type=int, default=20, show_default=True)
@click.option("--noise-sd", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--theta-step", type=float, default=5.0, show_default=True)
@out_option
@format_option
def cmd_rotation(measure, radius, n, window, noise_sd, seed, theta_step, out, fmt):
    """Score vs coordinate-frame rotation for a window and its noisy copy."""
    try:
        thetas = np.arange(0.0, 360.0, theta_step)
        curve = rotation_sensitivity(_measure_option(measure, 30.0), radius, n, window, noise_sd, seed, thetas)
    except ValueError as exc:
        _fail(str(exc))
    rows = [{"theta_deg": float(t), "score": float(s)} for t, s in zip(curve.thetas_deg, curve.scores)]
    meta = {"cmd": "analyze rotation", "measure": measure, "noise_sd": noise_sd, "seed": seed, "range": curve.value_range}
    _emit_table(rows, meta, out, fmt)


@analyze.command("noise-sweep")
@click.option("--targets", "n_targets", type=int, default=16, show_default=True)
@click.option("--speed", type=float, default=180.0, show_default=True)
@click.option("--rate", type=float, default=30.0, show_default=True)
@click.option("--window", type=int, default=30, show_default=True)
@click.option("--fractions", default="0.05,0.1,0.15,0.2,0.25,0.3,0.4,0.5,0.6,0.7,0.75", show_default=True)
@click.option("--reps", type=int, default=30, show_default=True)
@click.option("--lambda", "lam", type=float, default=0.8, show_default=True)
@click.option("--seed", type=int, required=True)
@out_option
@format_option
def cmd_noise_sweep(n_targets, speed, rate, window, fractions, reps, lam, seed, out, fmt):
    """Mean belief entropy of a followed target across noise levels."""
    try:
        fracs = [float(f) for f in fractions.split(",") if f.strip()]
        points = noise_entropy_sweep(n_targets, speed, rate, window, fracs, reps, seed, lam)
    except ValueError as exc:
        _fail(str(exc))
    rows = [p.__dict__ for p in points]
    meta = {"cmd": "analyze noise-sweep", "n_targets": n_targets, "speed": speed, "window": window, "reps": reps, "lambda": lam, "seed": seed}
    _emit_table(rows, meta, out, fmt)


# ---------------------------------------------------------------------------
# simulation and serving


@cli.command("simulate")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--targets", "target_opts", multiple=True, type=click.Path(exists=True))
@click.argument("extra_targets", nargs=-1, type=click.Path(exists=True))
@click.option("--measure", default="pearson_min_axis", show_default=True)
@click.option("--model", type=click.Choice(["step", "logistic", "empirical"]), default="logistic", show_default=True)
@click.option("--window", type=int, default=30, show_default=True)
@click.option("--lambda", "lam", type=float, default=0.8, show_default=True)
@click.option("--steepness", type=float, default=20.0, show_default=True)
@click.option("--threshold", type=float, default=0.5, show_default=True, help="entropy gate (bits)")
@click.option("--pdf-follow", type=click.Path(exists=True), default=None)
@click.option("--pdf-null", type=click.Path(exists=True), default=None)
@click.option("--pdf-other", type=click.Path(exists=True), default=None)
@click.option("--stride", type=int, default=1, show_default=True)
@out_option
@format_option
def cmd_simulate(
    input_path, target_opts, extra_targets, measure, model, window, lam, steepness, threshold,
    pdf_follow, pdf_null, pdf_other, stride, out, fmt,
):
    """Run the inference pipeline over trajectory files."""
    target_paths = list(target_opts) + list(extra_targets)
    if not target_paths:
        raise click.UsageError("provide at least one target via --targets")
    try:
        input_traj = read_trajectory(input_path)
        targets = [read_trajectory(p) for p in target_paths]
        pdfs = {}
        for role, path in (("follow", pdf_follow), ("null", pdf_null), ("other", pdf_other)):
            if path:
                pdfs[f"pdf_{role}"], _ = read_pdf(path)
        lmodel = LikelihoodModel(kind=model, lam=lam, steepness=steepness, **pdfs)
        steps = run_pipeline(
            input_traj, targets, _measure_option(measure, input_traj.sample_rate_hz),
            lmodel, window, threshold, stride=stride,
        )
    except (ValueError, ParseError, OSError) as exc:
        _fail(str(exc))
    rows = []
    for st in steps:
        row: dict = {"start": st.start}
        for i, s in enumerate(st.scores, start=1):
            row[f"score_{i}"] = s.value
        row["prob_null"] = float(st.belief.probs[0])
        for i in range(1, len(targets) + 1):
            row[f"prob_{i}"] = float(st.belief.probs[i])
        row["entropy_bits"] = st.belief.entropy_bits
        row["selected"] = "" if st.decision.selected is None else st.decision.selected
        rows.append(row)
    meta = {"cmd": "simulate", "measure": measure, "model": model, "window": window, "lambda": lam, "threshold": threshold}
    _emit_table(rows, meta, out, fmt)


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def cmd_serve(host, port):
    """Start the HTTP/WebSocket service."""
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=host, port=port)


def main():
    cli()


if __name__ == "__main__":
    main()
