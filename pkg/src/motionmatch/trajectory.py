"""Target and input trajectory generation.

Trajectories are ordered 2D sample sequences at a fixed rate. Generators
cover the shapes used by moving-target selection interfaces (circles,
constant-speed polygons), a linear distortion channel that turns a target
motion into simulated user input, and a synthetic fixation/saccade process
standing in for recordings of users who are not selecting anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Point2",
    "Trajectory",
    "Window",
    "DistortionModel",
    "NullBehaviorModel",
    "gen_circle",
    "gen_polygon",
    "window_at",
    "distort",
    "gen_null_behavior",
    "derivative",
    "rotate_window",
    "path_scale",
]


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("Point2 coordinates must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


def _as_point(p) -> Point2:
    if isinstance(p, Point2):
        return p
    x, y = p
    return Point2(float(x), float(y))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Ordered (n, 2) sample array with a sample rate; closed paths wrap."""

    samples: np.ndarray
    sample_rate_hz: float
    closed: bool = False

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 2 or samples.shape[1] != 2 or samples.shape[0] < 2:
            raise ValueError("trajectory needs at least 2 samples of shape (n, 2)")
        if not np.all(np.isfinite(samples)):
            raise ValueError("trajectory samples must be finite")
        if not (math.isfinite(self.sample_rate_hz) and self.sample_rate_hz > 0):
            raise ValueError("sample_rate_hz must be finite and positive")

    def __len__(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True, eq=False)
class Window:
    """Contiguous slice of a trajectory (possibly wrapped around a closed path)."""

    points: np.ndarray
    start_index: int = 0

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", points)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 2:
            raise ValueError("window needs at least 2 points of shape (w, 2)")
        if self.start_index < 0:
            raise ValueError("start_index must be >= 0")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class DistortionModel:
    """Linear channel: spatial transform + translation + delay + white noise.

    ``noise_sd`` is expressed as a fraction of the path scale (RMS distance
    of the samples from their centroid, i.e. the radius for a circle), so
    the same value means the same relative disruption across shapes.
    """

    A: np.ndarray = field(default_factory=lambda: np.eye(2))
    translation: Point2 = Point2(0.0, 0.0)
    tau: int = 0
    noise_sd: float = 0.0
    seed: int = 0

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "translation", _as_point(self.translation))
        if A.shape != (2, 2) or not np.all(np.isfinite(A)):
            raise ValueError("A must be a finite 2x2 matrix")
        if self.tau < 0:
            raise ValueError("tau must be >= 0 samples")
        if not (math.isfinite(self.noise_sd) and self.noise_sd >= 0):
            raise ValueError("noise_sd must be >= 0")


@dataclass(frozen=True)
class NullBehaviorModel:
    """Fixation-and-saccade process for non-interaction input.

    Jittered stationary clusters with exponentially distributed durations,
    separated by instantaneous jumps. Amplitudes are display units.
    """

    fixation_duration_mean: float = 45.0
    saccade_amplitude_sd: float = 1.0
    fixation_jitter_sd: float = 0.02
    seed: int = 0

    def __post_init__(self):
        for name in ("fixation_duration_mean", "saccade_amplitude_sd", "fixation_jitter_sd"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be >= 0")


def gen_circle(
    radius: float,
    n: int,
    phase_deg: float = 0.0,
    direction: str = "ccw",
    center=Point2(0.0, 0.0),
    sample_rate_hz: float = 30.0,
) -> Trajectory:
    """Closed circle of ``n`` samples uniformly spaced in angle.

    Sample 0 sits at ``phase_deg`` (0 = +x axis); successive samples
    advance counter-clockwise or clockwise.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n < 4:
        raise ValueError("a circle needs at least 4 samples")
    if direction not in ("cw", "ccw"):
        raise ValueError("direction must be 'cw' or 'ccw'")
    c = _as_point(center)
    sign = 1.0 if direction == "ccw" else -1.0
    ang = np.deg2rad(phase_deg) + sign * 2.0 * np.pi * np.arange(n) / n
    pts = np.stack([c.x + radius * np.cos(ang), c.y + radius * np.sin(ang)], axis=1)
    return Trajectory(pts, sample_rate_hz, closed=True)


def gen_polygon(vertices, n: int, sample_rate_hz: float = 30.0) -> Trajectory:
    """Closed polygon boundary resampled to ``n`` points at constant speed.

    Points are equally spaced by arc length along the perimeter, starting
    at the first vertex, so consecutive inter-point distances are equal.
    """
    verts = np.asarray([[_as_point(v).x, _as_point(v).y] for v in vertices], dtype=float)
    if verts.shape[0] < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    if n < 2:
        raise ValueError("n must be >= 2")
    segs = np.roll(verts, -1, axis=0) - verts
    seg_len = np.linalg.norm(segs, axis=1)
    perimeter = seg_len.sum()
    if perimeter <= 0:
        raise ValueError("degenerate polygon: zero perimeter")
    cum = np.concatenate([[0.0], np.cumsum(seg_len)])
    dist = np.arange(n) * perimeter / n
    seg_idx = np.clip(np.searchsorted(cum, dist, side="right") - 1, 0, len(verts) - 1)
    # skip zero-length segments (repeated vertices)
    while np.any(seg_len[seg_idx] == 0):
        seg_idx = np.where(seg_len[seg_idx] == 0, seg_idx + 1, seg_idx)
    frac = (dist - cum[seg_idx]) / seg_len[seg_idx]
    pts = verts[seg_idx] + frac[:, None] * segs[seg_idx]
    return Trajectory(pts, sample_rate_hz, closed=True)


def window_at(traj: Trajectory, start: int, w: int, wrap: bool = False) -> Window:
    """Slice ``w`` samples starting at ``start``; wrap indexes modularly."""
    n = len(traj)
    if w < 2:
        raise ValueError("window length must be >= 2")
    if wrap:
        if not traj.closed:
            raise ValueError("wrapping windows require a closed trajectory")
        idx = (start + np.arange(w)) % n
        return Window(traj.samples[idx], start_index=start % n)
    if start < 0 or start + w > n:
        raise IndexError(f"window [{start}, {start + w}) out of range for length {n}")
    return Window(traj.samples[start : start + w], start_index=start)


def path_scale(traj: Trajectory) -> float:
    """RMS distance of the samples from their centroid (circle -> radius)."""
    centered = traj.samples - traj.samples.mean(axis=0)
    return float(np.sqrt((centered**2).sum(axis=1).mean()))


def distort(traj: Trajectory, model: DistortionModel) -> Trajectory:
    """Pass a trajectory through the linear distortion channel.

    Output sample t is ``A @ traj[t - tau] + translation + noise``; delayed
    indices wrap on closed paths and are truncated from the front otherwise
    (the output then has ``len(traj) - tau`` samples). Deterministic for a
    fixed seed.
    """
    n = len(traj)
    if model.tau >= n:
        raise ValueError("tau must be smaller than the trajectory length")
    if traj.closed:
        src = traj.samples[(np.arange(n) - model.tau) % n]
    else:
        src = traj.samples[: n - model.tau]
        if len(src) < 2:
            raise ValueError("delay leaves fewer than 2 samples")
    rng = np.random.default_rng(model.seed)
    sd = model.noise_sd * path_scale(traj)
    out = src @ model.A.T + model.translation.as_array() + rng.normal(0.0, sd, src.shape)
    return Trajectory(out, traj.sample_rate_hz, closed=traj.closed)


def gen_null_behavior(n: int, model: NullBehaviorModel, sample_rate_hz: float = 30.0) -> Trajectory:
    """Synthetic non-interaction input: jittered fixations joined by jumps."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.default_rng(model.seed)
    pts = np.empty((n, 2))
    center = np.zeros(2)
    i = 0
    while i < n:
        if model.fixation_duration_mean > 0:
            dur = max(1, int(round(rng.exponential(model.fixation_duration_mean))))
        else:
            dur = 1
        dur = min(dur, n - i)
        pts[i : i + dur] = center + rng.normal(0.0, model.fixation_jitter_sd, (dur, 2))
        i += dur
        center = center + rng.normal(0.0, model.saccade_amplitude_sd, 2)
    return Trajectory(pts, sample_rate_hz, closed=False)


def derivative(win: Window) -> Window:
    """First differences of consecutive points; one sample shorter."""
    if len(win) < 3:
        raise ValueError("derivative needs a window of at least 3 points")
    return Window(np.diff(win.points, axis=0), start_index=win.start_index)


def rotate_window(win: Window, theta_deg: float) -> Window:
    """Rotate every point about the window centroid."""
    if theta_deg == 0.0:
        return Window(win.points.copy(), start_index=win.start_index)
    th = np.deg2rad(theta_deg)
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    c = win.points.mean(axis=0)
    return Window((win.points - c) @ rot.T + c, start_index=win.start_index)
