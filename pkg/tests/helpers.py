"""Shared fixtures-in-code for the test suite: random window generators and
the invariance conformance harness used by both the unit tests and the
acceptance suite."""

from __future__ import annotations

import numpy as np

from motionmatch.similarity import Measure, invariance_flags, score
from motionmatch.trajectory import Window

RATE = 30.0

ALL_MEASURES = [
    Measure("pearson_min_axis"),
    Measure("rotated_correlation"),
    Measure("ss_ratio_2d"),
    Measure("norm_euclidean_deriv"),
    Measure("regression_slope"),
    Measure("dominant_frequency", sample_rate_hz=RATE),
    Measure("variance_ratio"),
]


def random_window(rng: np.random.Generator, w: int | None = None) -> Window:
    """Smooth non-degenerate window: an arc plus mild noise, random pose."""
    if w is None:
        w = int(rng.integers(10, 40))
    radius = rng.uniform(0.5, 3.0)
    span = rng.uniform(60.0, 300.0)
    phase = rng.uniform(0.0, 360.0)
    ang = np.deg2rad(phase + np.linspace(0.0, span, w))
    pts = np.stack([radius * np.cos(ang), radius * np.sin(ang)], axis=1)
    pts += rng.normal(0.0, 0.02 * radius, pts.shape)
    pts += rng.uniform(-2.0, 2.0, 2)
    return Window(pts)


def random_pair(rng: np.random.Generator, w: int | None = None) -> tuple[Window, Window]:
    if w is None:
        w = int(rng.integers(10, 40))
    t = random_window(rng, w)
    u = Window(t.points + rng.normal(0.0, 0.05, t.points.shape))
    return u, t


def translate(win: Window, offset: np.ndarray) -> Window:
    return Window(win.points + offset)


def scale(win: Window, factor: float) -> Window:
    return Window(win.points * factor)


def rotate_origin(win: Window, theta_deg: float) -> Window:
    th = np.deg2rad(theta_deg)
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    return Window(win.points @ rot.T)


def check_invariances(measure: Measure, trials: int = 100, seed: int = 0, tol: float = 1e-6):
    """Assert every true flag holds within tol over random transforms.

    Translation and scale transform the input window alone; rotation
    spins both windows in the shared coordinate frame.
    """
    flags = invariance_flags(measure)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        u, t = random_pair(rng)
        base = score(measure, u, t).value
        if flags.translation:
            moved = translate(u, rng.uniform(-10.0, 10.0, 2))
            assert abs(score(measure, moved, t).value - base) < tol, measure.kind
        if flags.scale:
            factor = rng.uniform(0.1, 10.0)
            assert abs(score(measure, scale(u, factor), t).value - base) < tol, measure.kind
        if flags.rotation:
            theta = rng.uniform(0.0, 360.0)
            spun = score(measure, rotate_origin(u, theta), rotate_origin(t, theta)).value
            assert abs(spun - base) < tol, measure.kind
        if flags.symmetric:
            assert abs(score(measure, t, u).value - base) < 1e-9, measure.kind


def find_variance_witness(measure: Measure, flag: str, seed: int = 0, min_change: float = 0.05) -> float:
    """Largest score change found for a declared non-invariance.

    Translation/scale act on the input window; rotation tries both an
    input-only rotation (a rotational miscalibration of the channel) and
    a common rotation of the pair. Symmetry swaps the arguments.
    """
    rng = np.random.default_rng(seed)
    best = 0.0
    for trial in range(200):
        if trial % 2 == 0:
            u, t = random_pair(rng)
        else:
            # unrelated windows expose asymmetries that a noisy copy hides
            w = int(rng.integers(10, 40))
            u, t = random_window(rng, w), random_window(rng, w)
        try:
            base = score(measure, u, t).value
            if flag == "translation":
                delta = abs(score(measure, translate(u, rng.uniform(-10, 10, 2)), t).value - base)
            elif flag == "scale":
                delta = abs(score(measure, scale(u, rng.uniform(2.0, 10.0)), t).value - base)
            elif flag == "rotation":
                theta = rng.uniform(30.0, 330.0)
                d1 = abs(score(measure, rotate_origin(u, theta), t).value - base)
                d2 = abs(
                    score(measure, rotate_origin(u, theta), rotate_origin(t, theta)).value - base
                )
                delta = max(d1, d2)
            elif flag == "symmetric":
                delta = abs(score(measure, t, u).value - base)
            else:
                raise ValueError(flag)
        except ValueError:
            continue
        best = max(best, delta)
        if best > min_change:
            return best
    return best
