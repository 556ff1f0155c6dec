"""Design-time analyses for moving-target selection interfaces.

Everything here works on the target paths alone, before any user data
exists: how distinguishable each window along a path is (entropy
profiles), which window size minimises that ambiguity, how confusable
co-moving targets are, how sensitive a measure is to the coordinate
frame, how many targets a circular design supports at a similarity
threshold, and how the uncertainty of a design degrades with input noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .inference import entropy
from .similarity import Measure, SimilarityScore, score as measure_score
from .trajectory import (
    DistortionModel,
    Trajectory,
    Window,
    distort,
    gen_circle,
    rotate_window,
    window_at,
)

__all__ = [
    "EntropyProfile",
    "WindowSweep",
    "RotationCurve",
    "CapacityRow",
    "NoiseSweepPoint",
    "entropy_profile",
    "mean_entropy_vs_window",
    "pairwise_target_similarity",
    "rotation_sensitivity",
    "capacity_report",
    "noise_entropy_sweep",
]


# ---------------------------------------------------------------------------
# vectorised pairwise window similarity


def _wrapped_windows(traj: Trajectory, w: int) -> np.ndarray:
    n = len(traj)
    idx = (np.arange(n)[:, None] + np.arange(w)[None, :]) % n
    return traj.samples[idx]  # (n, w, 2)


def _unit_rows(x: np.ndarray) -> np.ndarray:
    """Center rows and scale to unit sum of squares; zero-variance rows stay 0."""
    xc = x - x.mean(axis=1, keepdims=True)
    ss = (xc**2).sum(axis=1)
    out = np.zeros_like(xc)
    nz = ss > 0
    out[nz] = xc[nz] / np.sqrt(ss[nz])[:, None]
    return out


def _min_axis_matrix(wins: np.ndarray) -> np.ndarray:
    zx = _unit_rows(wins[:, :, 0])
    zy = _unit_rows(wins[:, :, 1])
    return np.clip(np.minimum(zx @ zx.T, zy @ zy.T), -1.0, 1.0)


def _rotated_corr_matrix(wins: np.ndarray) -> np.ndarray:
    """Column j holds correlations against window j in j's canonical frame."""
    n, w, _ = wins.shape
    centered = wins - wins.mean(axis=1, keepdims=True)
    out = np.empty((n, n))
    for j in range(n):
        cov = centered[j].T @ centered[j] / w
        evals, evecs = np.linalg.eigh(cov)
        v = evecs[:, int(np.argmax(evals))]
        delta = np.deg2rad(45.0) - math.atan2(v[1], v[0])
        rot = np.array([[math.cos(delta), -math.sin(delta)], [math.sin(delta), math.cos(delta)]])
        rotated = centered @ rot.T
        zx = _unit_rows(rotated[:, :, 0])
        zy = _unit_rows(rotated[:, :, 1])
        tx, ty = zx[j], zy[j]
        out[:, j] = np.clip(np.minimum(zx @ tx, zy @ ty), -1.0, 1.0)
    return out


def _pairwise_matrix(wins: np.ndarray, measure: Measure) -> np.ndarray:
    if measure.kind == "pearson_min_axis":
        return _min_axis_matrix(wins)
    if measure.kind == "rotated_correlation":
        return _rotated_corr_matrix(wins)
    n = wins.shape[0]
    out = np.empty((n, n))
    for i in range(n):
        wi = Window(wins[i])
        for j in range(n):
            out[i, j] = measure_score(measure, wi, Window(wins[j])).value
    return out


# ---------------------------------------------------------------------------
# entropy profiles


@dataclass(frozen=True, eq=False)
class EntropyProfile:
    window_size: int
    per_window_entropy: np.ndarray
    lambda_free: bool


def _profile_from_matrix(sim: np.ndarray, lambda_free: bool, lam: float) -> np.ndarray:
    n = sim.shape[0]
    ent = np.empty(n)
    for s in range(n):
        if lambda_free:
            shifted = sim[s] - sim[s].min()
        else:
            shifted = (sim[s] > lam).astype(float)
        total = shifted.sum()
        probs = np.full(n, 1.0 / n) if total <= 0 else shifted / total
        ent[s] = entropy(probs)
    return ent


def entropy_profile(
    traj: Trajectory,
    w: int,
    measure: Measure = Measure("pearson_min_axis"),
    lambda_free: bool = True,
    lam: float = 0.8,
) -> EntropyProfile:
    """Per-window-start entropy of a closed path's self-similarity.

    Each window is scored against every window of the path (wrapping).
    In the default mode the scores are shifted to be non-negative by the
    per-window minimum and normalized into probabilities; the thresholded
    mode instead spreads probability uniformly over the windows whose
    score exceeds ``lam``. Low entropy marks path segments whose motion
    is hard to confuse with the rest of the path.
    """
    if not traj.closed:
        raise ValueError("entropy profiles are defined for closed trajectories")
    if not 2 <= w <= len(traj):
        raise ValueError("window size must lie in [2, path length]")
    sim = _pairwise_matrix(_wrapped_windows(traj, w), measure)
    return EntropyProfile(w, _profile_from_matrix(sim, lambda_free, lam), lambda_free)


@dataclass(frozen=True, eq=False)
class WindowSweep:
    window_sizes: np.ndarray
    mean_entropy: np.ndarray
    best_window: int


def mean_entropy_vs_window(
    traj: Trajectory,
    measure: Measure = Measure("pearson_min_axis"),
    w_min: int = 5,
    w_max: int | None = None,
    lambda_free: bool = True,
    lam: float = 0.8,
) -> WindowSweep:
    """Mean profile entropy for every window size in [w_min, w_max].

    The reported best window minimises the mean entropy, i.e. maximises
    how distinguishable an average window is from the rest of the path.
    """
    if w_max is None:
        w_max = len(traj)
    if not 2 <= w_min <= w_max <= len(traj):
        raise ValueError("window range must lie within [2, path length]")
    sizes = np.arange(w_min, w_max + 1)
    means = np.array(
        [entropy_profile(traj, int(w), measure, lambda_free, lam).per_window_entropy.mean() for w in sizes]
    )
    return WindowSweep(sizes, means, int(sizes[int(np.argmin(means))]))


# ---------------------------------------------------------------------------
# target confusion


def pairwise_target_similarity(
    path: Trajectory,
    n_targets: int,
    window_start: int,
    w: int,
    measure: Measure = Measure("pearson_min_axis"),
    reference: int = 0,
) -> list[SimilarityScore]:
    """Score a reference target's window against every co-moving target.

    Targets share the path at equal phase offsets (target i leads by
    i/n_targets of the path). All windows cover the same time interval,
    so this is the confusion an ideal follower of the reference target
    would produce against each target.
    """
    if not path.closed:
        raise ValueError("pairwise comparison expects a closed path")
    if not 0 <= reference < n_targets:
        raise IndexError("reference target out of range")
    n = len(path)
    offsets = [int(round(i * n / n_targets)) for i in range(n_targets)]
    ref_win = window_at(path, window_start + offsets[reference], w, wrap=True)
    return [
        measure_score(measure, ref_win, window_at(path, window_start + off, w, wrap=True))
        for off in offsets
    ]


# ---------------------------------------------------------------------------
# coordinate-frame sensitivity


@dataclass(frozen=True, eq=False)
class RotationCurve:
    thetas_deg: np.ndarray
    scores: np.ndarray

    @property
    def value_range(self) -> float:
        return float(self.scores.max() - self.scores.min())


def rotation_sensitivity(
    measure: Measure,
    radius: float = 1.0,
    n: int = 60,
    w: int = 20,
    noise_sd: float = 0.1,
    seed: int = 0,
    theta_grid=None,
) -> RotationCurve:
    """Score a window against its noisy copy across coordinate rotations.

    Both windows are rotated together, so the underlying data never
    changes; any fluctuation of the curve is pure sensitivity of the
    measure to how the pair is oriented in the coordinate system.
    """
    if w > n:
        raise ValueError("window cannot exceed the trajectory length")
    thetas = np.arange(0.0, 360.0, 5.0) if theta_grid is None else np.asarray(theta_grid, dtype=float)
    traj = gen_circle(radius, n)
    noisy = distort(traj, DistortionModel(noise_sd=noise_sd, seed=seed))
    win = window_at(traj, 0, w)
    nwin = window_at(noisy, 0, w)
    scores = np.array(
        [
            measure_score(measure, rotate_window(nwin, th), rotate_window(win, th)).value
            for th in thetas
        ]
    )
    return RotationCurve(thetas, scores)


# ---------------------------------------------------------------------------
# capacity of a circular design


@dataclass(frozen=True)
class CapacityRow:
    n_samples: int
    count_above: int
    proportion: float
    entropy_bits: float
    max_targets_bidirectional: int


def capacity_report(
    speed_deg_s: float,
    sample_rate_hz: float = 30.0,
    lam: float = 0.8,
    w: int = 30,
    measure: Measure = Measure("pearson_min_axis"),
) -> CapacityRow:
    """How many targets a circular design supports at threshold ``lam``.

    A full revolution covers N = rate * 360 / speed samples. For every
    phase lag the mean window similarity over all window positions is
    computed (positions matter because most measures are sensitive to a
    window's orientation); the lags whose mean clears the threshold form
    the confusion arc. Targets must sit outside each other's arcs, and
    opposite-direction targets never confuse, so capacity doubles.
    """
    n_float = sample_rate_hz * 360.0 / speed_deg_s
    n = int(round(n_float))
    if abs(n_float - n) > 1e-9:
        raise ValueError("speed must divide the revolution into whole samples")
    if w > n:
        raise ValueError("window cannot exceed the revolution length")
    sim = _pairwise_matrix(_wrapped_windows(gen_circle(1.0, n), w), measure)
    rows = np.arange(n)
    lag_means = np.array([sim[rows, (rows + d) % n].mean() for d in range(n)])
    count = int((lag_means > lam).sum())
    if count == 0:
        raise ValueError("no lag clears the threshold; lam too high")
    return CapacityRow(
        n_samples=n,
        count_above=count,
        proportion=count / n,
        entropy_bits=float(np.log2(count)),
        max_targets_bidirectional=2 * math.ceil(n / count),
    )


# ---------------------------------------------------------------------------
# noise sweep


@dataclass(frozen=True)
class NoiseSweepPoint:
    noise_fraction: float
    mean_entropy_bits: float
    reps: int


def noise_entropy_sweep(
    n_targets: int = 16,
    speed_deg_s: float = 180.0,
    sample_rate_hz: float = 30.0,
    w: int = 30,
    noise_fractions=(0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75),
    reps: int = 30,
    base_seed: int = 0,
    lam: float = 0.8,
) -> list[NoiseSweepPoint]:
    """Mean belief entropy of a followed circular target vs input noise.

    Per repetition one target's trajectory is distorted with Gaussian
    noise (a fraction of the radius), a window at a random phase is
    scored against all targets, the scores are thresholded at ``lam``
    into a uniform belief over the surviving targets (uniform over all
    when none survives), and the entropy recorded. Cells are seeded
    independently from ``base_seed``, so results are reproducible and
    order-independent.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    n = int(round(sample_rate_hz * 360.0 / speed_deg_s))
    if w > n:
        raise ValueError("window cannot exceed the revolution length")
    targets = [gen_circle(1.0, n, phase_deg=360.0 * i / n_targets) for i in range(n_targets)]
    target_wins = [_wrapped_windows(t, w) for t in targets]

    points = []
    for fi, frac in enumerate(noise_fractions):
        ents = np.empty(reps)
        for rep in range(reps):
            rng = np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(fi, rep)))
            noisy = targets[0].samples + rng.normal(0.0, frac, (n, 2))
            s = int(rng.integers(0, n))
            idx = (s + np.arange(w)) % n
            uw = Window(noisy[idx])
            values = np.array(
                [measure_score(Measure("pearson_min_axis"), uw, Window(tw[s])).value for tw in target_wins]
            )
            above = (values > lam).astype(float)
            total = above.sum()
            probs = np.full(n_targets, 1.0 / n_targets) if total == 0 else above / total
            ents[rep] = entropy(probs)
        points.append(NoiseSweepPoint(float(frac), float(ents.mean()), reps))
    return points
