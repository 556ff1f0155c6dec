"""Similarity measures between an input window and a target window.

Each measure carries declared invariance metadata so a design tool can
reason about which channel distortions (offset, scaling, rotation of the
input relative to the display) a measure tolerates. All measures map into
a bounded score whose maximum indicates a perfect match, except
``variance_ratio`` where *low* values are the evidence of a match.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trajectory import Window

__all__ = [
    "Measure",
    "SimilarityScore",
    "InvarianceFlags",
    "VarianceComponents",
    "MEASURE_KINDS",
    "pearson_min_axis",
    "rotated_correlation",
    "ss_ratio_2d",
    "norm_euclidean_deriv",
    "regression_slope_similarity",
    "dominant_frequency_similarity",
    "variance_ratio",
    "invariance_flags",
    "score",
]


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class InvarianceFlags:
    translation: bool
    scale: bool
    rotation: bool
    symmetric: bool


@dataclass(frozen=True)
class VarianceComponents:
    sigma_s: float
    sigma_f: float
    ratio: float


@dataclass(frozen=True)
class Measure:
    """A named similarity function plus any parameters it needs."""

    kind: str
    sample_rate_hz: float | None = None

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")


MEASURE_KINDS = (
    "pearson_min_axis",
    "rotated_correlation",
    "ss_ratio_2d",
    "norm_euclidean_deriv",
    "regression_slope",
    "dominant_frequency",
    "variance_ratio",
)

MEASURE_ALIASES = {
    "pearson": "pearson_min_axis",
    "rotated": "rotated_correlation",
    "ssr": "ss_ratio_2d",
    "normderiv": "norm_euclidean_deriv",
    "slope": "regression_slope",
    "freq": "dominant_frequency",
}


def resolve_measure_kind(name: str) -> str:
    """Map a measure name or short alias onto its canonical kind."""
    kind = MEASURE_ALIASES.get(name, name)
    if kind not in MEASURE_KINDS:
        raise ValueError(f"unknown measure {name!r}")
    return kind

# translation / scale / rotation / symmetric. Translation and scale refer
# to transforms of the input window alone; rotation refers to a common
# rotation of the coordinate system under which both windows are observed.
_FLAGS = {
    "pearson_min_axis": InvarianceFlags(True, True, False, True),
    "rotated_correlation": InvarianceFlags(True, True, True, False),
    "ss_ratio_2d": InvarianceFlags(True, False, False, False),
    "norm_euclidean_deriv": InvarianceFlags(True, True, False, True),
    "regression_slope": InvarianceFlags(True, False, False, False),
    "dominant_frequency": InvarianceFlags(True, True, True, True),
    "variance_ratio": InvarianceFlags(True, False, True, False),
}


def _check_pair(u: Window, t: Window, min_len: int = 3):
    if len(u) != len(t):
        raise ValueError(f"window length mismatch: {len(u)} vs {len(t)}")
    if len(u) < min_len:
        raise ValueError(f"windows must have at least {min_len} points")


def _pearson_axis(a: np.ndarray, b: np.ndarray) -> tuple[float, bool]:
    """Pearson r of two 1-d arrays; a zero-variance axis contributes 0."""
    ac = a - a.mean()
    bc = b - b.mean()
    sa = float(ac @ ac)
    sb = float(bc @ bc)
    if sa == 0.0 or sb == 0.0:
        return 0.0, True
    # sqrt of the product keeps r(x, x) exactly 1.0
    r = float(ac @ bc) / float(np.sqrt(sa * sb))
    return min(1.0, max(-1.0, r)), False


def pearson_min_axis(u: Window, t: Window) -> SimilarityScore:
    """Pearson correlation of the least-correlated coordinate axis."""
    _check_pair(u, t)
    rx, dx = _pearson_axis(u.points[:, 0], t.points[:, 0])
    ry, dy = _pearson_axis(u.points[:, 1], t.points[:, 1])
    return SimilarityScore(min(rx, ry), degenerate=dx or dy)


def _principal_angle(points: np.ndarray) -> float:
    centered = points - points.mean(axis=0)
    cov = centered.T @ centered / len(points)
    evals, evecs = np.linalg.eigh(cov)
    v = evecs[:, int(np.argmax(evals))]
    return float(np.arctan2(v[1], v[0]))


def rotated_correlation(u: Window, t: Window) -> SimilarityScore:
    """Min-axis correlation after rotating the pair to a canonical frame.

    The target window's principal axis is rotated to 45 degrees, which
    equalises its variance across the two coordinate axes; the same
    rotation is applied to the input window (each about its own centroid).
    The score therefore does not depend on how the pair happens to be
    oriented relative to the coordinate system.
    """
    _check_pair(u, t)
    delta = np.deg2rad(45.0) - _principal_angle(t.points)
    rot = np.array([[np.cos(delta), -np.sin(delta)], [np.sin(delta), np.cos(delta)]])
    uc = (u.points - u.points.mean(axis=0)) @ rot.T
    tc = (t.points - t.points.mean(axis=0)) @ rot.T
    return pearson_min_axis(Window(uc, u.start_index), Window(tc, t.start_index))


def ss_ratio_2d(u: Window, t: Window) -> SimilarityScore:
    """Complement of the two-dimensional residual sum-of-squares ratio.

    Both windows are mean-centred, then ``1 - sum|u - t|^2 / sum|t|^2``,
    clamped to [-1, 1]. Centring removes any constant offset but the
    score is deliberately sensitive to scaling of the input.
    """
    _check_pair(u, t)
    uc = u.points - u.points.mean(axis=0)
    tc = t.points - t.points.mean(axis=0)
    denom = float((tc**2).sum())
    if denom == 0.0:
        return SimilarityScore(0.0, degenerate=True)
    r = 1.0 - float(((uc - tc) ** 2).sum()) / denom
    return SimilarityScore(min(1.0, max(-1.0, r)))


def norm_euclidean_deriv(u: Window, t: Window) -> SimilarityScore:
    """Similarity from the distance between RMS-normalised derivatives.

    ``1 / (1 + d)`` where d is the mean Euclidean distance between the
    per-sample first differences of both windows, each difference sequence
    scaled to unit RMS magnitude. Bounded in (0, 1].
    """
    _check_pair(u, t, min_len=4)
    du = np.diff(u.points, axis=0)
    dt = np.diff(t.points, axis=0)
    rms_u = float(np.sqrt((du**2).sum(axis=1).mean()))
    rms_t = float(np.sqrt((dt**2).sum(axis=1).mean()))
    if rms_u == 0.0 or rms_t == 0.0:
        return SimilarityScore(0.0, degenerate=True)
    d = float(np.linalg.norm(du / rms_u - dt / rms_t, axis=1).mean())
    return SimilarityScore(1.0 / (1.0 + d))


def regression_slope_similarity(u: Window, t: Window) -> SimilarityScore:
    """Per-axis least-squares slope of u against t, folded into [0, 1].

    A slope of exactly 1 scores 1.0 and the score decays linearly with
    |slope - 1|, so the measure rejects any scaling of the input.
    """
    _check_pair(u, t)
    sims = []
    degenerate = False
    for ax in range(2):
        tv = t.points[:, ax] - t.points[:, ax].mean()
        uv = u.points[:, ax] - u.points[:, ax].mean()
        var_t = float(tv @ tv)
        if var_t == 0.0:
            sims.append(0.0)
            degenerate = True
            continue
        b = float(tv @ uv) / var_t
        sims.append(1.0 - min(abs(b - 1.0), 1.0))
    return SimilarityScore(min(sims), degenerate=degenerate)


def _dominant_frequency(points: np.ndarray, sample_rate_hz: float) -> float:
    """Signed frequency of the strongest non-DC bin of x + iy."""
    z = (points[:, 0] - points[:, 0].mean()) + 1j * (points[:, 1] - points[:, 1].mean())
    spectrum = np.abs(np.fft.fft(z))
    freqs = np.fft.fftfreq(len(z), d=1.0 / sample_rate_hz)
    k = 1 + int(np.argmax(spectrum[1:]))
    return float(freqs[k])


def dominant_frequency_similarity(u: Window, t: Window, sample_rate_hz: float) -> SimilarityScore:
    """Closeness of dominant signed frequencies, 1 at equality.

    Built on the complex sequence x + iy so opposite traversal directions
    land on opposite-sign frequencies and score poorly against each other.
    """
    _check_pair(u, t, min_len=8)
    if sample_rate_hz <= 0:
        raise ValueError("sample_rate_hz must be positive")
    fu = _dominant_frequency(u.points, sample_rate_hz)
    ft = _dominant_frequency(t.points, sample_rate_hz)
    nyquist = sample_rate_hz / 2.0
    return SimilarityScore(min(1.0, max(0.0, 1.0 - abs(fu - ft) / nyquist)))


def variance_ratio(summed: Window, disturbance: Window) -> VarianceComponents:
    """Ratio of total variance of the summed motion to the disturbance.

    In the stabilisation paradigm the user cancels a target's pseudo-random
    disturbance; a perfectly stabilised target leaves the summed motion
    constant, so a low ratio is strong evidence of selection intent.
    """
    _check_pair(summed, disturbance)
    sc = summed.points - summed.points.mean(axis=0)
    dc = disturbance.points - disturbance.points.mean(axis=0)
    # total variance = sum of the per-axis variances
    sigma_s = float((sc**2).sum()) / len(summed)
    sigma_f = float((dc**2).sum()) / len(disturbance)
    if sigma_f <= 0.0:
        raise ValueError("disturbance window has zero variance")
    return VarianceComponents(sigma_s, sigma_f, sigma_s / sigma_f)


def invariance_flags(measure) -> InvarianceFlags:
    kind = measure.kind if isinstance(measure, Measure) else measure
    if kind not in _FLAGS:
        raise ValueError(f"unknown measure kind {kind!r}")
    return _FLAGS[kind]


def score(measure: Measure, u: Window, t: Window) -> SimilarityScore:
    """Evaluate a measure by kind on an (input, target) window pair."""
    kind = measure.kind
    if kind == "pearson_min_axis":
        return pearson_min_axis(u, t)
    if kind == "rotated_correlation":
        return rotated_correlation(u, t)
    if kind == "ss_ratio_2d":
        return ss_ratio_2d(u, t)
    if kind == "norm_euclidean_deriv":
        return norm_euclidean_deriv(u, t)
    if kind == "regression_slope":
        return regression_slope_similarity(u, t)
    if kind == "dominant_frequency":
        if measure.sample_rate_hz is None:
            raise ValueError("dominant_frequency needs sample_rate_hz")
        return dominant_frequency_similarity(u, t, measure.sample_rate_hz)
    if kind == "variance_ratio":
        comps = variance_ratio(u, t)
        return SimilarityScore(comps.ratio)
    raise ValueError(f"unknown measure kind {kind!r}")
