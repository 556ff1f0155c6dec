"""Bayesian target inference and entropy-gated decisions.

Similarity scores become likelihoods through a step, logistic, or
empirical (kernel-density) model; Bayes' rule turns them into a belief
over "no selection" plus one state per target; a selection fires when the
belief entropy drops below a threshold and a single target dominates.
Also includes the weight-dynamics update used by the stabilisation
paradigm, where evidence is a variance ratio rather than a similarity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .similarity import Measure, SimilarityScore, VarianceComponents, score as measure_score
from .trajectory import Trajectory, window_at

__all__ = [
    "BeliefState",
    "LikelihoodModel",
    "EmpiricalPdf",
    "WmsConfig",
    "Decision",
    "PipelineStep",
    "likelihood",
    "fit_kde",
    "state_factors",
    "posterior_from_factors",
    "bayes_update",
    "entropy",
    "decide",
    "wms_update",
    "run_pipeline",
    "uniform_belief",
]

#: default similarity threshold for step/logistic models
DEFAULT_LAMBDA = 0.8
#: default logistic steepness
DEFAULT_STEEPNESS = 20.0
#: default entropy gate in bits
DEFAULT_H_THRESHOLD = 0.5
#: ties closer than this never produce a selection
TIE_EPS = 1e-12


def entropy(probs) -> float:
    """Shannon entropy in bits; 0 * log 0 counts as 0."""
    p = np.asarray(probs, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-6:
        raise ValueError("probs must be a normalized probability vector")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


@dataclass(frozen=True, eq=False)
class BeliefState:
    """Probability vector over user states plus its entropy in bits.

    With ``includes_null`` the first entry is the no-selection state and
    entry i is target i; without it entry i-1 is target i.
    """

    probs: np.ndarray
    entropy_bits: float
    includes_null: bool = True
    degenerate: bool = False

    @classmethod
    def from_probs(cls, probs, includes_null: bool = True, degenerate: bool = False) -> "BeliefState":
        p = np.asarray(probs, dtype=float)
        return cls(p, entropy(p), includes_null, degenerate)

    @property
    def n_targets(self) -> int:
        return len(self.probs) - (1 if self.includes_null else 0)


def uniform_belief(n_targets: int, includes_null: bool = True) -> BeliefState:
    k = n_targets + (1 if includes_null else 0)
    return BeliefState.from_probs(np.full(k, 1.0 / k), includes_null)


@dataclass(frozen=True, eq=False)
class EmpiricalPdf:
    """Gaussian kernel density over similarity scores."""

    sample_values: np.ndarray
    bandwidth: float
    label: str = "follow"

    def __post_init__(self):
        vals = np.asarray(self.sample_values, dtype=float)
        object.__setattr__(self, "sample_values", vals)
        if vals.ndim != 1 or len(vals) < 10:
            raise ValueError("empirical pdf needs at least 10 samples")
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValueError("bandwidth must be positive")

    def density(self, x):
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        u = (xv[:, None] - self.sample_values[None, :]) / self.bandwidth
        k = np.exp(-0.5 * u**2) / np.sqrt(2.0 * np.pi)
        out = k.sum(axis=1) / (len(self.sample_values) * self.bandwidth)
        return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out


def fit_kde(samples, bandwidth="auto", label: str = "follow") -> EmpiricalPdf:
    """Fit a Gaussian KDE; 'auto' uses Silverman's rule 1.06 * sd * n^(-1/5)."""
    vals = np.asarray(samples, dtype=float)
    if len(vals) < 10:
        raise ValueError("need at least 10 samples to fit a density")
    if bandwidth == "auto":
        sd = float(vals.std(ddof=1))
        if sd == 0.0:
            raise ValueError("cannot pick a bandwidth for zero-variance samples")
        bandwidth = 1.06 * sd * len(vals) ** (-1.0 / 5.0)
    return EmpiricalPdf(vals, float(bandwidth), label)


@dataclass(frozen=True)
class LikelihoodModel:
    """Maps a similarity score to p(score | state).

    kind 'step' thresholds at lam; 'logistic' is its soft version with the
    given steepness; 'empirical' evaluates fitted follow/null/other
    densities. For step and logistic models the scores of non-followed
    targets carry no evidence (their factor is the constant 1).
    """

    kind: str = "logistic"
    lam: float = DEFAULT_LAMBDA
    steepness: float = DEFAULT_STEEPNESS
    pdf_follow: EmpiricalPdf | None = None
    pdf_null: EmpiricalPdf | None = None
    pdf_other: EmpiricalPdf | None = None

    def __post_init__(self):
        if self.kind not in ("step", "logistic", "empirical"):
            raise ValueError(f"unknown likelihood kind {self.kind!r}")
        if not -1.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [-1, 1]")
        if self.steepness <= 0:
            raise ValueError("steepness must be positive")


def _sigmoid(x: float) -> float:
    # clamp the exponent so extreme steepness degrades to the step model
    z = min(700.0, max(-700.0, x))
    return 1.0 / (1.0 + math.exp(-z))


def likelihood(model: LikelihoodModel, r, state_role: str) -> float:
    """Evaluate p(r | role) for role 'follow', 'null', or 'other'."""
    value = r.value if isinstance(r, SimilarityScore) else float(r)
    if not math.isfinite(value):
        raise ValueError("similarity score must be finite")
    if model.kind == "step":
        follow = 1.0 if value > model.lam else 0.0
        if state_role == "follow":
            return follow
        if state_role == "null":
            return 1.0 - follow
        return 1.0
    if model.kind == "logistic":
        follow = _sigmoid(model.steepness * (value - model.lam))
        if state_role == "follow":
            return follow
        if state_role == "null":
            return 1.0 - follow
        return 1.0
    pdf = {"follow": model.pdf_follow, "null": model.pdf_null, "other": model.pdf_other}.get(state_role)
    if pdf is None:
        raise ValueError(f"empirical model is missing the {state_role!r} pdf")
    return float(pdf.density(value))


def state_factors(model: LikelihoodModel, scores) -> np.ndarray:
    """Per-state likelihood factors [null, target 1..N] for a score vector.

    Target i multiplies the follow likelihood of its own score with the
    'other' likelihood of every remaining score; the null state multiplies
    the null likelihoods of all scores (naive-Bayes independence).
    """
    values = [s.value if isinstance(s, SimilarityScore) else float(s) for s in scores]
    n = len(values)
    if n < 1:
        raise ValueError("need at least one target score")
    l_follow = np.array([likelihood(model, v, "follow") for v in values])
    l_null = np.array([likelihood(model, v, "null") for v in values])
    l_other = np.array([likelihood(model, v, "other") for v in values])
    factors = np.empty(n + 1)
    factors[0] = float(np.prod(l_null))
    other_prod = float(np.prod(l_other))
    for i in range(n):
        if l_other[i] > 0:
            factors[1 + i] = l_follow[i] * other_prod / l_other[i]
        else:
            factors[1 + i] = l_follow[i] * float(np.prod(np.delete(l_other, i)))
    return factors


def posterior_from_factors(prior: BeliefState, factors) -> BeliefState:
    """Normalize prior * factors; all-zero mass falls back to uniform.

    The uniform fallback is flagged degenerate: it means the model assigned
    zero likelihood to every state, which a step model can legitimately do.
    """
    f = np.asarray(factors, dtype=float)
    if len(f) != len(prior.probs):
        raise ValueError(f"{len(f)} factors for {len(prior.probs)} states")
    if np.any(f < 0):
        raise ValueError("likelihood factors must be >= 0")
    un = prior.probs * f
    total = float(un.sum())
    if total <= 0.0:
        return BeliefState.from_probs(
            np.full(len(un), 1.0 / len(un)), prior.includes_null, degenerate=True
        )
    return BeliefState.from_probs(un / total, prior.includes_null)


def bayes_update(prior: BeliefState, scores, model: LikelihoodModel) -> BeliefState:
    """Posterior belief from a prior and one similarity score per target."""
    if not prior.includes_null:
        raise ValueError("bayes_update expects a prior with a null state")
    factors = state_factors(model, scores)
    if len(factors) != len(prior.probs):
        raise ValueError(f"got {len(factors) - 1} scores for {prior.n_targets} targets")
    return posterior_from_factors(prior, factors)


@dataclass(frozen=True)
class WmsConfig:
    """Weight dynamics: additive evidence below the ratio threshold,
    multiplicative attenuation above it."""

    alpha: float = 1.0
    beta: float = 0.9
    threshold: float = 0.5
    additive: str = "gap"  # 'gap': alpha*(v - ratio); 'literal': alpha*ratio

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if not 0 < self.threshold <= 1:
            raise ValueError("threshold must lie in (0, 1]")
        if self.additive not in ("gap", "literal"):
            raise ValueError("additive must be 'gap' or 'literal'")


def wms_update(weights, ratios, cfg: WmsConfig = WmsConfig()) -> tuple[np.ndarray, BeliefState]:
    """One step of the stabilisation weight dynamics.

    Targets whose variance ratio is below the threshold gain weight
    (stronger evidence the lower the ratio); all others are attenuated by
    beta. The normalized weights are the belief (no null state here).
    """
    w = np.asarray(weights, dtype=float).copy()
    r = np.array([c.ratio if isinstance(c, VarianceComponents) else float(c) for c in ratios])
    if len(w) != len(r):
        raise ValueError("weights and ratios must have the same length")
    if np.any(w <= 0):
        raise ValueError("weights must be strictly positive")
    if np.any(r < 0):
        raise ValueError("variance ratios must be >= 0")
    below = r < cfg.threshold
    if cfg.additive == "gap":
        w[below] += cfg.alpha * (cfg.threshold - r[below])
    else:
        w[below] += cfg.alpha * r[below]
    w[~below] *= cfg.beta
    return w, BeliefState.from_probs(w / w.sum(), includes_null=False)


@dataclass(frozen=True)
class Decision:
    """Outcome of an entropy gate: a selected target id (1-based) or none."""

    selected: int | None
    entropy_at_decision: float
    winning_prob: float

    @property
    def undecided(self) -> bool:
        return self.selected is None


def decide(belief: BeliefState, h_threshold: float = DEFAULT_H_THRESHOLD) -> Decision:
    """Select the dominating target once entropy falls below the gate.

    Never selects the null state, and never selects while the two largest
    probabilities are tied (within a tiny epsilon).
    """
    p = belief.probs
    k = int(np.argmax(p))
    top = np.partition(p, -2)[-2:] if len(p) >= 2 else p
    tied = len(p) >= 2 and abs(top[1] - top[0]) <= TIE_EPS
    if belief.entropy_bits < h_threshold and not tied:
        if belief.includes_null:
            if k > 0:
                return Decision(k, belief.entropy_bits, float(p[k]))
        else:
            return Decision(k + 1, belief.entropy_bits, float(p[k]))
    return Decision(None, belief.entropy_bits, float(p[k]))


@dataclass(frozen=True, eq=False)
class PipelineStep:
    start: int
    scores: list
    belief: BeliefState
    decision: Decision


def run_pipeline(
    input_traj: Trajectory,
    targets: list[Trajectory],
    measure: Measure,
    model: LikelihoodModel,
    w: int,
    h_threshold: float = DEFAULT_H_THRESHOLD,
    prior: BeliefState | None = None,
    carry_over: bool = False,
    carry_rate: float = 0.1,
    stride: int = 1,
) -> list[PipelineStep]:
    """Slide a window over the input and infer a belief at each position.

    Each step scores the input window against every target's window over
    the same sample interval (target windows wrap on closed paths),
    applies Bayes' rule from the supplied prior, and runs the entropy
    gate. Updates are instantaneous by default: each window is judged
    from the same prior. With ``carry_over`` the posterior, mixed with
    the uniform distribution at ``carry_rate``, becomes the next prior.
    """
    if not targets:
        raise ValueError("need at least one target")
    if any(t.sample_rate_hz != input_traj.sample_rate_hz for t in targets):
        raise ValueError("input and targets must share a sample rate")
    if w > len(input_traj):
        raise ValueError("window longer than the input")
    if prior is None:
        prior = uniform_belief(len(targets))
    if prior.n_targets != len(targets):
        raise ValueError("prior size does not match the number of targets")

    current = prior
    steps: list[PipelineStep] = []
    uniform = np.full(len(targets) + 1, 1.0 / (len(targets) + 1))
    for s in range(0, len(input_traj) - w + 1, stride):
        uw = window_at(input_traj, s, w)
        scores = [measure_score(measure, uw, window_at(t, s, w, wrap=t.closed)) for t in targets]
        belief = bayes_update(current, scores, model)
        decision = decide(belief, h_threshold)
        steps.append(PipelineStep(s, scores, belief, decision))
        if carry_over:
            mixed = (1.0 - carry_rate) * belief.probs + carry_rate * uniform
            current = BeliefState.from_probs(mixed)
    return steps
