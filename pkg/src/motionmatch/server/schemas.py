"""Pydantic models for the HTTP API and the live session protocol (v1)."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from ..similarity import resolve_measure_kind

PROTOCOL_VERSION = 1


class CircleShape(BaseModel):
    kind: Literal["circle"] = "circle"
    radius: float = Field(1.0, gt=0)


class PolygonShape(BaseModel):
    kind: Literal["polygon"] = "polygon"
    vertices: list[tuple[float, float]] = Field(min_length=3)


class PdfSpec(BaseModel):
    samples: list[float] = Field(min_length=10)
    bandwidth: Union[float, Literal["auto"]] = "auto"


class ModelSpec(BaseModel):
    kind: Literal["step", "logistic", "empirical"] = "logistic"
    lam: float = Field(0.8, ge=-1.0, le=1.0)
    steepness: float = Field(20.0, gt=0)
    pdf_follow: Optional[PdfSpec] = None
    pdf_null: Optional[PdfSpec] = None
    pdf_other: Optional[PdfSpec] = None


class SessionConfig(BaseModel):
    """Layout and inference parameters of one live selection session."""

    n_targets: int = Field(ge=1, le=32)
    shape: Union[CircleShape, PolygonShape] = Field(default_factory=CircleShape)
    speed_deg_s: float = Field(180.0, gt=0)
    directions: Optional[list[Literal["cw", "ccw"]]] = None
    measure: str = "pearson_min_axis"
    model: ModelSpec = Field(default_factory=ModelSpec)
    window: int = Field(30, ge=2)
    h_threshold: float = Field(0.5, gt=0)
    sample_rate_hz: float = Field(30.0, gt=0)

    @field_validator("measure")
    @classmethod
    def _known_measure(cls, v: str) -> str:
        return resolve_measure_kind(v)


class InputSample(BaseModel):
    t: float
    x: float
    y: float


# ---------------------------------------------------------------------------
# HTTP request/response models


class TrajectoryPayload(BaseModel):
    samples: list[tuple[float, float]] = Field(min_length=2)
    sample_rate_hz: float = Field(gt=0)
    closed: bool = False


class CircleRequest(BaseModel):
    radius: float = Field(gt=0)
    n: int = Field(ge=4)
    phase_deg: float = 0.0
    direction: Literal["cw", "ccw"] = "ccw"
    center: tuple[float, float] = (0.0, 0.0)
    sample_rate_hz: float = Field(30.0, gt=0)


class PolygonRequest(BaseModel):
    vertices: list[tuple[float, float]] = Field(min_length=3)
    n: int = Field(ge=2)
    sample_rate_hz: float = Field(30.0, gt=0)


class DistortRequest(BaseModel):
    trajectory: TrajectoryPayload
    a: tuple[tuple[float, float], tuple[float, float]] = ((1.0, 0.0), (0.0, 1.0))
    translation: tuple[float, float] = (0.0, 0.0)
    tau: int = Field(0, ge=0)
    noise_sd: float = Field(0.0, ge=0)
    seed: int = 0


class NullBehaviorRequest(BaseModel):
    n: int = Field(ge=2)
    fixation_duration_mean: float = Field(30.0, ge=0)
    saccade_amplitude_sd: float = Field(1.0, ge=0)
    fixation_jitter_sd: float = Field(0.02, ge=0)
    seed: int = 0
    sample_rate_hz: float = Field(30.0, gt=0)


class CapacityRequest(BaseModel):
    speed_deg_s: float = Field(gt=0)
    sample_rate_hz: float = Field(30.0, gt=0)
    lam: float = Field(0.8, ge=-1.0, le=1.0)
    window: int = Field(30, ge=2)
    measure: str = "pearson_min_axis"


class CapacityResponse(BaseModel):
    n_samples: int
    count_above: int
    proportion: float
    entropy_bits: float
    max_targets_bidirectional: int


class EntropyProfileRequest(BaseModel):
    trajectory: TrajectoryPayload
    window: int = Field(ge=2)
    measure: str = "pearson_min_axis"
    lambda_free: bool = True
    lam: float = Field(0.8, ge=-1.0, le=1.0)


class EntropyProfileResponse(BaseModel):
    window: int
    entropies: list[float]


class WindowSweepRequest(BaseModel):
    trajectory: TrajectoryPayload
    w_min: int = Field(5, ge=2)
    w_max: Optional[int] = None
    measure: str = "pearson_min_axis"
    lambda_free: bool = True
    lam: float = Field(0.8, ge=-1.0, le=1.0)


class WindowSweepResponse(BaseModel):
    window_sizes: list[int]
    mean_entropy: list[float]
    best_window: int


class PairwiseRequest(BaseModel):
    trajectory: TrajectoryPayload
    n_targets: int = Field(ge=1)
    window_start: int = Field(ge=0)
    window: int = Field(ge=2)
    measure: str = "pearson_min_axis"
    reference: int = Field(0, ge=0)


class PairwiseResponse(BaseModel):
    reference: int
    scores: list[float]
    degenerate: list[bool]


class RotationRequest(BaseModel):
    measure: str
    radius: float = Field(1.0, gt=0)
    n: int = Field(60, ge=4)
    window: int = Field(20, ge=2)
    noise_sd: float = Field(0.1, ge=0)
    seed: int = 0
    thetas_deg: Optional[list[float]] = None


class RotationResponse(BaseModel):
    thetas_deg: list[float]
    scores: list[float]
    value_range: float


class NoiseSweepRequest(BaseModel):
    n_targets: int = Field(16, ge=1)
    speed_deg_s: float = Field(180.0, gt=0)
    sample_rate_hz: float = Field(30.0, gt=0)
    window: int = Field(30, ge=2)
    noise_fractions: list[float] = Field(default=[0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75])
    reps: int = Field(30, ge=1)
    seed: int = 0
    lam: float = Field(0.8, ge=-1.0, le=1.0)


class NoiseSweepResponse(BaseModel):
    points: list[dict]


class FitPdfRequest(BaseModel):
    samples: list[float] = Field(min_length=10)
    bandwidth: Union[float, Literal["auto"]] = "auto"
    label: Literal["follow", "null", "other"] = "follow"
    measure: str = "pearson_min_axis"


class FitPdfResponse(BaseModel):
    measure: str
    label: str
    bandwidth: float
    samples: list[float]


class SimulateRequest(BaseModel):
    input: TrajectoryPayload
    targets: list[TrajectoryPayload] = Field(min_length=1)
    measure: str = "pearson_min_axis"
    model: ModelSpec = Field(default_factory=ModelSpec)
    window: int = Field(30, ge=2)
    h_threshold: float = Field(0.5, gt=0)
    stride: int = Field(1, ge=1)


class SimulateStep(BaseModel):
    start: int
    scores: list[float]
    probs: list[float]
    entropy_bits: float
    selected: Optional[int]


class SimulateResponse(BaseModel):
    steps: list[SimulateStep]


class HealthResponse(BaseModel):
    status: str
    version: str
