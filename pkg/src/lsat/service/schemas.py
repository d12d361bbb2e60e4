"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class Matrix4(BaseModel):
    components: list[list[float]]


class StrainRequest(BaseModel):
    h_plus: float
    h_cross: float = 0.0
    phase: float = 0.0


class StrainResponse(Matrix4):
    h_plus: float
    h_cross: float


class PointModel(BaseModel):
    t: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0


class FieldSpec(BaseModel):
    """Named metric family: flat, power-law expanding, or a plane strain wave."""

    kind: str = "flat"
    exponent: float = 1.0
    h_plus: float = 0.0
    h_cross: float = 0.0
    omega: float = 1.0
    light_speed: float = 1.0


class CurvatureRequest(BaseModel):
    field: FieldSpec = FieldSpec()
    point: PointModel = PointModel()
    step: float = 1e-3


class CurvatureResponse(BaseModel):
    ricci: list[list[float]]
    scalar: float
    einstein: list[list[float]]


class ConstantsRequest(BaseModel):
    G: float = 6.67430e-11
    c: float = 2.99792458e8


class StressRequest(BaseModel):
    stress: list[list[float]]
    k: float


class IntervalRequest(BaseModel):
    dt: float
    dx: float
    dy: float
    dz: float
    h_plus: float = 0.0
    c: float = 1.0


class StretchRequest(BaseModel):
    h_plus: float


class StretchResponse(BaseModel):
    sx: float
    sy: float


class ValueResponse(BaseModel):
    value: float


class PathSample(BaseModel):
    position: float
    strain: float = 0.0


class PhaseSpaceRequest(BaseModel):
    length: float
    omega0: float
    light_speed: float = 2.99792458e8
    samples: list[PathSample]


class RefractivityRequest(BaseModel):
    temperature_k: float
    pressure_hpa: float
    vapor_pressure_hpa: float = 0.0


class ProfileSample(BaseModel):
    position: float
    refractivity: float


class PhaseAtmosphereRequest(BaseModel):
    omega0: float
    light_speed: float = 2.99792458e8
    samples: list[ProfileSample]


class NoiseRequest(BaseModel):
    seed: int = 42
    sigma: float = 0.0
    count: int = Field(1, ge=0)


class NoiseResponse(BaseModel):
    values: list[float]


class PhaseTotalRequest(BaseModel):
    space: float
    atmospheric: float
    earth: float


class PhaseTotalResponse(PhaseTotalRequest):
    total: float


class GammaSample(BaseModel):
    intensity: float
    trajectory: float
    channel: int


class AssembleRequest(BaseModel):
    samples: list[GammaSample]
    intensity_bins: int = Field(ge=1)
    trajectory_bins: int = Field(ge=1)
    channels: int = Field(ge=1)


class TensorModel(BaseModel):
    dims: tuple[int, int, int]
    values: list[float]  # row-major
    mask: list[bool] | None = None


class SignatureValueRequest(BaseModel):
    tensor: TensorModel
    weights: list[float]
    cell_measure: float = 1.0


class AggregateRequest(BaseModel):
    tensors: list[TensorModel]


class AggregateResponse(BaseModel):
    dims: tuple[int, int, int]
    values: list[float]
    count: int


class SeriesModel(BaseModel):
    id: str
    timestamps: list[float]
    intensities: list[float]


class SegmentRequest(BaseModel):
    series: SeriesModel
    window: float
    profile_length: int = 64


class SegmentModel(BaseModel):
    series_id: str
    index: int
    start: float
    duration: float
    profile: list[float]


class ChordRequest(BaseModel):
    segments: list[SegmentModel]
    threshold: float
    sub_window: int | None = None


class ChordModel(BaseModel):
    a: SegmentModel
    b: SegmentModel
    similarity: float
    amplitude: list[float]


class PredictAlternativeRequest(BaseModel):
    target: SegmentModel
    segments: list[SegmentModel]
    chords: list[ChordModel]
    epsilon: float = 1e-6


class ProfileResponse(BaseModel):
    profile: list[float]


class DftRequest(BaseModel):
    real: list[float]
    imag: list[float] | None = None


class DftResponse(BaseModel):
    real: list[float]
    imag: list[float]


class SpectrogramRequest(BaseModel):
    series: SeriesModel
    window_length: int
    hop: int
    window: str = "hann"


class SpectrogramResponse(BaseModel):
    frames: list[list[float]]
    frame_hop: float
    bin_width: float
    window_length: int
    times: list[float]
    frequencies: list[float]


class PosteriorRequest(BaseModel):
    parameters: list[float]
    prior: list[float]
    likelihood: list[float]


class PosteriorResponse(BaseModel):
    parameters: list[float]
    prior: list[float]
    likelihood: list[float]
    posterior: list[float]
    mean: float
    variance: float


class WeightEntry(BaseModel):
    rho: float
    p: float


class WeightedPredictionRequest(BaseModel):
    entries: list[WeightEntry]


class FitRequest(BaseModel):
    features: list[list[float]]
    targets: list[float]
    ridge_lambda: float = 0.0


class ModelResponse(BaseModel):
    weights: list[float]  # feature weights then intercept
    ridge_lambda: float


class PredictRequest(BaseModel):
    weights: list[float]
    ridge_lambda: float = 0.0
    features: list[float]
