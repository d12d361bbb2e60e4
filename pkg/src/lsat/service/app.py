"""HTTP service exposing the toolkit's compute operations.

Stateless wrappers around the core package: every endpoint takes its data
in the request body and returns the result, so any number of clients can
share one instance. Domain errors map to HTTP 422 with the error class in
the payload. Run with `uvicorn lsat.service.app:app`.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, inference, propagation, segments, signature, spectral, tensors
from ..errors import LsatError
from . import schemas as s

app = FastAPI(title="lsat", version=__version__)


@app.exception_handler(LsatError)
async def lsat_error_handler(request: Request, exc: LsatError):
    return JSONResponse(
        status_code=422,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.exception_handler(ValueError)
async def value_error_handler(request: Request, exc: ValueError):
    return JSONResponse(
        status_code=422,
        content={"error": "ValueError", "detail": str(exc)},
    )


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


# -- tensors ---------------------------------------------------------------

@app.get("/tensors/minkowski", response_model=s.Matrix4)
def minkowski():
    return s.Matrix4(components=tensors.minkowski().components.tolist())


@app.post("/tensors/tt-strain", response_model=s.StrainResponse)
def tt_strain(req: s.StrainRequest):
    strain = tensors.tt_strain(req.h_plus, req.h_cross, req.phase)
    return s.StrainResponse(
        components=strain.components.tolist(),
        h_plus=strain.h_plus,
        h_cross=strain.h_cross,
    )


def _field(spec: s.FieldSpec) -> tensors.MetricField:
    if spec.kind == "flat":
        return tensors.flat_field()
    if spec.kind == "power-law":
        return tensors.power_law_field(spec.exponent)
    if spec.kind == "tt-wave":
        return tensors.tt_wave_field(
            spec.h_plus, spec.h_cross, spec.omega, spec.light_speed
        )
    raise LsatError(f"unknown field kind {spec.kind!r}; use flat, power-law or tt-wave")


@app.post("/tensors/curvature", response_model=s.CurvatureResponse)
def curvature(req: s.CurvatureRequest):
    p = tensors.SpacetimePoint(req.point.t, req.point.x, req.point.y, req.point.z)
    res = tensors.curvature(_field(req.field), p, req.step)
    return s.CurvatureResponse(
        ricci=res.ricci.tolist(), scalar=res.scalar, einstein=res.einstein.tolist()
    )


@app.post("/tensors/einstein-constant", response_model=s.ValueResponse)
def einstein_constant(req: s.ConstantsRequest):
    return s.ValueResponse(
        value=tensors.einstein_constant(tensors.PhysicalConstants(req.G, req.c))
    )


@app.post("/tensors/stress-curvature", response_model=s.Matrix4)
def stress_curvature(req: s.StressRequest):
    return s.Matrix4(components=tensors.curvature_from_stress(req.stress, req.k).tolist())


@app.post("/tensors/interval", response_model=s.ValueResponse)
def interval(req: s.IntervalRequest):
    return s.ValueResponse(
        value=tensors.interval(req.dt, req.dx, req.dy, req.dz, req.h_plus, req.c)
    )


@app.post("/tensors/stretch", response_model=s.StretchResponse)
def stretch(req: s.StretchRequest):
    sx, sy = tensors.stretch_factor(req.h_plus)
    return s.StretchResponse(sx=sx, sy=sy)


# -- propagation -----------------------------------------------------------

@app.post("/phase/space", response_model=s.ValueResponse)
def phase_space(req: s.PhaseSpaceRequest):
    path = propagation.PhasePath(
        length=req.length,
        omega0=req.omega0,
        positions=np.array([p.position for p in req.samples]),
        strains=np.array([p.strain for p in req.samples]),
    )
    return s.ValueResponse(value=propagation.phase_space(path, req.light_speed))


@app.post("/phase/refractivity", response_model=s.ValueResponse)
def refractivity(req: s.RefractivityRequest):
    return s.ValueResponse(
        value=propagation.refractivity(
            req.temperature_k, req.pressure_hpa, req.vapor_pressure_hpa
        )
    )


@app.post("/phase/atmospheric", response_model=s.ValueResponse)
def phase_atmospheric(req: s.PhaseAtmosphereRequest):
    profile = propagation.AtmosphericProfile(
        positions=np.array([p.position for p in req.samples]),
        refractivity=np.array([p.refractivity for p in req.samples]),
    )
    return s.ValueResponse(
        value=propagation.phase_atmospheric(req.omega0, profile, req.light_speed)
    )


@app.post("/phase/noise", response_model=s.NoiseResponse)
def phase_noise(req: s.NoiseRequest):
    values = propagation.phase_earth_noise(req.seed, req.sigma, req.count)
    return s.NoiseResponse(values=values.tolist())


@app.post("/phase/total", response_model=s.PhaseTotalResponse)
def phase_total(req: s.PhaseTotalRequest):
    shift = propagation.total_phase(req.space, req.atmospheric, req.earth)
    return s.PhaseTotalResponse(
        space=shift.space,
        atmospheric=shift.atmospheric,
        earth=shift.earth,
        total=shift.total,
    )


# -- signature ---------------------------------------------------------------

def _tensor(model: s.TensorModel) -> signature.SignatureTensor:
    values = np.array(model.values, dtype=float).reshape(model.dims)
    if model.mask is None:
        mask = np.ones(model.dims, dtype=bool)
    else:
        mask = np.array(model.mask, dtype=bool).reshape(model.dims)
    return signature.SignatureTensor(values=values, mask=mask)


def _tensor_model(t: signature.SignatureTensor) -> s.TensorModel:
    return s.TensorModel(
        dims=t.dims,
        values=t.values.ravel(order="C").tolist(),
        mask=t.mask.ravel(order="C").tolist(),
    )


@app.post("/signature/assemble", response_model=s.TensorModel)
def assemble(req: s.AssembleRequest):
    gamma = signature.assemble_gamma(
        [(x.intensity, x.trajectory, x.channel) for x in req.samples],
        req.intensity_bins,
        req.trajectory_bins,
        req.channels,
    )
    return _tensor_model(gamma)


@app.post("/signature/value", response_model=s.ValueResponse)
def signature_value(req: s.SignatureValueRequest):
    value = signature.signature_value(
        _tensor(req.tensor),
        signature.AdjustmentWeights(np.array(req.weights)),
        req.cell_measure,
    )
    return s.ValueResponse(value=value)


@app.post("/signature/aggregate", response_model=s.AggregateResponse)
def aggregate(req: s.AggregateRequest):
    agg = signature.aggregate_phi([_tensor(t) for t in req.tensors])
    return s.AggregateResponse(
        dims=agg.values.shape, values=agg.values.ravel(order="C").tolist(), count=agg.count
    )


# -- segments ----------------------------------------------------------------

def _series(model: s.SeriesModel) -> segments.TimeSeries:
    return segments.TimeSeries(
        id=model.id,
        timestamps=np.array(model.timestamps),
        intensities=np.array(model.intensities),
    )


def _segment(model: s.SegmentModel) -> segments.IsochronousSegment:
    return segments.IsochronousSegment(
        series_id=model.series_id,
        index=model.index,
        start=model.start,
        duration=model.duration,
        profile=np.array(model.profile),
    )


def _segment_model(x: segments.IsochronousSegment) -> s.SegmentModel:
    return s.SegmentModel(
        series_id=x.series_id,
        index=x.index,
        start=x.start,
        duration=x.duration,
        profile=x.profile.tolist(),
    )


@app.post("/segments/split", response_model=list[s.SegmentModel])
def split(req: s.SegmentRequest):
    parts = segments.segment_series(_series(req.series), req.window, req.profile_length)
    return [_segment_model(x) for x in parts]


@app.post("/segments/chords", response_model=list[s.ChordModel])
def chords(req: s.ChordRequest):
    found = segments.link_chords(
        [_segment(m) for m in req.segments], req.threshold, req.sub_window
    )
    return [
        s.ChordModel(
            a=_segment_model(c.a),
            b=_segment_model(c.b),
            similarity=c.similarity,
            amplitude=c.amplitude.tolist(),
        )
        for c in found
    ]


@app.post("/segments/predict-alternative", response_model=s.ProfileResponse)
def predict_alternative(req: s.PredictAlternativeRequest):
    chords_in = [
        segments.GraphChord(
            a=_segment(c.a),
            b=_segment(c.b),
            similarity=c.similarity,
            amplitude=np.array(c.amplitude),
        )
        for c in req.chords
    ]
    profile = segments.predict_alternative(
        _segment(req.target),
        chords_in,
        [_segment(m) for m in req.segments],
        req.epsilon,
    )
    return s.ProfileResponse(profile=profile.tolist())


# -- spectral ----------------------------------------------------------------

@app.post("/spectral/dft", response_model=s.DftResponse)
def dft(req: s.DftRequest):
    x = np.array(req.real, dtype=complex)
    if req.imag is not None:
        if len(req.imag) != len(req.real):
            raise LsatError("imag length must match real length")
        x = x + 1j * np.array(req.imag)
    out = spectral.dft(x)
    return s.DftResponse(real=out.real.tolist(), imag=out.imag.tolist())


@app.post("/spectral/spectrogram", response_model=s.SpectrogramResponse)
def spectrogram(req: s.SpectrogramRequest):
    spec = spectral.spectrogram(
        _series(req.series), req.window_length, req.hop, req.window
    )
    return s.SpectrogramResponse(
        frames=spec.frames.tolist(),
        frame_hop=spec.frame_hop,
        bin_width=spec.bin_width,
        window_length=spec.window_length,
        times=spec.times.tolist(),
        frequencies=spec.frequencies.tolist(),
    )


# -- inference ---------------------------------------------------------------

@app.post("/inference/posterior", response_model=s.PosteriorResponse)
def posterior(req: s.PosteriorRequest):
    grid = inference.PosteriorGrid.from_prior(req.parameters, req.prior)
    updated = inference.grid_posterior(grid, req.likelihood)
    return s.PosteriorResponse(
        parameters=updated.parameters.tolist(),
        prior=updated.prior.tolist(),
        likelihood=updated.likelihood.tolist(),
        posterior=updated.posterior.tolist(),
        mean=updated.mean(),
        variance=updated.variance(),
    )


@app.post("/inference/weighted-prediction", response_model=s.ValueResponse)
def weighted_prediction(req: s.WeightedPredictionRequest):
    entries = [inference.SegmentWeight(e.rho, e.p) for e in req.entries]
    return s.ValueResponse(value=inference.weighted_prediction(entries))


@app.post("/inference/fit", response_model=s.ModelResponse)
def fit(req: s.FitRequest):
    model = inference.fit_baseline(req.features, req.targets, req.ridge_lambda)
    return s.ModelResponse(weights=model.weights.tolist(), ridge_lambda=model.ridge_lambda)


@app.post("/inference/predict", response_model=s.ValueResponse)
def predict(req: s.PredictRequest):
    model = inference.BaselineModel(
        weights=np.array(req.weights), ridge_lambda=req.ridge_lambda
    )
    return s.ValueResponse(value=inference.predict_baseline(model, np.array(req.features)))
