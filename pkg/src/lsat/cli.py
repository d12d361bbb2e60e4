"""Command-line front end.

Each subcommand wires one operation group: ingest -> segment -> chords ->
spectrogram / signature -> aggregate -> posterior / predict, plus phase
and curvature-check utilities. Exit codes: 0 success, 1 runtime error
(message on stderr), 2 usage error. File outputs go only under --out and
are written through a temp file + rename, so failures never leave partial
files. Randomness always flows from an explicit --seed.

Input stores resolve from --in when given, else from conventional names
(series.lsat, segments.lsat, signatures.lsat) under the data directory:
--data-dir, else $LSAT_DATA_DIR, else ./data.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import inference, propagation, segments as seg, signature as sig, spectral, store, tensors
from .errors import LsatError

SERIES_FILE = "series.lsat"
SEGMENTS_FILE = "segments.lsat"
CHORDS_FILE = "chords.lsat"
SIGNATURES_FILE = "signatures.lsat"
AGGREGATE_FILE = "aggregate.lsat"


def _data_dir(args) -> Path:
    if args.data_dir:
        return Path(args.data_dir)
    return Path(os.environ.get("LSAT_DATA_DIR", "data"))


def _resolve_in(args, default_name: str) -> Path:
    if getattr(args, "infile", None):
        return Path(args.infile)
    return _data_dir(args) / default_name


def _write_text(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp.{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _iso(epoch: float) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).isoformat()


def _floats(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part != ""]


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_ingest(args) -> int:
    src = Path(args.infile)
    if src.is_dir():
        files = sorted(src.glob("*.csv"))
        if not files:
            raise LsatError(f"no *.csv files under {src}")
    else:
        files = [src]
    samples = []
    for path in files:
        samples.extend(store.read_weather_csv(path))
    series_list = store.series_from_samples(samples)
    out_dir = Path(args.out) if args.out else _data_dir(args)
    st = store.SeriesStore(series={s.id: s for s in series_list})
    store.save_store(st, out_dir / SERIES_FILE)
    print(f"ingested {len(series_list)} series -> {out_dir / SERIES_FILE}")
    return 0


def _load_series(args) -> store.SeriesStore:
    st = store.load_store(_resolve_in(args, SERIES_FILE))
    if not isinstance(st, store.SeriesStore):
        raise LsatError("input store does not hold series")
    return st


def _cmd_segment(args) -> int:
    st = _load_series(args)
    ids = [args.series] if args.series else sorted(st.series)
    out = store.SegmentStore()
    for sid in ids:
        if sid not in st.series:
            raise LsatError(f"series {sid!r} not found")
        out.segments.extend(
            seg.segment_series(st.series[sid], args.window, args.profile_len)
        )
    dest = Path(args.out) if args.out else _data_dir(args) / SEGMENTS_FILE
    store.save_store(out, dest)
    print(f"{len(out.segments)} segments -> {dest}")
    return 0


def _cmd_chords(args) -> int:
    st = store.load_store(_resolve_in(args, SEGMENTS_FILE))
    if not isinstance(st, store.SegmentStore):
        raise LsatError("input store does not hold segments")
    out = store.SegmentStore(segments=list(st.segments))
    by_series: dict[str, list] = {}
    for s in st.segments:
        by_series.setdefault(s.series_id, []).append(s)
    for sid in sorted(by_series):
        group = sorted(by_series[sid], key=lambda s: s.index)
        out.chords.extend(seg.link_chords(group, args.threshold, args.sub_window))
    dest = Path(args.out) if args.out else _data_dir(args) / CHORDS_FILE
    store.save_store(out, dest)
    print(f"{len(out.chords)} chords -> {dest}")
    return 0


def _cmd_spectrogram(args) -> int:
    st = _load_series(args)
    if args.series not in st.series:
        raise LsatError(f"series {args.series!r} not found")
    spec = spectral.spectrogram(
        st.series[args.series], args.window, args.hop, args.window_type
    )
    _write_text(Path(args.out), spectral.to_csv(spec))
    print(f"{spec.frames.shape[0]} frames x {spec.frames.shape[1]} bins -> {args.out}")
    return 0


def gamma_samples(series: seg.TimeSeries, channels: int):
    """Samples for signature assembly: intensity, position of the sample
    in the series' time span (0..1), and sample index modulo the channel
    count."""
    t = series.timestamps
    span = t[-1] - t[0]
    rel = (t - t[0]) / span if span > 0 else np.full(t.shape, 0.5)
    return [
        (float(series.intensities[k]), float(rel[k]), int(k % channels))
        for k in range(len(series))
    ]


def _cmd_signature(args) -> int:
    bins = [int(v) for v in args.bins.split(",")]
    if len(bins) != 3:
        raise LsatError("--bins must be I,D,T")
    i_bins, d_bins, t_bins = bins
    st = _load_series(args)
    ids = [args.series] if args.series else sorted(st.series)
    out = store.SignatureStore()
    for sid in ids:
        if sid not in st.series:
            raise LsatError(f"series {sid!r} not found")
        series = st.series[sid]
        gamma = sig.assemble_gamma(gamma_samples(series, t_bins), i_bins, d_bins, t_bins)
        out.add(
            sid,
            store.SignatureRecord(
                tensor=gamma,
                city=sid,
                start=_iso(series.timestamps[0]),
                end=_iso(series.timestamps[-1]),
            ),
        )
        if args.series:
            ones = sig.AdjustmentWeights(np.ones(t_bins))
            value = sig.signature_value(gamma, ones, 1.0)
            print(f"{sid}: signature value {value!r}")
    dest = Path(args.out) if args.out else _data_dir(args) / SIGNATURES_FILE
    store.save_store(out, dest)
    print(f"{len(out.records)} signature tensors -> {dest}")
    return 0


def _cmd_aggregate(args) -> int:
    st = store.load_store(_resolve_in(args, SIGNATURES_FILE))
    if not isinstance(st, store.SignatureStore):
        raise LsatError("input store does not hold signature tensors")
    tensors_in = [st.records[k].tensor for k in sorted(st.records)]
    agg = sig.aggregate_phi(tensors_in)
    out = store.SegmentStore(aggregate=agg)
    dest = Path(args.out) if args.out else _data_dir(args) / AGGREGATE_FILE
    store.save_store(out, dest)
    print(f"aggregated {agg.count} tensors -> {dest}")
    return 0


def _cmd_phase(args) -> int:
    amp = args.strain_amp
    cycles = args.strain_cycles
    path = propagation.PhasePath.from_function(
        args.length,
        args.omega0,
        lambda x: amp * math.sin(2.0 * math.pi * cycles * x / args.length),
        args.samples,
    )
    space = propagation.phase_space(path, args.light_speed)

    if args.temperature_k is not None:
        n_units = propagation.refractivity(
            args.temperature_k, args.pressure_hpa, args.vapor_hpa
        )
    else:
        n_units = args.refractivity
    profile = propagation.AtmosphericProfile(
        positions=np.array([0.0, args.length]),
        refractivity=np.array([n_units, n_units]),
    )
    atmospheric = propagation.phase_atmospheric(args.omega0, profile, args.light_speed)

    draws = propagation.phase_earth_noise(args.seed, args.sigma, args.noise_samples)
    earth = float(np.sum(draws))
    shift = propagation.total_phase(space, atmospheric, earth)
    payload = json.dumps(
        {
            "space": shift.space,
            "atmospheric": shift.atmospheric,
            "earth": shift.earth,
            "total": shift.total,
        },
        sort_keys=True,
        indent=2,
    )
    if args.out:
        _write_text(Path(args.out), payload + "\n")
    print(payload)
    return 0


def _curvature_checks(step: float):
    def upper(name, measured, bound):
        return name, f"{measured:.3e} <= {bound:.0e}", measured <= bound

    flat = tensors.flat_field()
    origin = tensors.SpacetimePoint(2.0, 0.3, -0.2, 0.5)
    gamma = tensors.christoffel(flat, origin, step)
    yield upper("flat connection coefficients", float(np.max(np.abs(gamma))), 1e-8)

    flat_curv = tensors.curvature(flat, origin, step)
    flat_max = max(
        float(np.max(np.abs(flat_curv.ricci))),
        abs(flat_curv.scalar),
        float(np.max(np.abs(flat_curv.einstein))),
    )
    yield upper("flat curvature", flat_max, 1e-8)

    expanding = tensors.power_law_field(1.0)
    p = tensors.SpacetimePoint(2.0, 0.0, 0.0, 0.0)
    res = tensors.curvature(expanding, p, step)
    yield upper(
        "expanding-metric scalar vs 6/t^2 (rel)", abs(res.scalar - 1.5) / 1.5, 1e-4
    )
    yield upper(
        "expanding-metric G_tt vs 3/t^2 (rel)",
        abs(res.einstein[0, 0] - 0.75) / 0.75,
        1e-4,
    )

    errs = [
        abs(tensors.curvature(expanding, p, s).scalar - 1.5)
        for s in (4 * step, 2 * step, step)
    ]
    order = 0.5 * (math.log2(errs[0] / errs[1]) + math.log2(errs[1] / errs[2]))
    yield "curvature difference order", f"{order:.3f} within 2 +- 0.3", abs(order - 2.0) <= 0.3

    wave = lambda t, z: 1e-2 * math.cos(5.0 * (t - z / 2.0))
    res_steps = [4e-3, 2e-3, 1e-3, 5e-4]
    residuals = [abs(tensors.wave_residual(wave, 0.4, 0.1, s, 2.0)) for s in res_steps]
    ratios = [residuals[i] / residuals[i + 1] for i in range(len(residuals) - 1)]
    yield (
        "plane-wave residual halving ratios",
        f"min {min(ratios):.2f} >= 3.4",
        min(ratios) >= 3.4,
    )

    wave_field = tensors.tt_wave_field(1e-5, 0.0, omega=1.0)
    wr = tensors.curvature(wave_field, tensors.SpacetimePoint(0.3, 0.1, -0.2, 0.7), step)
    yield upper("plane-wave einstein magnitude", float(np.max(np.abs(wr.einstein))), 1e-8)


def _cmd_curvature_check(args) -> int:
    lines = []
    all_ok = True
    for name, detail, ok in _curvature_checks(args.step):
        all_ok &= ok
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name:<42} {detail}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        _write_text(Path(args.out), text)
    return 0 if all_ok else 1


def _cmd_posterior(args) -> int:
    params = np.linspace(args.grid_min, args.grid_max, args.grid_points)
    if args.prior == "uniform":
        prior = np.full(params.size, 1.0 / params.size)
    else:
        log_p = -0.5 * ((params - args.prior_mean) / args.prior_sigma) ** 2
        prior = np.exp(log_p - log_p.max())
        prior /= prior.sum()
    grid = inference.PosteriorGrid.from_prior(params, prior)

    obs = _floats(args.obs)
    if not obs:
        raise LsatError("--obs needs at least one value")
    log_l = np.zeros(params.size)
    for d in obs:
        log_l += -0.5 * ((d - params) / args.obs_sigma) ** 2
    likelihood = np.exp(log_l - log_l.max())
    updated = inference.grid_posterior(grid, likelihood)

    rows = ["parameter,prior,likelihood,posterior"]
    for k in range(params.size):
        cells = (
            updated.parameters[k],
            updated.prior[k],
            updated.likelihood[k],
            updated.posterior[k],
        )
        rows.append(",".join(repr(float(v)) for v in cells))
    text = "\n".join(rows) + "\n"
    if args.out:
        _write_text(Path(args.out), text)
    print(f"posterior mean {updated.mean()!r} variance {updated.variance()!r}")
    return 0


def _cmd_predict(args) -> int:
    if args.rho is not None or args.p is not None:
        if args.rho is None or args.p is None or args.fit is not None:
            raise UsageError("--rho and --p go together (and exclude --fit)")
        rho, p = _floats(args.rho), _floats(args.p)
        if len(rho) != len(p):
            raise LsatError("--rho and --p need equally many values")
        entries = [inference.SegmentWeight(r, q) for r, q in zip(rho, p)]
        print(repr(inference.weighted_prediction(entries)))
        return 0
    if args.fit is not None:
        if args.at is None:
            raise UsageError("--fit needs --at features")
        rows = np.loadtxt(args.fit, delimiter=",", ndmin=2)
        model = inference.fit_baseline(rows[:, :-1], rows[:, -1], args.ridge_lambda)
        print(repr(inference.predict_baseline(model, np.array(_floats(args.at)))))
        return 0
    raise UsageError("predict needs either --rho/--p or --fit/--at")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parser

def _add_common(sp) -> None:
    sp.add_argument("--data-dir", help="data directory (default $LSAT_DATA_DIR or ./data)")
    sp.add_argument("--seed", type=int, default=42, help="seed for any randomness")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsat",
        description="Light-signature analysis toolkit: ingest intensity series, "
        "segment and link them, build spectrograms and signature tensors, and "
        "run grid Bayesian updates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read weather CSVs into a series store")
    p.add_argument("--in", dest="infile", required=True, help="CSV file or directory")
    p.add_argument("--out", help="output directory (default: data dir)")
    _add_common(p)
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("segment", help="cut series into equal-duration segments")
    p.add_argument("--window", type=float, required=True, help="window length, seconds")
    p.add_argument("--series", help="restrict to one series id")
    p.add_argument("--profile-len", type=int, default=seg.PROFILE_LENGTH)
    p.add_argument("--in", dest="infile", help="series store path")
    p.add_argument("--out", help="segment store path")
    _add_common(p)
    p.set_defaults(handler=_cmd_segment)

    p = sub.add_parser("chords", help="link similar segments within each series")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--sub-window", type=int, default=None)
    p.add_argument("--in", dest="infile", help="segment store path")
    p.add_argument("--out", help="chord store path")
    _add_common(p)
    p.set_defaults(handler=_cmd_chords)

    p = sub.add_parser("spectrogram", help="write a dB spectrogram CSV for one series")
    p.add_argument("--series", required=True)
    p.add_argument("--window", type=int, required=True, help="window length, samples")
    p.add_argument("--hop", type=int, required=True, help="hop length, samples")
    p.add_argument("--window-type", choices=sorted(spectral.WINDOWS), default="hann")
    p.add_argument("--in", dest="infile", help="series store path")
    p.add_argument("--out", required=True, help="output CSV path")
    _add_common(p)
    p.set_defaults(handler=_cmd_spectrogram)

    p = sub.add_parser("signature", help="assemble signature tensors per series")
    p.add_argument("--bins", required=True, help="I,D,T bin counts")
    p.add_argument("--series", help="restrict to one series id")
    p.add_argument("--in", dest="infile", help="series store path")
    p.add_argument("--out", help="signature store path")
    _add_common(p)
    p.set_defaults(handler=_cmd_signature)

    p = sub.add_parser("aggregate", help="sum signature tensors into one aggregate")
    p.add_argument("--in", dest="infile", help="signature store path")
    p.add_argument("--out", help="aggregate store path")
    _add_common(p)
    p.set_defaults(handler=_cmd_aggregate)

    p = sub.add_parser("phase", help="accumulate light phase along a path")
    p.add_argument("--length", type=float, required=True, help="path length, m")
    p.add_argument("--omega0", type=float, required=True, help="angular frequency, rad/s")
    p.add_argument("--samples", type=int, default=1001, help="path sample count")
    p.add_argument("--strain-amp", type=float, default=0.0)
    p.add_argument("--strain-cycles", type=float, default=1.0)
    p.add_argument("--refractivity", type=float, default=0.0, help="constant N-units")
    p.add_argument("--temperature-k", type=float, help="derive refractivity instead")
    p.add_argument("--pressure-hpa", type=float, default=1013.25)
    p.add_argument("--vapor-hpa", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0, help="earth-noise sigma, rad")
    p.add_argument("--noise-samples", type=int, default=1)
    p.add_argument("--light-speed", type=float, default=2.99792458e8)
    p.add_argument("--out", help="write the JSON result here")
    _add_common(p)
    p.set_defaults(handler=_cmd_phase)

    p = sub.add_parser("curvature-check", help="run the curvature self-checks")
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--out", help="write the table here")
    _add_common(p)
    p.set_defaults(handler=_cmd_curvature_check)

    p = sub.add_parser("posterior", help="grid Bayesian update from observations")
    p.add_argument("--grid-min", type=float, required=True)
    p.add_argument("--grid-max", type=float, required=True)
    p.add_argument("--grid-points", type=int, default=1001)
    p.add_argument("--prior", choices=["uniform", "gaussian"], default="uniform")
    p.add_argument("--prior-mean", type=float, default=0.0)
    p.add_argument("--prior-sigma", type=float, default=1.0)
    p.add_argument("--obs", required=True, help="comma-separated observations")
    p.add_argument("--obs-sigma", type=float, default=1.0)
    p.add_argument("--out", help="write the grid CSV here")
    _add_common(p)
    p.set_defaults(handler=_cmd_posterior)

    p = sub.add_parser("predict", help="segment-weighted or ridge prediction")
    p.add_argument("--rho", help="comma-separated segment weights")
    p.add_argument("--p", help="comma-separated segment probabilities")
    p.add_argument("--fit", help="training CSV (feature columns then target)")
    p.add_argument("--ridge-lambda", type=float, default=0.0)
    p.add_argument("--at", help="comma-separated features to predict at")
    _add_common(p)
    p.set_defaults(handler=_cmd_predict)

    return parser


def run(argv) -> int:
    """Execute one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own message
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"lsat: {exc}", file=sys.stderr)
        return 2
    except (LsatError, OSError, ValueError) as exc:
        print(f"lsat: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
