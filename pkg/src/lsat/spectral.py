"""Spectrograms of uniformly sampled intensity series.

Frames are consecutive windowed slices (hann by default, rectangular for
energy checks), transformed with the DFT, squared to power and expressed
in dB relative to the global maximum with a floor at -300 dB. The output
keeps the one-sided spectrum (bins 0 .. window_length // 2) together with
frame start times and bin frequencies, and serializes to a CSV matrix.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonUniformSampling, TooShort
from .segments import TimeSeries

DB_FLOOR = -300.0
SPACING_TOLERANCE = 1e-9

WINDOWS = {
    "rectangular": np.ones,
    "hann": np.hanning,
}


@dataclass(frozen=True)
class Spectrogram:
    """Power frames in dB re global max, plus the axis metadata."""

    frames: np.ndarray  # F x B, entries <= 0 dB
    frame_hop: float  # seconds between frame starts
    bin_width: float  # Hz per DFT bin
    window_length: int
    times: np.ndarray  # frame start times, seconds
    frequencies: np.ndarray  # bin center frequencies, Hz


def dft(series) -> np.ndarray:
    """Discrete Fourier transform X[k] = sum_n x[n] exp(-2 pi i k n / N)."""
    x = np.asarray(series, dtype=complex)
    if x.ndim != 1 or x.size < 1:
        raise DimensionMismatch("dft input must be a nonempty 1-d sequence")
    return np.fft.fft(x)


def frame_count(n: int, window_length: int, hop: int) -> int:
    return (n - window_length) // hop + 1


def spectrogram(
    series: TimeSeries,
    window_length: int,
    hop: int,
    window: str = "hann",
) -> Spectrogram:
    """Short-time power spectrogram of a uniformly sampled series.

    Raises TooShort when the series holds fewer points than one window
    and NonUniformSampling when consecutive spacings differ from the
    first spacing by more than 1e-9 s.
    """
    n = len(series)
    if window_length < 1 or hop < 1:
        raise ValueError("window_length and hop must be positive")
    if n < window_length or n < 2:
        raise TooShort(f"series has {n} points, needs at least {window_length}")
    if window not in WINDOWS:
        raise ValueError(f"unknown window {window!r}; use one of {sorted(WINDOWS)}")
    spacing = np.diff(series.timestamps)
    dt = spacing[0]
    if np.max(np.abs(spacing - dt)) > SPACING_TOLERANCE:
        raise NonUniformSampling(
            f"series {series.id!r} spacing varies beyond {SPACING_TOLERANCE:g} s"
        )

    taper = WINDOWS[window](window_length)
    n_frames = frame_count(n, window_length, hop)
    n_bins = window_length // 2 + 1
    power = np.empty((n_frames, n_bins))
    for f in range(n_frames):
        chunk = series.intensities[f * hop : f * hop + window_length]
        spectrum = dft(chunk * taper)[:n_bins]
        power[f] = np.abs(spectrum) ** 2

    peak = power.max()
    if peak > 0.0:
        with np.errstate(divide="ignore"):
            db = 10.0 * np.log10(power / peak)
    else:
        db = np.full_like(power, DB_FLOOR)
    db = np.maximum(db, DB_FLOOR)

    fs = 1.0 / dt
    return Spectrogram(
        frames=db,
        frame_hop=float(hop * dt),
        bin_width=float(fs / window_length),
        window_length=window_length,
        times=series.timestamps[0] + np.arange(n_frames) * hop * dt,
        frequencies=np.arange(n_bins) * fs / window_length,
    )


def to_csv(spec: Spectrogram) -> str:
    """CSV matrix: header row of bin frequencies (Hz), then one row per
    frame starting with its start time (s); all numbers carry 6
    significant digits."""
    buf = io.StringIO()
    buf.write("," + ",".join(f"{f:.6g}" for f in spec.frequencies) + "\n")
    for t, row in zip(spec.times, spec.frames):
        buf.write(f"{t:.6g}," + ",".join(f"{v:.6g}" for v in row) + "\n")
    return buf.getvalue()
