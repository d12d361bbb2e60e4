"""Equal-duration segmentation, similarity chords and chord-based prediction.

A series is cut into consecutive non-overlapping windows of one fixed
duration, each resampled to a fixed-length profile. Segments whose
profiles correlate above a threshold get linked by a chord carrying the
correlation and a vibrational amplitude: the windowed RMS of the
difference of the two z-normalized profiles. Chord partners of a target
segment then predict an alternative profile as an amplitude-weighted
convex combination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateProfile,
    DimensionMismatch,
    EmptySeries,
    NoChords,
    WindowTooLarge,
)

PROFILE_LENGTH = 64


@dataclass(frozen=True)
class TimeSeries:
    """Strictly increasing (timestamp, intensity) pairs with an id."""

    id: str
    timestamps: np.ndarray
    intensities: np.ndarray

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=float)
        xs = np.asarray(self.intensities, dtype=float)
        if ts.ndim != 1 or ts.shape != xs.shape:
            raise DimensionMismatch("timestamps and intensities must match 1-d")
        if ts.size and not np.all(np.diff(ts) > 0):
            raise ValueError(f"series {self.id!r}: timestamps must strictly increase")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "intensities", xs)
        ts.setflags(write=False)
        xs.setflags(write=False)

    def __len__(self) -> int:
        return self.timestamps.size


@dataclass(frozen=True)
class IsochronousSegment:
    """One equal-duration window of a series, resampled to a fixed profile."""

    series_id: str
    index: int
    start: float
    duration: float
    profile: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.profile, dtype=float)
        object.__setattr__(self, "profile", p)
        p.setflags(write=False)

    def key(self) -> tuple[str, int]:
        return (self.series_id, self.index)


@dataclass(frozen=True)
class GraphChord:
    """Similarity link between two distinct segments.

    similarity is the Pearson correlation of the two profiles; amplitude
    is the per-sub-window RMS of their z-normalized difference.
    """

    a: IsochronousSegment
    b: IsochronousSegment
    similarity: float
    amplitude: np.ndarray

    def __post_init__(self):
        if self.a.key() == self.b.key():
            raise ValueError("chord endpoints must differ")
        amp = np.asarray(self.amplitude, dtype=float)
        object.__setattr__(self, "amplitude", amp)
        amp.setflags(write=False)


def segment_series(
    series: TimeSeries, window: float, profile_length: int = PROFILE_LENGTH
) -> list[IsochronousSegment]:
    """Cut the series into consecutive windows of exactly `window` seconds.

    Windows start at the first timestamp and tile without gap or overlap;
    a trailing partial window is dropped. Each window's intensity is
    linearly resampled onto profile_length points spaced window /
    profile_length apart from the window start (end-exclusive grid).
    """
    if window <= 0:
        raise ValueError("window must be positive")
    if profile_length < 2:
        raise ValueError("profile_length must be at least 2")
    if len(series) == 0:
        raise EmptySeries(f"series {series.id!r} has no points")
    t0 = series.timestamps[0]
    span = series.timestamps[-1] - t0
    count = int(math.floor(span / window))
    if count < 1:
        raise WindowTooLarge(
            f"series {series.id!r} spans {span:g} s < one {window:g} s window"
        )
    offsets = np.arange(profile_length) * (window / profile_length)
    out = []
    for k in range(count):
        start = t0 + k * window
        grid = start + offsets
        profile = np.interp(grid, series.timestamps, series.intensities)
        out.append(
            IsochronousSegment(
                series_id=series.id,
                index=k,
                start=float(start),
                duration=float(window),
                profile=profile,
            )
        )
    return out


def _centered(profile: np.ndarray) -> tuple[np.ndarray, float]:
    c = profile - profile.mean()
    return c, float(np.dot(c, c))


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation of two equal-length profiles.

    Computed as dot(a-am, b-bm) / sqrt(ssa * ssb); identical profiles give
    exactly 1.0 and exact negations exactly -1.0 (sqrt(x*x) == x in IEEE
    arithmetic). Raises DegenerateProfile on zero variance.
    """
    if a.shape != b.shape:
        raise DimensionMismatch("profiles must have equal length")
    ca, ssa = _centered(a)
    cb, ssb = _centered(b)
    if ssa == 0.0 or ssb == 0.0:
        raise DegenerateProfile("cannot correlate a zero-variance profile")
    r = float(np.dot(ca, cb)) / math.sqrt(ssa * ssb)
    return min(1.0, max(-1.0, r))


def z_normalize(profile: np.ndarray) -> np.ndarray:
    """Shift to zero mean and scale to unit population standard deviation."""
    c, ss = _centered(profile)
    if ss == 0.0:
        raise DegenerateProfile("cannot z-normalize a zero-variance profile")
    return c / math.sqrt(ss / profile.size)


def _rms_windows(d: np.ndarray, sub_window: int) -> np.ndarray:
    blocks = d.reshape(-1, sub_window)
    return np.sqrt(np.mean(blocks * blocks, axis=1))


def chord_amplitude(chord: GraphChord, sub_window: int) -> np.ndarray:
    """Vibrational amplitude: RMS of z(a) - z(b) over consecutive sub-windows.

    sub_window must divide the profile length; sub_window == profile
    length yields a single full-window RMS.
    """
    return profile_amplitude(chord.a.profile, chord.b.profile, sub_window)


def profile_amplitude(pa: np.ndarray, pb: np.ndarray, sub_window: int) -> np.ndarray:
    n = pa.size
    if pb.size != n:
        raise DimensionMismatch("profiles must have equal length")
    if sub_window < 1 or n % sub_window != 0:
        raise DimensionMismatch(f"sub_window must divide profile length {n}")
    d = z_normalize(pa) - z_normalize(pb)
    return _rms_windows(d, sub_window)


def link_chords(
    segments: Sequence[IsochronousSegment],
    threshold: float,
    sub_window: int | None = None,
) -> list[GraphChord]:
    """One chord per unordered segment pair correlating at or above threshold.

    Pairs are scanned in lexicographic order of their positions in
    `segments` and stored once with the lower-positioned segment first.
    Each chord carries its amplitude, computed with the given sub-window
    (default: one full-profile window).
    """
    if not -1.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [-1, 1]")
    chords = []
    for i in range(len(segments)):
        for j in range(i + 1, len(segments)):
            a, b = segments[i], segments[j]
            r = pearson(a.profile, b.profile)
            if r >= threshold:
                sw = sub_window if sub_window is not None else a.profile.size
                amp = profile_amplitude(a.profile, b.profile, sw)
                chords.append(GraphChord(a=a, b=b, similarity=r, amplitude=amp))
    return chords


def predict_alternative(
    target: IsochronousSegment,
    chords: Sequence[GraphChord],
    segments: Sequence[IsochronousSegment],
    epsilon: float,
) -> np.ndarray:
    """Predict the target's profile from its chord partners.

    Partner weights are 1 / (epsilon + mean chord amplitude), normalized
    to sum to one; the result is the weighted pointwise mean of partner
    profiles, resolved through `segments` by (series id, index).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    pool = {s.key(): s for s in segments}
    partners = []
    weights = []
    for chord in chords:
        if chord.a.key() == target.key():
            other = chord.b
        elif chord.b.key() == target.key():
            other = chord.a
        else:
            continue
        partner = pool.get(other.key(), other)
        partners.append(partner.profile)
        weights.append(1.0 / (epsilon + float(np.mean(chord.amplitude))))
    if not partners:
        raise NoChords(f"segment {target.key()} participates in no chord")
    w = np.array(weights)
    w /= w.sum()
    return np.einsum("k,kp->p", w, np.array(partners))
