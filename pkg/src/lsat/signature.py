"""Signature tensor assembly, evaluation and aggregation.

A signature tensor bins intensity samples on a three-axis grid: intensity
value (I equal-width bins), trajectory coordinate (D equal-width bins) and
adjustment channel (T discrete channels). Each populated cell stores the
mean intensity of its samples; a boolean mask separates genuinely empty
cells from zero-valued ones. The signature value is the cell-measure
weighted triple sum of tensor entries times per-channel weights, and a
dataset aggregate is the elementwise sum over many tensors.

Summation orders are fixed (row-major ascending indices; aggregation in
canonical byte order) so repeated runs produce bit-identical numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadChannel, DimensionMismatch, EmptyInput


@dataclass(frozen=True)
class SignatureTensor:
    """Binned I x D x T intensity tensor with a populated-cell mask."""

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        m = np.asarray(self.mask, dtype=bool)
        if v.ndim != 3 or min(v.shape) < 1:
            raise DimensionMismatch("values must be a 3-d array with positive dims")
        if m.shape != v.shape:
            raise DimensionMismatch("mask shape must match values shape")
        if not np.all(np.isfinite(v)):
            raise ValueError("tensor values must be finite")
        if np.any(v[~m] != 0.0):
            raise ValueError("unpopulated cells must hold 0")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "mask", m)
        v.setflags(write=False)
        m.setflags(write=False)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.values.shape


@dataclass(frozen=True)
class AdjustmentWeights:
    """Per-channel weights; length must equal the tensor's T."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1:
            raise DimensionMismatch("weights must be one-dimensional")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "weights", w)
        w.setflags(write=False)


@dataclass(frozen=True)
class AggregateSignature:
    """Elementwise sum of signature tensors and how many went in."""

    values: np.ndarray
    count: int


def _bin_index(values: np.ndarray, lo: float, width: float, nbins: int) -> np.ndarray:
    # equal-width bins over [lo, lo + nbins*width]; top edge folds into the last bin
    if width == 0.0:
        return np.zeros(values.shape, dtype=np.int64)
    idx = ((values - lo) / width).astype(np.int64)
    return np.clip(idx, 0, nbins - 1)


def assemble_gamma(
    samples: Iterable[tuple[float, float, int]], I: int, D: int, T: int
) -> SignatureTensor:
    """Bin (intensity, trajectory coordinate, channel) samples into a tensor.

    Intensity and trajectory axes use equal-width bins spanning the
    observed [min, max] of each quantity; the channel is taken as given
    and must lie in [0, T). Cell values are per-cell intensity means.
    """
    if I < 1 or D < 1 or T < 1:
        raise DimensionMismatch("bin counts must be at least 1")
    rows = list(samples)
    if not rows:
        raise EmptyInput("no samples to assemble")
    intensity = np.array([r[0] for r in rows], dtype=float)
    trajectory = np.array([r[1] for r in rows], dtype=float)
    channel = np.array([r[2] for r in rows], dtype=np.int64)
    if np.any(channel < 0) or np.any(channel >= T):
        raise BadChannel(f"channels must lie in [0, {T})")

    i_lo, i_hi = float(intensity.min()), float(intensity.max())
    d_lo, d_hi = float(trajectory.min()), float(trajectory.max())
    i_idx = _bin_index(intensity, i_lo, (i_hi - i_lo) / I, I)
    d_idx = _bin_index(trajectory, d_lo, (d_hi - d_lo) / D, D)

    sums = np.zeros((I, D, T))
    counts = np.zeros((I, D, T), dtype=np.int64)
    np.add.at(sums, (i_idx, d_idx, channel), intensity)
    np.add.at(counts, (i_idx, d_idx, channel), 1)
    mask = counts > 0
    values = np.zeros((I, D, T))
    values[mask] = sums[mask] / counts[mask]
    return SignatureTensor(values=values, mask=mask)


def signature_value(
    gamma: SignatureTensor, zeta: AdjustmentWeights, cell_measure: float
) -> float:
    """Discretized signature: cell_measure * sum_idt values[i,d,t] * weights[t].

    Accumulates in row-major ascending order so results are reproducible
    bit for bit.
    """
    ii, dd, tt = gamma.dims
    if zeta.weights.shape[0] != tt:
        raise DimensionMismatch(
            f"weights length {zeta.weights.shape[0]} != channel count {tt}"
        )
    total = 0.0
    v = gamma.values
    w = zeta.weights
    for i in range(ii):
        for d in range(dd):
            for t in range(tt):
                total += v[i, d, t] * w[t]
    return float(cell_measure * total)


def aggregate_phi(
    tensors: Sequence[SignatureTensor], dims: tuple[int, int, int] | None = None
) -> AggregateSignature:
    """Elementwise sum of signature tensors sharing one shape.

    The input order does not matter: tensors are summed in a canonical
    order (lexicographic over their raw byte encoding), so any permutation
    of the same tensors produces a bit-identical aggregate. An empty input
    yields the additive identity (count 0, zero values; pass dims to fix
    the shape, else it is empty).
    """
    tensors = list(tensors)
    if not tensors:
        shape = dims if dims is not None else (0, 0, 0)
        return AggregateSignature(values=np.zeros(shape), count=0)
    shape = tensors[0].dims
    for t in tensors[1:]:
        if t.dims != shape:
            raise DimensionMismatch(f"tensor dims {t.dims} != {shape}")
    if dims is not None and tuple(dims) != shape:
        raise DimensionMismatch(f"requested dims {dims} != tensor dims {shape}")
    ordered = sorted(tensors, key=lambda t: t.values.tobytes())
    acc = np.zeros(shape)
    for t in ordered:
        acc += t.values
    return AggregateSignature(values=acc, count=len(tensors))
