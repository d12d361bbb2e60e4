"""Persistence and ingestion.

Three on-disk stores share one envelope: UTF-8 text, one JSON record per
line, first line `lsat-store v1 <kind>`. Kinds:

  series      raw per-city intensity series (CLI pipeline input)
  signatures  signature tensors with city/time-range metadata
  segments    isochronous segments, chords and an optional aggregate

Floats serialize through json's shortest round-trip repr, so a load
reproduces saved values bit for bit. Saves take an exclusive advisory
lock on a `<path>.lock` sidecar and write through a temp file + rename,
so readers never observe a partial store.

CSV ingestion expects the exact header
`city_id,timestamp,temperature_c,pressure_hpa,humidity_pct,irradiance_wm2`
with ISO-8601 UTC timestamps. The provider client is file-backed: a
directory of `<city_id>.csv` fixtures in the same schema.
"""

from __future__ import annotations

import csv
import fcntl
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import (
    CityNotFound,
    CorruptRecord,
    DuplicateTimestamp,
    ParseError,
    RangeEmpty,
    SchemaError,
    VersionMismatch,
)
from .segments import GraphChord, IsochronousSegment, TimeSeries
from .signature import AggregateSignature, SignatureTensor

FORMAT_NAME = "lsat-store"
FORMAT_VERSION = 1

CSV_HEADER = ["city_id", "timestamp", "temperature_c", "pressure_hpa", "humidity_pct", "irradiance_wm2"]


@dataclass(frozen=True)
class WeatherSample:
    city_id: str
    timestamp: str  # ISO-8601 UTC
    temperature: float  # deg C
    pressure: float  # hPa
    humidity: float  # percent
    irradiance: float  # W/m^2

    def __post_init__(self):
        if not self.pressure > 0:
            raise ValueError("pressure must be positive")
        if not 0.0 <= self.humidity <= 100.0:
            raise ValueError("humidity must lie in [0, 100]")
        if self.irradiance < 0:
            raise ValueError("irradiance must be nonnegative")

    def epoch(self) -> float:
        return parse_timestamp(self.timestamp)


@dataclass(frozen=True)
class SignatureRecord:
    tensor: SignatureTensor
    city: str
    start: str  # ISO-8601 UTC
    end: str


@dataclass
class SignatureStore:
    """Signature tensors keyed by unique record id."""

    records: dict[str, SignatureRecord] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def add(self, record_id: str, record: SignatureRecord) -> None:
        if record_id in self.records:
            raise ValueError(f"duplicate record id {record_id!r}")
        self.records[record_id] = record


@dataclass
class SegmentStore:
    """Segments plus chords plus an optional running aggregate."""

    segments: list[IsochronousSegment] = field(default_factory=list)
    chords: list[GraphChord] = field(default_factory=list)
    aggregate: AggregateSignature | None = None
    format_version: int = FORMAT_VERSION

    def validate(self) -> None:
        keys = {s.key() for s in self.segments}
        for chord in self.chords:
            for end in (chord.a, chord.b):
                if end.key() not in keys:
                    raise ValueError(f"chord endpoint {end.key()} not in segments")


@dataclass
class SeriesStore:
    """Raw intensity series keyed by series id."""

    series: dict[str, TimeSeries] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION


def parse_timestamp(text: str) -> float:
    """ISO-8601 UTC timestamp to epoch seconds; naive times read as UTC."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _parse_float(value: str, column: str, line_no: int) -> float:
    try:
        out = float(value)
    except ValueError:
        raise ParseError(f"line {line_no}: bad {column} value {value!r}") from None
    if not math.isfinite(out):
        raise ParseError(f"line {line_no}: {column} must be finite")
    return out


def read_weather_csv(path) -> list[WeatherSample]:
    """Parse one weather CSV into validated samples, preserving row order."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, header row required") from None
        if header != CSV_HEADER:
            missing = [c for c in CSV_HEADER if c not in header]
            if missing:
                raise SchemaError(f"{path}: missing column {missing[0]!r}")
            raise SchemaError(
                f"{path}: header must be exactly {','.join(CSV_HEADER)}"
            )
        samples = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise ParseError(
                    f"line {line_no}: expected {len(CSV_HEADER)} fields, got {len(row)}"
                )
            city, stamp, temp, pres, hum, irr = row
            try:
                parse_timestamp(stamp)
            except ValueError:
                raise ParseError(f"line {line_no}: bad timestamp {stamp!r}") from None
            try:
                sample = WeatherSample(
                    city_id=city,
                    timestamp=stamp,
                    temperature=_parse_float(temp, "temperature_c", line_no),
                    pressure=_parse_float(pres, "pressure_hpa", line_no),
                    humidity=_parse_float(hum, "humidity_pct", line_no),
                    irradiance=_parse_float(irr, "irradiance_wm2", line_no),
                )
            except ValueError as exc:
                raise ParseError(f"line {line_no}: {exc}") from None
            samples.append(sample)
    return samples


def series_from_samples(samples) -> list[TimeSeries]:
    """Group samples by city into irradiance series, sorted by city id."""
    by_city: dict[str, list[WeatherSample]] = {}
    for s in samples:
        by_city.setdefault(s.city_id, []).append(s)
    out = []
    for city in sorted(by_city):
        rows = sorted(by_city[city], key=lambda s: s.epoch())
        ts = np.array([r.epoch() for r in rows])
        dupes = np.nonzero(np.diff(ts) == 0)[0]
        if dupes.size:
            raise DuplicateTimestamp(
                f"city {city!r}: duplicate timestamp {rows[dupes[0] + 1].timestamp}"
            )
        out.append(
            TimeSeries(
                id=city,
                timestamps=ts,
                intensities=np.array([r.irradiance for r in rows]),
            )
        )
    return out


def ingest_csv(path) -> list[TimeSeries]:
    """One irradiance series per city from a weather CSV."""
    return series_from_samples(read_weather_csv(path))


# ---------------------------------------------------------------------------
# store serialization

def _tensor_payload(t: SignatureTensor) -> dict:
    return {
        "dims": list(t.dims),
        "values": t.values.ravel(order="C").tolist(),
        "mask": [int(b) for b in t.mask.ravel(order="C")],
    }


def _tensor_from_payload(payload: dict) -> SignatureTensor:
    dims = tuple(payload["dims"])
    values = np.array(payload["values"], dtype=float).reshape(dims)
    mask = np.array(payload["mask"], dtype=bool).reshape(dims)
    return SignatureTensor(values=values, mask=mask)


def _segment_payload(s: IsochronousSegment) -> dict:
    return {
        "kind": "segment",
        "series_id": s.series_id,
        "index": s.index,
        "start": s.start,
        "duration": s.duration,
        "profile": s.profile.tolist(),
    }


def _store_kind(store) -> str:
    if isinstance(store, SignatureStore):
        return "signatures"
    if isinstance(store, SegmentStore):
        return "segments"
    if isinstance(store, SeriesStore):
        return "series"
    raise TypeError(f"not a store: {type(store).__name__}")


def _store_lines(store):
    kind = _store_kind(store)
    yield f"{FORMAT_NAME} v{store.format_version} {kind}"
    if kind == "signatures":
        for record_id in sorted(store.records):
            rec = store.records[record_id]
            yield json.dumps(
                {
                    "id": record_id,
                    "city": rec.city,
                    "start": rec.start,
                    "end": rec.end,
                    **_tensor_payload(rec.tensor),
                },
                sort_keys=True,
            )
    elif kind == "series":
        for series_id in sorted(store.series):
            s = store.series[series_id]
            yield json.dumps(
                {
                    "id": series_id,
                    "timestamps": s.timestamps.tolist(),
                    "intensities": s.intensities.tolist(),
                },
                sort_keys=True,
            )
    else:
        store.validate()
        for seg in store.segments:
            yield json.dumps(_segment_payload(seg), sort_keys=True)
        for chord in store.chords:
            yield json.dumps(
                {
                    "kind": "chord",
                    "a": list(chord.a.key()),
                    "b": list(chord.b.key()),
                    "similarity": chord.similarity,
                    "amplitude": chord.amplitude.tolist(),
                },
                sort_keys=True,
            )
        if store.aggregate is not None:
            agg = store.aggregate
            yield json.dumps(
                {
                    "kind": "aggregate",
                    "dims": list(agg.values.shape),
                    "values": agg.values.ravel(order="C").tolist(),
                    "count": agg.count,
                },
                sort_keys=True,
            )


def save_store(store, path) -> None:
    """Serialize a store; exclusive advisory lock, atomic replace."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lock_path = path.with_name(path.name + ".lock")
    with lock_path.open("w") as lock_fh:
        fcntl.flock(lock_fh, fcntl.LOCK_EX)
        tmp = path.with_name(path.name + f".tmp.{os.getpid()}")
        with tmp.open("w", encoding="utf-8") as fh:
            for line in _store_lines(store):
                fh.write(line + "\n")
        os.replace(tmp, path)


def _parse_header(line: str, path: Path) -> tuple[int, str]:
    parts = line.strip().split(" ")
    if len(parts) != 3 or parts[0] != FORMAT_NAME or not parts[1].startswith("v"):
        raise CorruptRecord(f"{path}: not a {FORMAT_NAME} file")
    try:
        version = int(parts[1][1:])
    except ValueError:
        raise CorruptRecord(f"{path}: bad version field {parts[1]!r}") from None
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"{path}: version {version} unsupported (expected {FORMAT_VERSION})"
        )
    return version, parts[2]


def _record(payload: dict, index: int, *keys: str) -> tuple:
    try:
        return tuple(payload[k] for k in keys)
    except KeyError as exc:
        raise CorruptRecord(f"record {index}: missing field {exc}") from None


def load_store(path):
    """Load any store file; the header's kind picks the return type."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        version, kind = _parse_header(fh.readline(), path)
        if kind not in ("signatures", "segments", "series"):
            raise CorruptRecord(f"{path}: unknown store kind {kind!r}")
        records = []
        for index, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise CorruptRecord(f"record {index}: invalid JSON: {exc}") from None

    if kind == "signatures":
        out = SignatureStore(format_version=version)
        for index, payload in enumerate(records):
            rid, city, start, end = _record(payload, index, "id", "city", "start", "end")
            try:
                tensor = _tensor_from_payload(payload)
            except (KeyError, ValueError) as exc:
                raise CorruptRecord(f"record {index}: {exc}") from None
            out.add(rid, SignatureRecord(tensor=tensor, city=city, start=start, end=end))
        return out

    if kind == "series":
        out = SeriesStore(format_version=version)
        for index, payload in enumerate(records):
            sid, ts, xs = _record(payload, index, "id", "timestamps", "intensities")
            try:
                out.series[sid] = TimeSeries(
                    id=sid, timestamps=np.array(ts, dtype=float),
                    intensities=np.array(xs, dtype=float),
                )
            except ValueError as exc:
                raise CorruptRecord(f"record {index}: {exc}") from None
        return out

    store = SegmentStore(format_version=version)
    by_key: dict[tuple, IsochronousSegment] = {}
    for index, payload in enumerate(records):
        (rkind,) = _record(payload, index, "kind")
        if rkind == "segment":
            sid, idx, start, dur, prof = _record(
                payload, index, "series_id", "index", "start", "duration", "profile"
            )
            seg = IsochronousSegment(
                series_id=sid, index=int(idx), start=float(start),
                duration=float(dur), profile=np.array(prof, dtype=float),
            )
            store.segments.append(seg)
            by_key[seg.key()] = seg
        elif rkind == "chord":
            a_key, b_key, sim, amp = _record(
                payload, index, "a", "b", "similarity", "amplitude"
            )
            try:
                a = by_key[tuple(a_key)]
                b = by_key[tuple(b_key)]
            except KeyError as exc:
                raise CorruptRecord(
                    f"record {index}: chord endpoint {exc} has no segment"
                ) from None
            store.chords.append(
                GraphChord(a=a, b=b, similarity=float(sim),
                           amplitude=np.array(amp, dtype=float))
            )
        elif rkind == "aggregate":
            dims, values, count = _record(payload, index, "dims", "values", "count")
            store.aggregate = AggregateSignature(
                values=np.array(values, dtype=float).reshape(tuple(dims)),
                count=int(count),
            )
        else:
            raise CorruptRecord(f"record {index}: unknown record kind {rkind!r}")
    return store


# ---------------------------------------------------------------------------
# file-backed provider

@dataclass
class ProviderConfig:
    """Directory of `<city_id>.csv` fixtures standing in for a live API."""

    root: Path
    max_requests: int = 1

    def __post_init__(self):
        self.root = Path(self.root)
        if self.max_requests < 1:
            raise ValueError("max_requests must be at least 1")


def provider_fetch(
    provider: ProviderConfig, city_id: str, start: str, end: str
) -> list[WeatherSample]:
    """Samples for one city within [start, end] (ISO-8601, inclusive).

    The stub performs a single underlying file read, which satisfies any
    max_requests >= 1 budget.
    """
    lo, hi = parse_timestamp(start), parse_timestamp(end)
    path = provider.root / f"{city_id}.csv"
    if not path.is_file():
        raise CityNotFound(f"no fixture for city {city_id!r} under {provider.root}")
    rows = sorted(read_weather_csv(path), key=lambda s: s.epoch())
    hits = [s for s in rows if lo <= s.epoch() <= hi]
    if not hits:
        raise RangeEmpty(f"city {city_id!r}: no samples in [{start}, {end}]")
    return hits
