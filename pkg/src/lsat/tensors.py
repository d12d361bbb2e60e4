"""Fixed-size spacetime tensor algebra on a (-, +, +, +) signature.

Coordinates are Cartesian (t, x, y, z) with c = 1 for the geometric
operations, so one step size works for every coordinate. Curvature is
computed numerically: metric derivatives by central differences, the
connection from the standard formula

    Gamma^l_mn = 1/2 g^{ls} (d_m g_{sn} + d_n g_{sm} - d_s g_{mn})

and the curvature tensor from nested differences of the connection,

    R^r_{smn} = d_m Gamma^r_{ns} - d_n Gamma^r_{ms}
                + Gamma^r_{ml} Gamma^l_{ns} - Gamma^r_{nl} Gamma^l_{ms}

with Ricci by contraction on the first and third slots, the curvature
scalar by tracing with the inverse metric, and the einstein tensor as
ricci - 1/2 g scalar. These conventions are pinned so the closed-form
test oracles (flat space, power-law expanding metric, weak plane wave)
are checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    AmplitudeTooLarge,
    AsymmetricInput,
    DimensionMismatch,
    NonFinite,
    NonPhysical,
    SingularMetric,
)

DIM = 4
DEFAULT_STEP = 1e-4


def _as_matrix(components) -> np.ndarray:
    m = np.array(components, dtype=float)
    if m.shape != (DIM, DIM):
        raise DimensionMismatch(f"expected a {DIM}x{DIM} matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class SpacetimePoint:
    """Event (t, x, y, z); t in seconds, spatial coordinates in meters."""

    t: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            if not math.isfinite(getattr(self, name)):
                raise NonFinite(f"coordinate {name} must be finite")

    def coords(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z], dtype=float)

    @staticmethod
    def from_coords(c) -> "SpacetimePoint":
        return SpacetimePoint(float(c[0]), float(c[1]), float(c[2]), float(c[3]))


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric 4x4 metric with nonzero determinant."""

    components: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.components)
        if not np.array_equal(m, m.T):
            raise AsymmetricInput("metric components must be symmetric")
        if np.linalg.det(m) == 0.0:
            raise SingularMetric("metric determinant is zero")
        object.__setattr__(self, "components", m)
        self.components.setflags(write=False)

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.components)


@dataclass(frozen=True)
class StrainTensor:
    """Transverse-traceless perturbation with plus/cross amplitudes.

    The wave propagates along z, so rows/columns 0 and 3 vanish; the
    remaining 2x2 block is traceless and symmetric, and every entry
    stays strictly below 1 in magnitude (weak-field regime).
    """

    components: np.ndarray
    h_plus: float
    h_cross: float

    def __post_init__(self):
        m = _as_matrix(self.components)
        if not np.array_equal(m, m.T):
            raise AsymmetricInput("strain components must be symmetric")
        if np.any(m[0, :] != 0.0) or np.any(m[:, 0] != 0.0):
            raise ValueError("strain row/column 0 must vanish")
        if np.trace(m) != 0.0:
            raise ValueError("strain must be traceless")
        if m[1, 1] != -m[2, 2]:
            raise ValueError("strain diagonal block must satisfy h11 = -h22")
        if np.max(np.abs(m)) >= 1.0:
            raise AmplitudeTooLarge("strain component magnitude must stay below 1")
        object.__setattr__(self, "components", m)
        self.components.setflags(write=False)


@dataclass(frozen=True)
class MetricField:
    """Metric as a function of position, with a human-readable label."""

    eval: Callable[[SpacetimePoint], MetricTensor]
    label: str = "metric field"


@dataclass(frozen=True)
class CurvatureResult:
    """Ricci tensor, curvature scalar and einstein tensor at one event."""

    ricci: np.ndarray
    scalar: float
    einstein: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ricci", _as_matrix(self.ricci))
        object.__setattr__(self, "einstein", _as_matrix(self.einstein))


@dataclass(frozen=True)
class PhysicalConstants:
    """Gravitational constant (m^3 kg^-1 s^-2) and vacuum light speed (m/s)."""

    G: float = 6.67430e-11
    c: float = 2.99792458e8

    def __post_init__(self):
        if not (self.G > 0 and self.c > 0):
            raise NonPhysical("G and c must be strictly positive")


def minkowski() -> MetricTensor:
    """Flat metric diag(-1, 1, 1, 1)."""
    return MetricTensor(np.diag([-1.0, 1.0, 1.0, 1.0]))


def tt_strain(h_plus: float, h_cross: float, phase: float) -> StrainTensor:
    """Transverse-traceless strain at a given wave phase.

    Only the x-y block is populated: the diagonal carries
    +-h_plus cos(phase) and the off-diagonal h_cross cos(phase).
    Raises AmplitudeTooLarge when either amplitude reaches 1.
    """
    if abs(h_plus) >= 1.0 or abs(h_cross) >= 1.0:
        raise AmplitudeTooLarge("strain amplitudes must satisfy |h| < 1")
    osc = math.cos(phase)
    m = np.zeros((DIM, DIM))
    m[1, 1] = h_plus * osc
    m[2, 2] = -h_plus * osc
    m[1, 2] = m[2, 1] = h_cross * osc
    return StrainTensor(m, h_plus, h_cross)


def perturb(eta: MetricTensor, h: StrainTensor) -> MetricTensor:
    """Componentwise sum g = eta + h of a background metric and a strain."""
    if np.max(np.abs(h.components)) >= 1.0:
        raise AmplitudeTooLarge("strain component magnitude must stay below 1")
    return MetricTensor(eta.components + h.components)


def _metric_at(field: MetricField, coords: np.ndarray) -> np.ndarray:
    return field.eval(SpacetimePoint.from_coords(coords)).components


def _metric_derivatives(field: MetricField, p: SpacetimePoint, step: float) -> np.ndarray:
    """d[m, s, n] = central-difference estimate of d_m g_{sn} at p."""
    c = p.coords()
    d = np.empty((DIM, DIM, DIM))
    for mu in range(DIM):
        fwd, bwd = c.copy(), c.copy()
        fwd[mu] += step
        bwd[mu] -= step
        d[mu] = (_metric_at(field, fwd) - _metric_at(field, bwd)) / (2.0 * step)
    return d


def _christoffel_at(field: MetricField, coords: np.ndarray, step: float) -> np.ndarray:
    p = SpacetimePoint.from_coords(coords)
    g = _metric_at(field, coords)
    if abs(np.linalg.det(g)) < 1e-12:
        raise SingularMetric(f"|det g| < 1e-12 at {p}")
    ginv = np.linalg.inv(g)
    d = _metric_derivatives(field, p, step)
    # Gamma^l_mn = 1/2 g^{ls} (d_m g_{sn} + d_n g_{sm} - d_s g_{mn})
    gamma = 0.5 * (
        np.einsum("ls,msn->lmn", ginv, d)
        + np.einsum("ls,nsm->lmn", ginv, d)
        - np.einsum("ls,smn->lmn", ginv, d)
    )
    return gamma


def christoffel(field: MetricField, p: SpacetimePoint, step: float = DEFAULT_STEP) -> np.ndarray:
    """All connection coefficients Gamma^l_mn at p, shape (4, 4, 4).

    Metric derivatives use two-point central differences with the given
    step; the metric is inverted exactly at p. Raises SingularMetric when
    |det g(p)| < 1e-12.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    return _christoffel_at(field, p.coords(), step)


def curvature(field: MetricField, p: SpacetimePoint, step: float = DEFAULT_STEP) -> CurvatureResult:
    """Ricci tensor, curvature scalar and einstein tensor at p.

    The connection derivative is a second central difference layered on
    the connection evaluation, so the overall truncation error is second
    order in the step.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    c = p.coords()
    gamma = _christoffel_at(field, c, step)
    dgamma = np.empty((DIM, DIM, DIM, DIM))  # dgamma[m] = d_m Gamma
    for mu in range(DIM):
        fwd, bwd = c.copy(), c.copy()
        fwd[mu] += step
        bwd[mu] -= step
        dgamma[mu] = (
            _christoffel_at(field, fwd, step) - _christoffel_at(field, bwd, step)
        ) / (2.0 * step)

    # R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}
    riemann = (
        np.einsum("mrns->rsmn", dgamma)
        - np.einsum("nrms->rsmn", dgamma)
        + np.einsum("rml,lns->rsmn", gamma, gamma)
        - np.einsum("rnl,lms->rsmn", gamma, gamma)
    )
    ricci = np.einsum("rsrn->sn", riemann)
    g = _metric_at(field, c)
    ginv = np.linalg.inv(g)
    scalar = float(np.einsum("sn,sn->", ginv, ricci))
    einstein = ricci - 0.5 * g * scalar
    return CurvatureResult(ricci=ricci, scalar=scalar, einstein=einstein)


def einstein_constant(consts: PhysicalConstants = PhysicalConstants()) -> float:
    """Coupling 8 pi G / c^4 between curvature and stress-energy."""
    return 8.0 * math.pi * consts.G / consts.c**4


def curvature_from_stress(stress, k: float) -> np.ndarray:
    """Curvature tensor implied by a stress-energy tensor: k * stress."""
    t = _as_matrix(stress)
    if np.max(np.abs(t - t.T)) > 1e-12:
        raise AsymmetricInput("stress tensor must be symmetric within 1e-12")
    return k * t


def wave_residual(
    strain_fn: Callable[[float, float], float],
    t: float,
    z: float,
    step: float,
    c: float = 1.0,
) -> float:
    """Wave-operator residual -(1/c^2) d2h/dt2 + d2h/dz2 at (t, z).

    Both second derivatives use three-point central differences with the
    same step. An exact plane wave drives the residual to zero at second
    order as the step shrinks.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    h0 = strain_fn(t, z)
    d2t = (strain_fn(t + step, z) - 2.0 * h0 + strain_fn(t - step, z)) / step**2
    d2z = (strain_fn(t, z + step) - 2.0 * h0 + strain_fn(t, z - step)) / step**2
    return -d2t / c**2 + d2z


def interval(dt: float, dx: float, dy: float, dz: float, h_plus: float, c: float) -> float:
    """Squared separation -c^2 dt^2 + (1+h+) dx^2 + (1-h+) dy^2 + dz^2."""
    if abs(h_plus) >= 1.0:
        raise AmplitudeTooLarge("|h_plus| must stay below 1")
    return -(c**2) * dt**2 + (1.0 + h_plus) * dx**2 + (1.0 - h_plus) * dy**2 + dz**2


def stretch_factor(h_plus: float) -> tuple[float, float]:
    """Stretch along x and compression along y: (sqrt(1+h+), sqrt(1-h+))."""
    if abs(h_plus) >= 1.0:
        raise AmplitudeTooLarge("|h_plus| must stay below 1")
    return math.sqrt(1.0 + h_plus), math.sqrt(1.0 - h_plus)


# Ready-made metric fields used by the curvature checks, the CLI and the
# HTTP service. Evaluation functions are pure.

def flat_field() -> MetricField:
    eta = minkowski()
    return MetricField(eval=lambda p: eta, label="flat")


def power_law_field(exponent: float = 1.0) -> MetricField:
    """Spatially flat expanding metric diag(-1, a^2, a^2, a^2), a(t) = t^exponent."""

    def evaluate(p: SpacetimePoint) -> MetricTensor:
        a2 = p.t ** (2.0 * exponent)
        return MetricTensor(np.diag([-1.0, a2, a2, a2]))

    return MetricField(eval=evaluate, label=f"power-law a(t)=t^{exponent:g}")


def tt_wave_field(
    h_plus: float, h_cross: float = 0.0, omega: float = 1.0, c: float = 1.0
) -> MetricField:
    """Flat background plus a plane strain wave travelling along z."""
    eta = minkowski()

    def evaluate(p: SpacetimePoint) -> MetricTensor:
        return perturb(eta, tt_strain(h_plus, h_cross, omega * (p.t - p.z / c)))

    return MetricField(eval=evaluate, label="plane strain wave")
