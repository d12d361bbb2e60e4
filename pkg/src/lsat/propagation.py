"""Light-phase accumulation along a path.

The phase picked up over a path splits into three contributions: the
spacetime term (an effective-index integral over 1 + strain), the
atmospheric term (a refractivity integral), and an earth-noise term drawn
from a seeded Gaussian generator. Integrals use the composite trapezoid
rule on caller-supplied samples, which is deterministic and second-order
accurate in the sample spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadPath, BadProfile, NonFinite, NonPhysical


def _check_positions(positions: np.ndarray, err) -> None:
    if positions.ndim != 1 or positions.size < 2:
        raise err("need at least two samples")
    if not np.all(np.isfinite(positions)):
        raise err("positions must be finite")
    if not np.all(np.diff(positions) > 0):
        raise err("positions must be strictly increasing")


@dataclass(frozen=True)
class PhasePath:
    """Sampled strain along a straight path of given length.

    positions run from 0 to length inclusive, strictly increasing;
    strains are the dimensionless perturbation h at each position.
    """

    length: float
    omega0: float
    positions: np.ndarray
    strains: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        h = np.asarray(self.strains, dtype=float)
        if not (self.length > 0):
            raise BadPath("length must be positive")
        if not (self.omega0 > 0):
            raise BadPath("omega0 must be positive")
        _check_positions(pos, BadPath)
        if h.shape != pos.shape:
            raise BadPath("positions and strains must have equal length")
        if not np.all(np.isfinite(h)):
            raise BadPath("strains must be finite")
        if pos[0] != 0.0 or pos[-1] != self.length:
            raise BadPath("path samples must start at 0 and end at length")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "strains", h)

    @staticmethod
    def from_function(length, omega0, strain_fn, n_samples: int) -> "PhasePath":
        """Uniformly sample strain_fn(x) at n_samples points over [0, length]."""
        if n_samples < 2:
            raise BadPath("need at least two samples")
        x = np.linspace(0.0, length, n_samples)
        return PhasePath(length, omega0, x, np.array([strain_fn(xi) for xi in x]))


@dataclass(frozen=True)
class PhaseShift:
    """Phase contributions in radians; total is their exact ordered sum."""

    space: float
    atmospheric: float
    earth: float
    total: float


@dataclass(frozen=True)
class AtmosphericProfile:
    """Refractivity samples (N-units, (n - 1) * 1e6) along the path."""

    positions: np.ndarray
    refractivity: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        nvals = np.asarray(self.refractivity, dtype=float)
        _check_positions(pos, BadProfile)
        if nvals.shape != pos.shape:
            raise BadProfile("positions and refractivity must have equal length")
        if not np.all(np.isfinite(nvals)):
            raise BadProfile("refractivity must be finite")
        if np.any(nvals < 0):
            raise BadProfile("refractivity must be nonnegative")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "refractivity", nvals)


def _trapezoid(y: np.ndarray, x: np.ndarray) -> float:
    dx = np.diff(x)
    return float(np.sum(dx * (y[:-1] + y[1:]) * 0.5))


def phase_space(path: PhasePath, c: float) -> float:
    """Spacetime phase (omega0/c) * integral of (1 + h) over the path."""
    if not (c > 0):
        raise BadPath("c must be positive")
    return path.omega0 / c * _trapezoid(1.0 + path.strains, path.positions)


def refractivity(temperature: float, pressure: float, vapor_pressure: float) -> float:
    """Radio refractivity in N-units from temperature (K), pressure and
    water-vapor partial pressure (both hPa):

        N = 77.6 P/T - 5.6 e/T + 3.75e5 e/T^2
    """
    if temperature <= 0:
        raise NonPhysical("temperature must be positive (kelvin)")
    if pressure < 0 or vapor_pressure < 0:
        raise NonPhysical("pressures must be nonnegative")
    t = temperature
    return 77.6 * pressure / t - 5.6 * vapor_pressure / t + 3.75e5 * vapor_pressure / t**2


def phase_atmospheric(omega0: float, profile: AtmosphericProfile, c: float) -> float:
    """Atmospheric phase (omega0/c) * 1e-6 * integral of N over the profile."""
    if not (omega0 > 0 and c > 0):
        raise BadProfile("omega0 and c must be positive")
    return omega0 / c * 1e-6 * _trapezoid(profile.refractivity, profile.positions)


def phase_earth_noise(seed: int, sigma: float, n: int) -> np.ndarray:
    """n zero-mean Gaussian phase draws with standard deviation sigma.

    Deterministic for a given seed; sigma = 0 yields exact zeros.
    """
    if sigma < 0:
        raise NonPhysical("sigma must be nonnegative")
    if n < 0:
        raise NonPhysical("n must be nonnegative")
    if sigma == 0.0:
        return np.zeros(n)
    return np.random.default_rng(seed).normal(0.0, sigma, n)


def total_phase(space: float, atmospheric: float, earth: float) -> PhaseShift:
    """Combine the three contributions; summation order is fixed."""
    parts = (space, atmospheric, earth)
    if not all(math.isfinite(v) for v in parts):
        raise NonFinite("phase contributions must be finite")
    return PhaseShift(space, atmospheric, earth, space + atmospheric + earth)
