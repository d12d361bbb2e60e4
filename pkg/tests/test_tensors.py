"""Tensor algebra tests against closed-form oracles.

Oracles, derived by hand before the implementation existed:

* expanding metric diag(-1, a^2, a^2, a^2) with a(t) = t:
  connection   Gamma^t_xx = a adot = t,  Gamma^x_tx = adot / a = 1 / t
  curvature    R = 6 (addot/a + (adot/a)^2) = 6 / t^2,  G_tt = 3 (adot/a)^2 = 3 / t^2
* weak plane wave: vacuum solution at first order, so the einstein tensor
  is quadratic in the strain amplitude.
* einstein coupling at 50-digit precision: 8 pi G / c^4 =
  2.0766474428449720e-43 (frozen from an extended-precision evaluation).
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from lsat import tensors
from lsat.errors import AmplitudeTooLarge, AsymmetricInput, SingularMetric

EINSTEIN_K_50DIG = 2.076647442844972e-43

ORIGIN = tensors.SpacetimePoint(2.0, 0.3, -0.2, 0.5)


def flrw_christoffel_oracle(t):
    """Nonzero connection entries for a(t) = t, by hand."""
    return {"t_xx": t, "x_tx": 1.0 / t}


def flrw_curvature_oracle(t):
    """Scalar and G_tt for a(t) = t, by hand."""
    return {"scalar": 6.0 / t**2, "einstein_tt": 3.0 / t**2}


# -- minkowski ---------------------------------------------------------------

def test_minkowski_components():
    eta = tensors.minkowski().components
    assert eta[0, 0] == -1.0
    assert eta[1, 1] == eta[2, 2] == eta[3, 3] == 1.0
    off = eta - np.diag(np.diag(eta))
    assert np.all(off == 0.0)


def test_minkowski_trace_and_self_inverse():
    eta = tensors.minkowski().components
    assert np.trace(eta) == 2.0
    assert np.array_equal(eta @ eta, np.eye(4))
    assert np.linalg.det(eta) == pytest.approx(-1.0, abs=1e-15)


# -- tt_strain ---------------------------------------------------------------

def test_tt_strain_matrix_layout():
    h = tensors.tt_strain(1e-3, 0.0, 0.0)
    m = h.components
    assert m[1, 1] == 1e-3
    assert m[2, 2] == -1e-3
    assert m[1, 2] == 0.0
    assert np.all(m[0, :] == 0.0) and np.all(m[:, 0] == 0.0)
    assert np.all(m[3, :] == 0.0) and np.all(m[:, 3] == 0.0)


def test_tt_strain_zero_amplitudes():
    assert np.all(tensors.tt_strain(0.0, 0.0, 1.234).components == 0.0)


def test_tt_strain_quarter_phase():
    # cos(pi/2) is ~6e-17 in floats, so entries are ~1e-20
    m = tensors.tt_strain(0.0, 2e-4, math.pi / 2).components
    assert np.max(np.abs(m)) < 1e-18


@pytest.mark.parametrize("h_plus,h_cross", [(1.0, 0.0), (0.0, -1.0), (2.0, 0.5)])
def test_tt_strain_rejects_large_amplitudes(h_plus, h_cross):
    with pytest.raises(AmplitudeTooLarge):
        tensors.tt_strain(h_plus, h_cross, 0.0)


@given(
    h_plus=st.floats(-0.99, 0.99),
    h_cross=st.floats(-0.99, 0.99),
    phase=st.floats(-10.0, 10.0),
)
def test_tt_strain_invariants(h_plus, h_cross, phase):
    m = tensors.tt_strain(h_plus, h_cross, phase).components
    assert np.trace(m) == 0.0
    assert np.array_equal(m, m.T)
    assert np.all(m[0, :] == 0.0) and np.all(m[3, :] == 0.0)
    assert m[1, 1] == -m[2, 2]


# -- perturb -----------------------------------------------------------------

def test_perturb_identity():
    eta = tensors.minkowski()
    zero = tensors.tt_strain(0.0, 0.0, 0.0)
    assert np.array_equal(tensors.perturb(eta, zero).components, eta.components)


def test_perturb_componentwise():
    eta = tensors.minkowski()
    g = tensors.perturb(eta, tensors.tt_strain(1e-3, 0.0, 0.0)).components
    assert g[1, 1] == pytest.approx(1.001, abs=1e-15)
    assert g[2, 2] == pytest.approx(0.999, abs=1e-15)
    assert g[0, 0] == -1.0


def test_perturb_subtracts_back():
    # dyadic amplitudes at phase 0 make the add/subtract round trip exact
    eta = tensors.minkowski()
    h = tensors.tt_strain(2.0**-12, -(2.0**-13), 0.0)
    g = tensors.perturb(eta, h)
    assert np.array_equal(g.components - eta.components, h.components)


# -- christoffel ---------------------------------------------------------------

def test_christoffel_flat_vanishes():
    gamma = tensors.christoffel(tensors.flat_field(), ORIGIN, 1e-4)
    assert np.max(np.abs(gamma)) < 1e-12


def test_christoffel_expanding_metric_oracle():
    oracle = flrw_christoffel_oracle(2.0)
    point = tensors.SpacetimePoint(2.0, 0.0, 0.0, 0.0)
    gamma = tensors.christoffel(tensors.power_law_field(1.0), point, 1e-4)
    assert gamma[0, 1, 1] == pytest.approx(oracle["t_xx"], abs=1e-6)
    assert gamma[1, 0, 1] == pytest.approx(oracle["x_tx"], abs=1e-6)


def test_christoffel_lower_symmetry_exact():
    field = tensors.tt_wave_field(1e-3, 5e-4, omega=2.0)
    gamma = tensors.christoffel(field, ORIGIN, 1e-3)
    assert np.array_equal(gamma, gamma.transpose(0, 2, 1))


def test_christoffel_singular_metric():
    def degenerate(p):
        return tensors.MetricTensor(np.diag([-1.0, 1e-13, 1.0, 1.0]))

    field = tensors.MetricField(eval=degenerate, label="near-singular")
    with pytest.raises(SingularMetric):
        tensors.christoffel(field, ORIGIN, 1e-4)


# -- curvature -----------------------------------------------------------------

def test_curvature_flat_vanishes():
    res = tensors.curvature(tensors.flat_field(), ORIGIN, 1e-3)
    assert np.max(np.abs(res.ricci)) < 1e-8
    assert abs(res.scalar) < 1e-8
    assert np.max(np.abs(res.einstein)) < 1e-8


def test_curvature_expanding_metric_oracle():
    oracle = flrw_curvature_oracle(2.0)
    point = tensors.SpacetimePoint(2.0, 0.0, 0.0, 0.0)
    res = tensors.curvature(tensors.power_law_field(1.0), point, 1e-3)
    assert res.scalar == pytest.approx(oracle["scalar"], rel=1e-4)
    assert res.einstein[0, 0] == pytest.approx(oracle["einstein_tt"], rel=1e-4)


def test_curvature_weak_wave_second_order_small():
    field = tensors.tt_wave_field(1e-5, 0.0, omega=1.0)
    res = tensors.curvature(field, tensors.SpacetimePoint(0.3, 0.1, -0.2, 0.7), 1e-3)
    assert np.max(np.abs(res.einstein)) <= 1e-8


def test_curvature_convergence_order_two():
    point = tensors.SpacetimePoint(2.0, 0.0, 0.0, 0.0)
    field = tensors.power_law_field(1.0)
    errs = [
        abs(tensors.curvature(field, point, s).scalar - 1.5)
        for s in (4e-3, 2e-3, 1e-3)
    ]
    for coarse, fine in zip(errs, errs[1:]):
        order = math.log2(coarse / fine)
        assert abs(order - 2.0) <= 0.3


def test_curvature_einstein_identity():
    point = tensors.SpacetimePoint(2.0, 0.0, 0.0, 0.0)
    field = tensors.power_law_field(1.0)
    res = tensors.curvature(field, point, 1e-3)
    g = field.eval(point).components
    assert np.array_equal(res.einstein, res.ricci - 0.5 * g * res.scalar)
    assert np.max(np.abs(res.ricci - res.ricci.T)) < 1e-8


# -- einstein_constant ---------------------------------------------------------

def test_einstein_constant_codata():
    assert abs(tensors.einstein_constant() - EINSTEIN_K_50DIG) < 1e-46


def test_einstein_constant_geometric_units():
    k = tensors.einstein_constant(tensors.PhysicalConstants(G=1.0, c=1.0))
    assert k == pytest.approx(8.0 * math.pi, rel=1e-15)


def test_einstein_constant_linear_in_g():
    base = tensors.einstein_constant(tensors.PhysicalConstants())
    doubled = tensors.einstein_constant(tensors.PhysicalConstants(G=2 * 6.67430e-11))
    assert doubled == pytest.approx(2.0 * base, rel=1e-15)


# -- curvature_from_stress -------------------------------------------------------

def test_stress_zero_and_identity():
    zero = np.zeros((4, 4))
    assert np.array_equal(tensors.curvature_from_stress(zero, 3.7), zero)
    t = np.arange(16.0).reshape(4, 4)
    t = t + t.T
    assert np.array_equal(tensors.curvature_from_stress(t, 1.0), t)


def test_stress_symmetric_output_and_rejection():
    t = np.diag([1.0, 2.0, 3.0, 4.0])
    out = tensors.curvature_from_stress(t, 2.5)
    assert np.array_equal(out, out.T)
    bad = t.copy()
    bad[0, 1] = 1e-6
    with pytest.raises(AsymmetricInput):
        tensors.curvature_from_stress(bad, 1.0)


@given(alpha=st.floats(-3, 3), beta=st.floats(-3, 3))
def test_stress_linearity(alpha, beta):
    rng = np.random.default_rng(5)
    t1 = rng.normal(size=(4, 4))
    t1 = t1 + t1.T
    t2 = rng.normal(size=(4, 4))
    t2 = t2 + t2.T
    k = 0.75
    lhs = tensors.curvature_from_stress(alpha * t1 + beta * t2, k)
    rhs = alpha * tensors.curvature_from_stress(t1, k) + beta * tensors.curvature_from_stress(t2, k)
    assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


# -- wave_residual ---------------------------------------------------------------

def test_wave_residual_exact_wave_converges_second_order():
    c = 2.0
    wave = lambda t, z: 1e-2 * math.cos(5.0 * (t - z / c))
    steps = [4e-3, 2e-3, 1e-3, 5e-4]
    residuals = [abs(tensors.wave_residual(wave, 0.4, 0.1, s, c)) for s in steps]
    for coarse, fine in zip(residuals, residuals[1:]):
        assert coarse / fine >= 3.4


def test_wave_residual_standing_oscillation_oracle():
    # h(t, z) = A cos(w t): residual = -(1/c^2)(-A w^2 cos(w t)) = A w^2 cos(w t)
    amp, omega, c, t = 1e-3, 10.0, 1.0, 0.13
    expected = amp * omega**2 * math.cos(omega * t)
    got = tensors.wave_residual(lambda tt, zz: amp * math.cos(omega * tt), t, 0.0, 1e-5, c)
    assert got == pytest.approx(expected, rel=1e-6)
    assert abs(expected) == pytest.approx(0.1 * abs(math.cos(omega * t)), rel=1e-12)


def test_wave_residual_constant_is_zero():
    got = tensors.wave_residual(lambda t, z: 0.25, 1.0, 2.0, 1e-3, 3.0)
    assert abs(got) < 1e-12


# -- interval / stretch_factor -----------------------------------------------------

@pytest.mark.parametrize(
    "args,expected",
    [
        ((1.0, 0.0, 0.0, 0.0, 0.0, 1.0), -1.0),
        ((0.0, 1.0, 0.0, 0.0, 1e-3, 1.0), 1.001),
        ((1.0, 1.0, 0.0, 0.0, 0.0, 1.0), 0.0),
    ],
)
def test_interval_examples(args, expected):
    assert tensors.interval(*args) == pytest.approx(expected, abs=1e-15)


def test_interval_rejects_large_strain():
    with pytest.raises(AmplitudeTooLarge):
        tensors.interval(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)


def test_stretch_factor_no_strain():
    assert tensors.stretch_factor(0.0) == (1.0, 1.0)


def test_stretch_factor_frozen_values():
    # sqrt(1 +- 2e-3) at 50-digit precision
    sx, sy = tensors.stretch_factor(2e-3)
    assert sx == pytest.approx(1.0009995004993759, abs=1e-9)
    assert sy == pytest.approx(0.9989994994993742, abs=1e-9)


@given(h=st.floats(1e-4, 0.1, exclude_max=True))
def test_stretch_factor_taylor_remainder(h):
    # below h ~ 1e-4 the h^3/16 margin of the bound sinks under double rounding
    sx, _ = tensors.stretch_factor(h)
    assert abs(sx - (1.0 + h / 2.0)) <= h * h / 8.0
