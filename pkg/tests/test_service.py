"""HTTP service tests: endpoints mirror the library and map domain errors to 422."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from lsat import inference, propagation, spectral, tensors
from lsat.service.app import app

client = TestClient(app)


def test_health():
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_minkowski_endpoint():
    body = client.get("/tensors/minkowski").json()
    assert body["components"] == np.diag([-1.0, 1.0, 1.0, 1.0]).tolist()


def test_tt_strain_endpoint_matches_library():
    resp = client.post(
        "/tensors/tt-strain", json={"h_plus": 2e-4, "h_cross": 1e-4, "phase": 0.3}
    )
    assert resp.status_code == 200
    want = tensors.tt_strain(2e-4, 1e-4, 0.3).components
    assert np.array_equal(np.array(resp.json()["components"]), want)


def test_tt_strain_endpoint_rejects_large_amplitude():
    resp = client.post("/tensors/tt-strain", json={"h_plus": 1.5})
    assert resp.status_code == 422
    assert resp.json()["error"] == "AmplitudeTooLarge"


def test_curvature_endpoint_expanding_metric():
    resp = client.post(
        "/tensors/curvature",
        json={"field": {"kind": "power-law"}, "point": {"t": 2.0}, "step": 1e-3},
    )
    body = resp.json()
    assert body["scalar"] == pytest.approx(1.5, rel=1e-4)
    assert body["einstein"][0][0] == pytest.approx(0.75, rel=1e-4)


def test_curvature_endpoint_unknown_field():
    resp = client.post("/tensors/curvature", json={"field": {"kind": "wormhole"}})
    assert resp.status_code == 422


def test_einstein_constant_endpoint():
    resp = client.post("/tensors/einstein-constant", json={})
    assert resp.json()["value"] == pytest.approx(2.076647442844972e-43, abs=1e-46)


def test_stress_curvature_endpoint():
    stress = [[1.0, 0, 0, 0], [0, 2.0, 0, 0], [0, 0, 3.0, 0], [0, 0, 0, 4.0]]
    resp = client.post("/tensors/stress-curvature", json={"stress": stress, "k": 2.0})
    assert np.array_equal(np.array(resp.json()["components"]), 2.0 * np.array(stress))


def test_interval_and_stretch_endpoints():
    resp = client.post(
        "/tensors/interval",
        json={"dt": 0.0, "dx": 1.0, "dy": 0.0, "dz": 0.0, "h_plus": 1e-3, "c": 1.0},
    )
    assert resp.json()["value"] == pytest.approx(1.001)
    resp = client.post("/tensors/stretch", json={"h_plus": 2e-3})
    assert resp.json()["sx"] == pytest.approx(1.0009995004993759, abs=1e-12)


def test_phase_space_endpoint_matches_library():
    samples = [{"position": x, "strain": 1e-6} for x in (0.0, 0.5, 1.0)]
    resp = client.post(
        "/phase/space",
        json={"length": 1.0, "omega0": 2.99792458e8, "light_speed": 2.99792458e8,
              "samples": samples},
    )
    path = propagation.PhasePath(
        1.0, 2.99792458e8, np.array([0.0, 0.5, 1.0]), np.full(3, 1e-6)
    )
    assert resp.json()["value"] == propagation.phase_space(path, 2.99792458e8)


def test_phase_endpoints_chain():
    refr = client.post(
        "/phase/refractivity",
        json={"temperature_k": 288.15, "pressure_hpa": 1013.25, "vapor_pressure_hpa": 0.0},
    ).json()["value"]
    assert refr == pytest.approx(272.87246225924, rel=1e-12)
    atm = client.post(
        "/phase/atmospheric",
        json={"omega0": 1.2e15, "light_speed": 2.99792458e8,
              "samples": [{"position": 0.0, "refractivity": 300.0},
                           {"position": 1000.0, "refractivity": 300.0}]},
    ).json()["value"]
    noise = client.post("/phase/noise", json={"seed": 3, "sigma": 0.1, "count": 1}).json()[
        "values"
    ]
    total = client.post(
        "/phase/total", json={"space": 1.0, "atmospheric": atm, "earth": noise[0]}
    ).json()
    assert total["total"] == pytest.approx(1.0 + atm + noise[0])


def test_noise_endpoint_deterministic():
    a = client.post("/phase/noise", json={"seed": 9, "sigma": 0.5, "count": 8}).json()
    b = client.post("/phase/noise", json={"seed": 9, "sigma": 0.5, "count": 8}).json()
    assert a == b


def test_signature_endpoints():
    samples = [
        {"intensity": 5.0, "trajectory": 0.2, "channel": 0},
        {"intensity": 7.0, "trajectory": 0.8, "channel": 1},
    ]
    tensor = client.post(
        "/signature/assemble",
        json={"samples": samples, "intensity_bins": 2, "trajectory_bins": 2, "channels": 2},
    ).json()
    assert tensor["dims"] == [2, 2, 2]
    value = client.post(
        "/signature/value",
        json={"tensor": tensor, "weights": [1.0, 1.0], "cell_measure": 1.0},
    ).json()["value"]
    assert value == pytest.approx(12.0)
    agg = client.post("/signature/aggregate", json={"tensors": [tensor, tensor]}).json()
    assert agg["count"] == 2
    assert np.array(agg["values"]).sum() == pytest.approx(24.0)


def test_signature_dimension_error_maps_to_422():
    tensor = {"dims": [1, 1, 2], "values": [1.0, 2.0]}
    resp = client.post(
        "/signature/value", json={"tensor": tensor, "weights": [1.0], "cell_measure": 1.0}
    )
    assert resp.status_code == 422
    assert resp.json()["error"] == "DimensionMismatch"


def test_segment_chord_predict_chain():
    t = np.arange(240.0)
    series = {
        "id": "alba",
        "timestamps": t.tolist(),
        "intensities": np.sin(t * 2 * np.pi / 60.0).tolist(),
    }
    segs = client.post(
        "/segments/split", json={"series": series, "window": 60.0, "profile_length": 16}
    ).json()
    assert len(segs) == 3  # 239 s span -> 3 full windows
    chords = client.post(
        "/segments/chords", json={"segments": segs, "threshold": 0.9}
    ).json()
    assert chords, "periodic windows must correlate"
    assert all(c["similarity"] >= 0.9 for c in chords)
    predicted = client.post(
        "/segments/predict-alternative",
        json={"target": segs[0], "segments": segs, "chords": chords, "epsilon": 1e-6},
    ).json()["profile"]
    assert len(predicted) == 16


def test_spectrogram_endpoint():
    t = (np.arange(300) * 0.5).tolist()
    series = {"id": "s", "timestamps": t, "intensities": [1.0] * 300}
    body = client.post(
        "/spectral/spectrogram",
        json={"series": series, "window_length": 32, "hop": 16, "window": "rectangular"},
    ).json()
    assert len(body["frames"]) == (300 - 32) // 16 + 1
    frames = np.array(body["frames"])
    assert np.all(frames[:, 1:] == -300.0)


def test_dft_endpoint_matches_library():
    x = [1.0, 2.0, 3.0, 4.0]
    body = client.post("/spectral/dft", json={"real": x}).json()
    want = spectral.dft(np.array(x))
    assert np.allclose(np.array(body["real"]) + 1j * np.array(body["imag"]), want)


def test_posterior_endpoint_conjugate():
    params = np.linspace(-5, 5, 4001)
    prior = np.exp(-0.5 * params**2)
    prior /= prior.sum()
    like = np.exp(-0.5 * ((params - 1.0) / 0.5) ** 2)
    body = client.post(
        "/inference/posterior",
        json={"parameters": params.tolist(), "prior": prior.tolist(),
              "likelihood": like.tolist()},
    ).json()
    assert body["mean"] == pytest.approx(0.8, abs=1e-3)
    assert body["variance"] == pytest.approx(0.2, abs=1e-3)


def test_posterior_endpoint_evidence_zero():
    resp = client.post(
        "/inference/posterior",
        json={"parameters": [0.0, 1.0], "prior": [0.5, 0.5], "likelihood": [0.0, 0.0]},
    )
    assert resp.status_code == 422
    assert resp.json()["error"] == "EvidenceZero"


def test_weighted_prediction_endpoint():
    body = client.post(
        "/inference/weighted-prediction",
        json={"entries": [{"rho": 1.0, "p": 0.2}, {"rho": 1.0, "p": 0.6}]},
    ).json()
    assert body["value"] == pytest.approx(0.4)


def test_fit_predict_endpoints():
    x = np.arange(6.0)
    fit = client.post(
        "/inference/fit",
        json={"features": [[v] for v in x], "targets": (2 * x + 1).tolist(),
              "ridge_lambda": 0.0},
    ).json()
    model = inference.fit_baseline(x.reshape(-1, 1), 2 * x + 1, 0.0)
    assert np.allclose(fit["weights"], model.weights)
    out = client.post(
        "/inference/predict",
        json={"weights": fit["weights"], "features": [3.0]},
    ).json()["value"]
    assert out == pytest.approx(7.0, abs=1e-9)
