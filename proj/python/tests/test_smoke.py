import math

import numpy as np
import pytest

import schrodingerizer as sz


def test_fourier_matrix_m2():
    np.testing.assert_allclose(sz.fourier_matrix(2), [[1, 1], [-1, 1]], atol=1e-15)


def test_fourier_matrix_rejects_odd():
    with pytest.raises(Exception):
        sz.fourier_matrix(6)


def test_hermitian_split_roundtrip():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    H1, H2 = sz.hermitian_split(A)
    np.testing.assert_allclose(H1, H1.conj().T, atol=1e-14)
    np.testing.assert_allclose(H2, H2.conj().T, atol=1e-14)
    np.testing.assert_allclose(H1 + 1j * H2, A, atol=1e-14)


def test_ode_matches_expm():
    A = np.array([[-1.0, 0.4], [-0.2, -0.5]])
    u0 = np.array([1.0, -0.5])
    pg = sz.PGrid(-4.0, 12.0, 64, 10.0, -1.0)
    got = sz.ode_evolve(A, u0, pg, 0.6, "IntegrateP")
    frozen = [0.40318018919898307 + 0.0020698015168722581j, -0.38957378896916717 - 3.6578009753204179e-05j]
    np.testing.assert_allclose(got, frozen, atol=1e-12)
    exact = sz.dense_expm(A.astype(complex), 0.6) @ u0
    np.testing.assert_allclose(exact.real, [0.46364178691016361, -0.44201731492081031], atol=1e-13)


def test_heat_pointp():
    g = sz.Grid(-1.0, 1.0, 16)
    pg = sz.PGrid(-5.0, 5.0, 512)
    x = g.points()
    T = 4 / math.pi**2
    u = sz.heat_evolve(g, pg, np.sin(math.pi * x), T)
    ex = math.exp(-math.pi**2 * T) * np.sin(math.pi * x)
    assert np.linalg.norm(u - ex) / np.linalg.norm(ex) < 2e-2


def test_dilation_unitary_and_ladder():
    d = sz.dilation_step(np.array([[-1.0]]), np.zeros((1, 1)), 0.5)
    U = d["U"]
    np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-12)
    assert abs(d["top"][0, 0] - math.exp(-0.5)) < 1e-15
    _, p = sz.ladder_evolve(np.array([[-1.0]]), np.zeros((1, 1)), 0.5, 2, np.ones(1))
    assert abs(p - math.exp(-2.0)) < 1e-14


def test_estimate_examples():
    e = sz.estimate({"method": "SchrHeat", "d": 1, "m": 4, "m_p": 9, "T": 1, "dt": 0.01})
    assert e["count"] == pytest.approx(3652.9325012980808, rel=1e-13)
    assert sz.heat_cost_ratio(0.01, 2.0, 1, 1e-3) == pytest.approx(0.038631913574765357, rel=1e-13)
    with pytest.raises(sz.SchemaError, match="dt"):
        sz.estimate({"method": "SchrHeat", "d": 1, "m": 4, "m_p": 9, "T": 1})


def _heat_config(engine="Trotter1", dt=0.01):
    return {
        "model": {
            "kind": "Heat",
            "grid": {"a": -1, "b": 1, "M": 8},
            "pgrid": {"L": -4, "R": 4, "N": 64},
            "params": {"u0": {"fn": "sin_pi"}},
        },
        "engine": {"engine": engine, "dt": dt, "T": 0.1},
        "recovery": {"kind": "PointP"},
    }


def test_run_writes_outputs(tmp_path):
    r = sz.run(_heat_config(), tmp_path)
    assert r["exit_code"] == 0
    assert (tmp_path / "manifest.json").exists()
    assert (tmp_path / "diagnostics.csv").read_text().startswith("time")


def test_cfl_violation(tmp_path):
    r = sz.run(_heat_config("UpwindFD", 0.05), tmp_path)
    assert r["exit_code"] == 2
    assert "admissible" in r["message"]


def test_validate_rejects_unknown_key():
    cfg = _heat_config()
    cfg["engine"]["bogus"] = 1
    with pytest.raises(sz.SchemaError, match="bogus"):
        sz.validate(cfg)
