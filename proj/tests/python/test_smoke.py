import math

import pytest

import catvortex as cv


def test_geometry():
    assert cv.conformal_factor(0.0) == 1.0
    assert cv.gaussian_curvature(0.0) == -1.0
    assert cv.chord_distance(0.0, 0.0, 0.0, math.pi) == pytest.approx(2.0, abs=1e-15)


def test_symmetric_orbit():
    assert cv.omega_symmetric(0.0) == 0.0
    assert cv.omega_symmetric(0.5) == pytest.approx(cv.omega_from_curvature(0.5), rel=1e-13)
    assert cv.v_star() == pytest.approx(0.5 * math.log(2.0 + math.sqrt(3.0)), rel=1e-15)
    s = cv.stability(0.5)
    assert s["lambda"] == pytest.approx(math.sqrt(3.0) * abs(cv.omega_symmetric(0.5)), rel=1e-13)


def test_invariants_and_field():
    g, v, u = [1.0, 1.0], [0.5, 0.5], [math.pi / 2, -math.pi / 2]
    dv, du = cv.vector_field(g, v, u)
    assert max(abs(x) for x in dv) < 1e-14
    assert du[0] == pytest.approx(cv.omega_symmetric(0.5), rel=1e-12)
    assert math.isfinite(cv.hamiltonian(g, v, u))
    assert cv.momentum(g, v, u) == pytest.approx(2.0 * cv.momentum_density(0.5), rel=1e-14)


def test_reduction_round_trip():
    g, v, u = [1.0, 1.0], [0.0, math.pi / 4], [0.0, math.pi / 3]
    rc = cv.reduced_constants(g, v, u)
    V = cv.solve_V(v[0] - v[1], rc["E"], rc["J0"])
    assert V == pytest.approx(0.5 * (v[0] + v[1]), abs=1e-12)


def test_errors():
    with pytest.raises(cv.CollisionError):
        cv.vector_field([1.0, 1.0], [0.2, 0.2], [0.1, 0.1])
    with pytest.raises(cv.UnsupportedError):
        cv.solve_V(0.1, -0.03, 0.5, 1.0, -1.0)
    with pytest.raises(cv.ConfigError):
        cv.run_scenario("rigid", seed=3)


def test_run_scenario(tmp_path):
    summary = cv.run_scenario("rigid", out=tmp_path, t_final=2.0)
    assert summary["scenario"] == "rigid"
    assert summary["drift"]["max_dH"] <= 1e-10
    assert (tmp_path / "rigid_summary.json").exists()
    assert (tmp_path / "rigid_trajectory.csv").exists()
