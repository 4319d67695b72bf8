import math

import numpy as np
import pytest

import setcd


def test_graph_basics():
    g = setcd.Graph(3, [(2, 1), (0, 1), (0, 2)])
    assert g.num_nodes == 3
    assert g.edges == [(0, 1), (0, 2), (1, 2)]
    lo, hi = g.spectrum()
    assert lo == pytest.approx(3.0)
    assert hi == pytest.approx(3.0)
    a = np.asarray(g.incidence())
    assert a.shape == (3, 3)
    assert np.allclose(a @ a.T, g.laplacian())
    assert setcd.graph_from_json('{"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}') == g


def test_errors_are_translated():
    with pytest.raises(setcd.SetcdError, match="DisconnectedGraph"):
        setcd.Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(setcd.SetcdError, match="OddDegree"):
        setcd.circulant_regular(10, 3)


def test_two_node_one_step():
    fs = [setcd.Quadratic(np.eye(1), np.array([-a]), 0.5 * a * a) for a in (1.0, 3.0)]
    p = setcd.DualConsensusProblem(setcd.Graph(2, [(0, 1)]), fs)
    assert p.optimal_value == pytest.approx(-1.0)
    t = p.run(p.zero_state(), "su", iterations=1)
    assert t["suboptimality"][0] <= 1e-12
    assert t["eta"] == pytest.approx(0.5)


def test_dual_gradient_matches_finite_differences():
    g = setcd.random_connected_graph(5, 3, seed=2)
    rng = np.random.default_rng(0)
    fs = []
    for _ in range(5):
        m = rng.normal(size=(2, 2))
        fs.append(setcd.Quadratic(m.T @ m + np.eye(2), rng.normal(size=2)))
    p = setcd.DualConsensusProblem(g, fs)
    s = p.gaussian_state(4)
    grad = p.full_gradient(s)
    h = 1e-5
    lam = np.array(s.lam)
    for k in range(lam.size):
        e = np.zeros_like(lam)
        e[k] = h
        fd = (p.value(p.state_from(lam + e)) - p.value(p.state_from(lam - e))) / (2 * h)
        assert grad[k] == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_norm_oracles():
    k3 = setcd.Graph(3, [(0, 1), (0, 2), (1, 2)])
    assert setcd.norm_sm(k3, np.ones(3)) == pytest.approx(math.sqrt(3))
    lo, hi = setcd.smno_dual_candidate(k3, np.ones(3))
    assert (lo, hi) == pytest.approx((math.sqrt(3), math.sqrt(5)))
    star = setcd.Graph(4, [(0, 1), (0, 2), (0, 3)])
    value, upper = setcd.sm_dual_norm(star, np.ones(3))
    assert value == pytest.approx(1.5, rel=1e-6)
    assert upper >= value - 1e-12
    p = np.asarray(setcd.range_projector(k3))
    assert np.allclose(p @ p, p)


def test_rate_and_experiments():
    iters = np.arange(60, dtype=float)
    r = setcd.estimate_rate(iters, 100 * 0.9**iters)
    assert r["rho"] == pytest.approx(0.1, rel=1e-10)
    s = setcd.experiment_paramserver(24, 4, seeds=2, iterations=3000)
    for key in ("setting", "n", "N_max", "rho_U", "rho_G", "ratio", "bound_su", "bound_sgs", "seeds", "iterations"):
        assert key in s
    assert s["N_max"] == 4
    assert s["ratio"] > 1


def test_fast_verify():
    report = setcd.verify("fast")
    assert report["passed"], [c for c in report["checks"] if not c["passed"]]
