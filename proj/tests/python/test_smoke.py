import json
import math

import numpy as np
import pytest

import imitodyn as im


@pytest.fixture(scope="module")
def e4():
    return im.example4_game()


@pytest.fixture(scope="module")
def rule():
    return im.arctan_rule(2, 1.0)


def test_game_and_rule(e4, rule):
    assert e4.num_actions == 2
    assert e4.rewards([0.5, 0.5]) == pytest.approx([10.0, 9.0])
    assert e4.potential([0.75, 0.25]) == pytest.approx(9.5625)
    assert rule.copy_prob(0, 1, [0.0, 1.0]) == pytest.approx(0.75)
    assert im.check_potential_consistency(e4)["pass"]


def test_rates(e4, rule):
    q = im.transition_rates(e4, rule, [50, 50])
    assert q.shape == (2, 2)
    assert q[1, 0] == pytest.approx(18.75)
    assert q[0, 1] == pytest.approx(6.25)
    assert im.drift_rates(e4, rule, [50, 50]) == pytest.approx((18.75, 6.25))


def test_simulate_is_seeded(e4, rule):
    a = im.simulate(e4, rule, [300, 700], horizon=20.0, seed=3)
    b = im.simulate(e4, rule, [300, 700], horizon=20.0, seed=3)
    assert np.array_equal(a["t"], b["t"])
    assert np.array_equal(a["x"], b["x"])
    assert a["x"].shape[1] == 2
    assert np.all(np.diff(a["t"]) > 0)
    assert np.allclose(a["x"].sum(axis=1), 1.0)
    assert a["absorbed_at"] is None


def test_network_simulation(e4, rule):
    g = im.square_lattice(10)
    out = im.simulate(e4, rule, [30, 70], horizon=5.0, seed=1, graph=g, record_stride=0.5)
    assert out["t"][0] == 0.0
    assert np.all(np.diff(out["t"]) > 0)
    assert len(out["t"]) >= 10


def test_ode_and_limit(e4, rule):
    t, x = im.integrate(e4, rule, [0.3, 0.7], T=50.0)
    assert x.shape == (len(t), 2)
    assert x[-1, 0] == pytest.approx(0.75, abs=1e-4)
    lim = im.find_limit(e4, rule, [0.3, 0.7])
    assert lim["converged"]
    assert lim["point"][0] == pytest.approx(0.75, abs=1e-6)
    assert im.mean_field_rhs(e4, rule, [0.5, 0.5]) == pytest.approx([0.125, -0.125])


def test_landscape(e4):
    pts = im.critical_points(e4)
    assert [p["cls"] for p in pts] == ["local_min", "saddle_or_degenerate", "local_max", "local_min"]
    assert [p["is_ess"] for p in pts] == [False, False, True, False]
    g3 = im.congestion_game([[0, -1], [0, -1], [0, -1]])
    ess = [p for p in im.critical_points(g3) if p["is_ess"]]
    assert len(ess) == 1
    assert ess[0]["location"] == pytest.approx([1 / 3] * 3, abs=1e-5)


def test_errors(e4, rule):
    with pytest.raises(ValueError):
        im.arctan_rule(2, -1.0)
    with pytest.raises(ValueError):
        im.matrix_game([[0, 1], [0, 0]]).potential([0.5, 0.5])


def test_cli_entry_point(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({
        "game": {"type": "builtin", "name": "example4"},
        "rule": {"type": "arctan", "K": 1},
        "topology": {"type": "complete", "n": 100},
        "initial": {"x": [0.3, 0.7]},
        "sim": {"horizon": 5},
        "ensemble": {"runs": 2, "base_seed": 1},
    }))
    assert im.cmd_simulate(str(cfg), out=str(tmp_path / "out")) == 0
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert len(summary["per_run"]) == 2
    assert not math.isnan(summary["per_run"][0]["final_state"][0])
