import json
import math

import pytest

import buyerdyn as bd

FIG2 = """N = 2
alpha = 0.9
family = quadratic
rule = linear
p = 0.981, 0.8
a = 2.02, 2
horizon = 1000
"""


def test_maps():
    assert bd.eval_contagion(0.5, 0.5) == pytest.approx(0.3625, abs=1e-15)
    assert bd.eval_blended(0.9, 2.0, 0.5) == pytest.approx(0.51375, abs=1e-15)
    assert bd.eval_feedback("ratio", 0.2, 0.3) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        bd.eval_contagion(0.0, 0.5)


def test_step_and_inverse():
    s = bd.MarketState([0.2, 0.4], [1.0, 1.0])
    nxt = bd.step(s, alpha=0.0)
    assert nxt.a == pytest.approx([1.1, 0.9], abs=1e-15)
    assert nxt.p == pytest.approx([0.22036363636363636, 0.3744], abs=1e-14)
    back = bd.step_inverse(nxt, alpha=0.0)
    assert back.p == pytest.approx(s.p, abs=1e-9)
    assert back.a == pytest.approx(s.a, abs=1e-9)


def test_orbit_and_classification():
    s = bd.MarketState([0.981, 0.8], [2.02, 2.0])
    tr = bd.iterate_orbit(s, alpha=0.9, horizon=1000)
    assert len(tr["states"]) == 1001
    assert [len(c) for c in tr["unity_crossings"]] == [2, 0]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(tr["pi"], tr["pi"][1:]))
    assert bd.classify_orbit(s, alpha=0.9, horizon=1000) == "Converged(AllOne)"
    zero = bd.MarketState([0.0, 0.0], [0.3, 0.7])
    assert bd.classify_fixed_point(zero, alpha=0.9) == bd.FixedPointKind.AllZero


def test_simulate_is_deterministic():
    csv1, summary1 = bd.simulate(FIG2)
    csv2, summary2 = bd.simulate(FIG2)
    assert csv1 == csv2 and summary1 == summary2
    summary = json.loads(summary1)
    assert summary["verdict"]["label"] == "Converged(AllOne)"
    assert csv1.startswith("t,p_1,p_2,a_1,a_2,pi\n")


def test_config_errors():
    with pytest.raises(bd.ConfigError, match="alpha"):
        bd.simulate(FIG2.replace("alpha = 0.9", "alpha = 1"))


def test_conditions():
    lin = json.loads(bd.verify_conditions("linear", samples=2000))
    assert 0.95 <= lin["reactivity"]["K"] <= 1.05
    rat = json.loads(bd.verify_conditions("ratio", samples=2000))
    assert rat["reactivity"]["K"] == "unbounded"


def test_figures_and_scan():
    assert set(bd.figure_ids()) == {"fig2", "fig3", "fig4a", "fig4b"}
    ok, summary = bd.figure("fig3")
    assert ok and json.loads(summary)["passed"]
    scan = json.loads(bd.basin_scan(FIG2.replace("1000", "5000"), "p2", 0.57, 0.6, 1e-4))
    assert scan["boundary_width"] <= 1e-4
    assert math.isclose(scan["boundary_estimate"], 0.5921, abs_tol=1e-3)
