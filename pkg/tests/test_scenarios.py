"""Tests for experiments/scenarios.py"""

import pytest

from experiments import report as report_module
from experiments import scenarios as scenarios_module
from experiments.scenarios import (
    COCONVEX_NOTES,
    SCENARIOS,
    ScenarioReport,
    run_scenario,
    scenario_defaults,
)
from models.lp import LPError
from models.remez import DEFAULT_TOL


def _names(report):
    return [a.name for a in report.assertions]


# ---------------------------------------------------------------------------
# Registry / config handling
# ---------------------------------------------------------------------------


def test_registry_names():
    assert set(SCENARIOS) == {
        "chain", "qmon-lift", "compare-q12", "pointwise-thm21", "inverse-lemma22",
        "thm31-comonotone", "q3-divergence", "op117-probe", "thm13-ratio",
    }


def test_defaults_are_copies():
    cfg = scenario_defaults("chain")
    cfg["alphas"].append(99.0)
    assert 99.0 not in scenario_defaults("chain")["alphas"]


def test_unknown_scenario():
    with pytest.raises(ValueError, match="Unknown scenario"):
        run_scenario("nope")


def test_unknown_config_key():
    with pytest.raises(ValueError, match="unknown config keys"):
        run_scenario("chain", {"degree": 3})


def test_bad_function_entry():
    with pytest.raises(ValueError, match="Function entry"):
        run_scenario("chain", {"functions": [42], "n_to": 3})


def test_failed_check_is_recorded_not_raised():
    rep = ScenarioReport("demo", {})
    assert not rep.check("always false", "x", False, value=1)
    assert not rep.passed
    assert rep.failures[0].evidence == {"value": 1}


# ---------------------------------------------------------------------------
# Scenario runs on small windows
# ---------------------------------------------------------------------------


def test_chain_small():
    rep = run_scenario("chain", {"functions": ["exp"], "alphas": [1.0], "n_from": 2, "n_to": 4})
    assert rep.passed
    assert _names(rep) == [
        "all chain cells solved", "E_tilde <= E", "E <= E1", "E_tilde <= E1_tilde", "E1_tilde <= E1",
    ]
    assert len(rep.rows) == 3
    assert {row["status"] for row in rep.rows} == {"ok"}
    assert rep.inputs["n_to"] == 4


def test_chain_records_failed_cells(monkeypatch):
    real = scenarios_module.best_weighted

    def failing(f, n, spec=None, tol=DEFAULT_TOL):
        if n == 3:
            raise LPError(4, "numerical difficulties")
        return real(f, n, spec, tol)

    monkeypatch.setattr(scenarios_module, "best_weighted", failing)
    rep = run_scenario("chain", {"functions": ["exp"], "alphas": [1.0], "n_from": 2, "n_to": 4})
    solved = rep.assertions[0]
    assert solved.name == "all chain cells solved"
    assert not solved.passed
    assert [cell[2] for cell in solved.evidence["failed"]] == [3]
    assert all(a.passed for a in rep.assertions[1:])
    assert rep.assertions[1].evidence["cells"] == 2
    assert rep.rows[1]["status"].startswith("failed: LP failed")


@pytest.mark.slow
def test_chain_defaults_pass():
    rep = run_scenario("chain")
    assert rep.passed, [a.evidence for a in rep.failures]


def test_chain_is_deterministic():
    cfg = {"functions": ["xabsx"], "alphas": [2.0], "n_from": 3, "n_to": 4}
    first = report_module.to_json(report_module.scenario_payload(run_scenario("chain", cfg)))
    second = report_module.to_json(report_module.scenario_payload(run_scenario("chain", cfg)))
    assert first == second


def test_qmon_lift_small():
    rep = run_scenario("qmon-lift", {"qs": [2], "ns": [10]})
    assert rep.passed
    assert len(rep.rows) == 1
    assert rep.diagnostics["max_ratio_to_2_over_q_factorial"] >= 0


@pytest.mark.slow
def test_lift_defaults_pass():
    rep = run_scenario("qmon-lift")
    assert rep.passed, [a.evidence for a in rep.failures]
    assert {(row["q"], row["n"]) for row in rep.rows} == {
        (q, n) for q in (1, 2, 3) for n in range(q + 2, 15)
    }


def test_compare_q12_small():
    rep = run_scenario("compare-q12", {"functions": ["exp"], "qs": [1], "alphas": [1.0], "n_to": 6})
    assert rep.passed
    assert rep.rows[0]["ratio"] >= 1.0 - 1e-8
    assert rep.assertions[0].evidence["empirical_cap"] == 50.0


def test_inverse_small():
    rep = run_scenario("inverse-lemma22", {
        "cases": [{"r": 1, "beta": 0.5}], "n_from": 4, "n_to": 6, "t_count": 4,
    })
    assert rep.passed
    assert "r=1, beta=0.5" in rep.diagnostics
    kinds = {row["kind"] for row in rep.rows}
    assert kinds == {"hypothesis", "modulus"}


@pytest.mark.slow
def test_pointwise_structure():
    rep = run_scenario("pointwise-thm21", {
        "cases": [{"id": "trunc", "params": {"m": 2, "a": 0.0}, "r": 1}], "n_from": 4, "n_to": 5,
    })
    assert len(rep.assertions) == 1
    assert rep.assertions[0].name.startswith("R_n bounded")
    assert [row["n"] for row in rep.rows] == [4, 5]


@pytest.mark.slow
def test_pointwise_first_order_case_bounded():
    cfg = scenario_defaults("pointwise-thm21")
    cfg["cases"] = [case for case in cfg["cases"] if case["r"] == 1]
    rep = run_scenario("pointwise-thm21", cfg)
    assert rep.passed, [a.evidence for a in rep.failures]


@pytest.mark.slow
def test_q3_structure():
    rep = run_scenario("q3-divergence", {"ns": [8, 10]})
    assert _names(rep) == ["growth trend of n E_n^(3)", "unconstrained scaled error bounded"]
    assert [row["n"] for row in rep.rows] == [8, 10]


@pytest.mark.slow
def test_q3_defaults_show_growth():
    rep = run_scenario("q3-divergence")
    assert rep.passed, [a.evidence for a in rep.failures]
    assert all(row["converged"] for row in rep.rows)


@pytest.mark.slow
def test_q3_cubic_variant_runs():
    rep = run_scenario("q3-divergence", {"r": 3, "ns": [8, 12]})
    assert rep.assertions[1].evidence["sobolev_order"] == 3


def test_comonotone_small():
    rep = run_scenario("thm31-comonotone", {"ys": [0.0], "alphas": [2.0], "n_from": 2, "n_to": 5})
    assert rep.passed
    assert _names(rep) == ["constrained >= unconstrained (y=0)"]
    diag = rep.diagnostics["y=0, alpha=2"]
    assert diag["window"] == [2, 5]
    assert min(row["scaled_unconstrained"] for row in rep.rows) == pytest.approx(1.0)


@pytest.mark.slow
def test_op117_small():
    rep = run_scenario("op117-probe", {"perturbations": [{"lam": 0.5, "c": 0.25}], "n_from": 6, "n_to": 7})
    repro = [a for a in rep.assertions if a.name.startswith("P_6 reproduces")]
    assert repro and repro[0].passed
    assert rep.notes[-len(COCONVEX_NOTES):] == COCONVEX_NOTES
    assert len(rep.diagnostics["P6_coefficients"]) == 6


@pytest.mark.slow
def test_op117_defaults_pass():
    rep = run_scenario("op117-probe")
    assert rep.passed, [a.evidence for a in rep.failures]
    assert all(row["shape_feasible"] for row in rep.rows)


def test_thm13_small():
    rep = run_scenario("thm13-ratio", {"functions": ["exp"], "alphas": [1.0], "n_from": 2, "n_to": 4})
    assert rep.passed
    assert [row["trial_N_star"] for row in rep.rows] == [2, 3, 4]
    assert rep.rows[0]["ratio"] >= rep.rows[-1]["ratio"]


def test_thm13_surfaces_endpoint_trend():
    rep = run_scenario("thm13-ratio", {"functions": ["exp"], "alphas": [3.0], "n_from": 2, "n_to": 4})
    for row in rep.rows:
        assert row["probable_divergence"] == (row["endpoint_trend"] > 1.5)
    diverging = rep.diagnostics["exp, alpha=3"]["probable_divergence_at"]
    assert diverging == [row["trial_N_star"] for row in rep.rows if row["probable_divergence"]]
    assert bool(diverging) == any("endpoint" in note for note in rep.notes)
