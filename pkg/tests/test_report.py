"""Tests for experiments/report.py"""

import json

import numpy as np
import pandas as pd
import pytest

from core.weights import WeightSpec
from data.catalog import get_function
from experiments import report
from experiments.scenarios import ScenarioReport
from models.constrained import ShapeConstraint, best_constrained, best_weighted
from models.regimes import RegimeSymbol
from models.remez import best_unconstrained


@pytest.fixture
def cube_result():
    return best_unconstrained(get_function("monomial", {"k": 3}), 3)


# ---------------------------------------------------------------------------
# _clean
# ---------------------------------------------------------------------------


def test_clean_converts_numpy_and_enums():
    out = report._clean({
        "a": np.float64(1.5), "b": np.int64(3), "c": np.array([1.0, 2.0]),
        "d": RegimeSymbol.OPLUS, "e": np.bool_(True), "f": {3, 1}, 2: (1, 2),
    })
    assert out == {"a": 1.5, "b": 3, "c": [1.0, 2.0], "d": "oplus", "e": True, "f": [1, 3], "2": [1, 2]}


def test_clean_non_finite_floats():
    assert report._clean([np.nan, np.inf, -np.inf]) == ["nan", "inf", "-inf"]


def test_clean_callable_and_other():
    assert report._clean(np.exp) == "exp"
    assert report._clean(ShapeConstraint(1)) == str(ShapeConstraint(1))


# ---------------------------------------------------------------------------
# Payloads
# ---------------------------------------------------------------------------


def test_payload_envelope():
    data = report.payload("classify", {"s": 1}, [{"glyph": "+"}])
    assert data["schema_version"] == report.SCHEMA_VERSION
    assert set(data) == {"schema_version", "command", "inputs", "rows", "assertions", "diagnostics"}


def test_result_payload_with_alternation(cube_result):
    data = report.result_payload("approx", {"alpha": 0.0}, cube_result)
    row = data["rows"][0]
    assert row["n"] == 3
    assert row["value"] == pytest.approx(0.25)
    assert "alternation" in data["diagnostics"]
    assert len(data["diagnostics"]["coefficients"]) == 3


def test_result_payload_with_active_set():
    res = best_constrained(get_function("exp"), 5, ShapeConstraint(1))
    data = report.result_payload("constrained", {"alpha": 2.0}, res)
    assert data["rows"][0]["scaled"] == pytest.approx(25.0 * res.error)
    assert data["diagnostics"]["shape"]["feasible"] is True
    assert data["diagnostics"]["active_set"]["rounds"] >= 1


def test_result_payload_carries_endpoint_trend():
    res = best_weighted(get_function("exp"), 6, WeightSpec.phi(2.0))
    data = report.result_payload("weighted", {"alpha": 2.0}, res)
    assert data["diagnostics"]["endpoint_trend"] == res.diagnostics["endpoint_trend"]
    assert "probable_divergence" in json.loads(report.to_json(data))["diagnostics"]


def test_scenario_payload():
    rep = ScenarioReport("demo", {"x": 1})
    rep.check("ok", "holds", True)
    rep.notes.append("note")
    data = report.scenario_payload(rep)
    assert data["command"] == "scenario demo"
    assert data["diagnostics"]["passed"] is True
    assert data["assertions"][0]["name"] == "ok"


# ---------------------------------------------------------------------------
# Renderings
# ---------------------------------------------------------------------------


def test_json_is_sorted_and_parsable(cube_result):
    text = report.to_json(report.result_payload("approx", {}, cube_result))
    assert text.endswith("\n")
    parsed = json.loads(text)
    assert list(parsed) == sorted(parsed)


def test_csv_header_follows_preferred_columns():
    rows = pd.DataFrame([{"status": "ok", "value": 0.1, "n": 2, "scaled": 0.4}])
    assert report.to_csv(rows).splitlines()[0] == "n,value,scaled"


def test_csv_falls_back_to_all_columns():
    rows = pd.DataFrame([{"glyph": "+"}])
    assert report.to_csv(rows).splitlines()[0] == "glyph"


def test_text_lists_assertions():
    data = report.payload("x", {}, [{"n": 1}], [{"name": "a", "invariant": "b", "passed": False}], {"k": 2})
    text = report.to_text(data)
    assert "[FAIL] a: b" in text
    assert "k: 2" in text


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError, match="Unknown output format"):
        report.render({}, "xml")


def test_write_creates_parents(tmp_path):
    target = tmp_path / "nested" / "out.json"
    report.write("{}\n", str(target))
    assert target.read_text(encoding="utf-8") == "{}\n"
