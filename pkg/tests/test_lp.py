"""Tests for models/lp.py"""

import pickle
from types import SimpleNamespace

import numpy as np
import pytest

import models.lp as lp_module
from models.lp import (
    DENSE_MAX_ROWS,
    LP_ATTEMPTS,
    LPError,
    cross_check,
    dense_simplex,
    equilibrate,
    lp_solve,
)

BACKENDS = [lp_solve, dense_simplex]

NONNEG = [(0, None), (0, None)]


@pytest.fixture
def textbook():
    # min -x - y  s.t.  x + 2y <= 4,  3x + y <= 6,  x, y >= 0
    return dict(c=[-1.0, -1.0], A_ub=[[1.0, 2.0], [3.0, 1.0]], b_ub=[4.0, 6.0], bounds=NONNEG)


@pytest.fixture
def minimax_line():
    # best constant-plus-slope fit to |x| at x = -1, 0, 1; variables (a, b, t)
    xs = np.array([-1.0, 0.0, 1.0])
    ys = np.abs(xs)
    upper = np.column_stack([np.ones(3), xs, -np.ones(3)])
    lower = np.column_stack([-np.ones(3), -xs, -np.ones(3)])
    return dict(
        c=[0.0, 0.0, 1.0],
        A_ub=np.vstack([upper, lower]),
        b_ub=np.concatenate([ys, -ys]),
    )


@pytest.mark.parametrize("solve", BACKENDS)
def test_textbook_optimum(solve, textbook):
    res = solve(**textbook)
    assert res.objective == pytest.approx(-2.8, abs=1e-9)
    np.testing.assert_allclose(res.x, [1.6, 1.2], atol=1e-9)


@pytest.mark.parametrize("solve", BACKENDS)
def test_equality_constraint(solve):
    res = solve([1.0, 1.0], A_eq=[[1.0, 1.0]], b_eq=[1.0], bounds=NONNEG)
    assert res.objective == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("solve", BACKENDS)
def test_free_variable(solve):
    res = solve([1.0], A_ub=[[-1.0]], b_ub=[0.0])
    assert res.objective == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("solve", BACKENDS)
def test_bounded_variable(solve):
    res = solve([-1.0], bounds=[(0, 2)])
    assert res.objective == pytest.approx(-2.0, abs=1e-9)


@pytest.mark.parametrize("solve", BACKENDS)
def test_infeasible(solve):
    with pytest.raises(LPError) as exc:
        solve([1.0], A_ub=[[1.0]], b_ub=[-1.0], bounds=[(0, None)])
    assert exc.value.status == 2


def test_unbounded_dense():
    with pytest.raises(LPError, match="unbounded") as exc:
        dense_simplex([-1.0], A_ub=[[-1.0]], b_ub=[1.0], bounds=[(0, None)])
    assert exc.value.status == 3


def test_unbounded_highs():
    with pytest.raises(LPError) as exc:
        lp_solve([-1.0], A_ub=[[-1.0]], b_ub=[1.0], bounds=[(0, None)])
    # presolve may only report "infeasible or unbounded"
    assert exc.value.status in (2, 3)


def test_lp_error_is_runtime_error():
    assert issubclass(LPError, RuntimeError)


def test_shape_mismatch():
    with pytest.raises(ValueError, match="Constraint block has shape"):
        lp_solve([1.0, 1.0], A_ub=np.ones((2, 3)), b_ub=[1.0, 1.0])


def test_cross_check_minimax(minimax_line):
    out = cross_check(**minimax_line)
    assert out["highs"] == pytest.approx(0.5, abs=1e-9)
    assert out["gap"] < 1e-8
    assert out["relative_gap"] <= out["gap"]


# ---------------------------------------------------------------------------
# Row scaling and recovery from numerical trouble
# ---------------------------------------------------------------------------


def test_equilibrate_scales_rows_to_unit_max():
    A, b = equilibrate(np.array([[2.0, -8.0], [0.0, 0.0], [0.5, 0.25]]), np.array([4.0, 1.0, 1.0]))
    np.testing.assert_allclose(np.max(np.abs(A), axis=1), [1.0, 0.0, 1.0])
    np.testing.assert_allclose(b, [0.5, 1.0, 2.0])


def test_badly_scaled_rows_keep_the_optimum(textbook):
    scaled = dict(textbook)
    scaled["A_ub"] = np.array(textbook["A_ub"]) * np.array([[1e6], [1e-4]])
    scaled["b_ub"] = np.array(textbook["b_ub"]) * np.array([1e6, 1e-4])
    assert lp_solve(**scaled).objective == pytest.approx(-2.8, abs=1e-9)


def test_lp_error_survives_pickling():
    err = pickle.loads(pickle.dumps(LPError(4, "numerical difficulties")))
    assert isinstance(err, LPError)
    assert err.status == 4
    assert "numerical difficulties" in str(err)


def _flaky_linprog(real, failing: set, calls: list):
    def fake(*args, method, **kwargs):
        calls.append(method)
        if method in failing:
            return SimpleNamespace(status=4, message="numerical difficulties")
        return real(*args, method=method, **kwargs)
    return fake


def test_next_highs_method_after_numerical_trouble(textbook, monkeypatch):
    calls = []
    monkeypatch.setattr(lp_module, "linprog", _flaky_linprog(lp_module.linprog, {"highs-ds"}, calls))
    res = lp_solve(**textbook)
    assert calls == ["highs-ds", "highs-ipm"]
    assert res.objective == pytest.approx(-2.8, abs=1e-7)


def test_dense_fallback_for_small_instances(textbook, monkeypatch):
    calls = []
    monkeypatch.setattr(lp_module, "linprog", _flaky_linprog(lp_module.linprog, {m for m, _ in LP_ATTEMPTS}, calls))
    res = lp_solve(**textbook)
    assert calls == [m for m, _ in LP_ATTEMPTS]
    assert res.objective == pytest.approx(-2.8, abs=1e-9)


def test_large_instance_without_fallback_raises(monkeypatch):
    calls = []
    monkeypatch.setattr(lp_module, "linprog", _flaky_linprog(lp_module.linprog, {m for m, _ in LP_ATTEMPTS}, calls))
    rows = DENSE_MAX_ROWS + 1
    with pytest.raises(LPError) as exc:
        lp_solve([1.0], A_ub=-np.ones((rows, 1)), b_ub=np.zeros(rows))
    assert exc.value.status == 4


def test_infeasible_is_not_retried(monkeypatch):
    calls = []
    monkeypatch.setattr(lp_module, "linprog", _flaky_linprog(lp_module.linprog, set(), calls))
    with pytest.raises(LPError):
        lp_solve([1.0], A_ub=[[1.0]], b_ub=[-1.0], bounds=[(0, None)])
    assert calls == ["highs-ds"]


def test_last_highs_attempt_skips_presolve(textbook, monkeypatch):
    seen = []
    real = lp_module.linprog

    def fake(*args, method, options, **kwargs):
        seen.append(options["presolve"])
        if len(seen) < len(LP_ATTEMPTS):
            return SimpleNamespace(status=4, message="numerical difficulties")
        return real(*args, method=method, options=options, **kwargs)

    monkeypatch.setattr(lp_module, "linprog", fake)
    res = lp_solve(**textbook)
    assert seen == [True, True, True, False]
    assert res.objective == pytest.approx(-2.8, abs=1e-9)
