"""Tests for data/catalog.py"""

import logging

import numpy as np
import pytest

from data.catalog import TestFunction, get_function, list_catalog, monotone_entries
from models.constrained import ShapeConstraint


@pytest.fixture
def exp_fn():
    return get_function("exp")


# ---------------------------------------------------------------------------
# get_function
# ---------------------------------------------------------------------------


def test_monomial_values():
    f = get_function("monomial", {"k": 3})
    assert f(0.5) == pytest.approx(0.125)
    assert f.r_max == 4


def test_signed_primitive_default_is_x2_primitive():
    f = get_function("signed_primitive")
    assert f(0.0) == pytest.approx(-0.5)
    assert f(1.0) == pytest.approx(0.0)


def test_q3_family_default_is_abs_shift():
    f = get_function("q3_family", {"y": 0.25})
    assert f(-0.75) == pytest.approx(1.0)
    assert f(0.25) == pytest.approx(0.0)
    assert f.sobolev_order == 1
    assert f.kink_points == (0.25,)
    assert ShapeConstraint(3, (0.25,)) in f.shape_classes


def test_q3_family_cubic_variant():
    f = get_function("q3_family", {"y": 0.0, "r": 3})
    assert f(0.0) == pytest.approx(-1.0 / 3.0)
    assert f.sobolev_order == 3
    assert f.derivative(2)(0.5) == pytest.approx(1.0)


def test_q3_family_rejects_r2():
    with pytest.raises(ValueError, match="1 or 3"):
        get_function("q3_family", {"r": 2})


def test_endpoint_power_order():
    f = get_function("endpoint_power", {"p": 2.5})
    assert f.r_max == 2
    assert f(1.0) == pytest.approx(2 ** 2.5)


def test_change_points_from_string():
    f = get_function("signed_primitive", {"q": 2, "ys": "0.5,0,-0.5"})
    assert f.params["ys"] == (0.5, 0.0, -0.5)


def test_blend_evaluates_sum():
    f = get_function("blend", {"base": "exp", "other": "abs", "lam": 0.1})
    assert f(-1.0) == pytest.approx(np.exp(-1.0) + 0.1)
    assert ShapeConstraint(1) in f.shape_classes


def test_unknown_id():
    with pytest.raises(ValueError, match="Unknown catalog id"):
        get_function("sinc")


def test_unknown_param():
    with pytest.raises(ValueError, match="unknown params"):
        get_function("exp", {"k": 2})


@pytest.mark.parametrize("id_,params,match", [
    ("trunc", {"a": 1.0}, "outside"),
    ("exp", {"c": 0.0}, "outside"),
    ("monomial", {"k": 11}, "outside"),
    ("monomial", {"k": 2.5}, "must be an integer"),
    ("blend", {"other": "blend"}, "non-blend"),
])
def test_invalid_params(id_, params, match):
    with pytest.raises(ValueError, match=match):
        get_function(id_, params)


def test_increasing_change_points_rejected():
    with pytest.raises(ValueError):
        get_function("abs_primitive", {"ys": "0,0.5"})


def test_evaluation_outside_domain(exp_fn):
    with pytest.raises(ValueError, match="outside"):
        exp_fn(1.5)


# ---------------------------------------------------------------------------
# TestFunction
# ---------------------------------------------------------------------------


def test_exact_derivative_shifts_classes(exp_fn):
    d2 = exp_fn.derivative(2)
    assert d2(0.0) == pytest.approx(1.0)
    assert d2.r_max == exp_fn.r_max - 2
    assert ShapeConstraint(1) in d2.shape_classes
    assert not d2.approximate


def test_xabsx_derivative_is_twice_abs():
    d1 = get_function("xabsx").derivative(1)
    assert d1(-0.5) == pytest.approx(1.0)


def test_derivative_past_exact_order_is_flagged(caplog):
    with caplog.at_level(logging.WARNING, logger="data.catalog"):
        d = get_function("exp", {"c": 2.0}).derivative(13)
    assert d.approximate
    assert "exceeds exact order" in caplog.text


def test_negative_derivative_order(exp_fn):
    with pytest.raises(ValueError, match=">= 0"):
        exp_fn.derivative(-1)


def test_abs_membership():
    f = get_function("abs")
    assert f.belongs_to(ShapeConstraint(1, (0.0,)))
    assert not f.belongs_to(ShapeConstraint(1))


def test_op117_is_coconvex_with_three_changes():
    f = get_function("op117")
    assert f.belongs_to(ShapeConstraint(2, (0.5, 0.0, -0.5)))


def test_false_class_rejected_at_construction():
    with pytest.raises(ValueError, match="fails the membership"):
        TestFunction(
            id="neg", description="-x", fn=lambda x: -np.asarray(x),
            derivative_evals=(lambda x: -np.ones_like(np.asarray(x, dtype=float)),),
            shape_classes=(ShapeConstraint(1),),
        )


def test_scaled_keeps_classes_and_scales_norm(exp_fn):
    g = exp_fn.scaled(2.0)
    assert g.norm == pytest.approx(2.0 * exp_fn.norm)
    assert g.shape_classes == exp_fn.shape_classes
    assert g.params["scale"] == 2.0


def test_scaled_rejects_nonpositive(exp_fn):
    with pytest.raises(ValueError, match="positive"):
        exp_fn.scaled(0.0)


def test_abs_norm_is_one():
    assert get_function("abs").norm == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# Listings
# ---------------------------------------------------------------------------


def test_list_catalog_rows():
    rows = list_catalog()
    ids = [r["id"] for r in rows]
    assert ids[0] == "monomial"
    assert {"exp", "abs", "op117", "q3_family", "endpoint_power", "blend"} <= set(ids)
    assert all({"params", "shape_classes", "r_max", "sobolev_order"} <= set(r) for r in rows)


def test_monotone_entries():
    ids = {f.id for f in monotone_entries()}
    assert {"exp", "xabsx", "trunc", "monomial"} <= ids
    assert "abs" not in ids
    assert "op117" not in ids
