"""Tests for core/extrema.py"""

import numpy as np
import pytest

from core.extrema import local_max_indices, scan_nodes, scan_size, sup_estimate


def test_scan_size_floor_and_growth():
    assert scan_size(3) == 1024
    assert scan_size(20) == 3200


def test_scan_nodes_include_kinks():
    x = scan_nodes(4, kinks=[0.3])
    assert np.any(x == 0.3)
    assert np.all(np.diff(x) > 0)
    assert x[0] == -1.0 and x[-1] == 1.0


def test_scan_nodes_drop_endpoints():
    x = scan_nodes(4, drop_left=True, drop_right=True)
    assert x[0] > -1.0 and x[-1] < 1.0


def test_local_max_indices_with_ends():
    np.testing.assert_array_equal(local_max_indices(np.array([1.0, 0.0, 2.0, 0.0, 3.0])), [0, 2, 4])


def test_local_max_single_sample():
    np.testing.assert_array_equal(local_max_indices(np.array([5.0])), [0])


def test_sup_estimate_refines_interior_peak():
    g = lambda x: 1.0 - (x - 0.123) ** 2  # noqa: E731
    est = sup_estimate(g, scan_nodes(4))
    assert est.value == pytest.approx(1.0, abs=1e-14)
    assert est.argmax == pytest.approx(0.123, abs=1e-6)


def test_sup_estimate_never_below_samples():
    nodes = scan_nodes(6)
    g = lambda x: np.abs(np.cos(7 * x) * np.exp(x))  # noqa: E731
    est = sup_estimate(g, nodes)
    assert est.value >= g(nodes).max()


def test_sup_estimate_without_refinement_is_node_max():
    nodes = np.linspace(-1, 1, 11)
    est = sup_estimate(lambda x: -(x ** 2), nodes, refine=False)
    assert est.value == 0.0
    assert est.argmax == 0.0


def test_sup_estimate_rejects_non_finite():
    with pytest.raises(ValueError, match="Non-finite"):
        sup_estimate(lambda x: 1.0 / x, np.linspace(-1, 1, 5))
