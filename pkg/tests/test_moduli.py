"""Tests for core/moduli.py"""

import numpy as np
import pytest

from core.moduli import forward_difference, modulus_profile, omega_k


def test_second_difference_of_square():
    out = forward_difference(lambda x: x ** 2, 2, 0.1, np.array([-0.5, 0.0, 0.3]))
    np.testing.assert_allclose(out, 0.02, atol=1e-14)


def test_first_modulus_of_identity():
    assert omega_k(lambda x: x, 1, 0.5) == pytest.approx(0.5, abs=1e-12)


def test_second_modulus_of_linear_vanishes():
    assert omega_k(lambda x: 3 * x - 1, 2, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_second_modulus_of_square():
    assert omega_k(lambda x: x ** 2, 2, 0.5) == pytest.approx(0.5, rel=1e-10)


def test_second_modulus_of_abs_sees_the_kink():
    assert omega_k(np.abs, 2, 0.1, kinks=[0.0]) == pytest.approx(0.2, rel=1e-10)


def test_modulus_is_nondecreasing_in_t():
    f = lambda x: np.sin(3 * x)  # noqa: E731
    assert omega_k(f, 1, 0.1) <= omega_k(f, 1, 0.2)


@pytest.mark.parametrize("k,t,resolution,match", [
    (0, 0.1, 256, "k must be"),
    (1, 0.0, 256, "t must be positive"),
    (3, 0.9, 256, "exceeds 2"),
    (1, 0.1, 10, "resolution"),
])
def test_omega_argument_errors(k, t, resolution, match):
    with pytest.raises(ValueError, match=match):
        omega_k(np.abs, k, t, resolution)


def test_profile_hits_ladder_top_and_power_tail():
    prof = modulus_profile(np.abs, 2, 0.5, count=12, resolution=64, kinks=[0.0])
    assert prof(0.5) == pytest.approx(1.0, rel=1e-8)
    assert isinstance(prof(0.5), float)
    # below the ladder the tail follows omega_2(|x|, t) = 2t
    assert prof(5e-6) == pytest.approx(1e-5, rel=1e-3)
    np.testing.assert_allclose(prof(np.array([0.5, 0.5])), 1.0, rtol=1e-8)


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("f,kinks,expected", [
    (lambda x: x ** 2, None, lambda t: 2 * t * t),
    (np.abs, [0.0], lambda t: 2 * t),
    (lambda x: 3 * x - 1, None, lambda t: 0.0),
])
def test_second_modulus_closed_forms(f, kinks, expected, t):
    assert omega_k(f, 2, t, kinks=kinks) == pytest.approx(expected(t), rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
def test_profile_ladder_ends_at_t_max(t):
    prof = modulus_profile(np.abs, 2, t, count=12, resolution=64, kinks=[0.0])
    assert prof(t) == pytest.approx(2 * t, rel=1e-6)


def test_full_window_is_allowed():
    assert omega_k(lambda x: x ** 2, 2, 1.0) == pytest.approx(2.0, rel=1e-10)
    with pytest.raises(ValueError, match="exceeds 2"):
        omega_k(lambda x: x ** 2, 2, 1.01)
