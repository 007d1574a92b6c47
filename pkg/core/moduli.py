"""
Ordinary moduli of smoothness omega_k(f, t) on [-1, 1] from sampled forward differences.
"""

import logging
from typing import Callable, Iterable, Optional

import numpy as np
from scipy.special import comb

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 64
X_OVERSAMPLE   = 8
H_LADDER_SPAN  = 1e-3
PROFILE_SPAN   = 1e-4


def _kinks_of(f, kinks: Optional[Iterable[float]]) -> np.ndarray:
    if kinks is None:
        kinks = getattr(f, "kink_points", ())
    return np.asarray(list(kinks), dtype=float)


def _x_samples(k: int, h: float, count: int, kinks: np.ndarray) -> np.ndarray:
    right = 1.0 - k * h
    x = np.linspace(-1.0, right, count)
    if kinks.size:
        # windows with a kink at a node, plus the window centred on it
        shifts = np.concatenate([np.arange(k + 1) * h, [k * h / 2.0]])
        extra = (kinks[:, None] - shifts[None, :]).ravel()
        x = np.concatenate([x, extra[(extra >= -1.0) & (extra <= right)]])
    return x


def forward_difference(f: Callable, k: int, h: float, x: np.ndarray) -> np.ndarray:
    """Delta_h^k f(x) = sum_j (-1)^(k-j) C(k,j) f(x + j h)."""
    out = np.zeros_like(np.asarray(x, dtype=float))
    for j in range(k + 1):
        pts = np.clip(x + j * h, -1.0, 1.0)
        out += (-1) ** (k - j) * comb(k, j, exact=True) * np.asarray(f(pts), dtype=float)
    return out


def omega_k(
    f: Callable,
    k: int,
    t: float,
    resolution: int = 256,
    kinks: Optional[Iterable[float]] = None,
) -> float:
    """
    max over h in (0, t] and windows [x, x+kh] inside [-1, 1] of |Delta_h^k f(x)|.
    h runs over a geometric ladder ending at t; kink points of f are always sampled.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    if k * t > 2.0 + 1e-12:
        raise ValueError(f"k*t = {k * t:g} exceeds 2; the k-th difference does not fit in [-1, 1]")
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be >= {MIN_RESOLUTION}, got {resolution}")

    t = min(t, 2.0 / k)
    kink_arr = _kinks_of(f, kinks)
    best = 0.0
    for h in np.geomspace(t * H_LADDER_SPAN, t, resolution):
        x = _x_samples(k, h, X_OVERSAMPLE * resolution, kink_arr)
        if x.size == 0:
            continue
        best = max(best, float(np.max(np.abs(forward_difference(f, k, h, x)))))
    logger.debug("omega_%d(t=%.3g) = %.6e", k, t, best)
    return best


def modulus_profile(
    f: Callable,
    k: int,
    t_max: float,
    count: int = 24,
    resolution: int = 128,
    kinks: Optional[Iterable[float]] = None,
) -> Callable[[np.ndarray], np.ndarray]:
    """
    omega_k(f, .) sampled on a geometric ladder up to t_max and interpolated in log t.
    Below the ladder the values follow the power law of its first two rungs.
    """
    ts = np.geomspace(t_max * PROFILE_SPAN, t_max, count)
    vals = np.array([omega_k(f, k, t, resolution, kinks) for t in ts])
    vals = np.maximum.accumulate(vals)
    log_t = np.log(ts)

    if vals[0] > 0 and vals[1] > 0:
        slope = np.clip(np.log(vals[1] / vals[0]) / (log_t[1] - log_t[0]), 0.0, float(k))
    else:
        slope = float(k)

    def profile(t):
        arr = np.asarray(t, dtype=float)
        out = np.interp(np.log(np.clip(arr, ts[0], ts[-1])), log_t, vals)
        small = arr < ts[0]
        if np.any(small):
            out = np.where(small, vals[0] * (np.clip(arr, 0.0, None) / ts[0]) ** slope, out)
        return float(out) if np.ndim(out) == 0 else out

    return profile
