"""
Scan-and-refine location of extrema of a scalar function on [-1, 1].
Shared by the Remez exchange, the constrained solver and the lift.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from core.chebcore import cheb_grid

logger = logging.getLogger(__name__)

SCAN_FACTOR   = 8
MIN_SCAN      = 1024
KINK_DENSIFY  = 8
REFINE_XATOL  = 1e-14
REFINE_WINDOW = 0.9
MAX_REFINED   = 64


@dataclass(frozen=True)
class SupEstimate:
    value: float
    argmax: float
    points: np.ndarray
    values: np.ndarray


def scan_size(n: int) -> int:
    return max(SCAN_FACTOR * n * n, MIN_SCAN)


def scan_nodes(
    n: int,
    kinks: Iterable[float] = (),
    drop_left: bool = False,
    drop_right: bool = False,
) -> np.ndarray:
    """Lobatto scan grid of max(8n^2, 1024) intervals, densified x8 around kinks."""
    m = scan_size(n)
    x = cheb_grid(m).nodes
    extra = []
    for k in kinks:
        spacing = 2.0 * np.pi / m
        local = k + np.linspace(-spacing, spacing, 2 * KINK_DENSIFY + 1)
        extra.append(local[np.abs(local) < 1.0])
        extra.append([k])
    if extra:
        x = np.unique(np.concatenate([x, *extra]))
    if drop_left:
        x = x[x > -1.0]
    if drop_right:
        x = x[x < 1.0]
    return x


def local_max_indices(values: np.ndarray) -> np.ndarray:
    """Indices of local maxima of a sampled curve, ends included."""
    v = np.asarray(values, dtype=float)
    if v.size == 1:
        return np.array([0])
    left = np.concatenate([[-np.inf], v[:-1]])
    right = np.concatenate([v[1:], [-np.inf]])
    return np.nonzero((v >= left) & (v >= right))[0]


def refine_max(
    g: Callable[[float], float], a: float, b: float, x0: float, g0: float
) -> tuple:
    """Brent refinement of a maximum bracketed by [a, b]; never worse than the node."""
    if b - a <= REFINE_XATOL:
        return x0, g0
    res = minimize_scalar(
        lambda t: -g(t), bounds=(a, b), method="bounded",
        options={"xatol": REFINE_XATOL},
    )
    gx = -float(res.fun)
    if res.success and gx > g0:
        return float(res.x), gx
    return x0, g0


def sup_estimate(
    g: Callable[[np.ndarray], np.ndarray],
    nodes: np.ndarray,
    refine: bool = True,
) -> SupEstimate:
    """Max of g over the span of nodes: scan, then refine the leading local maxima."""
    values = np.asarray(g(nodes), dtype=float)
    if not np.all(np.isfinite(values)):
        bad = nodes[~np.isfinite(values)][0]
        raise ValueError(f"Non-finite value at x={bad!r} while scanning")
    idx = local_max_indices(values)
    top = values.max()
    idx = idx[values[idx] >= REFINE_WINDOW * top]
    if idx.size > MAX_REFINED:
        # plateaus: refine only the largest samples
        idx = np.sort(idx[np.argsort(-values[idx], kind="stable")[:MAX_REFINED]])

    points = nodes[idx].astype(float)
    found = values[idx].astype(float)
    if refine and top > 0:
        scalar = lambda t: float(np.asarray(g(np.array([t])))[0])  # noqa: E731
        for pos, i in enumerate(idx):
            a = nodes[max(i - 1, 0)]
            b = nodes[min(i + 1, nodes.size - 1)]
            points[pos], found[pos] = refine_max(scalar, a, b, points[pos], found[pos])

    best = int(np.argmax(found))
    return SupEstimate(float(found[best]), float(points[best]), points, found)
