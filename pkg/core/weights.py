"""
Weights phi^alpha, delta_n^alpha (and custom pointwise weights) and the
weighted sup-norm of a residual on a grid.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from core.chebcore import ChebPoly, Grid, _check_domain, cheb_grid
from core.extrema import scan_nodes

logger = logging.getLogger(__name__)

WEIGHT_KINDS     = ("unweighted", "phi_alpha", "delta_alpha", "custom")
NORM_GRID_FACTOR = 32
WEIGHT_FLOOR     = 1e-12
TREND_FLAG       = 1.5


@dataclass(frozen=True)
class WeightSpec:
    kind: str = "unweighted"
    alpha: float = 0.0
    n_param: Optional[int] = None
    custom_weight: Optional[Callable[[np.ndarray], np.ndarray]] = None
    interpolate_left: bool = False
    interpolate_right: bool = False

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"Unknown weight kind '{self.kind}'. Use one of {WEIGHT_KINDS}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.n_param is not None and self.n_param < 1:
            raise ValueError(f"n_param must be a positive integer, got {self.n_param}")
        if self.kind == "custom" and self.custom_weight is None:
            raise ValueError("custom weight kind needs custom_weight")
        if self.kind in ("phi_alpha", "custom") and self.alpha > 0:
            # interpolatory regime: finiteness forces P(+-1) = f(+-1)
            object.__setattr__(self, "interpolate_left", True)
            object.__setattr__(self, "interpolate_right", True)

    @classmethod
    def unweighted(cls) -> "WeightSpec":
        return cls()

    @classmethod
    def phi(cls, alpha: float) -> "WeightSpec":
        return cls("phi_alpha", alpha)

    @classmethod
    def delta(cls, alpha: float, n: Optional[int] = None) -> "WeightSpec":
        return cls("delta_alpha", alpha, n_param=n)

    @property
    def is_unweighted(self) -> bool:
        return self.kind == "unweighted" or (self.kind != "custom" and self.alpha == 0)

    def for_degree(self, n: int) -> "WeightSpec":
        """delta_n weights follow the degree of the problem they are used in."""
        if self.kind == "delta_alpha":
            return replace(self, n_param=n)
        return self

    def label(self) -> str:
        if self.kind == "unweighted":
            return "none"
        if self.kind == "delta_alpha":
            return f"delta^{self.alpha:g} (n={self.n_param})"
        if self.kind == "phi_alpha":
            return f"phi^{self.alpha:g}"
        return f"custom (alpha={self.alpha:g})"


def phi(x):
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.clip(1.0 - x * x, 0.0, None))


def delta(x, n: int):
    return phi(x) + 1.0 / n


def rho(x, n: int):
    return delta(x, n) / n


def weight_value(spec: WeightSpec, x):
    xs = _check_domain(x)
    if spec.kind == "unweighted":
        out = np.ones_like(xs)
    elif spec.kind == "phi_alpha":
        out = np.power(phi(xs), spec.alpha)
    elif spec.kind == "delta_alpha":
        if spec.n_param is None:
            raise ValueError("delta_alpha weight needs n_param (the n of delta_n)")
        out = np.power(delta(xs, spec.n_param), spec.alpha)
    else:
        out = np.asarray(spec.custom_weight(xs), dtype=float) * np.ones_like(xs)
    return float(out) if np.ndim(out) == 0 else out


def vanishes_at(spec: WeightSpec, x: float) -> bool:
    return bool(weight_value(spec, x) <= WEIGHT_FLOOR)


def needs_interpolation(spec: WeightSpec) -> tuple:
    left = spec.interpolate_left or vanishes_at(spec, -1.0)
    right = spec.interpolate_right or vanishes_at(spec, 1.0)
    return left, right


def norm_grid(spec: WeightSpec, degree_bound: int, factor: int = NORM_GRID_FACTOR) -> Grid:
    """Lobatto grid with m = factor*n, endpoints dropped where the weight vanishes."""
    x = cheb_grid(factor * max(1, degree_bound)).nodes
    if vanishes_at(spec, -1.0):
        x = x[1:]
    if vanishes_at(spec, 1.0):
        x = x[:-1]
    return Grid(x, kind="chebyshev-lobatto")


def norm_scan(spec: WeightSpec, degree_bound: int, kinks=()) -> np.ndarray:
    """Fine scan on which the continuous weighted sup is estimated."""
    return scan_nodes(
        degree_bound, kinks,
        drop_left=vanishes_at(spec, -1.0),
        drop_right=vanishes_at(spec, 1.0),
    )


@dataclass(frozen=True)
class NormReport:
    value: float
    argmax: float
    left_trend: float
    right_trend: float

    @property
    def trend(self) -> float:
        return max(self.left_trend, self.right_trend)

    @property
    def probable_divergence(self) -> bool:
        return self.trend > TREND_FLAG


def _ratio(a: float, b: float) -> float:
    if b > 0:
        return a / b
    return np.inf if a > 0 else 1.0


def weighted_residual_norm(f, p: ChebPoly, spec: WeightSpec, grid: Grid) -> NormReport:
    """max_j |f(x_j) - p(x_j)| / w(x_j), plus the near-endpoint trend of the quotient."""
    x = grid.nodes
    w = np.asarray(weight_value(spec, x), dtype=float) * np.ones_like(x)
    if np.any(w <= 0):
        bad = x[w <= 0][0]
        raise ValueError(f"Weight is zero at grid node x={bad!r}; drop it from the grid")
    quotient = np.abs(np.asarray(f(x), dtype=float) - p(x)) / w
    i = int(np.argmax(quotient))
    if x.size >= 2:
        left = _ratio(quotient[0], quotient[1])
        right = _ratio(quotient[-1], quotient[-2])
    else:
        left = right = 1.0
    report = NormReport(float(quotient[i]), float(x[i]), float(left), float(right))
    if report.probable_divergence:
        logger.info(
            "Weighted quotient grows toward an endpoint (trend %.2f) under %s",
            report.trend, spec.label(),
        )
    return report
