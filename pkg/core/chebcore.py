"""
Chebyshev-T polynomial arithmetic on [-1, 1].
Every approximant in the lab is a ChebPoly; the monomial basis is never used.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from numpy.polynomial import chebyshev as C

logger = logging.getLogger(__name__)

MAX_DEGREE = 50
TRIM_TOL   = 1e-14
DOMAIN_TOL = 1e-12

GRID_KINDS = {"chebyshev-lobatto", "uniform", "custom"}

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ChebPoly:
    """Polynomial sum c_k T_k of degree < degree_bound (the n of P_n)."""

    coeffs: np.ndarray
    degree_bound: int = 0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size == 0:
            raise ValueError("ChebPoly needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("ChebPoly coefficients must be finite")
        if c.size - 1 > MAX_DEGREE:
            raise ValueError(
                f"Degree {c.size - 1} exceeds the double-precision cap {MAX_DEGREE}"
            )
        n = int(self.degree_bound) or c.size
        if c.size > n:
            raise ValueError(f"{c.size} coefficients do not fit degree bound n={n}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "degree_bound", n)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return clenshaw_eval(self, x)

    def trimmed(self) -> "ChebPoly":
        return ChebPoly(_trim(self.coeffs), self.degree_bound)

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(max(size, self.coeffs.size))
        out[: self.coeffs.size] = self.coeffs
        return out

    def __add__(self, other: "ChebPoly") -> "ChebPoly":
        size = max(self.coeffs.size, other.coeffs.size)
        return ChebPoly(
            self.padded(size) + other.padded(size),
            max(self.degree_bound, other.degree_bound),
        )

    def __sub__(self, other: "ChebPoly") -> "ChebPoly":
        return self + other.scale(-1.0)

    def scale(self, factor: float) -> "ChebPoly":
        return ChebPoly(self.coeffs * factor, self.degree_bound)

    def shift(self, constant: float) -> "ChebPoly":
        c = self.coeffs.copy()
        c[0] += constant
        return ChebPoly(c, self.degree_bound)


@dataclass(frozen=True)
class Grid:
    nodes: np.ndarray
    kind: str = "custom"
    includes_endpoints: bool = field(default=False)

    def __post_init__(self):
        x = np.array(self.nodes, dtype=float).ravel()
        if self.kind not in GRID_KINDS:
            raise ValueError(f"Unknown grid kind '{self.kind}'")
        if x.size == 0:
            raise ValueError("Grid must contain at least one node")
        if np.any(np.abs(x) > 1.0):
            raise ValueError("Grid nodes must lie in [-1, 1]")
        if np.any(np.diff(x) <= 0):
            raise ValueError("Grid nodes must be strictly increasing")
        x.flags.writeable = False
        object.__setattr__(self, "nodes", x)
        object.__setattr__(
            self, "includes_endpoints", bool(x[0] == -1.0 and x[-1] == 1.0)
        )

    def __len__(self) -> int:
        return self.nodes.size


def _trim(c: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1)
    keep = np.nonzero(np.abs(c) >= TRIM_TOL * scale)[0]
    return c[: keep[-1] + 1].copy()


def _check_domain(x: ArrayLike) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0 + DOMAIN_TOL):
        bad = arr[np.abs(arr) > 1.0 + DOMAIN_TOL].ravel()[0]
        raise ValueError(f"Point {bad!r} outside [-1, 1]")
    return np.clip(arr, -1.0, 1.0)


def clenshaw_eval(p: ChebPoly, x: ArrayLike) -> ArrayLike:
    """Backward (Clenshaw) recurrence; accepts scalars or arrays."""
    xs = _check_domain(x)
    out = C.chebval(xs, p.coeffs)
    return float(out) if np.ndim(out) == 0 else out


def differentiate(p: ChebPoly, order: int = 1) -> ChebPoly:
    n = p.degree_bound
    c = p.coeffs
    for _ in range(order):
        c = C.chebder(c) if c.size > 1 else np.zeros(1)
        n = max(1, n - 1)
    return ChebPoly(c, n)


def integrate(p: ChebPoly, value_at_minus1: float = 0.0) -> ChebPoly:
    """Antiderivative F with F(-1) = value_at_minus1."""
    c = C.chebint(p.coeffs, m=1, k=[value_at_minus1], lbnd=-1)
    if c.size > 1 and np.all(c[1:] == 0.0):
        c = c[:1]
    return ChebPoly(c, p.degree_bound + 1)


def cheb_grid(m: int) -> Grid:
    """The m+1 Chebyshev-Lobatto nodes cos(j*pi/m), ascending."""
    if m < 1:
        raise ValueError("cheb_grid needs m >= 1")
    # sin form keeps the nodes exactly symmetric and sorted
    j = np.arange(-m, m + 1, 2)
    return Grid(np.sin(np.pi * j / (2 * m)), kind="chebyshev-lobatto")


def interpolate(f: Callable[[np.ndarray], np.ndarray], m: int) -> ChebPoly:
    """Degree-m interpolant at the Lobatto nodes, coefficients by direct O(m^2) sums."""
    if m < 1:
        raise ValueError("interpolate needs m >= 1")
    if m > MAX_DEGREE:
        raise ValueError(f"Interpolation degree {m} exceeds cap {MAX_DEGREE}")
    j = np.arange(m + 1)
    x = np.cos(np.pi * j / m)
    x[np.abs(x) < 1e-15] = 0.0
    fx = np.asarray(f(x), dtype=float)

    w = np.ones(m + 1)
    w[0] = w[-1] = 0.5
    basis = np.cos(np.pi * np.outer(j, j) / m)
    c = (2.0 / m) * basis @ (w * fx)
    c[0] *= 0.5
    c[-1] *= 0.5
    return ChebPoly(c, m + 1)


def vander(x: np.ndarray, n: int, order: int = 0) -> np.ndarray:
    """Rows T_k^(order)(x_j), k < n: the LP columns."""
    x = np.asarray(x, dtype=float)
    if order == 0:
        return C.chebvander(x, n - 1)
    if order >= n:
        return np.zeros((x.size, n))
    d = C.chebder(np.eye(n), m=order, axis=0)
    return C.chebvander(x, n - 1 - order) @ d
