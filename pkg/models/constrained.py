"""
Best co-q-monotone approximation E_n^(q)(f, Y_s) and its weighted variants.

The semi-infinite problem

    min t  s.t.  |f(x) - P(x)| <= t w(x)          for x in the residual set
                 sigma(u) P^(q)(u) >= 0            for u in the shape set
                 P^(q)(y_i) = 0                    at every change point
                 sigma_+(y_i) P^(q+1)(y_i) >= 0    sigma_+ = sign just right of y_i
                 P(+-1) = f(+-1)                   when the weight demands it

is solved as a sequence of finite LPs. The change-point rows are implied by
the shape constraint (P^(q) is continuous and flips sign there), so every LP
stays a relaxation. After each solve the shape of P is verified on a 16x
denser grid, the change points and the exact critical points of P^(q), and
the weighted residual is scanned; violated shape points and residual peaks
above t are appended as cutting planes.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import chebyshev as C

from core.chebcore import ChebPoly, cheb_grid, differentiate, vander
from core.extrema import sup_estimate
from core.weights import (
    WeightSpec,
    needs_interpolation,
    norm_grid,
    norm_scan,
    weight_value,
    weighted_residual_norm,
)
from models.lp import FEASIBILITY_TOL, lp_solve
from models.remez import DEFAULT_TOL, ApproxResult, _check_degree, kinks_of, noise_floor, sup_norm

logger = logging.getLogger(__name__)

MAX_Q             = 6
VERIFY_FACTOR     = 16
FRESH_FACTOR      = 32
MAX_ROUNDS        = 200
SHAPE_RTOL        = 1e-10
ROOT_IMAG_TOL     = 1e-8
DUPLICATE_TOL     = 1e-12
LP_GAP_FACTOR     = 10.0
LP_GAP_CAP        = 1e-9
ORACLE_MAX_N      = 12
ORACLE_MIN_POINTS = 2001


# ---------------------------------------------------------------------------
# Shape constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShapeConstraint:
    """(q, Y_s): sigma(x) P^(q)(x) >= 0 with sigma = sign prod (x - y_i)."""

    q: int
    change_points: tuple = ()

    def __post_init__(self):
        if int(self.q) != self.q or not 1 <= self.q <= MAX_Q:
            raise ValueError(f"q must be an integer in [1, {MAX_Q}], got {self.q}")
        ys = tuple(float(y) for y in self.change_points)
        if any(not -1.0 < y < 1.0 for y in ys):
            raise ValueError(f"Change points must lie in (-1, 1), got {ys}")
        if any(a <= b for a, b in zip(ys, ys[1:])):
            raise ValueError(f"Change points must be strictly decreasing, got {ys}")
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "change_points", ys)

    @property
    def s(self) -> int:
        return len(self.change_points)

    def label(self) -> str:
        ys = ", ".join(f"{y:g}" for y in self.change_points)
        return f"({self.q}, {{{ys}}})"


@dataclass(frozen=True)
class ShapeReport:
    feasible: bool
    min_signed_value: float
    witness: float
    tol: float = 0.0
    points_checked: int = 0


@dataclass(frozen=True)
class ActiveSetReport:
    """Certificate of a cutting-plane solve: the final finite constraint sets."""

    residual_points: np.ndarray
    shape_points: np.ndarray
    rounds: int
    shape: Optional[ShapeReport] = None
    interpolation: tuple = (False, False)
    lp_rows: int = 0
    stalled: bool = False


def sign_pattern(constraint: ShapeConstraint, x):
    """+1 when an even number of change points exceed x, else -1; ties give +1."""
    arr = np.asarray(x, dtype=float)
    ys = np.asarray(constraint.change_points, dtype=float)
    if ys.size == 0:
        out = np.ones_like(arr)
    else:
        above = np.sum(ys[:, None] > arr.ravel()[None, :], axis=0).reshape(arr.shape)
        out = np.where(above % 2 == 0, 1.0, -1.0)
        ties = np.any(arr.ravel()[None, :] == ys[:, None], axis=0)
        out = np.where(ties.reshape(arr.shape), 1.0, out)
    return float(out) if out.ndim == 0 else out


def _critical_points(dq: ChebPoly) -> np.ndarray:
    """Real zeros in (-1, 1) of the derivative of dq."""
    d = differentiate(dq).trimmed()
    if d.degree < 1:
        return np.zeros(0)
    roots = C.chebroots(d.coeffs)
    real = roots[np.abs(roots.imag) <= ROOT_IMAG_TOL * (1.0 + np.abs(roots.real))].real
    return np.sort(real[np.abs(real) < 1.0])


def _not_change_point(x: np.ndarray, constraint: ShapeConstraint) -> np.ndarray:
    return x[~np.isin(x, np.asarray(constraint.change_points))]


def _verification_points(p: ChebPoly, constraint: ShapeConstraint, grid_size: int) -> np.ndarray:
    edges = np.concatenate([[-1.0], np.sort(constraint.change_points), [1.0]])
    mids = 0.5 * (edges[:-1] + edges[1:])
    crit = _critical_points(differentiate(p, constraint.q))
    pts = np.unique(np.concatenate([cheb_grid(max(grid_size - 1, 1)).nodes, mids, crit]))
    return _not_change_point(pts, constraint)


def _change_point_values(p: ChebPoly, constraint: ShapeConstraint) -> np.ndarray:
    """-|p^(q)(y_i)| net of the roundoff in summing its Chebyshev terms (never positive)."""
    ys = np.asarray(constraint.change_points, dtype=float)
    D = vander(ys, p.degree_bound, order=constraint.q)
    coeffs = p.padded(p.degree_bound)[: p.degree_bound]
    roundoff = SHAPE_RTOL * (np.abs(D) @ np.abs(coeffs) + np.max(np.abs(D), axis=1, initial=0.0))
    return -np.maximum(np.abs(D @ coeffs) - roundoff, 0.0)


def is_co_q_monotone(
    p: ChebPoly,
    constraint: ShapeConstraint,
    grid_size: Optional[int] = None,
    shape_tol: Optional[float] = None,
) -> ShapeReport:
    """
    min of sigma(x) p^(q)(x) over a Lobatto grid of grid_size nodes, the midpoints
    between consecutive breakpoints and the critical points of p^(q). At a change
    point both signs border it, so it contributes -|p^(q)(y_i)|; together with the
    critical points this makes the check exact on every closed sign interval.
    Default tolerance is 1e-10 (1 + max |p^(q)|).
    """
    if grid_size is None:
        grid_size = FRESH_FACTOR * max(p.degree_bound, 8)
    pts = _verification_points(p, constraint, grid_size)
    dq = differentiate(p, constraint.q)
    dq_vals = np.asarray(dq(pts), dtype=float)
    if shape_tol is None:
        shape_tol = SHAPE_RTOL * (1.0 + float(np.max(np.abs(dq_vals))))
    signed = sign_pattern(constraint, pts) * dq_vals
    if constraint.s:
        pts = np.concatenate([pts, constraint.change_points])
        signed = np.concatenate([signed, _change_point_values(p, constraint)])
    i = int(np.argmin(signed))
    return ShapeReport(
        feasible=bool(signed[i] >= -shape_tol),
        min_signed_value=float(signed[i]),
        witness=float(pts[i]),
        tol=float(shape_tol),
        points_checked=int(pts.size),
    )


def _shape_cuts(p: ChebPoly, constraint: ShapeConstraint, grid_size: int, shape_tol: float):
    """Worst violating point inside each violated sign interval."""
    pts = _verification_points(p, constraint, grid_size)
    signed = sign_pattern(constraint, pts) * np.asarray(differentiate(p, constraint.q)(pts))
    edges = np.concatenate([[-1.0], np.sort(constraint.change_points), [1.0]])
    interval = np.clip(np.searchsorted(edges, pts, side="right") - 1, 0, edges.size - 2)
    cuts = []
    for k in np.unique(interval[signed < -shape_tol]):
        mask = (interval == k) & (signed < -shape_tol)
        cuts.append(pts[mask][np.argmin(signed[mask])])
    return np.array(cuts)


# ---------------------------------------------------------------------------
# LP assembly
# ---------------------------------------------------------------------------


def _residual_rows(f: Callable, X: np.ndarray, n: int, spec: WeightSpec):
    T = vander(X, n)
    w = np.asarray(weight_value(spec, X), dtype=float) * np.ones_like(X)
    fx = np.asarray(f(X), dtype=float)
    upper = np.column_stack([-T, -w])
    lower = np.column_stack([T, -w])
    return np.vstack([upper, lower]), np.concatenate([-fx, fx])


def _shape_rows(U: np.ndarray, n: int, constraint: ShapeConstraint):
    D = vander(U, n, order=constraint.q)
    sigma = sign_pattern(constraint, U)
    rows = -(sigma[:, None] * D)
    return np.column_stack([rows, np.zeros(U.size)]), np.zeros(U.size)


def _change_point_rows(n: int, constraint: ShapeConstraint):
    """P^(q)(y_i) = 0 (equalities) and sigma_+(y_i) P^(q+1)(y_i) >= 0 (inequalities)."""
    ys = np.asarray(constraint.change_points, dtype=float)
    right = (-1.0) ** np.arange(ys.size)
    zero = np.zeros((ys.size, 1))
    eq = np.hstack([vander(ys, n, order=constraint.q), zero])
    slope = np.hstack([-(right[:, None] * vander(ys, n, order=constraint.q + 1)), zero])
    return eq, slope


def _interp_rows(f: Callable, n: int, left: bool, right: bool):
    pts = [x for x, on in ((-1.0, left), (1.0, right)) if on]
    if not pts:
        return None, None
    x = np.array(pts)
    return np.column_stack([vander(x, n), np.zeros(x.size)]), np.asarray(f(x), dtype=float)


def _solve(f, n, X, U, constraint, spec, interp):
    A, b = _residual_rows(f, X, n, spec)
    A_eq, b_eq = _interp_rows(f, n, *interp)
    if U is not None:
        S, s = _shape_rows(U, n, constraint)
        E, slope = _change_point_rows(n, constraint)
        A = np.vstack([A, S, slope])
        b = np.concatenate([b, s, np.zeros(slope.shape[0])])
        if E.shape[0]:
            A_eq = E if A_eq is None else np.vstack([A_eq, E])
            b_eq = np.zeros(E.shape[0]) if b_eq is None else np.concatenate([b_eq, np.zeros(E.shape[0])])
    c = np.zeros(n + 1)
    c[-1] = 1.0
    bounds = [(None, None)] * n + [(0.0, None)]
    res = lp_solve(c, A, b, A_eq, b_eq, bounds)
    return ChebPoly(res.x[:n], n), max(float(res.x[-1]), 0.0), b.size


def _merge(existing: np.ndarray, new: np.ndarray) -> np.ndarray:
    if new.size == 0:
        return existing
    fresh = [x for x in new if np.min(np.abs(existing - x), initial=np.inf) > DUPLICATE_TOL]
    if not fresh:
        return existing
    return np.sort(np.concatenate([existing, fresh]))


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------


def best_constrained(
    f: Callable,
    n: int,
    constraint: Optional[ShapeConstraint] = None,
    spec: Optional[WeightSpec] = None,
    tol: float = DEFAULT_TOL,
    max_rounds: int = MAX_ROUNDS,
) -> ApproxResult:
    """
    Cutting-plane solve of min ||(f - P)/w|| over P in P_n with sigma P^(q) >= 0.

    error is the refined weighted sup of the returned P over the scan domain;
    lower_bound is the optimal t of the final finite (relaxed) LP.
    """
    _check_degree(n)
    spec = (spec or WeightSpec.unweighted()).for_degree(n)
    interp = needs_interpolation(spec)
    noise = noise_floor(f)
    shaped = constraint is not None and constraint.q < n

    X = norm_grid(spec, n).nodes
    U = _not_change_point(cheb_grid(max(4 * n, 16)).nodes, constraint) if shaped else None
    verify_size = VERIFY_FACTOR * (U.size if shaped else 0)
    scan = norm_scan(spec, n, kinks_of(f))

    def quotient(x):
        w = np.asarray(weight_value(spec, x), dtype=float)
        return np.abs(np.asarray(f(x), dtype=float) - p(x)) / w

    lp_scale = LP_GAP_FACTOR * FEASIBILITY_TOL * (1.0 + sup_norm(f))

    def slack(level, x):
        # LP rows are met only to FEASIBILITY_TOL, which a small weight magnifies
        lp_gap = min(lp_scale / float(weight_value(spec, x)), LP_GAP_CAP * (1.0 + level))
        return tol * level + noise + lp_gap

    p, t, rows = _solve(f, n, X, U, constraint, spec, interp)
    report, sup, converged, stalled = None, np.inf, False, False
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        cuts = np.zeros(0)
        shape_ok = True
        if shaped:
            report = is_co_q_monotone(p, constraint, verify_size)
            shape_ok = report.feasible
            if not shape_ok:
                cuts = _shape_cuts(p, constraint, verify_size, report.tol)

        est = sup_estimate(quotient, scan)
        sup = est.value
        gap_allowed = slack(sup, est.argmax)
        peaks = est.points[est.values > t + gap_allowed]
        logger.debug(
            "round %d: t=%.15e sup=%.15e shape_ok=%s cuts=%d peaks=%d",
            rounds, t, sup, shape_ok, cuts.size, peaks.size,
        )
        if shape_ok and sup - t <= gap_allowed:
            converged = True
            break

        new_U = _merge(U, cuts) if shaped else U
        new_X = _merge(X, peaks)
        if new_U is U and new_X is X:
            stalled = True
            logger.warning(
                "Cutting planes stalled at round %d (n=%d): no new constraint points", rounds, n
            )
            break
        U, X = new_U, new_X
        p, t, rows = _solve(f, n, X, U, constraint, spec, interp)

    if not converged and not stalled:
        logger.warning("Cutting-plane loop hit %d rounds without converging (n=%d)", max_rounds, n)

    cert = ActiveSetReport(
        residual_points=X,
        shape_points=U if shaped else np.zeros(0),
        rounds=rounds,
        shape=report,
        interpolation=interp,
        lp_rows=rows,
        stalled=stalled,
    )
    diagnostics = {"noise_floor": noise, "weight": spec.label(), "lp_level": t}
    if not spec.is_unweighted:
        trend = weighted_residual_norm(f, p, spec, norm_grid(spec, n))
        diagnostics["endpoint_trend"] = trend.trend
        diagnostics["probable_divergence"] = trend.probable_divergence
    return ApproxResult(
        polynomial=p,
        error=float(sup),
        lower_bound=float(min(t, sup)),
        iterations=rounds,
        certificate=cert,
        converged=converged,
        diagnostics=diagnostics,
    )


def best_weighted(
    f: Callable, n: int, spec: Optional[WeightSpec] = None, tol: float = DEFAULT_TOL
) -> ApproxResult:
    """Weighted best approximation without shape constraint (E_{n,alpha} and its tilde)."""
    return best_constrained(f, n, None, spec, tol)


def brute_force_oracle(
    f: Callable,
    n: int,
    constraint: Optional[ShapeConstraint] = None,
    spec: Optional[WeightSpec] = None,
    grid_points: int = 4001,
) -> float:
    """One-shot LP with residual and shape rows on a single dense Lobatto grid."""
    if n > ORACLE_MAX_N:
        raise ValueError(f"Oracle supports n <= {ORACLE_MAX_N}, got {n}")
    if grid_points < ORACLE_MIN_POINTS:
        raise ValueError(f"Oracle needs grid_points >= {ORACLE_MIN_POINTS}, got {grid_points}")
    _check_degree(n)
    spec = (spec or WeightSpec.unweighted()).for_degree(n)
    interp = needs_interpolation(spec)
    X = norm_grid(spec, 1, factor=grid_points - 1).nodes
    shaped = constraint is not None and constraint.q < n
    U = _not_change_point(cheb_grid(grid_points - 1).nodes, constraint) if shaped else None
    _, t, _ = _solve(f, n, X, U, constraint, spec, interp)
    return t
