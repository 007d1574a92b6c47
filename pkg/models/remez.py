"""
Best unconstrained uniform approximation E_n(f) by the Remez exchange,
with de la Vallee Poussin lower bounds and equioscillation certificates.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from core.chebcore import MAX_DEGREE, ChebPoly, cheb_grid, vander
from core.extrema import refine_max, scan_nodes

logger = logging.getLogger(__name__)

DEFAULT_TOL  = 1e-9
MAX_ITER     = 100
NOISE_FACTOR = 1e3
CERT_RTOL    = 1e-8
EPS          = np.finfo(float).eps


@dataclass(frozen=True)
class AlternationReport:
    points: np.ndarray
    signs: np.ndarray
    values: np.ndarray
    defects: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.defects

    def __len__(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class ApproxResult:
    polynomial: ChebPoly
    error: float
    lower_bound: float
    iterations: int
    certificate: Optional[object] = None
    converged: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        return self.error - self.lower_bound

    @property
    def relative_gap(self) -> float:
        return self.gap / max(self.error, 1e-300)

    @property
    def n(self) -> int:
        return self.polynomial.degree_bound


def kinks_of(f) -> tuple:
    return tuple(getattr(f, "kink_points", ()))


def sup_norm(f: Callable) -> float:
    norm = getattr(f, "norm", None)
    if norm is not None:
        return float(norm)
    x = cheb_grid(2000).nodes
    return float(np.max(np.abs(np.asarray(f(x), dtype=float))))


def noise_floor(f: Callable) -> float:
    """Residuals below this are indistinguishable from roundoff."""
    return NOISE_FACTOR * EPS * (1.0 + sup_norm(f))


def _check_degree(n: int) -> None:
    if n < 1:
        raise ValueError(f"Degree bound n must be >= 1, got {n}")
    if n - 1 > MAX_DEGREE:
        raise ValueError(f"Degree bound n={n} exceeds the double-precision cap {MAX_DEGREE}")


def _signed_extrema(f, p: ChebPoly, nodes: np.ndarray, r: np.ndarray, refine: bool):
    """One extremum per sign run of the residual r = f - p on the scan nodes."""
    signs = np.where(r >= 0, 1.0, -1.0)
    starts = np.concatenate([[0], np.nonzero(np.diff(signs))[0] + 1])
    ends = np.concatenate([starts[1:], [r.size]])
    pts, vals = [], []
    for a, b in zip(starts, ends):
        i = a + int(np.argmax(np.abs(r[a:b])))
        s = signs[i]
        x0, g0 = float(nodes[i]), float(s * r[i])
        if refine:
            g = lambda t, s=s: s * (float(f(t)) - p(t))  # noqa: E731
            x0, g0 = refine_max(g, nodes[max(i - 1, 0)], nodes[min(i + 1, r.size - 1)], x0, g0)
        pts.append(x0)
        vals.append(s * g0)
    return np.array(pts), np.array(vals)


def _trim_reference(pts: np.ndarray, vals: np.ndarray, size: int):
    """Drop the smaller end until `size` alternating points remain."""
    lo, hi = 0, pts.size
    while hi - lo > size:
        if abs(vals[lo]) < abs(vals[hi - 1]):
            lo += 1
        else:
            hi -= 1
    return pts[lo:hi], vals[lo:hi]


def _levelled_solve(f, x_ref: np.ndarray, n: int):
    """Solve sum a_k T_k(x_i) + (-1)^i h = f(x_i) on the n+1 reference points."""
    A = np.column_stack([vander(x_ref, n), (-1.0) ** np.arange(x_ref.size)])
    rhs = np.asarray(f(x_ref), dtype=float)
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(A, rhs, rcond=None)[0]
    return ChebPoly(sol[:n], n), abs(float(sol[n]))


def best_unconstrained(
    f: Callable,
    n: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER,
) -> ApproxResult:
    """
    Remez exchange for min over degree < n of ||f - P|| on [-1, 1].

    The reference starts at the n+1 Chebyshev-Lobatto points. Each round levels
    the error on the reference, scans the residual on max(8n^2, 1024) points
    (densified around kinks of f), refines one extremum per sign run and keeps
    n+1 alternating points containing the global maximum.
    """
    _check_degree(n)
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    noise = noise_floor(f)
    nodes = scan_nodes(n, kinks_of(f))
    fx = np.asarray(f(nodes), dtype=float)

    x_ref = cheb_grid(n).nodes
    error, lower, converged, reproduced = np.inf, 0.0, False, False
    it = 0
    for it in range(1, max_iter + 1):
        p, level = _levelled_solve(f, x_ref, n)
        r = fx - p(nodes)
        scan_max = float(np.max(np.abs(r)))
        if scan_max <= noise:
            error, lower, converged, reproduced = scan_max, 0.0, True, True
            break

        pts, vals = _signed_extrema(f, p, nodes, r, refine=True)
        error = max(scan_max, float(np.max(np.abs(vals))))
        if pts.size < n + 1:
            logger.warning(
                "Remez n=%d: only %d sign runs in the residual; stopping", n, pts.size
            )
            lower = min(level, error)
            converged = error - lower <= tol * error + noise
            break

        pts, vals = _trim_reference(pts, vals, n + 1)
        lower = min(max(level, float(np.min(np.abs(vals)))), error)
        logger.debug("Remez n=%d it=%d error=%.15e lower=%.15e", n, it, error, lower)
        if error - lower <= tol * error + noise:
            converged = True
            break
        x_ref = pts

    result = ApproxResult(
        polynomial=p,
        error=float(error),
        lower_bound=float(lower),
        iterations=it,
        converged=converged,
        diagnostics={"noise_floor": noise, "reproduction": reproduced},
    )
    if not converged:
        logger.warning(
            "Remez n=%d did not converge after %d iterations (gap %.3e)", n, it, result.gap
        )
        return result
    if reproduced:
        return result
    cert = alternation_certificate(result, f)
    if not cert.ok:
        logger.warning("Remez n=%d certificate defects: %s", n, "; ".join(cert.defects))
    return ApproxResult(
        p, result.error, result.lower_bound, it, cert, converged, result.diagnostics
    )


def alternation_certificate(
    result: ApproxResult, f: Callable, rtol: float = CERT_RTOL
) -> AlternationReport:
    """
    Locate the alternation set of f - P and report any defect in count,
    sign alternation or magnitude (relative to result.error).
    """
    p = result.polynomial
    n = p.degree_bound
    nodes = scan_nodes(n, kinks_of(f))
    r = np.asarray(f(nodes), dtype=float) - p(nodes)
    pts, vals = _signed_extrema(f, p, nodes, r, refine=True)

    err = result.error
    slack = rtol * err + noise_floor(f)
    keep = np.abs(vals) >= err - slack
    pts, vals = pts[keep], vals[keep]

    # runs separated by a sub-threshold run can share a sign; keep the larger
    merged_p, merged_v = [], []
    for x, v in zip(pts, vals):
        if merged_v and np.sign(v) == np.sign(merged_v[-1]):
            if abs(v) > abs(merged_v[-1]):
                merged_p[-1], merged_v[-1] = x, v
            continue
        merged_p.append(x)
        merged_v.append(v)
    points, values = np.array(merged_p), np.array(merged_v)
    signs = np.sign(values)

    defects = []
    if points.size < n + 1:
        defects.append(f"count: {points.size} alternation points, need {n + 1}")
    if points.size > 1 and np.any(signs[1:] == signs[:-1]):
        defects.append("sign: residual signs do not alternate")
    if values.size and np.any(np.abs(np.abs(values) - err) > slack):
        worst = float(np.max(np.abs(np.abs(values) - err)))
        defects.append(f"magnitude: deviation {worst:.3e} exceeds {slack:.3e}")
    return AlternationReport(points, signs, values, tuple(defects))
