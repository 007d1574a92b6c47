"""
Constructive q-monotone approximation from a best approximation of f^(q):
shift it up by its error, integrate q times from -1 with f's Taylor data, then
remove the best degree-<q correction (which leaves the q-th derivative alone).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.chebcore import ChebPoly, integrate
from core.extrema import scan_nodes, sup_estimate
from models.constrained import ShapeConstraint, ShapeReport, is_co_q_monotone
from models.remez import DEFAULT_TOL, best_unconstrained, kinks_of, noise_floor

logger = logging.getLogger(__name__)

RETRY_INFLATION = 10.0
GUARANTEE_SLACK = 1e-8


@dataclass(frozen=True)
class LiftReport:
    E: float
    shift: float
    achieved: float
    guaranteed: float
    sharp_ratio: float
    shape: ShapeReport
    retried: bool = False

    @property
    def within_guarantee(self) -> bool:
        return self.achieved <= self.guaranteed + GUARANTEE_SLACK


class _Difference:
    """x -> P(x) - f(x), carrying f's kinks for the scan."""

    def __init__(self, p: ChebPoly, f: Callable):
        self.p, self.f = p, f
        self.kink_points = kinks_of(f)

    def __call__(self, x):
        return self.p(x) - np.asarray(self.f(x), dtype=float)


def _integrate_up(r: ChebPoly, f, q: int) -> ChebPoly:
    """q-fold antiderivative matching f^(j)(-1) for j = q-1, ..., 0."""
    p = r
    for j in range(q - 1, -1, -1):
        p = integrate(p, float(f.derivative(j)(-1.0)))
    return p


def _build(f, q: int, n: int, q_poly: ChebPoly, shift: float, tol: float) -> ChebPoly:
    raw = _integrate_up(q_poly.shift(shift), f, q)
    correction = best_unconstrained(_Difference(raw, f), q, tol).polynomial
    out = raw - correction
    return ChebPoly(out.padded(n)[:n], n)


def lift_q_monotone(f, q: int, n: int, tol: float = DEFAULT_TOL):
    """Returns (P, LiftReport) with P in P_n and P^(q) >= 0 up to solver slack."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if n - q < 1:
        raise ValueError(f"lift needs n > q, got n={n}, q={q}")
    if not hasattr(f, "derivative"):
        raise ValueError("lift needs a catalog function with derivative evaluators")

    fq = f.derivative(q)
    base = best_unconstrained(fq, n - q, tol)
    E = base.error
    constraint = ShapeConstraint(q)

    shift = E
    p = _build(f, q, n, base.polynomial, shift, tol)
    shape = is_co_q_monotone(p, constraint)
    retried = False
    if not shape.feasible:
        shift = E + RETRY_INFLATION * abs(shape.min_signed_value)
        logger.warning(
            "lift q=%d n=%d: shape check failed (min %.3e); re-running with shift %.3e",
            q, n, shape.min_signed_value, shift,
        )
        p = _build(f, q, n, base.polynomial, shift, tol)
        shape = is_co_q_monotone(p, constraint)
        retried = True
        if not shape.feasible:
            logger.warning("lift q=%d n=%d: shape still infeasible after retry", q, n)

    achieved = sup_estimate(
        lambda x: np.abs(np.asarray(f(x), dtype=float) - p(x)), scan_nodes(n, kinks_of(f))
    ).value
    guaranteed = 2.0 ** q / math.factorial(q) * E
    sharp_bound = 2.0 / math.factorial(q) * E
    if sharp_bound > 0:
        ratio = achieved / sharp_bound
    else:
        ratio = 0.0 if achieved <= noise_floor(f) else np.inf

    report = LiftReport(
        E=float(E),
        shift=float(shift),
        achieved=float(achieved),
        guaranteed=float(guaranteed),
        sharp_ratio=float(ratio),
        shape=shape,
        retried=retried,
    )
    logger.info(
        "lift q=%d n=%d: E=%.3e achieved=%.3e ratio to 2/q! bound=%.3f",
        q, n, E, achieved, ratio,
    )
    return p, report
