"""
Linear programming backends.

lp_solve wraps scipy's HiGHS dual simplex (deterministic pivoting) and is what
the approximation solvers use. Rows are equilibrated to unit max-norm first;
when HiGHS reports numerical trouble the next HiGHS method is tried, then dual
simplex without presolve. Instances up to DENSE_MAX_ROWS rows finally fall back
to dense_simplex, an independent two-phase tableau method with Bland's rule
that also serves as the test cross-check.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

logger = logging.getLogger(__name__)

LP_ATTEMPTS     = (("highs-ds", True), ("highs-ipm", True), ("highs", True), ("highs-ds", False))
RETRY_STATUSES  = (1, 4)
DENSE_MAX_ROWS  = 1500
FEASIBILITY_TOL = 1e-10
PIVOT_TOL       = 1e-11
MAX_PIVOTS      = 50_000

LP_STATUS = {
    0: "optimal",
    1: "iteration limit",
    2: "infeasible",
    3: "unbounded",
    4: "numerical difficulties",
}


class LPError(RuntimeError):
    def __init__(self, status: int, message: str):
        self.status = status
        self.detail = message
        super().__init__(f"LP failed ({LP_STATUS.get(status, status)}): {message}")

    def __reduce__(self):
        # worker processes send failures back pickled
        return type(self), (self.status, self.detail)


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    objective: float
    status: int = 0
    message: str = "optimal"
    iterations: int = 0


def _as_rows(A, b, n: int):
    if A is None:
        return np.zeros((0, n)), np.zeros(0)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if A.shape != (b.size, n):
        raise ValueError(f"Constraint block has shape {A.shape}, expected ({b.size}, {n})")
    return A, b


def equilibrate(A: np.ndarray, b: np.ndarray):
    """Scale every row (and its right-hand side) to unit max-norm; zero rows are kept."""
    if A.shape[0] == 0:
        return A, b
    scale = np.max(np.abs(A), axis=1)
    scale[scale == 0.0] = 1.0
    return A / scale[:, None], b / scale


def lp_solve(
    c: Sequence[float],
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    bounds=None,
) -> LPResult:
    """min c.x subject to A_ub x <= b_ub, A_eq x = b_eq and variable bounds (default free)."""
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub, b_ub = equilibrate(*_as_rows(A_ub, b_ub, n))
    A_eq, b_eq = equilibrate(*_as_rows(A_eq, b_eq, n))
    if bounds is None:
        bounds = [(None, None)] * n
    rows = b_ub.size + b_eq.size

    failure = None
    for method, presolve in LP_ATTEMPTS:
        res = linprog(
            c,
            A_ub=A_ub if A_ub.size else None,
            b_ub=b_ub if b_ub.size else None,
            A_eq=A_eq if A_eq.size else None,
            b_eq=b_eq if b_eq.size else None,
            bounds=bounds,
            method=method,
            options={
                "presolve": presolve,
                "primal_feasibility_tolerance": FEASIBILITY_TOL,
                "dual_feasibility_tolerance": FEASIBILITY_TOL,
            },
        )
        if res.status == 0:
            if failure is not None:
                logger.info("LP recovered with %s after: %s", method, failure[1])
            logger.debug("LP: %d vars, %d rows, objective %.12e", n, rows, res.fun)
            return LPResult(
                np.asarray(res.x, dtype=float), float(res.fun), 0, str(res.message), int(res.nit)
            )
        failure = (int(res.status), str(res.message))
        if failure[0] not in RETRY_STATUSES:
            raise LPError(*failure)
        logger.warning("LP %s (presolve=%s): %s (%d rows)", method, presolve, res.message, rows)

    if rows <= DENSE_MAX_ROWS:
        logger.warning("HiGHS gave up on %d rows; solving with the dense tableau", rows)
        return dense_simplex(c, A_ub, b_ub, A_eq, b_eq, bounds)
    raise LPError(*failure)


# ---------------------------------------------------------------------------
# Dense two-phase tableau simplex
# ---------------------------------------------------------------------------


def _standard_form(c, A_ub, b_ub, A_eq, b_eq, bounds):
    """Rewrite into min c'y, A y = b, y >= 0 with b >= 0; x = M y + offset."""
    n = c.size
    cols, offset, upper = [], np.zeros(n), []
    for j, (lo, hi) in enumerate(bounds):
        e = np.zeros(n)
        e[j] = 1.0
        if lo is None or lo == -np.inf:
            cols.extend([e, -e])
            if hi is not None and hi != np.inf:
                upper.append((len(cols) - 2, len(cols) - 1, hi))
        else:
            offset[j] = lo
            cols.append(e)
            if hi is not None and hi != np.inf:
                upper.append((len(cols) - 1, None, hi - lo))
    M = np.array(cols).T
    k = M.shape[1]

    ub_rows = [A_ub @ M]
    ub_rhs = [b_ub - A_ub @ offset]
    for plus, minus, cap in upper:
        row = np.zeros((1, k))
        row[0, plus] = 1.0
        if minus is not None:
            row[0, minus] = -1.0
        ub_rows.append(row)
        ub_rhs.append(np.array([cap]))
    G = np.vstack(ub_rows)
    h = np.concatenate(ub_rhs)
    E = A_eq @ M
    e = b_eq - A_eq @ offset

    m_ub, m_eq = G.shape[0], E.shape[0]
    A = np.zeros((m_ub + m_eq, k + m_ub))
    A[:m_ub, :k] = G
    A[:m_ub, k:] = np.eye(m_ub)
    A[m_ub:, :k] = E
    b = np.concatenate([h, e])
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0
    cost = np.concatenate([c @ M, np.zeros(m_ub)])
    return cost, A, b, M, offset, float(c @ offset)


def _pivot(T: np.ndarray, r: int, k: int) -> None:
    T[r] /= T[r, k]
    col = T[:, k].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run_bland(T: np.ndarray, basis: list, ncols: int, budget: int) -> int:
    """Bland's rule pivots until the reduced costs in the last row are >= 0."""
    m = T.shape[0] - 1
    for it in range(budget):
        reduced = T[-1, :ncols]
        entering = np.nonzero(reduced < -PIVOT_TOL)[0]
        if entering.size == 0:
            return it
        k = int(entering[0])
        col = T[:m, k]
        ok = col > PIVOT_TOL
        if not ok.any():
            raise LPError(3, "objective unbounded below")
        ratios = np.full(m, np.inf)
        ratios[ok] = T[:m, -1][ok] / col[ok]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + PIVOT_TOL * (1.0 + abs(best)))[0]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, k)
        basis[r] = k
    raise LPError(1, f"no optimum after {budget} pivots")


def _objective_row(T: np.ndarray, cost: np.ndarray, basis: list) -> None:
    T[-1, :] = 0.0
    T[-1, : cost.size] = cost
    for i, j in enumerate(basis):
        if T[-1, j] != 0.0:
            T[-1] -= T[-1, j] * T[i]


def dense_simplex(
    c: Sequence[float],
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    bounds=None,
    max_pivots: int = MAX_PIVOTS,
) -> LPResult:
    """Same contract as lp_solve, solved by a dense tableau (phase 1 with artificials, then phase 2)."""
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub, b_ub = _as_rows(A_ub, b_ub, n)
    A_eq, b_eq = _as_rows(A_eq, b_eq, n)
    bounds = list(bounds) if bounds is not None else [(None, None)] * n
    cost, A, b, M, offset, const = _standard_form(c, A_ub, b_ub, A_eq, b_eq, bounds)
    m, k = A.shape

    # phase 1: one artificial per row
    T = np.zeros((m + 1, k + m + 1))
    T[:m, :k] = A
    T[:m, k:k + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(k, k + m))
    _objective_row(T, np.concatenate([np.zeros(k), np.ones(m)]), basis)
    pivots = _run_bland(T, basis, k + m, max_pivots)

    infeasibility = float(sum(T[i, -1] for i, j in enumerate(basis) if j >= k))
    if infeasibility > 1e-9 * (1.0 + float(np.max(np.abs(b), initial=0.0))):
        raise LPError(2, f"phase 1 ended with infeasibility {infeasibility:.3e}")

    keep = []
    for i, j in enumerate(basis):
        if j < k:
            keep.append(i)
            continue
        candidates = np.nonzero(np.abs(T[i, :k]) > PIVOT_TOL)[0]
        if candidates.size:
            _pivot(T, i, int(candidates[0]))
            basis[i] = int(candidates[0])
            keep.append(i)
        # otherwise the row is redundant and is dropped

    T2 = np.zeros((len(keep) + 1, k + 1))
    T2[:-1, :k] = T[keep, :k]
    T2[:-1, -1] = T[keep, -1]
    basis2 = [basis[i] for i in keep]
    _objective_row(T2, cost, basis2)
    pivots += _run_bland(T2, basis2, k, max_pivots)

    y = np.zeros(k)
    for i, j in enumerate(basis2):
        y[j] = T2[i, -1]
    x = M @ y[: M.shape[1]] + offset
    objective = float(cost @ y) + const
    return LPResult(x, objective, 0, "optimal", pivots)


def cross_check(
    c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None
) -> dict:
    """Solve with both backends; returns both objectives and their gap."""
    fast = lp_solve(c, A_ub, b_ub, A_eq, b_eq, bounds)
    dense = dense_simplex(c, A_ub, b_ub, A_eq, b_eq, bounds)
    gap = abs(fast.objective - dense.objective)
    return {
        "highs": fast.objective,
        "dense": dense.objective,
        "gap": gap,
        "relative_gap": gap / max(1.0, abs(fast.objective)),
    }
