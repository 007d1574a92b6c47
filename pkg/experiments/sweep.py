"""
Degree sweeps: one solve per n, collected into an ErrorTable with the scaled
column n^alpha * value. Rows are independent and may run in parallel (joblib);
the table is assembled by n, never by completion order.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from core.chebcore import MAX_DEGREE
from core.weights import WeightSpec
from models.constrained import ShapeConstraint, best_constrained
from models.lp import LPError
from models.remez import DEFAULT_TOL, best_unconstrained

logger = logging.getLogger(__name__)

TABLE_COLUMNS = [
    "n", "value", "scaled", "lower_bound", "converged", "iterations", "endpoint_trend", "status",
]
MONOTONE_SLACK = 1e-9


def tail_start(scaled: pd.Series, cap: float) -> Optional[int]:
    """Smallest n0 in the index with every value for n >= n0 at most cap (NaN counts as above)."""
    ok = (scaled <= cap).to_numpy()
    if not ok.size or not ok[-1]:
        return None
    # last position where the tail condition breaks
    bad = np.nonzero(~ok)[0]
    start = 0 if bad.size == 0 else bad[-1] + 1
    return int(scaled.index[start])


@dataclass
class ErrorTable:
    rows: pd.DataFrame
    metadata: dict = field(default_factory=dict)

    @property
    def values(self) -> pd.Series:
        return self.rows.set_index("n")["value"]

    @property
    def scaled(self) -> pd.Series:
        return self.rows.set_index("n")["scaled"]

    def sup_scaled(self, n_min: Optional[int] = None) -> float:
        s = self.scaled
        if n_min is not None:
            s = s[s.index >= n_min]
        return float(s.max()) if len(s) else float("nan")

    def n_star(self, cap: float) -> Optional[int]:
        return tail_start(self.scaled, cap)

    def monotone_violations(self, slack: float = MONOTONE_SLACK) -> list:
        v = self.values.dropna()
        inc = v.diff() > slack * (1.0 + v.abs().max())
        return [int(n) for n in v.index[inc.to_numpy()]]


def _solve_row(f: Callable, n: int, constraint, spec: WeightSpec, alpha: float, tol: float) -> dict:
    try:
        if constraint is None and spec.kind == "unweighted":
            res = best_unconstrained(f, n, tol)
        else:
            res = best_constrained(f, n, constraint, spec.for_degree(n), tol)
    except (LPError, RuntimeError, np.linalg.LinAlgError) as exc:
        logger.warning("sweep row n=%d failed: %s", n, exc)
        return {
            "n": n, "value": np.nan, "scaled": np.nan, "lower_bound": np.nan,
            "converged": False, "iterations": 0, "endpoint_trend": np.nan, "status": f"failed: {exc}",
        }
    return {
        "n": n,
        "value": res.error,
        "scaled": n ** alpha * res.error,
        "lower_bound": res.lower_bound,
        "converged": res.converged,
        "iterations": res.iterations,
        "endpoint_trend": res.diagnostics.get("endpoint_trend", np.nan),
        "status": "ok" if res.converged else "not converged",
    }


def sweep(
    f: Callable,
    constraint: Optional[ShapeConstraint] = None,
    spec: Optional[WeightSpec] = None,
    n_from: int = 1,
    n_to: int = 10,
    alpha: float = 0.0,
    tol: float = DEFAULT_TOL,
    N: Optional[int] = None,
    cap: Optional[float] = None,
    n_jobs: int = 1,
) -> ErrorTable:
    spec = spec or WeightSpec.unweighted()
    lowest = constraint.q + 1 if constraint is not None else 1
    if n_from < lowest:
        raise ValueError(f"n_from must be >= {lowest} for this problem, got {n_from}")
    if n_to > MAX_DEGREE:
        raise ValueError(f"n_to must be <= {MAX_DEGREE}, got {n_to}")
    if n_to < n_from:
        raise ValueError(f"Empty degree window [{n_from}, {n_to}]")

    degrees = list(range(n_from, n_to + 1))
    out = Parallel(n_jobs=n_jobs)(
        delayed(_solve_row)(f, n, constraint, spec, alpha, tol) for n in degrees
    )
    rows = pd.DataFrame(sorted(out, key=lambda r: r["n"]), columns=TABLE_COLUMNS)

    table = ErrorTable(rows)
    table.metadata = {
        "function": getattr(f, "id", "custom"),
        "params": dict(getattr(f, "params", {})),
        "constraint": constraint.label() if constraint is not None else "none",
        "weight": spec.label(),
        "alpha": alpha,
        "N": N if N is not None else n_from,
        "sup_scaled": table.sup_scaled(N),
        "cap": cap,
        "n_star_candidate": table.n_star(cap) if cap is not None else None,
        "monotone_violations": table.monotone_violations(),
        "failed_rows": int((rows["status"].str.startswith("failed")).sum()),
    }
    if table.metadata["monotone_violations"]:
        logger.warning(
            "sweep %s: values increase at n=%s", table.metadata["function"],
            table.metadata["monotone_violations"],
        )
    return table
