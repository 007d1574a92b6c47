"""
Regime classification for the comonotone comparison inequality

    n^alpha E_n^(1)(f, Y_s) <= c n^alpha E_n(f),  n >= N*,

given that n^alpha E_n(f) <= 1 for n >= N: does N* = N work (+), must N*
depend on Y_s (oplus), or on f itself (ominus)? Also renders the regime
tables cell by cell.
"""

import logging
import math
from enum import Enum

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

CELL_EPS = 1e-9


class RegimeSymbol(Enum):
    PLUS = "plus"
    OPLUS = "oplus"
    OMINUS = "ominus"
    CIRCLED_PLUS_STAR = "circled_plus_star"
    OPM = "opm"

    @property
    def glyph(self) -> str:
        return GLYPHS[self]


GLYPHS = {
    RegimeSymbol.PLUS: "+",
    RegimeSymbol.OPLUS: "⊕",
    RegimeSymbol.OMINUS: "⊖",
    RegimeSymbol.CIRCLED_PLUS_STAR: "⊛",
    RegimeSymbol.OPM: "⊖̃",
}


def exceptional_set(s: int) -> set:
    """A_s = {j : 1 <= j <= s-1} U {2j : 1 <= j <= s}."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    return set(range(1, s)) | {2 * j for j in range(1, s + 1)}


def _in_exceptional(alpha: float, s: int) -> bool:
    return float(alpha).is_integer() and int(alpha) in exceptional_set(s)


def classify_regime(alpha: float, N: int, s: int) -> RegimeSymbol:
    """Rules checked in the order +, ominus, then oplus for everything else."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")

    ceil_a = math.ceil(alpha)
    if (
        (not _in_exceptional(alpha, s) and N <= math.ceil(alpha / 2))
        or (2 * s < alpha <= 2 * s + 2 and N <= s + 2)
        or alpha > 2 * s + 2
    ):
        return RegimeSymbol.PLUS
    if ceil_a == 1 and ((s >= 1 and N >= s + 2) or (s == 0 and N >= 3)):
        return RegimeSymbol.OMINUS
    if ceil_a == 2 and N >= s + 3:
        return RegimeSymbol.OMINUS
    return RegimeSymbol.OPLUS


def rows_by_half_alpha(s: int) -> bool:
    """Rows are indexed by ceil(alpha/2) for s = 0 and s >= 4, by ceil(alpha) otherwise."""
    return s == 0 or s >= 4


def table_shape(s: int) -> tuple:
    if s == 0:
        return 4, 4
    if s <= 3:
        return 2 * s + 3, s + 3
    return s + 2, s + 3


def _alpha_samples(row: int, half: bool) -> np.ndarray:
    units = [2 * row - 1, 2 * row] if half else [row]
    pts = []
    for k in units:
        pts.extend([k - 1 + CELL_EPS, k - 0.5, float(k)])
    return np.array(pts)


def classify_cell(row: int, N: int, s: int) -> RegimeSymbol:
    """Aggregate classify_regime over the alpha-range of one table row."""
    found = {classify_regime(a, N, s) for a in _alpha_samples(row, rows_by_half_alpha(s))}
    if len(found) == 1:
        return found.pop()
    if found == {RegimeSymbol.PLUS, RegimeSymbol.OPLUS}:
        return RegimeSymbol.CIRCLED_PLUS_STAR
    if found == {RegimeSymbol.OMINUS, RegimeSymbol.OPLUS}:
        return RegimeSymbol.OPM
    raise RuntimeError(f"Cell (row={row}, N={N}, s={s}) mixes {sorted(x.value for x in found)}")


def render_table(s: int) -> pd.DataFrame:
    """Glyph table, top row = largest row index; columns are N = 1, 2, ..."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    n_rows, n_cols = table_shape(s)
    half = rows_by_half_alpha(s)
    rows = list(range(n_rows, 0, -1))
    data = [[classify_cell(r, N, s).glyph for N in range(1, n_cols + 1)] for r in rows]
    table = pd.DataFrame(data, index=pd.Index(rows, name="ceil(alpha/2)" if half else "ceil(alpha)"),
                         columns=pd.Index(range(1, n_cols + 1), name="N"))
    table.attrs["s"] = s
    table.attrs["row_label"] = table.index.name
    logger.debug("Rendered regime table for s=%d (%dx%d)", s, n_rows, n_cols)
    return table


def table_text(table: pd.DataFrame) -> str:
    return table.to_string()
