"""Tests for models/regimes.py"""

import pytest

from models.regimes import (
    RegimeSymbol,
    classify_regime,
    exceptional_set,
    render_table,
    rows_by_half_alpha,
    table_shape,
    table_text,
)

P, O, M, S, T = "+", "⊕", "⊖", "⊛", "⊖̃"

EXPECTED = {
    0: [
        [P, P, P, P],
        [P, P, P, P],
        [P, P, P, P],
        [P, P, M, M],
    ],
    1: [
        [P, P, P, P],
        [P, P, P, O],
        [P, P, P, O],
        [S, O, O, M],
        [P, O, M, M],
    ],
    2: [
        [P, P, P, P, P],
        [P, P, P, P, O],
        [P, P, P, P, O],
        [S, S, O, O, O],
        [P, P, O, O, O],
        [S, O, O, O, M],
        [S, O, O, M, M],
    ],
    3: [
        [P] * 6,
        [P, P, P, P, P, O],
        [P, P, P, P, P, O],
        [S, S, S, O, O, O],
        [P, P, P, O, O, O],
        [S, S, O, O, O, O],
        [P, P, O, O, O, O],
        [S, O, O, O, O, M],
        [S, O, O, O, M, M],
    ],
    5: [
        [P] * 8,
        [P] * 7 + [O],
        [S] * 5 + [O] * 3,
        [S] * 4 + [O] * 4,
        [S] * 3 + [O] * 5,
        [S] * 2 + [O] * 6,
        [S, O, O, O, O, O, T, M],
    ],
}


# ---------------------------------------------------------------------------
# classify_regime
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("s,expected", [(0, set()), (1, {2}), (2, {1, 2, 4}), (3, {1, 2, 4, 6})])
def test_exceptional_sets(s, expected):
    assert exceptional_set(s) == expected


@pytest.mark.parametrize("alpha,N,s,symbol", [
    (0.5, 1, 0, RegimeSymbol.PLUS),
    (1.0, 3, 1, RegimeSymbol.OMINUS),
    (2.0, 1, 1, RegimeSymbol.OPLUS),
    (5.0, 4, 2, RegimeSymbol.PLUS),
    (7.0, 10, 2, RegimeSymbol.PLUS),
    (1.5, 5, 2, RegimeSymbol.OMINUS),
    (3.0, 5, 2, RegimeSymbol.OPLUS),
])
def test_classify_examples(alpha, N, s, symbol):
    assert classify_regime(alpha, N, s) is symbol


def test_glyphs():
    assert RegimeSymbol.PLUS.glyph == "+"
    assert RegimeSymbol.CIRCLED_PLUS_STAR.glyph == "⊛"


@pytest.mark.parametrize("alpha,N,s,match", [
    (0.0, 1, 0, "alpha"),
    (1.0, 0, 0, "N must be"),
    (1.0, 1, -1, "s must be"),
])
def test_classify_argument_errors(alpha, N, s, match):
    with pytest.raises(ValueError, match=match):
        classify_regime(alpha, N, s)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("s,shape", [(0, (4, 4)), (1, (5, 4)), (3, (9, 6)), (5, (7, 8))])
def test_table_shape(s, shape):
    assert table_shape(s) == shape


def test_row_indexing_choice():
    assert rows_by_half_alpha(0) and rows_by_half_alpha(4)
    assert not rows_by_half_alpha(2)


@pytest.mark.parametrize("s", sorted(EXPECTED))
def test_rendered_tables(s):
    table = render_table(s)
    assert table.values.tolist() == EXPECTED[s]
    assert list(table.index) == list(range(len(EXPECTED[s]), 0, -1))
    assert list(table.columns) == list(range(1, len(EXPECTED[s][0]) + 1))


def test_table_metadata():
    table = render_table(2)
    assert table.attrs["s"] == 2
    assert table.index.name == "ceil(alpha)"
    assert render_table(0).index.name == "ceil(alpha/2)"


def test_table_text_has_glyphs():
    text = table_text(render_table(1))
    assert "⊛" in text and "⊖" in text


def test_negative_s_rejected():
    with pytest.raises(ValueError, match="s must be"):
        render_table(-1)
