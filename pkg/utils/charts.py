"""Plotly figure builders for degree sweeps. Every builder returns a go.Figure."""

import logging
from pathlib import Path

import pandas as pd
import plotly.graph_objects as go

logger = logging.getLogger(__name__)

_BG   = "#060B14"
_GRID = "#0D1626"
_TEXT = "#E8EEF4"
_ACC  = "#38BDF8"

_SERIES = ["#38BDF8", "#F97316", "#A3E635", "#F472B6", "#FACC15", "#818CF8"]

_BASE = dict(
    paper_bgcolor=_BG,
    plot_bgcolor=_BG,
    font=dict(color=_TEXT, family="'DM Sans', sans-serif", size=12),
    margin=dict(l=12, r=12, t=36, b=12),
    xaxis=dict(gridcolor=_GRID, showline=False, zeroline=False, type="log", title="n"),
    yaxis=dict(gridcolor=_GRID, showline=False, zeroline=False, type="log"),
    legend=dict(bgcolor="rgba(0,0,0,0)"),
)

IMAGE_SUFFIXES = {".svg", ".png", ".pdf"}


def _positive(series: pd.Series) -> pd.Series:
    # zeros and failed rows cannot sit on a log axis
    s = series.dropna()
    return s[s > 0]


def error_plot(series: dict, title: str = "Error vs degree", ylabel: str = "error") -> go.Figure:
    """Log-log degree/error lines, one per functional. `series` maps label -> Series indexed by n."""
    curves = {label: _positive(s) for label, s in series.items()}
    curves = {label: s for label, s in curves.items() if not s.empty}
    if not curves:
        return _empty("No positive values to plot", title)
    fig = go.Figure()
    for i, (label, s) in enumerate(curves.items()):
        fig.add_trace(go.Scatter(
            x=s.index.to_numpy(), y=s.to_numpy(), name=label, mode="lines+markers",
            line=dict(color=_SERIES[i % len(_SERIES)], width=2),
            hovertemplate="n=%{x}<br>%{y:.3e}<extra>" + label + "</extra>",
        ))
    fig.update_layout(title=title, **_BASE)
    fig.update_yaxes(title=ylabel)
    return fig


def sweep_plot(table, scaled: bool = False) -> go.Figure:
    """Figure for one ErrorTable: raw values, or n^alpha-scaled values with the cap line."""
    meta = table.metadata
    label = f"{meta.get('function', 'f')} {meta.get('constraint', '')}".strip()
    if not scaled:
        return error_plot({label: table.values}, title=f"{label}, weight {meta.get('weight')}")
    fig = error_plot(
        {label: table.scaled},
        title=f"n^{meta.get('alpha', 0):g} scaled, {label}",
        ylabel="n^alpha * error",
    )
    cap = meta.get("cap")
    if cap is not None and len(fig.data):
        # a trace, not a layout shape: shapes on log axes take log10 coordinates
        xs = fig.data[0].x
        fig.add_trace(go.Scatter(
            x=[min(xs), max(xs)], y=[cap, cap], name="empirical cap", mode="lines",
            line=dict(color=_ACC, dash="dot", width=1),
        ))
    return fig


def save_figure(fig: go.Figure, path: str) -> Path:
    """.svg/.png/.pdf through kaleido, .html through plotly's own writer."""
    out = Path(path)
    suffix = out.suffix.lower()
    if suffix not in IMAGE_SUFFIXES | {".html"}:
        raise ValueError(f"Unsupported plot format '{suffix}'. Use .svg, .png, .pdf or .html")
    out.parent.mkdir(parents=True, exist_ok=True)
    if suffix == ".html":
        fig.write_html(out, include_plotlyjs="cdn")
    else:
        fig.write_image(out)
    logger.info("Saved figure %s", out)
    return out


def _empty(reason: str, title: str = "Error vs degree") -> go.Figure:
    """Placeholder keeping the log-log sweep axes, with the reason nothing was drawn."""
    fig = go.Figure()
    fig.update_layout(title=title, **_BASE)
    fig.update_yaxes(title="error")
    fig.add_annotation(
        text=reason, xref="paper", yref="paper", x=0.5, y=0.5,
        showarrow=False, font=dict(size=13, color=_ACC),
    )
    return fig
