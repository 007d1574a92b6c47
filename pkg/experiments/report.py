"""Report payloads and their JSON / CSV / text renderings."""

import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from experiments.scenarios import ScenarioReport
from experiments.sweep import ErrorTable
from models.remez import ApproxResult

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_COLUMNS    = ["n", "value", "scaled", "lower_bound", "converged", "endpoint_trend"]
FORMATS        = ("json", "csv", "text")


def _clean(obj):
    """Recursively convert to plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        items = sorted(obj) if isinstance(obj, set) else obj
        return [_clean(v) for v in items]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if obj is None or isinstance(obj, str):
        return obj
    if callable(obj):
        return getattr(obj, "__name__", type(obj).__name__)
    return str(obj)


def payload(command: str, inputs: dict, rows=(), assertions=(), diagnostics=None) -> dict:
    return _clean({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "rows": list(rows),
        "assertions": list(assertions),
        "diagnostics": diagnostics or {},
    })


def result_payload(command: str, inputs: dict, result: ApproxResult) -> dict:
    """Single solve: one row plus the certificate summary in diagnostics."""
    n = result.n
    row = {
        "n": n,
        "value": result.error,
        "scaled": n ** float(inputs.get("alpha") or 0.0) * result.error,
        "lower_bound": result.lower_bound,
        "converged": result.converged,
    }
    diag = dict(result.diagnostics)
    diag.update({
        "iterations": result.iterations,
        "gap": result.gap,
        "coefficients": result.polynomial.coeffs,
    })
    cert = result.certificate
    if cert is not None and hasattr(cert, "defects"):
        diag["alternation"] = {
            "points": cert.points, "signs": cert.signs, "defects": list(cert.defects),
        }
    elif cert is not None:
        diag["active_set"] = {
            "rounds": cert.rounds,
            "residual_points": int(cert.residual_points.size),
            "shape_points": int(cert.shape_points.size),
            "interpolation": list(cert.interpolation),
            "stalled": cert.stalled,
        }
        if cert.shape is not None:
            diag["shape"] = {
                "feasible": cert.shape.feasible,
                "min_signed_value": cert.shape.min_signed_value,
                "witness": cert.shape.witness,
            }
    return payload(command, inputs, [row], diagnostics=diag)


def table_payload(command: str, inputs: dict, table: ErrorTable) -> dict:
    return payload(command, inputs, table.rows.to_dict("records"), diagnostics=table.metadata)


def scenario_payload(report: ScenarioReport) -> dict:
    return payload(
        f"scenario {report.scenario}",
        report.inputs,
        report.rows,
        [a.to_dict() for a in report.assertions],
        {**report.diagnostics, "notes": report.notes, "passed": report.passed},
    )


def to_json(data: dict) -> str:
    return json.dumps(_clean(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_csv(rows: pd.DataFrame, columns: Optional[list] = None) -> str:
    cols = columns if columns is not None else [c for c in CSV_COLUMNS if c in rows.columns]
    if not cols:
        cols = list(rows.columns)
    return rows[cols].to_csv(index=False)


def to_text(data: dict) -> str:
    """Rows as a pandas table, followed by assertions and scalar diagnostics."""
    lines = [f"{data['command']}"]
    rows = pd.DataFrame(data.get("rows", []))
    if not rows.empty:
        lines.append(rows.to_string(index=False))
    for a in data.get("assertions", []):
        mark = "PASS" if a["passed"] else "FAIL"
        lines.append(f"[{mark}] {a['name']}: {a['invariant']}")
    for key, value in sorted(data.get("diagnostics", {}).items()):
        if isinstance(value, (str, int, float, bool)) or value is None:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def render(data: dict, fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"Unknown output format '{fmt}'. Use one of {FORMATS}")
    if fmt == "json":
        return to_json(data)
    if fmt == "csv":
        return to_csv(pd.DataFrame(data.get("rows", [])))
    return to_text(data)


def write(text: str, path: Optional[str] = None) -> None:
    if path is None:
        return
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", out)
