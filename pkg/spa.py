"""
spa: shape-preserving approximation lab.

    python spa.py approx --f exp --n 8
    python spa.py constrained --f xabsx --n 10 --q 2 --ys 0
    python spa.py sweep --f exp --q 1 --n-from 2 --n-to 12 --alpha 1 --plot out/exp.svg
    python spa.py tables --s 2
    python spa.py scenario chain --config chain.json

Exit codes: 0 success, 1 scenario assertion failure, 2 configuration error,
3 solver failure.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from core.weights import WeightSpec
from data.catalog import get_function, list_catalog
from experiments import report
from experiments.scenarios import SCENARIOS, run_scenario
from experiments.sweep import sweep
from models.constrained import ShapeConstraint, best_constrained, best_weighted
from models.regimes import classify_regime, render_table, table_text
from models.remez import DEFAULT_TOL, best_unconstrained
from utils.charts import save_figure, sweep_plot

logger = logging.getLogger("spa")

EXIT_OK        = 0
EXIT_ASSERTION = 1
EXIT_CONFIG    = 2
EXIT_SOLVER    = 3


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def _number(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def parse_params(pairs) -> dict:
    """['k=3', 'ys=0.5,0'] -> {'k': 3, 'ys': '0.5,0'}"""
    out = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ValueError(f"--param expects key=value, got {pair!r}")
        out[key.strip()] = _number(value.strip())
    return out


def parse_ys(text) -> tuple:
    if text is None or not str(text).strip():
        return ()
    return tuple(float(v) for v in str(text).split(",") if v.strip())


def _weight(args, n=None) -> WeightSpec:
    alpha = float(args.alpha or 0.0)
    if args.weight == "phi":
        spec = WeightSpec.phi(alpha)
    elif args.weight == "delta":
        spec = WeightSpec.delta(alpha, n)
    else:
        spec = WeightSpec.unweighted()
    if getattr(args, "interp", False):
        spec = replace(spec, interpolate_left=True, interpolate_right=True)
    return spec


def _constraint(args):
    if getattr(args, "q", None) is None:
        if parse_ys(getattr(args, "ys", None)):
            raise ValueError("--ys needs --q")
        return None
    return ShapeConstraint(args.q, parse_ys(args.ys))


def _inputs(args) -> dict:
    skip = {"handler", "verbose", "output", "plot", "out", "default_out", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, data: dict) -> None:
    text = report.render(data, args.out)
    if args.output:
        report.write(text, args.output)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------


def cmd_approx(args) -> int:
    f = get_function(args.f, parse_params(args.param))
    spec = _weight(args, args.n)
    if spec.kind == "unweighted" and not spec.interpolate_left:
        result = best_unconstrained(f, args.n, args.tol)
    else:
        result = best_weighted(f, args.n, spec, args.tol)
    _emit(args, report.result_payload("approx", _inputs(args), result))
    return EXIT_OK


def cmd_constrained(args) -> int:
    f = get_function(args.f, parse_params(args.param))
    result = best_constrained(f, args.n, _constraint(args), _weight(args, args.n), args.tol)
    _emit(args, report.result_payload("constrained", _inputs(args), result))
    return EXIT_OK


def cmd_sweep(args) -> int:
    f = get_function(args.f, parse_params(args.param))
    table = sweep(
        f, _constraint(args), _weight(args), args.n_from, args.n_to, float(args.alpha or 0.0),
        tol=args.tol, N=args.N, cap=args.cap, n_jobs=args.jobs,
    )
    if args.plot:
        save_figure(sweep_plot(table, scaled=bool(args.alpha)), args.plot)
    _emit(args, report.table_payload("sweep", _inputs(args), table))
    return EXIT_OK


def cmd_classify(args) -> int:
    symbol = classify_regime(args.alpha, args.N, args.s)
    if args.out == "text":
        sys.stdout.write(symbol.glyph + "\n")
        return EXIT_OK
    row = {"alpha": args.alpha, "N": args.N, "s": args.s, "symbol": symbol.value, "glyph": symbol.glyph}
    _emit(args, report.payload("classify", _inputs(args), [row]))
    return EXIT_OK


def cmd_tables(args) -> int:
    table = render_table(args.s)
    if args.out == "text":
        text = table_text(table) + "\n"
    elif args.out == "csv":
        text = table.to_csv()
    else:
        rows = [{"row": int(r), **{str(N): table.loc[r, N] for N in table.columns}} for r in table.index]
        text = report.to_json(report.payload(
            "tables", _inputs(args), rows, diagnostics={"row_label": table.attrs["row_label"]}
        ))
    if args.output:
        report.write(text, args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_scenario(args) -> int:
    config = None
    if args.config:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(config, dict):
            raise ValueError(f"{args.config}: scenario config must be a JSON object")
    result = run_scenario(args.name, config, n_jobs=args.jobs)
    _emit(args, report.scenario_payload(result))
    if not result.passed:
        logger.warning(
            "scenario %s: %d assertion(s) failed", args.name, len(result.failures)
        )
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_catalog(args) -> int:
    _emit(args, report.payload("catalog", {}, list_catalog()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG logging")
    common.add_argument("--out", choices=report.FORMATS, default=None,
                        help="report format; json by default, text for classify, tables and catalog")
    common.add_argument("--output", default=None, help="write the report to this file instead of stdout")

    target = argparse.ArgumentParser(add_help=False)
    target.add_argument("--f", required=True, help="catalog id (see `spa catalog`)")
    target.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    target.add_argument("--alpha", type=float, default=0.0)
    target.add_argument("--weight", choices=["none", "phi", "delta"], default="none")
    target.add_argument("--tol", type=float, default=DEFAULT_TOL)

    parser = argparse.ArgumentParser(prog="spa", description="Shape-preserving polynomial approximation lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", parents=[common, target], help="best unconstrained (weighted) approximation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--interp", action="store_true", help="force P(+-1) = f(+-1)")
    p.set_defaults(handler=cmd_approx)

    p = sub.add_parser("constrained", parents=[common, target], help="best co-q-monotone approximation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--ys", default=None, help='change points, e.g. "0.5,0,-0.5"')
    p.add_argument("--interp", action="store_true", help="force P(+-1) = f(+-1)")
    p.set_defaults(handler=cmd_constrained)

    p = sub.add_parser("sweep", parents=[common, target], help="errors over a degree window")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--ys", default=None)
    p.add_argument("--n-from", type=int, required=True)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--N", type=int, default=None, help="first degree of the hypothesis window")
    p.add_argument("--cap", type=float, default=None, help="empirical cap for the N* candidate")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--plot", default=None, help="figure path (.svg, .png, .pdf or .html)")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("classify", parents=[common], help="regime symbol for (alpha, N, s)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(handler=cmd_classify, default_out="text")

    p = sub.add_parser("tables", parents=[common], help="regime table for s change points")
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(handler=cmd_tables, default_out="text")

    p = sub.add_parser("scenario", parents=[common], help="run a registered experiment")
    p.add_argument("name", choices=list(SCENARIOS))
    p.add_argument("--config", default=None, help="JSON file overriding the scenario defaults")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_scenario)

    p = sub.add_parser("catalog", parents=[common], help="list catalog functions")
    p.set_defaults(handler=cmd_catalog, default_out="text")

    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.out is None:
        args.out = getattr(args, "default_out", "json")
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except RuntimeError as exc:
        # LPError included
        logger.error("solver failure: %s", exc)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
