"""converge: error of the limit product or the Krull series against quadrature, step by step."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable

import numpy as np

from betactl.config import DEFAULT_GM_SCHEDULE, DEFAULT_MAX_TERMS
from betactl.core import ray as ray_core
from betactl.core.geo import GeoProblem, iter_approximants
from betactl.core.krull import KrullProblem, krull_eval_shifted
from betactl.core.oracle import beta_eval, gamma_eval
from betactl.errors import ConfigError
from betactl.util.csvio import render_csv, write_csv
from betactl.util.formatting import format_output, format_sci, format_table
from betactl.util.grids import parse_grid, parse_schedule
from betactl.util.svg import line_chart, write_chart

METHODS = ("gm", "krull")
TARGET_FUNCTIONS = ("ray", "gamma", "constant")

CSV_COLUMNS = ["n", "value", "abs_err", "rel_err", "err_ratio"]

DEFAULT_TOLS = "1e-4,1e-6,1e-8,1e-10,1e-12"


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


def emit_convergence_report(series: Iterable[tuple[int, float, float]]) -> tuple[list[list[float]], str]:
    """Rows (n, value, abs_err, rel_err, err_ratio) and their CSV text.

    err_ratio is abs_err over the previous row's abs_err; nan on the first row or after
    an exact hit.
    """
    rows: list[list[float]] = []
    previous: float | None = None
    for n, value, reference in series:
        abs_err = abs(value - reference)
        rel_err = abs_err / abs(reference) if reference != 0 else math.inf
        ratio = abs_err / previous if previous else math.nan
        rows.append([int(n), float(value), abs_err, rel_err, ratio])
        previous = abs_err
    if not rows:
        raise ConfigError("A convergence report needs at least one row.")
    return rows, render_csv(CSV_COLUMNS, rows)


def _geo_target(fn: str, k: float) -> tuple[GeoProblem, Callable[[float], float]]:
    if fn == "ray":
        spec = ray_core.RaySpec(k)
        return ray_core.geo_problem(spec), lambda x: beta_eval(x, x + k).value
    if fn == "gamma":
        return GeoProblem(G=lambda t: t, c=1.0, log_G=np.log), lambda x: gamma_eval(x).value
    if fn == "constant":
        return GeoProblem(G=lambda t: 1.0, c=1.0, log_G=np.zeros_like), lambda x: 1.0
    raise ConfigError(f"Unknown function '{fn}'. Use one of: {', '.join(TARGET_FUNCTIONS)}.")


def _krull_target(fn: str, k: float) -> tuple[KrullProblem, Callable[[float], float]]:
    if fn == "ray":
        spec = ray_core.RaySpec(k)
        return ray_core.krull_problem(spec), lambda x: beta_eval(x, x + k).value
    if fn == "gamma":
        return KrullProblem(F=np.log, a=0.0, x0=1.0, y0=0.0, shape="concave"), lambda x: gamma_eval(x).value
    raise ConfigError(f"The krull method supports 'ray' and 'gamma', not '{fn}'.")


def gm_series(fn: str, x: float, k: float = 0.0, schedule: list[int] | None = None) -> list[tuple[int, float, float]]:
    """(n, approximant, quadrature value) at every schedule entry."""
    problem, reference = _geo_target(fn, k)
    target = reference(x)
    return [(n, value, target) for n, value in iter_approximants(problem, x, schedule or list(DEFAULT_GM_SCHEDULE))]


def krull_series(fn: str, x: float, k: float = 0.0, tols: list[float] | None = None, max_terms: int = DEFAULT_MAX_TERMS) -> list[tuple[int, float, float]]:
    """(terms_used, exp(series value), quadrature value) for each tolerance, loosest first."""
    problem, reference = _krull_target(fn, k)
    target = reference(x)
    series = []
    for tol in sorted(tols or parse_grid(DEFAULT_TOLS), reverse=True):
        result = krull_eval_shifted(problem, x, tol, max_terms)
        series.append((result.terms_used, math.exp(result.value), target))
    return series


def convergence_report(
    method: str,
    fn: str,
    x: float,
    k: float = 0.0,
    schedule: list[int] | None = None,
    tols: list[float] | None = None,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> dict:
    if method == "gm":
        series = gm_series(fn, x, k, schedule)
    elif method == "krull":
        series = krull_series(fn, x, k, tols, max_terms)
    else:
        raise ConfigError(f"Unknown method '{method}'. Use one of: {', '.join(METHODS)}.")
    rows, _ = emit_convergence_report(series)
    return {
        "method": method,
        "fn": fn,
        "x": x,
        "k": k,
        "rows": [dict(zip(CSV_COLUMNS, row)) for row in rows],
    }


# ---------------------------------------------------------------------------
# handler
# ---------------------------------------------------------------------------


def cmd_converge(args) -> None:
    """Tabulate how fast a solver approaches the quadrature value."""
    method = args.method
    fn = getattr(args, "fn", None) or "ray"
    x = float(args.x if getattr(args, "x", None) is not None else 1.5)
    k = float(args.k if getattr(args, "k", None) is not None else 0.0)
    schedule_spec = getattr(args, "schedule", None)
    schedule = parse_schedule(schedule_spec) if schedule_spec else list(DEFAULT_GM_SCHEDULE)
    tols_spec = getattr(args, "tols", None) or DEFAULT_TOLS
    tols = parse_grid(tols_spec)
    max_terms = getattr(args, "max_terms", None) or DEFAULT_MAX_TERMS

    result = convergence_report(method, fn, x, k, schedule, tols, max_terms)
    rows = [[r[c] for c in CSV_COLUMNS] for r in result["rows"]]

    parameters = {"command": "converge", "method": method, "fn": fn, "x": x, "k": k}
    if method == "gm":
        parameters["schedule"] = schedule
    else:
        parameters["tols"] = tols
        parameters["max_terms"] = max_terms

    output_path = getattr(args, "output", None)
    if output_path:
        title = f"convergence of {method} for {fn} at x={x:g}" + (f", k={k:g}" if fn == "ray" else "")
        write_csv(output_path, render_csv(CSV_COLUMNS, rows, parameters, title))

    plot_path = getattr(args, "plot", None)
    if plot_path:
        svg = line_chart(
            {"rel_err": [(math.log10(r[0]), r[3]) for r in rows if r[0] > 0]},
            title=f"{method} convergence, {fn} at x={x:g}",
            x_label="log10 n",
            y_label="relative error",
            log_y=True,
        )
        write_chart(plot_path, svg)

    if output_path == "-":
        return
    table = [[str(r[0]), format_sci(r[1]), f"{r[3]:.3e}", "" if math.isnan(r[4]) else f"{r[4]:.3f}"] for r in rows]
    text = format_table(["n", "value", "rel_err", "err_ratio"], table, [10, 24, 10, 9])
    format_output(args, text, json_data=result)


def register(subparsers) -> None:
    p = subparsers.add_parser("converge", help="Convergence report of a solver against quadrature")
    p.add_argument("--method", required=True, choices=METHODS, help="Limit product (gm) or Krull series")
    p.add_argument("--fn", choices=TARGET_FUNCTIONS, default="ray", help="Target function (default: ray)")
    p.add_argument("--x", type=float, default=1.5, help="Evaluation point (default: 1.5)")
    p.add_argument("--k", type=float, default=0.0, help="Diagonal offset for fn=ray (default: 0)")
    p.add_argument("--schedule", help="n schedule for gm (default: 1e3,1e4,1e5,1e6)")
    p.add_argument("--tols", help=f"Series tolerances for krull (default: {DEFAULT_TOLS})")
    p.add_argument("--max-terms", type=int, help="Krull series term cap (default: 1000000)")
    p.add_argument("-o", "--output", help="Write CSV to this path ('-' for stdout)")
    p.add_argument("--plot", help="Write an SVG chart of rel_err to this path")
    p.add_argument("--json", action="store_true", help="Output as JSON")
    p.set_defaults(func=cmd_converge)
