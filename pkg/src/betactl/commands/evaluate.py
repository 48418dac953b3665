"""eval: point evaluations of the oracles and the ray functions."""

from __future__ import annotations

import math

from betactl.config import DEFAULT_ABS_TOL, DEFAULT_MAX_SUBDIVISIONS, DEFAULT_REL_TOL, resolve_default
from betactl.core import oracle, ray
from betactl.core.oracle import QuadratureConfig
from betactl.errors import ConfigError
from betactl.util.csvio import render_csv, write_csv
from betactl.util.formatting import format_output, format_sci, format_short, format_table
from betactl.util.grids import parse_grid
from betactl.util.parallel import ordered_map

ONE_ARG = ("gamma", "log-gamma", "gamma-residual")
TWO_ARG = ("beta", "log-beta", "beta-via-gamma", "beta-residual")
RAY_ARG = ("ray-G", "ray-F", "ray-F1", "ray-F2", "ray-P", "ray-log-d2")
FUNCTIONS = ONE_ARG + TWO_ARG + RAY_ARG

CSV_COLUMNS = ["x", "y", "k", "value", "est_error"]

_RAY_FUNCTIONS = {
    "ray-G": ray.G_ray,
    "ray-F": ray.F_ray,
    "ray-F1": ray.F1_ray,
    "ray-F2": ray.F2_ray,
    "ray-P": ray.P_poly,
}


def quadrature_config(args) -> QuadratureConfig:
    return QuadratureConfig(
        abs_tol=getattr(args, "abs_tol", None) or DEFAULT_ABS_TOL,
        rel_tol=getattr(args, "rel_tol", None) or DEFAULT_REL_TOL,
        max_subdivisions=getattr(args, "max_subdivisions", None) or DEFAULT_MAX_SUBDIVISIONS,
    )


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


def evaluate(fn: str, x: float, y: float | None = None, k: float | None = None, cfg: QuadratureConfig | None = None) -> dict:
    """Evaluate one function at one point; returns value and error estimate (nan when not tracked)."""
    cfg = cfg or oracle.DEFAULT_QUADRATURE
    value, error = math.nan, math.nan

    if fn in TWO_ARG and y is None:
        raise ConfigError(f"'{fn}' needs --y.")
    if fn in RAY_ARG and k is None:
        raise ConfigError(f"'{fn}' needs --k.")

    if fn == "gamma":
        ov = oracle.gamma_eval(x, cfg)
        value, error = ov.value, ov.est_error
    elif fn == "log-gamma":
        lv = oracle.log_gamma_eval(x, cfg)
        value, error = lv.log_value, lv.est_error
    elif fn == "gamma-residual":
        value = oracle.gamma_recurrence_residual(x, cfg)
    elif fn == "beta":
        ov = oracle.beta_eval(x, y, cfg)
        value, error = ov.value, ov.est_error
    elif fn == "log-beta":
        lv = oracle.log_beta_eval(x, y, cfg)
        value, error = lv.log_value, lv.est_error
    elif fn == "beta-via-gamma":
        ov = oracle.beta_via_gamma(x, y, cfg)
        value, error = ov.value, ov.est_error
    elif fn == "beta-residual":
        value = oracle.beta_recurrence_residual(x, y, cfg)
    elif fn == "ray-log-d2":
        value = ray.ray_log_second_derivative(ray.RaySpec(k), x, cfg)
    elif fn in RAY_ARG:
        value = float(_RAY_FUNCTIONS[fn](ray.RaySpec(k), x))
    else:
        raise ConfigError(f"Unknown function '{fn}'. Use one of: {', '.join(FUNCTIONS)}.")

    return {"fn": fn, "x": x, "y": y, "k": k, "value": value, "est_error": error}


def evaluate_grid(
    fn: str,
    xs: list[float],
    y: float | None = None,
    k: float | None = None,
    cfg: QuadratureConfig | None = None,
    workers: int = 1,
) -> list[dict]:
    return ordered_map(lambda x: evaluate(fn, x, y, k, cfg), xs, workers)


# ---------------------------------------------------------------------------
# handler
# ---------------------------------------------------------------------------


def cmd_eval(args) -> None:
    """Evaluate a function at one point or along a grid of x values."""
    fn = args.fn
    xs = parse_grid(str(args.x))
    y = getattr(args, "y", None)
    k = getattr(args, "k", None)
    cfg = quadrature_config(args)
    workers = resolve_default("workers", getattr(args, "workers", None))

    rows = evaluate_grid(fn, xs, y, k, cfg, workers)

    output_path = getattr(args, "output", None)
    if output_path:
        parameters = {"command": "eval", "fn": fn, "x": args.x, "y": y, "k": k, "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol}
        csv_rows = [[r["x"], r["y"], r["k"], r["value"], r["est_error"]] for r in rows]
        write_csv(output_path, render_csv(CSV_COLUMNS, csv_rows, parameters))
        if output_path == "-":
            return

    if len(rows) == 1:
        r = rows[0]
        text = format_sci(r["value"])
        if not math.isnan(r["est_error"]):
            text += f"  (est. error {r['est_error']:.3e})"
    else:
        table = [[format_short(r["x"]), format_sci(r["value"]), format_short(r["est_error"])] for r in rows]
        text = format_table(["x", "value", "est_error"], table, [12, 24, 12])
    format_output(args, text, json_data=rows if len(rows) > 1 else rows[0])


def register(subparsers) -> None:
    p = subparsers.add_parser("eval", help="Evaluate Gamma, Beta or a ray function")
    p.add_argument("--fn", required=True, choices=FUNCTIONS, help="Function to evaluate")
    p.add_argument("--x", required=True, help="x value or grid (start:stop:step or a,b,c)")
    p.add_argument("--y", type=float, help="Second argument for two-argument functions")
    p.add_argument("--k", type=float, help="Diagonal offset for ray functions")
    p.add_argument("--rel-tol", type=float, help=f"Quadrature relative tolerance (default: {DEFAULT_REL_TOL})")
    p.add_argument("--abs-tol", type=float, help=f"Quadrature absolute tolerance (default: {DEFAULT_ABS_TOL})")
    p.add_argument("--max-subdivisions", type=int, help=f"Quadrature panel cap (default: {DEFAULT_MAX_SUBDIVISIONS})")
    p.add_argument("--workers", type=int, help="Worker threads for grids (default: 1)")
    p.add_argument("-o", "--output", help="Write CSV to this path ('-' for stdout)")
    p.add_argument("--json", action="store_true", help="Output as JSON")
    p.set_defaults(func=cmd_eval)
