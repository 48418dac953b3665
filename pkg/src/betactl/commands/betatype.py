"""betatype: compare the beta-type functions of two generators."""

from __future__ import annotations

from betactl.config import DEFAULT_EQUALITY_TOL, DEFAULT_FIT_TOL, resolve_default
from betactl.core.betatype import GeneratorPair, beta_type_eval, builtin_generator, equality_test, fit_exponential
from betactl.util.csvio import render_csv, write_csv
from betactl.util.formatting import format_output, format_short
from betactl.util.grids import parse_grid, parse_grid2

DEFAULT_GRID = "0.5:5:0.5"

CSV_COLUMNS = ["x", "y", "b1", "b2", "rel_diff"]


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


def compare_generators(
    g1: str,
    g2: str,
    grid_spec: str = DEFAULT_GRID,
    tol: float = DEFAULT_EQUALITY_TOL,
    fit_tol: float = DEFAULT_FIT_TOL,
) -> dict:
    """Equality of B_g1 and B_g2 on the square grid, plus the exponential fit of g2/g1."""
    pair = GeneratorPair(builtin_generator(g1), builtin_generator(g2))
    grid = parse_grid2(grid_spec)
    report = equality_test(pair, grid, tol)
    fit = fit_exponential(pair, parse_grid(grid_spec), fit_tol)
    return {
        "g1": g1,
        "g2": g2,
        "equal": report.equal,
        "max_residual": report.max_residual,
        "max_cocycle_residual": report.max_cocycle_residual,
        "worst_point": list(report.worst_point) if report.worst_point else None,
        "c_fit": fit.c,
        "fit_residual": fit.residual,
        "exponential_ratio": fit.equal,
        "grid_points": len(grid),
    }


def pointwise_rows(g1: str, g2: str, grid_spec: str = DEFAULT_GRID) -> list[list[float]]:
    gen1, gen2 = builtin_generator(g1), builtin_generator(g2)
    rows = []
    for x, y in parse_grid2(grid_spec):
        b1, b2 = beta_type_eval(gen1, x, y), beta_type_eval(gen2, x, y)
        rows.append([x, y, b1, b2, abs(b1 - b2) / b1])
    return rows


# ---------------------------------------------------------------------------
# handler
# ---------------------------------------------------------------------------


def cmd_betatype(args) -> None:
    """Decide whether two generators give the same beta-type function."""
    grid_spec = getattr(args, "grid", None) or DEFAULT_GRID
    tol = resolve_default("tol", getattr(args, "tol", None), fallback=DEFAULT_EQUALITY_TOL)
    fit_tol = getattr(args, "fit_tol", None) or DEFAULT_FIT_TOL
    result = compare_generators(args.g1, args.g2, grid_spec, tol, fit_tol)

    output_path = getattr(args, "output", None)
    if output_path:
        parameters = {"command": "betatype", "g1": args.g1, "g2": args.g2, "grid": grid_spec, "tol": tol, "fit_tol": fit_tol}
        write_csv(output_path, render_csv(CSV_COLUMNS, pointwise_rows(args.g1, args.g2, grid_spec), parameters))
        if output_path == "-":
            return

    verdict = "equal" if result["equal"] else "different"
    lines = [
        f"B_{args.g1} vs B_{args.g2}: {verdict} on {result['grid_points']} grid points (tol {tol:g})",
        f"  max relative difference: {result['max_residual']:.3e}",
        f"  max cocycle residual:    {result['max_cocycle_residual']:.3e}",
        f"  fitted g2/g1 = exp(c x): c = {format_short(result['c_fit'])}, rms {result['fit_residual']:.3e}"
        + (" (exponential)" if result["exponential_ratio"] else " (not exponential)"),
    ]
    format_output(args, "\n".join(lines), json_data=result)


def register(subparsers) -> None:
    p = subparsers.add_parser("betatype", help="Compare beta-type functions of two generators")
    p.add_argument("--g1", required=True, help="First generator (gamma, identity, exp:<c>, expgamma:<c>, power:<p>, scaled-gamma:<s>)")
    p.add_argument("--g2", required=True, help="Second generator")
    p.add_argument("--grid", default=DEFAULT_GRID, help=f"Grid for x and y (default: {DEFAULT_GRID})")
    p.add_argument("--tol", type=float, help=f"Equality tolerance (default: {DEFAULT_EQUALITY_TOL})")
    p.add_argument("--fit-tol", type=float, help=f"RMS threshold for an exponential ratio (default: {DEFAULT_FIT_TOL})")
    p.add_argument("-o", "--output", help="Write pointwise CSV to this path ('-' for stdout)")
    p.add_argument("--json", action="store_true", help="Output as JSON")
    p.set_defaults(func=cmd_betatype)
