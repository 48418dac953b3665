"""scan: classify directional convexity of a surface over a grid."""

from __future__ import annotations

from betactl.config import DEFAULT_CLASSIFY_TOL, get_quadratic_coeffs, resolve_default
from betactl.core.convexity import (
    SURFACES,
    Direction2,
    builtin_surface,
    directional_scan,
    hessian_form,
    scale_invariance_check,
)
from betactl.util.csvio import render_csv, write_csv
from betactl.util.formatting import format_output
from betactl.util.grids import parse_coeffs, parse_direction, parse_grid2
from betactl.util.parallel import ordered_map

DEFAULT_GRID = "0.25:8:0.25"
DEFAULT_DIRECTION = "1,1"

CSV_COLUMNS = ["x", "y", "u", "v", "second_deriv", "step", "classification"]


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


def scan_surface(
    fn: str,
    grid_spec: str = DEFAULT_GRID,
    ygrid_spec: str | None = None,
    direction: str = DEFAULT_DIRECTION,
    step: float | None = None,
    tol: float = DEFAULT_CLASSIFY_TOL,
    coeffs: list[float] | None = None,
    scale: float | None = None,
    hessian: bool = False,
    workers: int = 1,
) -> dict:
    """Directional second derivative and classification at every grid point.

    With scale, each point also checks that h and scale*h classify alike; with hessian,
    each point cross-checks the Hessian quadratic form.
    """
    if fn == "quadratic" and coeffs is None:
        coeffs = get_quadratic_coeffs()
    surface = builtin_surface(fn, coeffs)
    h = Direction2(*parse_direction(direction))
    grid = parse_grid2(grid_spec, ygrid_spec)

    chunks = ordered_map(lambda p: directional_scan(surface.f, [p], h, step, tol, surface.domain), grid, workers)
    reports = [r for chunk in chunks for r in chunk.reports]
    failures = [f for chunk in chunks for f in chunk.failures]

    scale_mismatches = []
    if scale is not None:
        for report in reports:
            if not scale_invariance_check(surface.f, report.point, h, scale, report.step, tol, surface.domain):
                scale_mismatches.append(list(report.point))

    hessian_values = []
    if hessian:
        hessian_values = [hessian_form(surface.f, r.point, h, r.step, surface.domain) for r in reports]

    counts = {"convex": 0, "concave": 0, "indeterminate": 0}
    for report in reports:
        counts[report.classification] += 1
    counts["failed"] = len(failures)

    return {
        "fn": fn,
        "direction": [h.u, h.v],
        "counts": counts,
        "rows": [
            {
                "x": r.point[0],
                "y": r.point[1],
                "second_deriv": r.second_deriv,
                "step": r.step,
                "classification": r.classification,
            }
            for r in reports
        ],
        "failures": [{"point": list(p), "error": msg} for p, msg in failures],
        "scale_mismatches": scale_mismatches,
        "hessian": hessian_values,
    }


# ---------------------------------------------------------------------------
# handler
# ---------------------------------------------------------------------------


def cmd_scan(args) -> None:
    """Scan a surface for directional convexity."""
    fn = args.fn
    grid_spec = getattr(args, "grid", None) or DEFAULT_GRID
    ygrid_spec = getattr(args, "ygrid", None)
    direction = getattr(args, "direction", None) or DEFAULT_DIRECTION
    coeffs_spec = getattr(args, "coeffs", None)
    coeffs = parse_coeffs(coeffs_spec, 6) if coeffs_spec else None
    tol = getattr(args, "tol", None) or DEFAULT_CLASSIFY_TOL
    step = getattr(args, "step", None)
    scale = getattr(args, "scale", None)
    workers = resolve_default("workers", getattr(args, "workers", None))

    result = scan_surface(
        fn, grid_spec, ygrid_spec, direction, step, tol, coeffs, scale, getattr(args, "hessian", False), workers
    )

    output_path = getattr(args, "output", None)
    if output_path:
        parameters = {
            "command": "scan",
            "fn": fn,
            "grid": grid_spec,
            "ygrid": ygrid_spec or grid_spec,
            "direction": direction,
            "step": step if step is not None else "auto",
            "tol": tol,
        }
        u, v = result["direction"]
        rows = [[r["x"], r["y"], u, v, r["second_deriv"], r["step"], r["classification"]] for r in result["rows"]]
        write_csv(output_path, render_csv(CSV_COLUMNS, rows, parameters))
        if output_path == "-":
            return

    counts = result["counts"]
    total = sum(counts.values())
    lines = [
        f"{fn} along ({direction}): {total} points",
        f"  convex: {counts['convex']}  concave: {counts['concave']}  "
        f"indeterminate: {counts['indeterminate']}  failed: {counts['failed']}",
    ]
    if scale is not None:
        lines.append(f"  scale {scale:g}: {len(result['scale_mismatches'])} classification mismatches")
    for failure in result["failures"][:5]:
        lines.append(f"  failed at ({failure['point'][0]:g}, {failure['point'][1]:g}): {failure['error']}")
    format_output(args, "\n".join(lines), json_data=result)


def register(subparsers) -> None:
    p = subparsers.add_parser("scan", help="Directional convexity scan of a surface")
    p.add_argument("--fn", required=True, choices=SURFACES, help="Surface to scan")
    p.add_argument("--grid", default=DEFAULT_GRID, help=f"x grid (default: {DEFAULT_GRID})")
    p.add_argument("--ygrid", help="y grid (default: same as --grid)")
    p.add_argument("--direction", default=DEFAULT_DIRECTION, help=f"Direction u,v (default: {DEFAULT_DIRECTION})")
    p.add_argument("--coeffs", help="a,b,c,d,e,f for the 'quadratic' surface")
    p.add_argument("--step", type=float, help="Difference step (default: 1e-3 * max(1, |p|))")
    p.add_argument("--tol", type=float, help=f"Classification tolerance (default: {DEFAULT_CLASSIFY_TOL})")
    p.add_argument("--scale", type=float, help="Also check classification under scale * direction")
    p.add_argument("--hessian", action="store_true", help="Cross-check every point with the Hessian form")
    p.add_argument("--workers", type=int, help="Worker threads, one point each (default: 1)")
    p.add_argument("-o", "--output", help="Write CSV to this path ('-' for stdout)")
    p.add_argument("--json", action="store_true", help="Output as JSON")
    p.set_defaults(func=cmd_scan)
