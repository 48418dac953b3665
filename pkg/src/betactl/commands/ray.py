"""ray: reconstruct x -> B(x, x+k) with the Krull series, the limit product, or quadrature."""

from __future__ import annotations

import math

from betactl.config import DEFAULT_GM_SCHEDULE, DEFAULT_MAX_TERMS, resolve_default
from betactl.core import ray as ray_core
from betactl.core.oracle import beta_eval
from betactl.errors import ConfigError
from betactl.util.csvio import render_csv, write_csv
from betactl.util.formatting import format_output, format_sci, format_short, format_table
from betactl.util.grids import parse_grid, parse_schedule
from betactl.util.parallel import ordered_map
from betactl.util.svg import line_chart, write_chart

METHOD_ALIASES = {"krull": "krull", "gm": "gronau-matkowski", "gronau-matkowski": "gronau-matkowski", "oracle": "oracle"}

CSV_COLUMNS = ["x", "value", "oracle", "rel_err", "est_error"]

DEFAULT_XS = "0.5:4.5:0.5"


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


def reconstruct(
    k: float,
    method: str,
    xs: list[float],
    tol: float | None = None,
    rel_tol: float | None = None,
    schedule: list[int] | None = None,
    max_terms: int = DEFAULT_MAX_TERMS,
    swapped: bool = False,
    workers: int = 1,
) -> list[dict]:
    """One row per x: the reconstructed value, the quadrature value, and their relative gap."""
    if method not in METHOD_ALIASES:
        raise ConfigError(f"Unknown method '{method}'. Use krull, gm or oracle.")
    method = METHOD_ALIASES[method]
    spec = ray_core.RaySpec(k)
    tol = resolve_default("tol", tol)
    rel_tol = resolve_default("rel_tol", rel_tol)
    schedule = schedule or list(DEFAULT_GM_SCHEDULE)

    def one(x: float) -> dict:
        if method == "krull":
            sample = ray_core.ray_via_krull(spec, [x], tol, max_terms).samples[0]
        elif method == "gronau-matkowski":
            sample = ray_core.ray_via_gm(spec, [x], rel_tol, schedule).samples[0]
        else:
            sample = ray_core.ray_oracle(spec, [x], swapped=swapped).samples[0]
        reference = beta_eval(x + k, x).value if swapped else beta_eval(x, x + k).value
        return {
            "x": x,
            "value": sample.value,
            "oracle": reference,
            "rel_err": abs(sample.value - reference) / reference,
            "est_error": sample.est_error,
        }

    return ordered_map(one, sorted(set(xs)), workers)


# ---------------------------------------------------------------------------
# handler
# ---------------------------------------------------------------------------


def cmd_ray(args) -> None:
    """Reconstruct the ray and compare every sample with the Beta integral."""
    k = float(args.k)
    method = getattr(args, "method", None) or "krull"
    xs_spec = getattr(args, "xs", None) or DEFAULT_XS
    schedule_spec = getattr(args, "schedule", None)
    schedule = parse_schedule(schedule_spec) if schedule_spec else list(DEFAULT_GM_SCHEDULE)
    tol = resolve_default("tol", getattr(args, "tol", None))
    rel_tol = resolve_default("rel_tol", getattr(args, "rel_tol", None))
    max_terms = getattr(args, "max_terms", None) or DEFAULT_MAX_TERMS
    swapped = getattr(args, "swapped", False)
    workers = resolve_default("workers", getattr(args, "workers", None))

    rows = reconstruct(k, method, parse_grid(xs_spec), tol, rel_tol, schedule, max_terms, swapped, workers)

    parameters = {
        "command": "ray",
        "k": k,
        "method": METHOD_ALIASES.get(method, method),
        "xs": xs_spec,
        "tol": tol,
        "rel_tol": rel_tol,
        "schedule": schedule,
        "max_terms": max_terms,
        "swapped": swapped,
    }
    output_path = getattr(args, "output", None)
    if output_path:
        csv_rows = [[r[c] for c in CSV_COLUMNS] for r in rows]
        title = f"ray k={format_short(k)} via {parameters['method']}"
        write_csv(output_path, render_csv(CSV_COLUMNS, csv_rows, parameters, title))

    plot_path = getattr(args, "plot", None)
    if plot_path:
        svg = line_chart(
            {
                parameters["method"]: [(r["x"], r["value"]) for r in rows],
                "quadrature": [(r["x"], r["oracle"]) for r in rows],
            },
            title=f"B(x, x+{format_short(k)})",
            y_label="value",
            log_y=True,
        )
        write_chart(plot_path, svg)

    if output_path == "-":
        return
    worst = max(r["rel_err"] for r in rows)
    table = [[format_short(r["x"]), format_sci(r["value"]), format_sci(r["oracle"]), f"{r['rel_err']:.3e}"] for r in rows]
    text = format_table(["x", "value", "oracle", "rel_err"], table, [10, 24, 24, 10])
    text += f"\n{len(rows)} samples, max rel_err {worst:.3e}" if math.isfinite(worst) else ""
    format_output(args, text, json_data={"parameters": parameters, "rows": rows})


def register(subparsers) -> None:
    p = subparsers.add_parser("ray", help="Reconstruct x -> B(x, x+k) and compare with quadrature")
    p.add_argument("--k", type=float, required=True, help="Diagonal offset k >= 0")
    p.add_argument("--method", choices=sorted(METHOD_ALIASES), default="krull", help="Reconstruction method (default: krull)")
    p.add_argument("--xs", default=DEFAULT_XS, help=f"Sample grid (default: {DEFAULT_XS})")
    p.add_argument("--tol", type=float, help="Krull series tolerance (default: 1e-12, env BETACTL_TOL)")
    p.add_argument("--rel-tol", type=float, help="Limit-product stopping tolerance (default: 1e-4)")
    p.add_argument("--schedule", help="Limit-product n schedule (default: 1e3,1e4,1e5,1e6)")
    p.add_argument("--max-terms", type=int, help="Krull series term cap (default: 1000000)")
    p.add_argument("--swapped", action="store_true", help="Reconstruct x -> B(x+k, x) instead (oracle method)")
    p.add_argument("--workers", type=int, help="Worker threads, one sample each (default: 1)")
    p.add_argument("-o", "--output", help="Write CSV to this path ('-' for stdout)")
    p.add_argument("--plot", help="Write an SVG chart to this path")
    p.add_argument("--json", action="store_true", help="Output as JSON")
    p.set_defaults(func=cmd_ray)
