"""certify: numerical checks of the hypotheses behind the Beta characterizations."""

from __future__ import annotations

import math

import numpy as np

from betactl.config import DEFAULT_CLASSIFY_TOL, LIMIT_CHECK_THRESHOLD
from betactl.core import convexity, ray
from betactl.core.krull import check_shape, limit_check
from betactl.core.oracle import beta_eval, gamma_eval, log_beta_eval, log_gamma_eval
from betactl.errors import ConfigError, NumericalConsistencyError
from betactl.util.csvio import render_csv, write_csv
from betactl.util.formatting import format_output, format_table
from betactl.util.grids import parse_grid, parse_grid2

TARGETS = ("final-corollary", "concavity", "limit", "log-convexity", "geometric")

DEFAULT_GRID = "0.5:4:0.5"
DEFAULT_KS = "0,0.5,1,2,5"
LIMIT_PROBES = (10.0, 100.0, 1000.0)


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


def certify_final_corollary(grid: list[tuple[float, float]], tol: float = 1e-9, perturb: float = 0.0) -> dict:
    """Symmetry, diagonal log-convexity and the functional equation for (a perturbed) Beta."""

    def B(x: float, y: float) -> float:
        return beta_eval(x, y).value + perturb

    report = convexity.corollary_certificate(B, grid, tol)
    return {
        "target": "final-corollary",
        "passed": report.passed,
        "total": report.total,
        "hypotheses": {
            name: {"passed": h.passed, "worst": h.worst, "failures": list(h.failures[:5])}
            for name, h in report.hypotheses.items()
        },
    }


def certify_concavity(samples: int = 10_000, seed: int = 0, k_max: float = 10.0, x_max: float = 10.0) -> dict:
    """F'' <= 0, P > 0 and F'' * denominator + P = 0 at random (k, x) in [0, k_max] x (0, x_max]."""
    rng = np.random.default_rng(seed)
    ks = rng.uniform(0.0, k_max, samples)
    xs = x_max - rng.uniform(0.0, x_max, samples)
    worst_f2, worst_p, worst_gap = -math.inf, math.inf, 0.0
    for k, x in zip(ks, xs):
        spec = ray.RaySpec(float(k))
        f2 = float(ray.F2_ray(spec, float(x)))
        p = float(ray.P_poly(spec, float(x)))
        gap = abs(f2 * float(ray.F2_denominator(spec, float(x))) + p) / p
        worst_f2, worst_p, worst_gap = max(worst_f2, f2), min(worst_p, p), max(worst_gap, gap)
    hypotheses = {
        "F2-nonpositive": {"passed": worst_f2 <= 1e-12, "worst": worst_f2},
        "P-positive": {"passed": worst_p > 0, "worst": worst_p},
        "P-form-agrees": {"passed": worst_gap < 1e-9, "worst": worst_gap},
    }
    return _summary("concavity", hypotheses, {"samples": samples, "seed": seed})


def certify_limit(ks: list[float], probes: tuple[float, ...] = LIMIT_PROBES) -> dict:
    """F(x+1) - F(x) -> 0 and concavity of F along the ray for every k."""
    hypotheses = {}
    for k in ks:
        spec = ray.RaySpec(k)
        lim = limit_check(lambda x, s=spec: ray.F_ray(s, x), probes, LIMIT_CHECK_THRESHOLD)
        shape = check_shape(ray.krull_problem(spec))
        hypotheses[f"k={k:g}"] = {
            "passed": lim.passed and shape.passed,
            "worst": lim.samples[-1],
            "differences": list(lim.samples),
        }
    return _summary("limit", hypotheses, {"probes": list(probes)})


def certify_log_convexity(ks: list[float], xs: list[float], step: float = 0.0625, tol: float = 1e-6) -> dict:
    """Second differences of log B(x, x+k) and the moment form of its second derivative."""
    hypotheses = {}
    for k in ks:
        spec = ray.RaySpec(k)
        worst_diff, worst_moment = math.inf, math.inf
        for x in xs:
            if x - step <= 0:
                continue
            values = [log_beta_eval(t, t + k).log_value for t in (x - step, x, x + step)]
            worst_diff = min(worst_diff, (values[0] - 2 * values[1] + values[2]) / step**2)
            worst_moment = min(worst_moment, ray.ray_log_second_derivative(spec, x))
        hypotheses[f"k={k:g}"] = {
            "passed": worst_diff >= -tol and worst_moment >= -tol,
            "worst": min(worst_diff, worst_moment),
        }
    return _summary("log-convexity", hypotheses, {"step": step, "tol": tol})


def certify_geometric(interval: tuple[float, float], tol: float = DEFAULT_CLASSIFY_TOL) -> dict:
    """Geometric convexity of Gamma on the interval, by midpoints and by the log-exp transform.

    The ray x -> B(x, x+k) is decreasing and geometrically concave, so only Gamma is
    certified here.
    """
    lo, hi = interval
    points = list(np.geomspace(lo, hi, 9))
    pairs = [(x, y) for i, x in enumerate(points) for y in points[i + 1 :]]
    jensen = convexity.jensen_geometric_check(lambda x: gamma_eval(x).value, pairs, interval=interval)
    transform = convexity.geometric_convexity_via_transform(
        lambda x: gamma_eval(x).value, interval, tol=tol, log_phi=lambda x: log_gamma_eval(x).log_value
    )
    hypotheses = {
        "gamma-jensen": {"passed": jensen.holds, "worst": jensen.worst},
        "gamma-transform": {"passed": transform.holds, "worst": transform.worst},
    }
    return _summary("geometric", hypotheses, {"interval": list(interval)})


def _summary(target: str, hypotheses: dict, extra: dict) -> dict:
    passed = sum(1 for h in hypotheses.values() if h["passed"])
    return {"target": target, "passed": passed, "total": len(hypotheses), "hypotheses": hypotheses, **extra}


def certify(target: str, **kwargs) -> dict:
    if target == "final-corollary":
        return certify_final_corollary(kwargs["grid"], kwargs.get("tol", 1e-9), kwargs.get("perturb", 0.0))
    if target == "concavity":
        return certify_concavity(kwargs.get("samples", 10_000), kwargs.get("seed", 0))
    if target == "limit":
        return certify_limit(kwargs["ks"])
    if target == "log-convexity":
        return certify_log_convexity(kwargs["ks"], kwargs["xs"])
    if target == "geometric":
        return certify_geometric(kwargs["interval"])
    raise ConfigError(f"Unknown target '{target}'. Use one of: {', '.join(TARGETS)}.")


# ---------------------------------------------------------------------------
# handler
# ---------------------------------------------------------------------------


def cmd_certify(args) -> None:
    """Run a certificate; a failed hypothesis exits with status 2 after the report."""
    target = args.target
    grid_spec = getattr(args, "grid", None) or DEFAULT_GRID
    ks = parse_grid(getattr(args, "ks", None) or DEFAULT_KS)
    xs = parse_grid(grid_spec)
    tol = getattr(args, "tol", None) or 1e-9
    perturb = getattr(args, "perturb", None) or 0.0
    samples = getattr(args, "samples", None) or 10_000
    seed = getattr(args, "seed", None) or 0
    result = certify(
        target,
        grid=parse_grid2(grid_spec),
        tol=tol,
        perturb=perturb,
        samples=samples,
        seed=seed,
        ks=ks,
        xs=xs,
        interval=(min(xs), max(xs)),
    )

    rows = [[name, "pass" if h["passed"] else "FAIL", f"{h['worst']:.3e}"] for name, h in result["hypotheses"].items()]
    output_path = getattr(args, "output", None)
    if output_path:
        parameters = {
            "command": "certify",
            "target": target,
            "grid": grid_spec,
            "ks": ks,
            "tol": tol,
            "perturb": perturb,
            "samples": samples,
            "seed": seed,
        }
        csv_rows = [[name, int(h["passed"]), h["worst"]] for name, h in result["hypotheses"].items()]
        write_csv(output_path, render_csv(["hypothesis", "passed", "worst"], csv_rows, parameters))

    if output_path != "-":
        text = format_table(["hypothesis", "result", "worst"], rows, [28, 6, 12])
        text += f"\n{result['passed']}/{result['total']} hypotheses pass"
        format_output(args, text, json_data=result)

    if result["passed"] != result["total"]:
        failing = [name for name, h in result["hypotheses"].items() if not h["passed"]]
        raise NumericalConsistencyError(f"{target}: hypotheses failed: {', '.join(failing)}.")


def register(subparsers) -> None:
    p = subparsers.add_parser("certify", help="Check characterization hypotheses numerically")
    p.add_argument("--target", required=True, choices=TARGETS, help="Which certificate to run")
    p.add_argument("--grid", default=DEFAULT_GRID, help=f"Grid for x (and y) values (default: {DEFAULT_GRID})")
    p.add_argument("--ks", default=DEFAULT_KS, help=f"Diagonal offsets (default: {DEFAULT_KS})")
    p.add_argument("--tol", type=float, help="Relative tolerance for equalities (default: 1e-9)")
    p.add_argument("--perturb", type=float, help="Add a constant to B before certifying (final-corollary)")
    p.add_argument("--samples", type=int, help="Random samples for the concavity certificate (default: 10000)")
    p.add_argument("--seed", type=int, help="RNG seed for the concavity certificate (default: 0)")
    p.add_argument("-o", "--output", help="Write CSV to this path ('-' for stdout)")
    p.add_argument("--json", action="store_true", help="Output as JSON")
    p.set_defaults(func=cmd_certify)
