"""Command-line interface: germ files in, JSON/CSV reports out.

Every subcommand reads a germ description file, runs the corresponding
library operation, prints a JSON report to stdout, and exits with

    0  success and every requested certificate/verdict holds
    1  a certificate failed or a verdict is negative
    2  usage, parse, or validation errors

Reports are deterministic: identical argv (including --seed) produce
byte-identical output.  `--out PATH --format json|csv` additionally writes
the report to a file; CSV flattens point lists one row per point.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import critical as critical_mod
from . import fields, flow
from .errors import DegenerateSampleError, GermFormatError, NotQuasiHomogeneousError
from .io import GermSpec, load_germ_file
from .weights import QHVerdict, WeightSystem, infer_weights

_TOLERANCES = {
    "certificates": "exact (zero polynomial, no tolerance)",
    "sphere_membership": "1e-10 * epsilon",
    "parallel_residual_scaled": 1e-10,
    "link_f_norm": "1e-10 * coefficient scale at epsilon",
    "tube_value_residual": "1e-10 * eta",
    "sphere_fiber_angular": 1e-10,
    "equivalence_angular": 1e-8,
    "equivalence_sphere_residual": "1e-10 * epsilon",
}


def _rat(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _ws_payload(ws: WeightSystem) -> dict:
    return {
        "weights": [_rat(w) for w in ws.weights],
        "degree_p": _rat(ws.degree_p),
        "degree_q": _rat(ws.degree_q),
        "same_degree": ws.same_degree,
    }


def _verdict_payload(verdict: QHVerdict) -> dict:
    payload: dict[str, Any] = {
        "quasi_homogeneous": verdict.quasi_homogeneous,
        "same_degree": verdict.same_degree,
        "multiple_solutions": verdict.multiple_solutions,
        "reason": verdict.reason,
    }
    if verdict.weight_system is not None:
        payload.update(_ws_payload(verdict.weight_system))
    return payload


def _resolve_weights(spec: GermSpec) -> tuple[WeightSystem | None, dict]:
    """Declared weights win; otherwise infer. Returns (ws or None, payload)."""
    if spec.weight_system is not None:
        return spec.weight_system, {"declared": True, **_ws_payload(spec.weight_system)}
    verdict = infer_weights(spec.germ, require_same_degree=True)
    payload = {"declared": False, **_verdict_payload(verdict)}
    return verdict.weight_system, payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milnorfib",
        description="Weight systems, identity certificates, critical loci and "
        "fibration equivalence checks for polynomial map germs (P, Q).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def germ_cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("germ", help="path to a germ description JSON file")
        p.add_argument("--out", help="also write the report to this path")
        p.add_argument("--format", choices=("json", "csv"), default="json",
                       help="file format for --out (default json)")
        return p

    germ_cmd("info", "describe the germ")
    w = germ_cmd("weights", "infer or check a weight system")
    w.add_argument("--allow-unequal-degrees", action="store_true",
                   help="accept weight systems with different degrees for P and Q")
    germ_cmd("identities", "certify the Euler/omega identities symbolically")

    c = germ_cmd("critical", "critical points of f/||f|| on a sphere")
    c.add_argument("--epsilon", type=float, required=True)
    c.add_argument("--starts", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)

    l = germ_cmd("link", "sample the link (zero set on the sphere)")
    l.add_argument("--epsilon", type=float, required=True)
    l.add_argument("--samples", type=int, default=200)
    l.add_argument("--seed", type=int, default=0)

    f = germ_cmd("fiber", "sample a tube or sphere fiber")
    f.add_argument("--mode", choices=("tube", "sphere"), required=True)
    f.add_argument("--theta", type=float, required=True)
    f.add_argument("--epsilon", type=float, required=True)
    f.add_argument("--eta", type=float, help="tube radius (tube mode)")
    f.add_argument("--samples", type=int, default=32)
    f.add_argument("--seed", type=int, default=0)

    e = germ_cmd("equivalence", "verify the tube-to-sphere flow equivalence numerically")
    e.add_argument("--epsilon", type=float, required=True)
    e.add_argument("--eta", type=float, required=True)
    e.add_argument("--samples", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)

    r = germ_cmd("rank", "sampled minimum singular value of Df on a sphere")
    r.add_argument("--epsilon", type=float, required=True)
    r.add_argument("--samples", type=int, default=200)
    r.add_argument("--seed", type=int, default=0)

    return parser


# ---------------------------------------------------------------------------
# Handlers: each returns (results, exit_code, csv_rows) where csv_rows is
# (header, rows) for point lists or None for key/value reports.
# ---------------------------------------------------------------------------


def _cmd_info(spec: GermSpec, args) -> tuple[dict, int, None]:
    germ = spec.germ
    results = {
        "variables": list(germ.variable_names),
        "P": germ.p.to_string(germ.variable_names),
        "Q": germ.q.to_string(germ.variable_names),
        "P_terms": germ.p.num_terms(),
        "Q_terms": germ.q.num_terms(),
        "P_total_degree": germ.p.total_degree(),
        "Q_total_degree": germ.q.total_degree(),
        "declared_weights": spec.weight_system is not None,
    }
    return results, 0, None


def _cmd_weights(spec: GermSpec, args) -> tuple[dict, int, None]:
    if spec.weight_system is not None:
        results = {"declared": True, **_ws_payload(spec.weight_system)}
        return results, 0, None
    verdict = infer_weights(spec.germ, require_same_degree=not args.allow_unequal_degrees)
    results = {"declared": False, **_verdict_payload(verdict)}
    return results, 0 if verdict.quasi_homogeneous else 1, None


def _cmd_identities(spec: GermSpec, args) -> tuple[dict, int, None]:
    ws, payload = _resolve_weights(spec)
    if ws is None:
        return {"weight_system": payload, "error": "not quasi-homogeneous"}, 1, None
    if not ws.same_degree:
        return {"weight_system": payload, "error": "degrees differ"}, 1, None
    certificates = fields.identity_certificates(spec.germ, ws)
    names = spec.germ.variable_names
    results = {
        "weight_system": payload,
        "certificates": [
            {
                "name": cert.name,
                "holds": cert.holds,
                "residual": cert.residual.to_string(names),
                "residual_terms": cert.residual.num_terms(),
            }
            for cert in certificates
        ],
        "all_hold": all(cert.holds for cert in certificates),
    }
    return results, 0 if results["all_hold"] else 1, None


def _cmd_critical(spec: GermSpec, args) -> tuple[dict, int, tuple]:
    result = critical_mod.critical_points_on_sphere(
        spec.germ, args.epsilon, n_starts=args.starts, seed=args.seed
    )
    results = {
        "epsilon": result.epsilon,
        "count": len(result.points),
        "points": [list(p) for p in result.points],
        "residuals": list(result.residuals),
        "omega_zero_flags": list(result.omega_zero_flags),
        "multistart_count": result.multistart_count,
        "seed": result.seed,
        "merge_radius": result.merge_radius,
    }
    header = ["index", *spec.germ.variable_names, "residual", "omega_zero"]
    rows = [
        [i, *point, result.residuals[i], int(result.omega_zero_flags[i])]
        for i, point in enumerate(result.points)
    ]
    return results, 0, (header, rows)


def _cmd_link(spec: GermSpec, args) -> tuple[dict, int, tuple]:
    sample = critical_mod.link_points(
        spec.germ, args.epsilon, n=args.samples, seed=args.seed
    )
    results = {
        "epsilon": sample.epsilon,
        "count": len(sample.points),
        "points": [list(p) for p in sample.points],
        "f_norms": list(sample.f_norms),
    }
    header = ["index", *spec.germ.variable_names, "f_norm"]
    rows = [[i, *point, sample.f_norms[i]] for i, point in enumerate(sample.points)]
    return results, 0, (header, rows)


def _cmd_fiber(spec: GermSpec, args) -> tuple[dict, int, tuple]:
    germ = spec.germ
    if args.mode == "tube":
        if args.eta is None:
            raise ValueError("tube mode requires --eta")
        points = flow.tube_fiber_sample(
            germ, args.epsilon, args.eta, args.theta, n=args.samples, seed=args.seed
        )
        target = (args.eta * math.cos(args.theta), args.eta * math.sin(args.theta))
        residuals = [
            math.hypot(tp.f_value[0] - target[0], tp.f_value[1] - target[1])
            for tp in points
        ]
        results = {
            "mode": "tube",
            "epsilon": args.epsilon,
            "eta": args.eta,
            "theta": args.theta,
            "count": len(points),
            "points": [list(tp.x) for tp in points],
            "f_values": [list(tp.f_value) for tp in points],
            "within_ball": [tp.within_ball for tp in points],
            "residuals": residuals,
        }
        rows = [[i, *tp.x, residuals[i]] for i, tp in enumerate(points)]
    else:
        points = flow.sphere_fiber_sample(
            germ, args.epsilon, args.theta, n=args.samples, seed=args.seed
        )
        direction = (math.cos(args.theta), math.sin(args.theta))
        residuals = [
            flow.angle_between(germ.value_at(x), direction) for x in points
        ]
        results = {
            "mode": "sphere",
            "epsilon": args.epsilon,
            "theta": args.theta,
            "count": len(points),
            "points": [[float(v) for v in x] for x in points],
            "residuals": residuals,
        }
        rows = [[i, *[float(v) for v in x], residuals[i]] for i, x in enumerate(points)]
    header = ["index", *germ.variable_names, "residual"]
    return results, 0, (header, rows)


def _cmd_equivalence(spec: GermSpec, args) -> tuple[dict, int, None]:
    ws, payload = _resolve_weights(spec)
    if ws is None or not ws.same_degree:
        results = {
            "weight_system": payload,
            "status": "not_quasi_homogeneous",
            "verdict": False,
        }
        return results, 1, None
    try:
        report = flow.equivalence_report(
            spec.germ, ws, args.epsilon, args.eta, n=args.samples, seed=args.seed
        )
    except NotQuasiHomogeneousError as exc:
        results = {
            "weight_system": payload,
            "status": "not_quasi_homogeneous",
            "reason": str(exc),
            "verdict": False,
        }
        return results, 1, None
    results = {
        "weight_system": payload,
        "epsilon": report.epsilon,
        "eta": report.eta,
        "num_samples": report.num_samples,
        "max_angular_deviation": report.max_angular_deviation,
        "max_sphere_residual": report.max_sphere_residual,
        "max_flow_time": report.max_flow_time,
        "injectivity_violations": report.injectivity_violations,
        "verdict": report.verdict,
    }
    return results, 0 if report.verdict else 1, None


def _cmd_rank(spec: GermSpec, args) -> tuple[dict, int, None]:
    try:
        report = fields.df_min_singular_sample(
            spec.germ, args.epsilon, args.samples, args.seed
        )
    except DegenerateSampleError as exc:
        return {"error": str(exc), "degenerate": True}, 1, None
    results = {
        "epsilon": report.epsilon,
        "num_samples": report.num_samples,
        "min_sigma": report.min_sigma,
        "worst_point": list(report.worst_point),
        "off_variety_tolerance": report.off_variety_tolerance,
        "note": "sampled evidence only, not a proof of rank",
    }
    return results, 0, None


_HANDLERS = {
    "info": _cmd_info,
    "weights": _cmd_weights,
    "identities": _cmd_identities,
    "critical": _cmd_critical,
    "link": _cmd_link,
    "fiber": _cmd_fiber,
    "equivalence": _cmd_equivalence,
    "rank": _cmd_rank,
}


def _echo_inputs(args) -> dict:
    skip = {"command", "out", "format"}
    return {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in skip and value is not None
    }


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def render_csv(report: dict, point_rows: tuple | None) -> str:
    """CSV body: one row per point, or key/value rows for scalar reports."""
    lines: list[str] = []
    if point_rows is not None:
        header, rows = point_rows
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_csv_cell(v) for v in row))
    else:
        lines.append("key,value")
        for key, value in sorted(report["results"].items()):
            lines.append(f"{key},{_csv_cell(value)}")
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run_command(argv: Sequence[str]) -> tuple[dict, int, tuple | None]:
    """Parse argv, execute, and return (report, exit_code, csv point rows)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    spec = load_germ_file(args.germ)
    results, code, point_rows = _HANDLERS[args.command](spec, args)
    report = {
        "command": args.command,
        "inputs": _echo_inputs(args),
        "tolerances": _TOLERANCES,
        "results": results,
        "exit_code": code,
    }
    return report, code, point_rows


def main(argv: Sequence[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the usage message
        return int(exc.code) if exc.code is not None else 2
    try:
        spec = load_germ_file(args.germ)
        results, code, point_rows = _HANDLERS[args.command](spec, args)
    except (GermFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "inputs": _echo_inputs(args),
        "tolerances": _TOLERANCES,
        "results": results,
        "exit_code": code,
    }
    sys.stdout.write(render_json(report))
    if args.out is not None:
        try:
            text = render_csv(report, point_rows) if args.format == "csv" else render_json(report)
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
