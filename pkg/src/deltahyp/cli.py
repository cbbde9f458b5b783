"""Command-line front end: replay and pointwise analysis with stable exit codes.

Exit codes: 0 success / positive verdict; 1 negative verdict; 2 usage or
schema error; 3 internal checkpoint failure.  Reports go to stdout (JSON by
default), diagnostics to stderr.  The default random seed can be overridden
with the DELTAHYP_SEED environment variable; an explicit --seed flag wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from .delta import (
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TOL,
    chen_bound,
    delta_from_spectrum,
    delta_invariant,
    detect_ideal_pattern,
    ideality_gap,
    null2type_check,
    tau_from_spectrum,
)
from .derivation import ReplayConfig
from .errors import (
    CheckpointFailure,
    ConfigError,
    DegreeError,
    DeltahypError,
    GeometryError,
    GridError,
    ParseError,
    SchemaError,
    UnknownVariableError,
    UnsupportedModeError,
)
from .jsonio import canonical_dumps, dump_path, load_path
from .replay import VERDICT_CONSTANT, replay_all
from .shape import ShapeOperator, curvature_report
from .surfaces import (
    ImmersionGrid,
    SurfaceSpec,
    catalog_shape_operator,
    load_case,
    shape_operator_from_grid,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_CHECKPOINT = 3

_USAGE_ERRORS = (
    ConfigError,
    SchemaError,
    GeometryError,
    GridError,
    DegreeError,
    ParseError,
    UnknownVariableError,
    UnsupportedModeError,
)


def _default_seed() -> int:
    raw = os.environ.get("DELTAHYP_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"DELTAHYP_SEED must be an integer, got {raw!r}") from None


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("json", "text"), default="json", help="report format"
    )
    parser.add_argument(
        "--out",
        metavar="PATH",
        help="also write the canonical JSON report to PATH (independent of --format)",
    )


def _add_operator_inputs(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--spectrum", help="comma-separated principal curvatures, e.g. 1,2,3,6"
    )
    group.add_argument(
        "--matrix", metavar="PATH", help="JSON file {\"n\": ..., \"matrix\": [[...]]}"
    )
    group.add_argument(
        "--case", metavar="PATH", help="JSON surface spec or immersion grid"
    )


def _add_numeric_opts(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance")
    parser.add_argument(
        "--restarts", type=int, default=DEFAULT_RESTARTS, help="optimizer restarts"
    )
    parser.add_argument("--seed", type=int, default=None, help="optimizer seed")
    parser.add_argument(
        "--no-optimizer",
        action="store_true",
        help="skip the frame optimizer and use only the combinatorial scan",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltahyp",
        description=(
            "Exact replay of the curvature-flow elimination and pointwise "
            "delta-invariant analysis of hypersurface shape operators."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    rp = sub.add_parser("replay", help="run the symbolic elimination replay")
    rp.add_argument("--n", type=int, required=True, help="dimension (>= 4)")
    rp.add_argument(
        "--a-mode", choices=("symbolic", "numeric"), default="symbolic",
        help="treat the type constant symbolically or as a fixed rational",
    )
    rp.add_argument(
        "--a-value", default=None,
        help="rational value for --a-mode numeric, e.g. 3/2",
    )
    rp.add_argument(
        "--keep-intermediates", action="store_true",
        help="include derived/expected polynomial text in every checkpoint",
    )
    _add_common(rp)

    dp = sub.add_parser("delta", help="delta(r) invariant and the universal bound")
    dp.add_argument("--r", type=int, required=True, help="subspace dimension")
    _add_operator_inputs(dp)
    _add_numeric_opts(dp)
    _add_common(dp)

    ip = sub.add_parser("ideal", help="test delta(r) ideality (equality in the bound)")
    ip.add_argument("--r", type=int, default=3, help="subspace dimension (default 3)")
    _add_operator_inputs(ip)
    _add_numeric_opts(ip)
    _add_common(ip)

    np_ = sub.add_parser("null2", help="pointwise null-2-type screen")
    _add_operator_inputs(np_)
    np_.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance")
    _add_common(np_)

    cp = sub.add_parser("catalog", help="shape operator of a catalog surface")
    cp.add_argument("--case", metavar="PATH", help="JSON surface spec or grid")
    cp.add_argument("--kind", choices=("spherical-cylinder", "round-sphere", "hyperplane", "graph"))
    cp.add_argument("--n", type=int, help="dimension")
    cp.add_argument("--p", type=int, help="curved factor dimension (cylinders)")
    cp.add_argument("--radius", type=float, help="radius (cylinders and spheres)")
    cp.add_argument("--hessian", help="JSON matrix for graph kind, e.g. [[1,0],[0,2]]")
    _add_common(cp)

    return parser


# -- input assembly ---------------------------------------------------------------


def _parse_spectrum(text: str) -> list[Fraction]:
    try:
        values = [Fraction(part.strip()) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse spectrum {text!r}: {exc}") from None
    if len(values) < 2:
        raise ConfigError("spectrum needs at least two values")
    return values


def _load_matrix(path: str) -> ShapeOperator:
    data = load_path(path)
    if not isinstance(data, dict):
        raise SchemaError("matrix file must hold a JSON object", positions=["$"])
    unknown = sorted(set(data) - {"n", "matrix"})
    if unknown:
        raise SchemaError(
            f"unknown field(s) {', '.join(map(repr, unknown))} in matrix file",
            positions=[f"$.{k}" for k in unknown],
        )
    if "matrix" not in data:
        raise SchemaError("matrix file is missing 'matrix'", positions=["$.matrix"])
    matrix = data["matrix"]
    operator = ShapeOperator(np.array(matrix, dtype=float))
    declared = data.get("n", operator.n)
    if declared != operator.n:
        raise SchemaError(
            f"declared n={declared} does not match matrix size {operator.n}",
            positions=["$.n"],
        )
    return operator


def _operator_from_args(args) -> tuple[ShapeOperator, list[Fraction] | None]:
    """Build the operator; also return the exact spectrum when given inline."""
    if getattr(args, "spectrum", None):
        exact = _parse_spectrum(args.spectrum)
        return ShapeOperator.from_spectrum([float(x) for x in exact]), exact
    if getattr(args, "matrix", None):
        return _load_matrix(args.matrix), None
    case = load_case(args.case)
    if isinstance(case, SurfaceSpec):
        return catalog_shape_operator(case), None
    return shape_operator_from_grid(case), None


# -- report rendering ----------------------------------------------------------------


def _emit(args, report: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(canonical_dumps(report))
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")
    if args.out:
        dump_path(args.out, report)


def _spectrum_block(operator: ShapeOperator) -> dict:
    report = curvature_report(operator)
    return report.to_json_dict()


# -- subcommands ------------------------------------------------------------------------


def _cmd_replay(args) -> int:
    a_value = None
    if args.a_value is not None:
        try:
            a_value = Fraction(args.a_value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot parse --a-value {args.a_value!r}: {exc}") from None
    cfg = ReplayConfig(
        n=args.n,
        a_mode=args.a_mode,
        a_value=a_value,
        keep_intermediates=args.keep_intermediates,
    )
    report = replay_all(cfg)
    payload = report.to_json_dict()
    lines = [f"replay n={args.n} a_mode={args.a_mode}"]
    for cp in report.checkpoints:
        lines.append(f"  checkpoint {cp.id}: {cp.status}")
    lines.append("side conditions:")
    for sc in report.side_conditions:
        lines.append(f"  {sc.origin}: {sc.expr.render()} != 0")
    lines.append(f"curve9: {report.curve9.render()}")
    lines.append(f"curve12: {report.curve12.render()}")
    lines.append(f"final resultant: {report.final_resultant.render()}")
    lines.append(f"verdict: {report.verdict}")
    _emit(args, payload, lines)
    return EXIT_OK if report.verdict == VERDICT_CONSTANT else EXIT_NEGATIVE


def _resolve_seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _cmd_delta(args) -> int:
    operator, exact = _operator_from_args(args)
    seed = _resolve_seed(args)
    result = delta_invariant(
        operator,
        args.r,
        restarts=args.restarts,
        seed=seed,
        tol=args.tol,
        use_optimizer=not args.no_optimizer,
    )
    spectrum_block = _spectrum_block(operator)
    bound = float(chen_bound(operator.n, args.r, spectrum_block["H"]))
    gap = bound - result.delta
    payload = {
        "n": operator.n,
        "r": args.r,
        "spectrum": spectrum_block,
        "delta": result.to_json_dict(),
        "chen_bound": bound,
        "gap": gap,
        "ideal": bool(abs(gap) <= args.tol),
    }
    if exact is not None:
        exact_delta, exact_inf, witness = delta_from_spectrum(exact, args.r)
        payload["exact"] = {
            "tau": str(tau_from_spectrum(exact)),
            "delta": str(exact_delta),
            "inf_tau_L": str(exact_inf),
            "witness": list(witness),
        }
    lines = [
        f"delta({args.r}) = {result.delta:.12g}   (inf tau_L = {result.inf_tau_L:.12g}, "
        f"method {result.method})",
        f"chen bound = {bound:.12g}, gap = {gap:.12g}, ideal = "
        + ("true" if payload["ideal"] else "false"),
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_ideal(args) -> int:
    operator, _ = _operator_from_args(args)
    seed = _resolve_seed(args)
    outcome = ideality_gap(
        operator,
        args.r,
        restarts=args.restarts,
        seed=seed,
        tol=args.tol,
        use_optimizer=not args.no_optimizer,
    )
    pattern = detect_ideal_pattern(operator, tol=args.tol)
    payload = {
        "n": operator.n,
        "r": args.r,
        "delta": outcome["delta"],
        "bound": outcome["bound"],
        "gap": outcome["gap"],
        "ideal": outcome["ideal"],
        "pattern": None if pattern is None else pattern.to_json_dict(),
    }
    lines = [
        f"delta({args.r}) = {outcome['delta']:.12g}, bound = {outcome['bound']:.12g}",
        f"ideal: {'true' if outcome['ideal'] else 'false'}",
        f"pattern: {payload['pattern']}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK if outcome["ideal"] else EXIT_NEGATIVE


def _cmd_null2(args) -> int:
    operator, _ = _operator_from_args(args)
    report = null2type_check(operator, assume_constant_H=True, tol=args.tol)
    payload = report.to_json_dict()
    lines = [
        f"status: {report.status}",
        f"H = {report.H:.12g}, trA2 = {report.trA2:.12g}"
        + (f", a = {report.a:.12g}" if report.a is not None else ""),
    ]
    _emit(args, payload, lines)
    return EXIT_OK if report.status == "null-2-type-candidate" else EXIT_NEGATIVE


def _cmd_catalog(args) -> int:
    if args.case:
        case = load_case(args.case)
        if isinstance(case, ImmersionGrid):
            operator = shape_operator_from_grid(case)
            spec_payload = {"source": "grid"}
        else:
            operator = catalog_shape_operator(case)
            spec_payload = case.to_json_dict()
    else:
        if not args.kind:
            raise ConfigError("catalog needs either --case or --kind")
        hessian = None
        if args.hessian is not None:
            try:
                hessian = json.loads(args.hessian)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"cannot parse --hessian: {exc}") from None
            hessian = tuple(tuple(float(x) for x in row) for row in hessian)
        n = args.n if args.n is not None else (len(hessian) if hessian else None)
        if n is None:
            raise ConfigError("catalog needs --n (or a hessian implying it)")
        spec = SurfaceSpec(
            kind=args.kind, n=n, p=args.p, radius=args.radius, hessian=hessian
        )
        operator = catalog_shape_operator(spec)
        spec_payload = spec.to_json_dict()
    payload = {
        "spec": spec_payload,
        "operator": operator.to_json_dict(),
        "spectrum": _spectrum_block(operator),
    }
    eig = ", ".join(f"{x:.12g}" for x in payload["spectrum"]["principal_curvatures"])
    lines = [f"principal curvatures: {eig}", f"H = {payload['spectrum']['H']:.12g}"]
    _emit(args, payload, lines)
    return EXIT_OK


_COMMANDS = {
    "replay": _cmd_replay,
    "delta": _cmd_delta,
    "ideal": _cmd_ideal,
    "null2": _cmd_null2,
    "catalog": _cmd_catalog,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed the usage message
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.subcommand](args)
    except CheckpointFailure as exc:
        print(f"checkpoint failure: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except _USAGE_ERRORS as exc:
        if isinstance(exc, SchemaError) and exc.positions:
            print(f"error: {exc} (at {', '.join(exc.positions)})", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DeltahypError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
