"""Command line interface.

Subcommands: jacobi (bracket closure checks), h2 (windowed H^2 report),
scan (parameter grid against the closed-form dimension table), verify
(check a named or file-based cocycle).  Exit codes: 0 success / agreement,
1 mathematical disagreement or verification failure, 2 usage or parse
problems, 3 stabilization failure.

Rationals on the command line are "p/q" literals.  For negative values use
the equals form (--mu=-1/3): a bare "-1/3" looks like an option to the
argument parser.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .algebra import ParameterError, check_jacobi_symbolic, check_jacobi_window, validate_parameters
from .engine import (
    REGISTRY,
    CocycleAssignment,
    Window,
    h2,
    is_coboundary,
    theorem_predicted_dim,
    verify_cocycle,
)
from .presets import load_algebra
from .rational import format_rational, parse_rational


def _add_algebra_options(parser: argparse.ArgumentParser):
    parser.add_argument("--algebra", required=True, metavar="REF",
                        help="preset name (svir, witt, virasoro-sector) or a .lie file")
    parser.add_argument("--lambda", dest="lambda_", metavar="Q", default=None,
                        help="lambda parameter as p/q (write --lambda=-1 for negatives)")
    parser.add_argument("--mu", metavar="Q", default=None,
                        help="mu parameter as p/q (write --mu=-1/3 for negatives)")
    parser.add_argument("--param", action="append", metavar="NAME=Q", default=[],
                        help="any other algebra parameter, repeatable")


def _gather_params(args) -> dict:
    values = {}
    if args.lambda_ is not None:
        values["lambda"] = args.lambda_
    if args.mu is not None:
        values["mu"] = args.mu
    for item in args.param:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ParameterError(f"bad --param {item!r} (expected NAME=VALUE)")
        values[name.strip()] = value.strip()
    return values


def _bound_algebra(args):
    spec = load_algebra(args.algebra)
    params = validate_parameters(spec, _gather_params(args))
    return spec, params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lieext",
        description="Exact central-extension (H^2) computations for graded Lie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_jacobi = sub.add_parser("jacobi", help="check the Jacobi identity")
    _add_algebra_options(p_jacobi)
    p_jacobi.add_argument("--symbolic", action="store_true",
                          help="check once with symbolic indices and parameters")
    p_jacobi.add_argument("--window", type=int, default=6, metavar="N",
                          help="index bound for the triple-by-triple check (default 6)")
    p_jacobi.set_defaults(func=cmd_jacobi)

    p_h2 = sub.add_parser("h2", help="windowed H^2 dimensions at one degree")
    _add_algebra_options(p_h2)
    p_h2.add_argument("--window", type=int, default=12, metavar="N")
    p_h2.add_argument("--margin", type=int, default=3, metavar="M")
    p_h2.add_argument("--degree", default="0", metavar="Q")
    p_h2.add_argument("--steps", type=int, default=3, metavar="S",
                      help="stabilization windows N, N+2, ... (default 3)")
    p_h2.add_argument("--format", choices=("text", "json", "md"), default="text")
    p_h2.set_defaults(func=cmd_h2)

    p_scan = sub.add_parser("scan", help="svir parameter grid vs the predicted dimensions")
    p_scan.add_argument("--algebra", default="svir", metavar="REF")
    p_scan.add_argument("--lambda-values", required=True, metavar="Q,Q,...",
                        dest="lambda_values", help="comma-separated rationals")
    p_scan.add_argument("--mu-values", required=True, metavar="Q,Q,...",
                        dest="mu_values", help="comma-separated rationals (mu = 0 excluded)")
    p_scan.add_argument("--window", type=int, default=12, metavar="N")
    p_scan.add_argument("--margin", type=int, default=3, metavar="M")
    p_scan.add_argument("--degree", default="0", metavar="Q")
    p_scan.add_argument("--steps", type=int, default=3, metavar="S")
    p_scan.add_argument("--jobs", type=int, default=0, metavar="J",
                        help="worker processes (default: cpu count)")
    p_scan.add_argument("--format", choices=("csv", "md"), default="csv")
    p_scan.set_defaults(func=cmd_scan)

    p_verify = sub.add_parser("verify", help="check a cocycle against the identity")
    _add_algebra_options(p_verify)
    p_verify.add_argument("--cocycle", required=True, metavar="NAME_OR_FILE",
                          help=f"one of {', '.join(REGISTRY)} or a JSON assignment file")
    p_verify.add_argument("--window", type=int, default=12, metavar="N")
    p_verify.add_argument("--margin", type=int, default=3, metavar="M")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def cmd_jacobi(args) -> int:
    spec = load_algebra(args.algebra)
    if args.symbolic:
        report = check_jacobi_symbolic(spec)
        if report.passed:
            print(f"jacobi symbolic: PASS ({spec.name}, all family triples)")
            return 0
        for families, out_family, poly in report.residuals:
            print(f"jacobi symbolic: FAIL on families {families} -> {out_family}: "
                  f"residual {poly.to_text()}")
        return 1
    params = validate_parameters(spec, _gather_params(args))
    report = check_jacobi_window(spec, params, args.window)
    if report.passed:
        print(f"jacobi window: PASS ({report.triples_checked} triples, indices in "
              f"[-{args.window}, {args.window}])")
        return 0
    x, y, z, residual = report.witness
    terms = ", ".join(f"{format_rational(c)}*{e}" for e, c in sorted(
        residual.items(), key=lambda item: spec.element_key(item[0])))
    print(f"jacobi window: FAIL at ({x}, {y}, {z}): residual {terms}")
    return 1


def _prediction(spec, params, degree):
    if spec.name == "svir" and degree == 0:
        predicted = theorem_predicted_dim(params["lambda"], params["mu"])
        return predicted
    return None


def _h2_json(report, params, predicted, agree) -> dict:
    return {
        "algebra": report.algebra,
        "lambda": format_rational(params["lambda"]) if "lambda" in params else None,
        "mu": format_rational(params["mu"]) if "mu" in params else None,
        "window": report.window.n,
        "margin": report.window.margin,
        "degree": format_rational(report.degree),
        "cocycle_dim": report.cocycle_dim,
        "coboundary_dim": report.coboundary_dim,
        "h2_dim": report.h2_dim,
        "core_h2_dim": report.core_h2_dim,
        "stabilized": report.stabilized,
        "matched_known": [
            {"name": m.name, "matched": m.matched} for m in report.matched_known
        ],
        "predicted_dim": predicted,
        "agree": agree,
    }


def cmd_h2(args) -> int:
    spec, params = _bound_algebra(args)
    window = Window(args.window, args.margin)
    degree = parse_rational(args.degree)
    report = h2(spec, params, window, degree=degree, stabilization_steps=args.steps)
    predicted = _prediction(spec, params, degree)
    agree = None if predicted is None else report.core_h2_dim == predicted
    if args.format == "json":
        print(json.dumps(_h2_json(report, params, predicted, agree), indent=2))
    else:
        rows = [
            ("algebra", report.algebra),
            ("parameters", " ".join(
                f"{k}={format_rational(v)}" for k, v in params.items()) or "(none)"),
            ("window", f"N={window.n} margin={window.margin}"),
            ("degree", format_rational(degree)),
            ("cocycle_dim", report.cocycle_dim),
            ("coboundary_dim", report.coboundary_dim),
            ("h2_dim", report.h2_dim),
            ("core_h2_dim", report.core_h2_dim),
            ("stabilized", _yesno(report.stabilized) + " (" + ", ".join(
                f"N={n}: {dim}" for n, dim in report.core_history) + ")"),
            ("matched", ", ".join(
                f"{m.name}={_yesno(m.matched)}" for m in report.matched_known) or "(none)"),
            ("predicted_dim", "n/a" if predicted is None else predicted),
            ("agree", "n/a" if agree is None else _yesno(agree)),
        ]
        if args.format == "md":
            print("| field | value |")
            print("| --- | --- |")
            for name, value in rows:
                print(f"| {name} | {value} |")
        else:
            for name, value in rows:
                print(f"{name}: {value}")
    if not report.stabilized:
        return 3
    if agree is False:
        return 1
    return 0


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def _scan_point(payload) -> dict:
    ref, lam_text, mu_text, n, margin, degree_text, steps = payload
    spec = load_algebra(ref)
    params = validate_parameters(spec, {"lambda": lam_text, "mu": mu_text})
    degree = parse_rational(degree_text)
    report = h2(spec, params, Window(n, margin), degree=degree, stabilization_steps=steps)
    predicted = _prediction(spec, params, degree)
    matched = ";".join(m.name for m in report.matched_known if m.matched)
    return {
        "lambda": lam_text,
        "mu": mu_text,
        "window": n,
        "core_h2_dim": report.core_h2_dim,
        "predicted_dim": predicted,
        "agree": None if predicted is None else report.core_h2_dim == predicted,
        "matched": matched,
        "stabilized": report.stabilized,
    }


def cmd_scan(args) -> int:
    spec = load_algebra(args.algebra)
    if set(spec.parameters) != {"lambda", "mu"}:
        raise ParameterError(
            "scan needs an algebra with exactly the parameters lambda and mu"
        )
    lams = [parse_rational(part) for part in args.lambda_values.split(",")]
    mus = [parse_rational(part) for part in args.mu_values.split(",")]
    grid = sorted({(lam, mu) for lam in lams for mu in mus})
    payloads = [
        (args.algebra, format_rational(lam), format_rational(mu),
         args.window, args.margin, args.degree, args.steps)
        for lam, mu in grid
    ]
    # fail fast on bad bindings (e.g. mu = 0) before spawning workers
    for lam, mu in grid:
        validate_parameters(spec, {"lambda": lam, "mu": mu})
    jobs = args.jobs if args.jobs > 0 else (os.cpu_count() or 1)
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_point, payloads))
    else:
        rows = [_scan_point(p) for p in payloads]

    columns = ["lambda", "mu", "window", "core_h2_dim", "predicted_dim", "agree", "matched"]
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])
    else:
        print("| " + " | ".join(columns) + " |")
        print("|" + "|".join(" --- " for _ in columns) + "|")
        for row in rows:
            print("| " + " | ".join(_cell(row[c]) for c in columns) + " |")
    for row in rows:
        if not row["stabilized"]:
            print(f"warning: lambda={row['lambda']} mu={row['mu']} did not stabilize",
                  file=sys.stderr)
    if any(row["agree"] is False for row in rows):
        return 1
    if any(not row["stabilized"] for row in rows):
        return 3
    return 0


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def cmd_verify(args) -> int:
    spec, params = _bound_algebra(args)
    window = Window(args.window, args.margin)
    if args.cocycle in REGISTRY:
        cocycle = REGISTRY[args.cocycle]
    elif os.path.isfile(args.cocycle):
        with open(args.cocycle) as handle:
            data = json.load(handle)
        cocycle = CocycleAssignment.from_json_dict(spec, window, data)
    else:
        raise ParameterError(
            f"unknown cocycle {args.cocycle!r}: not a registry name "
            f"({', '.join(REGISTRY)}) and not a file"
        )
    report = verify_cocycle(spec, params, window, cocycle)
    if not report.passed:
        x, y, z, residual = report.witness
        print(f"verify: FAIL at ({x}, {y}, {z}): residual {format_rational(residual)}")
        return 1
    print(f"verify: PASS ({report.triples_checked} admissible triples, window "
          f"[-{window.n}, {window.n}])")
    try:
        nontrivial = not is_coboundary(spec, params, window, report.assignment)
        print(f"nontrivial: {_yesno(nontrivial)}")
    except ValueError:
        print("nontrivial: n/a (assignment mixes degrees)")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
