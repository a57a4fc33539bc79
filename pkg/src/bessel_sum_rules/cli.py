"""Command-line front end for evaluating, verifying and timing the rules.

Subcommands: ``eval`` computes one rule along the requested paths,
``coeffs`` prints a rule's exact boundary coefficients, ``verify`` runs
the identity suite, ``bench`` compares direct summation against the
closed form, and ``sweep`` writes a CSV scan over z.  Exit codes are a
stable contract: 0 success, 1 verification or tolerance failure, 2 usage
or domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Iterable

from .benchmark import run_bench
from .exact_coefficients import (
    Hierarchy,
    boundary_polynomials,
    composite_boundary,
    pochhammer,
)
from .sum_rules import REL_ERROR_FLOOR, SumRuleQuery, evaluate
from .verification import run_suite

_DEFAULT_EVAL_TOLERANCE = 1e-8
_DEFAULT_Z_LIST = "0.5,1,5,20,50"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_hierarchy(token: str) -> Hierarchy:
    return Hierarchy(token)


def _parse_float_list(text: str, what: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"{what} must be a comma-separated list of numbers") from None


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"{what} must be a comma-separated list of integers") from None


# --------------------------------------------------------------------------
# eval


def _cmd_eval(args: argparse.Namespace) -> int:
    query = SumRuleQuery(
        _parse_hierarchy(args.hierarchy), args.p, args.ell, args.z
    )
    want_recursive = args.path in ("recursive", "all")
    result = evaluate(query, include_recursive=want_recursive)
    tol = args.tol
    rec_rel = None
    passed = True
    if args.path in ("closed", "all"):
        passed = result.rel_error <= tol
    if want_recursive:
        assert result.rhs_recursive is not None
        rec_rel = abs(result.rhs_recursive - result.lhs_direct) / max(
            abs(result.lhs_direct), REL_ERROR_FLOOR
        )
        passed = passed and rec_rel <= tol

    if args.format == "json":
        payload: dict[str, Any] = {
            "hierarchy": query.hierarchy.value,
            "p": query.p,
            "ell": query.ell,
            "z": query.z,
            "lhs_direct": result.lhs_direct,
            "tolerance": tol,
            "passed": passed,
        }
        if args.path in ("closed", "all"):
            payload["rhs_closed"] = result.rhs_closed
            payload["abs_error"] = result.abs_error
            payload["rel_error"] = result.rel_error
        if want_recursive:
            payload["rhs_recursive"] = result.rhs_recursive
            payload["rel_error_recursive"] = rec_rel
        print(json.dumps(payload))
    else:
        print(
            f"hierarchy {query.hierarchy.value}  p {query.p}  "
            f"ell {query.ell}  z {_fmt(query.z)}"
        )
        print(f"lhs_direct     {_fmt(result.lhs_direct)}")
        if args.path in ("closed", "all"):
            print(f"rhs_closed     {_fmt(result.rhs_closed)}")
            print(f"abs_error      {_fmt(result.abs_error)}")
            print(f"rel_error      {_fmt(result.rel_error)}")
        if want_recursive:
            assert result.rhs_recursive is not None and rec_rel is not None
            print(f"rhs_recursive  {_fmt(result.rhs_recursive)}")
            print(f"rel_error_recursive  {_fmt(rec_rel)}")
        if args.path != "direct":
            print(f"status         {'pass' if passed else 'fail'}")
    return 0 if passed else 1


# --------------------------------------------------------------------------
# coeffs


def _tail_description(hierarchy: Hierarchy, p: int) -> str:
    if hierarchy is Hierarchy.H1:
        front = 1 / pochhammer(Fraction(-2 * p - 1, 2), 2 * p + 2)
        coefs = [
            front * (-1 if k % 2 else 1) * pochhammer(p - k + 1, k)
            for k in range(p + 1)
        ]
        parts = [
            f"({coefs[k]}) * j_{k + 1}(2z)/z^{k + 1}" for k in range(p + 1)
        ]
        return " + ".join(parts)
    if hierarchy is Hierarchy.H2:
        coef = Fraction(math.factorial(p)) / pochhammer(Fraction(3, 2), p)
        return f"({coef}) * z^{2 * p}"
    if hierarchy is Hierarchy.H3:
        coef = (-1 if p % 2 else 1) * math.factorial(p)
        return f"({coef}) * z^{p} * j_{p}(2z)"
    if p % 2 == 0:
        coef = -1 if (p // 2) % 2 else 1
        return f"({coef}) * z^{p} * j_0(2z)"
    coef = -1 if ((p - 1) // 2) % 2 else 1
    return f"({coef}) * z^{p - 1} * (j_0(2z)/2 - z*j_1(2z))"


def _cmd_coeffs(args: argparse.Namespace) -> int:
    hierarchy = _parse_hierarchy(args.hierarchy)
    if hierarchy is Hierarchy.H3_COMPOSITE:
        a, b, c = composite_boundary(args.p, args.ell)
        variable = "z^2"
    else:
        poly = boundary_polynomials(hierarchy, args.p, args.ell)
        a, b, c = poly.a_coeffs, poly.b_coeffs, poly.c_coeffs
        variable = "1/z^2" if poly.variable_kind == "inverse_z_squared" else "z^2"
    tail = _tail_description(hierarchy, args.p)
    if args.format == "json":
        payload = {
            "hierarchy": hierarchy.value,
            "p": args.p,
            "ell": args.ell,
            "variable": variable,
            "a": [str(q) for q in a],
            "b": [str(q) for q in b],
            "c": [str(q) for q in c],
            "tail": tail,
        }
        print(json.dumps(payload))
    else:
        print(
            f"hierarchy {hierarchy.value}  p {args.p}  ell {args.ell}  "
            f"variable {variable}"
        )
        print(f"A = [{', '.join(str(q) for q in a)}]")
        print(f"B = [{', '.join(str(q) for q in b)}]")
        print(f"C = [{', '.join(str(q) for q in c)}]")
        print(f"tail = {tail}")
    return 0


# --------------------------------------------------------------------------
# verify


def _cmd_verify(args: argparse.Namespace) -> int:
    z_values = _parse_float_list(args.z_list, "--z-list")
    if not z_values:
        raise ValueError("--z-list must contain at least one value")
    results = run_suite(
        max_p=args.max_p, max_ell=args.max_ell, z_values=tuple(z_values)
    )
    failures = [r for r in results if not r.passed]
    counts: dict[str, list[int]] = {}
    for r in results:
        entry = counts.setdefault(r.identity.value, [0, 0])
        entry[0] += 1
        if r.passed:
            entry[1] += 1
    if args.format == "json":
        payload = {
            "checks": len(results),
            "passed": len(results) - len(failures),
            "per_identity": {
                name: {"checks": total, "passed": ok}
                for name, (total, ok) in sorted(counts.items())
            },
            "failures": [
                {
                    "identity": r.identity.value,
                    "inputs": r.inputs,
                    "residual": repr(r.residual),
                }
                for r in failures
            ],
        }
        print(json.dumps(payload))
    else:
        for name, (total, ok) in sorted(counts.items()):
            print(f"{name:24s} {ok}/{total} passed")
        print(f"total                    {len(results) - len(failures)}/{len(results)} passed")
        for r in failures:
            print(f"FAIL {r.identity.value} {r.inputs} residual={r.residual!r}")
    return 1 if failures else 0


# --------------------------------------------------------------------------
# bench


def _cmd_bench(args: argparse.Namespace) -> int:
    hierarchy = _parse_hierarchy(args.hierarchy)
    ells = _parse_int_list(args.ell, "--ell")
    if not ells:
        raise ValueError("--ell must contain at least one value")
    print("hierarchy,p,ell,z,repeats,mean_ns_direct,mean_ns_closed,speedup,checksum")
    for ell in ells:
        query = SumRuleQuery(hierarchy, args.p, ell, args.z)
        report = run_bench(
            query,
            repeats=args.repeats,
            warmup=args.warmup,
            include_bessel=args.include_bessel,
        )
        print(
            ",".join(
                (
                    hierarchy.value,
                    str(args.p),
                    str(ell),
                    _fmt(args.z),
                    str(args.repeats),
                    _fmt(report.mean_ns_direct),
                    _fmt(report.mean_ns_closed),
                    _fmt(report.speedup),
                    _fmt(report.checksum),
                )
            )
        )
    return 0


# --------------------------------------------------------------------------
# sweep


def _sweep_rows(
    hierarchy: Hierarchy, p: int, ell: int, z_values: Iterable[float]
) -> Iterable[str]:
    yield "z,lhs_direct,rhs_closed,abs_err,rel_err"
    for z in z_values:
        result = evaluate(SumRuleQuery(hierarchy, p, ell, z))
        yield ",".join(
            (
                _fmt(z),
                _fmt(result.lhs_direct),
                _fmt(result.rhs_closed),
                _fmt(result.abs_error),
                _fmt(result.rel_error),
            )
        )


def _cmd_sweep(args: argparse.Namespace) -> int:
    hierarchy = _parse_hierarchy(args.hierarchy)
    if args.z_steps < 1:
        raise ValueError(f"--z-steps must be >= 1, got {args.z_steps}")
    if not args.z_min > 0:
        raise ValueError("z must be > 0")
    if args.z_max < args.z_min:
        raise ValueError("--z-max must be >= --z-min")
    if args.z_steps == 1:
        z_values = [args.z_min]
    else:
        step = (args.z_max - args.z_min) / (args.z_steps - 1)
        z_values = [args.z_min + i * step for i in range(args.z_steps)]
    rows = _sweep_rows(hierarchy, args.p, args.ell, z_values)
    if args.out is None:
        for row in rows:
            sys.stdout.write(row + "\n")
    else:
        with open(args.out, "w", encoding="ascii", newline="\n") as handle:
            for row in rows:
                handle.write(row + "\n")
    return 0


# --------------------------------------------------------------------------
# parser plumbing


def _add_query_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--hierarchy",
        required=True,
        choices=[h.value for h in Hierarchy],
        help="rule family: 1, 2, 3, or 3c (alternating composite)",
    )
    sub.add_argument("--p", type=int, required=True, help="order within the hierarchy")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bessel-sumrules",
        description=(
            "Evaluate, verify and benchmark closed-form sum rules for "
            "squares of spherical Bessel functions."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_eval = commands.add_parser(
        "eval", help="evaluate one rule and compare evaluation paths"
    )
    _add_query_flags(p_eval)
    p_eval.add_argument("--ell", type=int, required=True, help="upper summation index")
    p_eval.add_argument("--z", type=float, required=True, help="argument z > 0")
    p_eval.add_argument(
        "--path",
        choices=("closed", "direct", "recursive", "all"),
        default="closed",
        help="which right-hand-side path(s) to evaluate (default closed)",
    )
    p_eval.add_argument(
        "--tol",
        type=float,
        default=_DEFAULT_EVAL_TOLERANCE,
        help="relative tolerance for pass/fail (default 1e-8)",
    )
    p_eval.add_argument("--format", choices=("plain", "json"), default="plain")
    p_eval.set_defaults(handler=_cmd_eval)

    p_coeffs = commands.add_parser(
        "coeffs", help="print a rule's exact boundary coefficients"
    )
    _add_query_flags(p_coeffs)
    p_coeffs.add_argument("--ell", type=int, required=True)
    p_coeffs.add_argument("--format", choices=("plain", "json"), default="plain")
    p_coeffs.set_defaults(handler=_cmd_coeffs)

    p_verify = commands.add_parser("verify", help="run the identity suite")
    p_verify.add_argument("--max-p", type=int, default=6)
    p_verify.add_argument("--max-ell", type=int, default=60)
    p_verify.add_argument(
        "--z-list",
        default=_DEFAULT_Z_LIST,
        help=f"comma-separated z grid (default {_DEFAULT_Z_LIST})",
    )
    p_verify.add_argument("--format", choices=("plain", "json"), default="plain")
    p_verify.set_defaults(handler=_cmd_verify)

    p_bench = commands.add_parser(
        "bench", help="time direct summation against the closed form"
    )
    _add_query_flags(p_bench)
    p_bench.add_argument(
        "--ell", required=True, help="upper index, or comma-separated list"
    )
    p_bench.add_argument("--z", type=float, required=True)
    p_bench.add_argument("--repeats", type=int, default=100)
    p_bench.add_argument("--warmup", type=int, default=1)
    p_bench.add_argument(
        "--include-bessel",
        action="store_true",
        help="fold Bessel-sequence construction into both timed paths",
    )
    p_bench.set_defaults(handler=_cmd_bench)

    p_sweep = commands.add_parser("sweep", help="CSV scan of one rule over z")
    _add_query_flags(p_sweep)
    p_sweep.add_argument("--ell", type=int, required=True)
    p_sweep.add_argument("--z-min", type=float, required=True)
    p_sweep.add_argument("--z-max", type=float, required=True)
    p_sweep.add_argument("--z-steps", type=int, required=True)
    p_sweep.add_argument("--out", default=None, help="output file (default stdout)")
    p_sweep.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Run one command; returns the exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main_entry() -> None:
    sys.exit(main())
