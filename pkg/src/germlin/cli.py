"""Command-line front end.

Three commands over presentation/form inputs, from files or the built-in
example registry, all emitting deterministic JSON:

* ``germlin certify``    irreducibility certification of a presentation,
* ``germlin linearize``  the order-by-order linearization algorithm,
* ``germlin forms``      integrability / tangent-cone / Kupka / first-integral
                         / blow-up pullback checks on polynomial 1-forms.

Exit codes: 0 when every check resolves positively, 1 when some check is
refuted or unresolved, 2 for input errors (with a diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .cyclotomic import format_scalar, parse_scalar
from .expressions import ExpressionError
from .group_cert import (
    DEFAULT_MAX_WORD_LEN,
    LoadedPresentation,
    PresentationError,
    certify,
    load_presentation_file,
)
from .jets import DEFAULT_ORDER
from .linearizer import group_order, linearize
from .pforms import (
    PForm1,
    blowup_chart_pullback,
    cone_matches_chart_pullback,
    first_integral_check,
    form_from_string,
    form_to_string,
    integrability_check,
    kupka_test,
    meromorphic_first_integral_check,
    poly_from_string,
    poly_to_string,
    restrict_to_exceptional,
    tangent_cone,
)
from .registry import (
    FORM_EXAMPLES,
    GROUP_EXAMPLES,
    RegistryError,
    build_form_example,
    build_group_example,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Any problem with the provided input (exit code 2)."""


def _emit(payload: dict, pretty: bool) -> None:
    if pretty:
        text = json.dumps(payload, indent=2)
    else:
        text = json.dumps(payload, separators=(",", ":"))
    sys.stdout.write(text + "\n")


def _load_presentations(args) -> tuple[str, list[LoadedPresentation]]:
    if args.example is not None and args.input is not None:
        raise InputError("give either --example or an input file, not both")
    order = args.order
    if args.example is not None:
        if args.example not in GROUP_EXAMPLES:
            raise InputError(
                f"unknown example {args.example!r}; group examples: "
                + ", ".join(GROUP_EXAMPLES)
            )
        try:
            loaded = build_group_example(args.example, order=order, p=args.p)
        except RegistryError as exc:
            raise InputError(str(exc)) from exc
        return args.example, loaded
    if args.input is None:
        raise InputError("an input file or --example is required")
    try:
        loaded = load_presentation_file(args.input, order=order)
    except PresentationError as exc:
        raise InputError(str(exc)) from exc
    return args.input, loaded


def _scalars_json(scalars: dict) -> dict:
    return {name: format_scalar(value) for name, value in sorted(scalars.items())}


def cmd_certify(args) -> int:
    source, loaded = _load_presentations(args)
    solutions = []
    all_ok = True
    for item in loaded:
        report = certify(item.presentation, max_len=args.max_word_len)
        all_ok = all_ok and report.certified
        solutions.append(
            {
                "label": item.label,
                "scalars": _scalars_json(item.scalars),
                "report": report.to_json(),
            }
        )
    payload = {
        "command": "certify",
        "input": source,
        "order": loaded[0].presentation.order,
        "max_word_len": args.max_word_len,
        "solutions": solutions,
        "certified": all_ok,
    }
    _emit(payload, args.pretty)
    return EXIT_OK if all_ok else EXIT_REFUTED


def cmd_linearize(args) -> int:
    source, loaded = _load_presentations(args)
    solutions = []
    all_ok = True
    for item in loaded:
        pres = item.presentation
        mults = {g.multiplier for g in pres.gens}
        if len(mults) > 1:
            raise InputError(
                f"{source}: generators have unequal multipliers; certify first"
            )
        result = linearize(pres)
        ok = result.succeeded
        all_ok = all_ok and ok
        entry = {
            "label": item.label,
            "scalars": _scalars_json(item.scalars),
            "result": result.to_json(),
            "group_order": group_order(result),
        }
        solutions.append(entry)
    payload = {
        "command": "linearize",
        "input": source,
        "order": loaded[0].presentation.order,
        "solutions": solutions,
        "linearized": all_ok,
    }
    _emit(payload, args.pretty)
    return EXIT_OK if all_ok else EXIT_REFUTED


def _parse_point(text: str, nvars: int) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != nvars:
        raise InputError(f"--point needs {nvars} comma-separated coordinates")
    try:
        return tuple(parse_scalar(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"bad --point entry: {exc}") from exc


def _parse_params(text: str) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 6:
        raise InputError("--params needs six values a,b,c,alpha,beta,gamma")
    try:
        return tuple(Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --params entry: {exc}") from exc


def _load_form(args):
    """Returns (source, variables, omega, extras dict)."""
    if args.example is not None and args.input is not None:
        raise InputError("give either --example or an input file, not both")
    if args.example is not None:
        if args.example not in FORM_EXAMPLES:
            raise InputError(
                f"unknown example {args.example!r}; form examples: "
                + ", ".join(FORM_EXAMPLES)
            )
        params = _parse_params(args.params) if args.params else None
        try:
            ex = build_form_example(args.example, k=args.k, params=params)
        except RegistryError as exc:
            raise InputError(str(exc)) from exc
        extras = {
            "first_integral": ex.first_integral,
            "mero_numerator": ex.mero_numerator,
            "mero_denominator": ex.mero_denominator,
            "kupka_point": ex.kupka_point,
            "expected_cone": ex.expected_cone,
        }
        return args.example, ex.variables, ex.omega, extras
    if args.input is None:
        raise InputError("an input file or --example is required")
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.input}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{args.input}: expected a JSON object")
    variables = tuple(data.get("vars", ("x", "y", "z")))
    if not (2 <= len(variables) <= 4):
        raise InputError(f'{args.input}: field "vars" needs 2 to 4 names')
    form_text = data.get("form")
    if not isinstance(form_text, str):
        raise InputError(f'{args.input}: field "form" must be an expression string')
    try:
        omega = form_from_string(form_text, variables=variables)
    except ExpressionError as exc:
        raise InputError(f'{args.input}: field "form": {exc}') from exc
    if not isinstance(omega, PForm1):
        raise InputError(f'{args.input}: field "form" must be a 1-form')
    extras = {}
    for key in ("integral", "numerator", "denominator"):
        if key in data:
            try:
                extras[key] = poly_from_string(data[key], variables=variables)
            except ExpressionError as exc:
                raise InputError(f'{args.input}: field "{key}": {exc}') from exc
    return args.input, variables, omega, extras


def cmd_forms(args) -> int:
    source, variables, omega, extras = _load_form(args)
    payload = {
        "command": f"forms {args.subcommand}",
        "input": source,
        "vars": list(variables),
    }
    verdict: bool

    if args.subcommand == "integrable":
        verdict = integrability_check(omega)
        payload["integrable"] = verdict

    elif args.subcommand == "cone":
        cone = tangent_cone(omega)
        payload["dicritical"] = cone.dicritical
        payload["cone"] = (
            None if cone.cone is None else poly_to_string(cone.cone, variables)
        )
        verdict = not cone.dicritical

    elif args.subcommand == "kupka":
        point = None
        if args.point:
            point = _parse_point(args.point, len(variables))
        elif extras.get("kupka_point") is not None:
            point = extras["kupka_point"]
        else:
            raise InputError("kupka needs --point x,y,... coordinates")
        verdict = kupka_test(omega, point)
        payload["point"] = [
            format_scalar(v if not isinstance(v, int) else Fraction(v)) for v in point
        ]
        payload["kupka"] = verdict

    elif args.subcommand == "first-integral":
        if args.example is not None:
            integral = extras.get("first_integral")
            num = extras.get("mero_numerator")
            den = extras.get("mero_denominator")
        else:
            integral = extras.get("integral")
            num = extras.get("numerator")
            den = extras.get("denominator")
        if integral is not None:
            verdict = first_integral_check(omega, integral)
            payload["kind"] = "holomorphic"
            payload["integral"] = poly_to_string(integral, variables)
        elif num is not None and den is not None:
            verdict = meromorphic_first_integral_check(omega, num, den)
            payload["kind"] = "meromorphic"
            payload["numerator"] = poly_to_string(num, variables)
            payload["denominator"] = poly_to_string(den, variables)
        else:
            raise InputError(
                'first-integral needs "integral" or "numerator"/"denominator"'
            )
        payload["first_integral"] = verdict

    elif args.subcommand == "pullback":
        chart = args.chart or variables[0]
        if chart not in variables:
            raise InputError(f"--chart must be one of {', '.join(variables)}")
        m, reduced = blowup_chart_pullback(omega, chart)
        payload["chart"] = chart
        payload["exceptional_multiplicity"] = m
        payload["reduced"] = form_to_string(reduced, variables)
        payload["restriction"] = form_to_string(
            restrict_to_exceptional(reduced, chart), variables
        )
        verdict = cone_matches_chart_pullback(omega, chart)
        payload["matches_tangent_cone"] = verdict

    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown forms subcommand {args.subcommand!r}")

    _emit(payload, args.pretty)
    return EXIT_OK if verdict else EXIT_REFUTED


def _add_common(parser: argparse.ArgumentParser, with_search: bool = False):
    parser.add_argument("input", nargs="?", help="presentation JSON file")
    parser.add_argument("--example", help="built-in example id")
    parser.add_argument(
        "--order",
        type=int,
        default=None,
        help=f"truncation order N (default {DEFAULT_ORDER} or the file's)",
    )
    parser.add_argument(
        "--p", type=int, default=None, help="parameter p for ex4.3"
    )
    if with_search:
        parser.add_argument(
            "--max-word-len",
            type=int,
            default=DEFAULT_MAX_WORD_LEN,
            help="bound for the conjugator word search",
        )
    parser.add_argument(
        "--pretty", action="store_true", help="indented JSON output"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="germlin",
        description="Exact certification and linearization of germ groups, "
        "and polynomial differential-form checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cert = sub.add_parser("certify", help="irreducibility certification")
    _add_common(p_cert, with_search=True)
    p_cert.set_defaults(func=cmd_certify)

    p_lin = sub.add_parser("linearize", help="order-by-order linearization")
    _add_common(p_lin)
    p_lin.set_defaults(func=cmd_linearize)

    p_forms = sub.add_parser("forms", help="polynomial 1-form checks")
    p_forms.add_argument(
        "subcommand",
        choices=["integrable", "cone", "kupka", "first-integral", "pullback"],
    )
    p_forms.add_argument("input", nargs="?", help="form JSON file")
    p_forms.add_argument("--example", help="built-in example id")
    p_forms.add_argument("--k", type=int, default=None, help="degree for ex6.1")
    p_forms.add_argument(
        "--params", help="six values a,b,c,alpha,beta,gamma for ex6.1"
    )
    p_forms.add_argument("--point", help="comma-separated point coordinates")
    p_forms.add_argument("--chart", help="blow-up chart variable name")
    p_forms.add_argument("--pretty", action="store_true")
    p_forms.set_defaults(func=cmd_forms)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command in ("certify", "linearize") and args.order is None:
        args.order = None if args.input else DEFAULT_ORDER
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"germlin: error: {exc}\n")
        return EXIT_INPUT
    except (
        ExpressionError,
        PresentationError,
        RegistryError,
        ValueError,
        ZeroDivisionError,
        OSError,
    ) as exc:
        # the exit-code contract is total: any input-triggered failure is 2
        sys.stderr.write(f"germlin: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
