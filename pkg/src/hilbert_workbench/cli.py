"""
### Command line

    hilbert-workbench compute --family blownup-plane -p 4 -k 12
    hilbert-workbench eval --family k3 -r 88 -n 0 -n 1
    hilbert-workbench match enriques:m=1..10 blownup-plane:p=3..6,k=1..35
    hilbert-workbench solve --p-max 10 --r-max 100 --xyz-max 5
    hilbert-workbench lift -d 5 -p 4
    hilbert-workbench verify-paper

Every verb takes `--json` for machine readable output and `-v`/`-vv` for
progress on stderr. Results go to stdout; diagnostics go to stderr.

Exit codes: `0` for success or matches found, `1` for no result or a failed
verification, `2` for usage errors and guard violations.
"""


import argparse
from fractions import Fraction
import json
import logging
import re
import sys
from typing import Any, Callable, Optional, Sequence

from hilbert_workbench.catalog import (
    build,
    Family,
    PARAMETERS,
    PolarizedFamily,
    WorkbenchError,
)
from hilbert_workbench.identities import run_checks
from hilbert_workbench.matcher import (
    lift_pair,
    match_sides,
    ParamRange,
    Side,
    solve_cy4_reduced,
    solve_cy4_system,
)


EXIT_OK = 0
EXIT_NO_RESULT = 1
EXIT_USAGE = 2

FAMILY_NAMES = [family.value for family in Family if family is not Family.product]

# Command line flag for each catalog parameter
PARAMETER_FLAGS = {
    "p": ("-p",),
    "k": ("-k",),
    "m": ("-m",),
    "r": ("-r",),
    "deg": ("--deg",),
    "x": ("-x",),
    "y": ("-y",),
    "z": ("-z",),
}


class RangeSpecError(WorkbenchError):
    pass


# === Range specs ===

"""
### Range spec grammar

A single family box is written `family:param=lo..hi,param=lo..hi`, with
`param=v` short for `param=v..v`. A product of boxes is written
`product[family:...,family:...]`. Inside the brackets a comma either starts a
new factor (the token has a `family:` prefix) or adds a bound to the current
one.
"""

bound_pattern = re.compile(r"(?P<name>[a-z]+)=(?P<lo>-?\d+)(?:\.\.(?P<hi>-?\d+))?")
factor_pattern = re.compile(r"(?P<family>[a-z0-9-]+):(?P<bounds>.+)")
product_pattern = re.compile(r"product\[(?P<factors>.+)\]")


def parse_family(name: str) -> Family:
    if name not in FAMILY_NAMES:
        raise RangeSpecError(
            f"Unknown family '{name}', expected one of {', '.join(FAMILY_NAMES)}"
        )
    return Family(name)


def parse_range(text: str) -> ParamRange:
    """
    Parse one family box.

        >>> parse_range("blownup-plane:p=3..6,k=12").bounds
        (('p', 3, 6), ('k', 12, 12))
    """
    m = factor_pattern.fullmatch(text)
    if not m:
        raise RangeSpecError(f"Could not parse range spec '{text}'")

    family = parse_family(m.group("family"))
    bounds = []
    for part in m.group("bounds").split(","):
        bound = bound_pattern.fullmatch(part)
        if not bound:
            raise RangeSpecError(f"Could not parse bound '{part}' in '{text}'")

        lo = int(bound.group("lo"))
        hi = int(bound.group("hi")) if bound.group("hi") is not None else lo
        bounds.append((bound.group("name"), lo, hi))

    return ParamRange(family, tuple(bounds))


def parse_side(text: str) -> Side:
    """Parse either a single family box or a `product[...]` of boxes."""
    m = product_pattern.fullmatch(text)
    if not m:
        return parse_range(text)

    factors: list[list[str]] = []
    for token in m.group("factors").split(","):
        if ":" in token:
            factors.append([token])
        elif factors:
            factors[-1].append(token)
        else:
            raise RangeSpecError(f"Product spec '{text}' must start with a family")

    return [parse_range(",".join(tokens)) for tokens in factors]


def test_parse_side() -> None:
    """For example:"""
    # > `product[k3:r=80..90,blownup-plane:p=4..4,k=12..12]` is two factors.
    side = parse_side("product[k3:r=80..90,blownup-plane:p=4..4,k=12..12]")
    assert side == [
        ParamRange.of(Family.k3, r=(80, 90)),
        ParamRange.of(Family.blownup_plane, p=(4, 4), k=(12, 12)),
    ]

    # > `enriques:m=1..10` is a single box.
    assert parse_side("enriques:m=1..10") == ParamRange.of(Family.enriques, m=(1, 10))


# === Output ===


def emit(data: Any, lines: Sequence[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(data, indent=2))
    else:
        for line in lines:
            print(line)


def collect_params(args: argparse.Namespace, family: Family) -> dict[str, int]:
    """Pick the parameter flags that were given and check they fit the family."""
    params = {
        name: getattr(args, name)
        for name in PARAMETER_FLAGS
        if getattr(args, name) is not None
    }
    extra = sorted(set(params) - set(PARAMETERS[family]))
    if extra:
        raise WorkbenchError(f"{family.value} takes no parameter(s) {', '.join(extra)}")
    return params


def describe_lines(polarized: PolarizedFamily) -> list[str]:
    descriptor = polarized.descriptor
    lines = [polarized.polynomial.render(), f"family: {descriptor.label()}"]
    lines += [f"assumption: {note}" for note in descriptor.assumptions]
    return lines


# === Verbs ===


def cmd_compute(args: argparse.Namespace) -> int:
    family = Family(args.family)
    polarized = build(family, collect_params(args, family))
    data = {
        "polynomial": polarized.polynomial.key(),
        "text": polarized.polynomial.render(),
        "coefficients": polarized.polynomial.to_json(),
        "descriptor": polarized.descriptor.to_json(),
    }
    emit(data, describe_lines(polarized), args.json)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    family = Family(args.family)
    polarized = build(family, collect_params(args, family))
    points = args.n if args.n else [Fraction(n) for n in range(6)]

    values = [(t, polarized.polynomial(t)) for t in points]
    data = {
        "polynomial": polarized.polynomial.key(),
        "descriptor": polarized.descriptor.to_json(),
        "values": [{"n": str(t), "value": str(value)} for t, value in values],
    }
    lines = [f"{polarized.descriptor.label()}: {polarized.polynomial}"]
    lines += [f"n={t}: {value}" for t, value in values]
    emit(data, lines, args.json)
    return EXIT_OK


def cmd_match(args: argparse.Namespace) -> int:
    left = parse_side(args.left)
    right = parse_side(args.right)
    matches = match_sides(left, right, workers=args.workers)

    lines = []
    for match in matches:
        pair = f"{match.left.label()} <-> {match.right.label()}"
        marker = "  [counterexample]" if match.is_counterexample else ""
        lines.append(f"{pair}: {match.polynomial}{marker}")
    lines.append(f"{len(matches)} match(es)" if matches else "no matches")

    emit({"matches": [match.to_json() for match in matches]}, lines, args.json)
    return EXIT_OK if matches else EXIT_NO_RESULT


def cmd_solve(args: argparse.Namespace) -> int:
    if args.reduced:
        solutions = solve_cy4_reduced(args.x_max)
    else:
        solutions = solve_cy4_system(args.p_max, args.r_max, args.xyz_max)

    lines = [
        " ".join(f"{name}={value}" for name, value in solution._asdict().items())
        for solution in solutions
    ]
    emit(
        {"solutions": [s.to_json() for s in solutions]},
        lines or ["no solutions"],
        args.json,
    )
    return EXIT_OK


def cmd_lift(args: argparse.Namespace) -> int:
    cy, other = lift_pair(args.d, args.p, r=args.r, m=args.m)
    matched = cy.polynomial == other.polynomial

    data = {
        "d": args.d,
        "calabi_yau": cy.descriptor.to_json(),
        "other": other.descriptor.to_json(),
        "polynomials": [cy.polynomial.key(), other.polynomial.key()],
        "match": matched,
    }
    lines = [
        f"{cy.descriptor.label()}: {cy.polynomial}",
        f"{other.descriptor.label()}: {other.polynomial}",
        "match" if matched else "no match",
    ]
    emit(data, lines, args.json)
    return EXIT_OK if matched else EXIT_NO_RESULT


def cmd_verify_paper(args: argparse.Namespace) -> int:
    checks = run_checks()

    lines = []
    for check in checks:
        if check.passed:
            lines.append(f"PASS {check.name}")
        else:
            lines.append(f"FAIL {check.name}: {check.detail}")
    emit({"checks": [check.to_json() for check in checks]}, lines, args.json)

    failures = [check for check in checks if not check.passed]
    if failures:
        print(f"first failing identity: {failures[0].name}", file=sys.stderr)
        return EXIT_NO_RESULT
    return EXIT_OK


# === Parser ===


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as error:
        message = f"expected a rational number, got {text}"
        raise argparse.ArgumentTypeError(message) from error


def add_family_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", required=True, choices=FAMILY_NAMES)
    for name, flags in PARAMETER_FLAGS.items():
        parser.add_argument(*flags, dest=name, type=int)


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print JSON, not text")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="Log progress to stderr"
    )

    parser = argparse.ArgumentParser(
        prog="hilbert-workbench",
        description="Hilbert polynomials of polarized families and their coincidences",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    compute = verbs.add_parser(
        "compute", parents=[common], help="Hilbert polynomial of a family"
    )
    add_family_arguments(compute)
    compute.set_defaults(handler=cmd_compute)

    evaluate = verbs.add_parser(
        "eval", parents=[common], help="Evaluate a Hilbert polynomial"
    )
    add_family_arguments(evaluate)
    evaluate.add_argument(
        "-n", action="append", type=rational, help="Point to evaluate at"
    )
    evaluate.set_defaults(handler=cmd_eval)

    match = verbs.add_parser(
        "match", parents=[common], help="Find equal Hilbert polynomials"
    )
    match.add_argument("left", help="family:param=lo..hi,... or product[...]")
    match.add_argument("right", help="family:param=lo..hi,... or product[...]")
    match.add_argument("--workers", type=positive_int, default=1)
    match.set_defaults(handler=cmd_match)

    solve = verbs.add_parser(
        "solve", parents=[common], help="Solve the fourfold system"
    )
    solve.add_argument("--p-max", type=positive_int, default=10)
    solve.add_argument("--r-max", type=positive_int, default=100)
    solve.add_argument("--xyz-max", type=positive_int, default=5)
    solve.add_argument(
        "--reduced", action="store_true", help="Only the y = 2x, z = x slice"
    )
    solve.add_argument("--x-max", type=positive_int, default=10)
    solve.set_defaults(handler=cmd_solve)

    lift = verbs.add_parser("lift", parents=[common], help="Lifted pair in dimension d")
    lift.add_argument("-d", type=int, required=True)
    lift.add_argument("-p", type=int, default=4)
    lift.add_argument("-r", type=int, default=1)
    lift.add_argument("-m", type=int)
    lift.set_defaults(handler=cmd_lift)

    verify = verbs.add_parser(
        "verify-paper", parents=[common], help="Run the regression suite"
    )
    verify.set_defaults(handler=cmd_verify_paper)

    return parser


def configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(message)s"
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    configure_logging(args.verbose)

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except WorkbenchError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
