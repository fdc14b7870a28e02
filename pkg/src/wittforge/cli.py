"""``wittforge`` command line: series tables, invariant values and verification suites.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 success, 1 a
verification suite failed, 2 usage error, 3 the input is not in the
required power of the fundamental ideal.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import series
from .cohom import MembershipError, PfisterSum
from .invariants import COH, WITT, InvariantSpec, eval_invariant, product_coeffs, restrict_coeffs
from .qform import DiagForm, UnsupportedError, witt_class, witt_equal
from .suites import SIZES, SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MEMBERSHIP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _order(args) -> int:
    if args.order is not None:
        if args.order < 0:
            raise UsageError("--order must be non-negative")
        return args.order
    try:
        return series.default_order()
    except ValueError as ex:
        raise UsageError(f"WITTFORGE_ORDER: {ex}") from None


def _letter(name: str, n: int | None, order: int) -> series.GreekLetter:
    if name.startswith("pi"):
        suffix = name[2:]
        if suffix and not suffix.isdigit():
            raise UsageError(f"unknown letter {name!r}")
        level = int(suffix) if suffix else n
        if level is None or level < 1:
            raise UsageError("pi letters need a level n >= 1")
        return series.pi_letter(level, order)
    if name == "lambda":
        return series.lambda_letter(order)
    if name == "gamma":
        return series.gamma_letter(order)
    if name in ("catalan", "quadratic"):
        if n is None or n < 1:
            raise UsageError(f"the {name} step letter needs --n >= 1")
        step = series.catalan_step if name == "catalan" else series.quadratic_step
        return step(n, order)
    raise UsageError(f"unknown letter {name!r}")


def cmd_series(args) -> int:
    if args.what == "pi":
        if args.n is None or args.n < 1:
            raise UsageError("series pi needs --n >= 1")
        letter = series.pi_letter(args.n, _order(args))
        _emit({"letter": f"pi_{args.n}", **letter.series.to_json()})
        return EXIT_OK
    degree = args.degree if args.degree is not None else args.matrix_degree
    if degree is None or degree < 1:
        raise UsageError("series matrix needs --degree >= 1")
    letter = _letter(args.letter, args.n, degree)
    a = series.letter_matrix(letter, degree)
    rows = [[a[k][d] for d in range(1, degree + 1)] for k in range(1, degree + 1)]
    _emit({"letter": args.letter, "degree": degree, "rows": rows})
    return EXIT_OK


def _parse_form(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as ex:
        raise UsageError(f"--form is not valid JSON: {ex}") from None
    if isinstance(data, dict) and "terms" in data:
        return PfisterSum.from_json(data)
    if isinstance(data, dict):
        data = data.get("entries")
    if not isinstance(data, list) or not data:
        raise UsageError("--form must be a non-empty JSON list of nonzero rationals")
    try:
        entries = [Fraction(str(x)) for x in data]
    except (ValueError, ZeroDivisionError):
        raise UsageError("--form entries must be rationals") from None
    if any(x == 0 for x in entries):
        raise UsageError("--form entries must be nonzero")
    return DiagForm.of(*entries)


def _table(pairs) -> list:
    return [[d, str(c)] for d, c in pairs]


def cmd_invariant(args) -> int:
    if args.product is not None:
        s, t, n = args.product
        if min(s, t) < 0 or n < 1:
            raise UsageError("--product needs s, t >= 0 and n >= 1")
        _emit({"product": [s, t], "n": n, "char2": args.char2, "terms": _table(product_coeffs(s, t, n, args.char2))})
        return EXIT_OK
    if args.restrict is not None:
        n, d, delta = args.restrict
        if n < 1 or d < 1 or delta not in (0, 1):
            raise UsageError("--restrict needs n >= 1, d >= 1 and delta in {0, 1}")
        _emit({"restrict": [n, d], "delta": delta, "terms": _table(restrict_coeffs(n, d, delta))})
        return EXIT_OK
    missing = [f for f in ("family", "n", "d", "form") if getattr(args, f) is None]
    if missing:
        raise UsageError("invariant needs " + ", ".join("--" + m for m in missing))
    cod = WITT if args.codomain == "witt" else COH
    try:
        spec = InvariantSpec(args.family, args.n, args.d, cod)
    except ValueError as ex:
        raise UsageError(str(ex)) from None
    q = _parse_form(args.form)
    value = eval_invariant(spec, q)
    out = {"family": args.family, "n": args.n, "d": args.d, "codomain": args.codomain}
    if args.codomain == "witt":
        out["value"] = witt_class(value).to_json()
        out["zero"] = witt_equal(value, 0)
    else:
        out["value"] = value.to_json()
        out["zero"] = value.is_zero()
    _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite == "all":
        names = SUITES
    elif args.suite in SUITES:
        names = (args.suite,)
    else:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    reports = run_suites(names, args.seed, args.size)
    for r in reports:
        print(f"{r.suite}: {r.passed}/{r.count} in {r.wall_time:.2f}s", file=sys.stderr)
    ok = all(r.ok for r in reports)
    _emit({"seed": args.seed, "size": args.size, "ok": ok, "suites": [r.to_json() for r in reports]})
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wittforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="pi letters and letter matrices")
    p.add_argument("what", choices=("pi", "matrix"))
    p.add_argument("--n", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--letter", default="pi1", help="pi<n>, pi (with --n), lambda, gamma, catalan, quadratic")
    p.add_argument("--degree", type=int)
    p.add_argument("--matrix-degree", type=int, dest="matrix_degree")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("invariant", help="f/g invariants and coefficient tables")
    p.add_argument("--family", choices=("f", "g"))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--codomain", choices=("witt", "coh"), default="witt")
    p.add_argument("--form", help="JSON list of diagonal entries, or a Pfister sum {level, terms}")
    p.add_argument("--product", type=int, nargs=3, metavar=("S", "T", "N"))
    p.add_argument("--char2", action="store_true", help="reduce product coefficients mod 2")
    p.add_argument("--restrict", type=int, nargs=3, metavar=("N", "D", "DELTA"))
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", choices=SIZES, default="full")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    try:
        return args.func(args)
    except UsageError as ex:
        print(f"wittforge: error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except MembershipError as ex:
        print(f"wittforge: membership: {ex}", file=sys.stderr)
        return EXIT_MEMBERSHIP
    except UnsupportedError as ex:
        print(f"wittforge: unsupported: {ex}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
