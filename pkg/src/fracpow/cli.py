"""Command-line front end.

Subcommands: deriv, eval, table, gamma, verify, compose.  Exit codes:
0 success, 1 parse/usage error, 2 mathematically undefined input,
3 verification failures.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from .deriv import (
    UndefinedDerivative,
    ZeroDenominatorInRatio,
    compose,
    derivative,
)
from .gammafn import format_gamma_value, gamma
from .harness import all_pass, render_report_json, render_report_text, run_suite
from .model import (
    CoeffSequence,
    Geometric,
    InverseFactorialSquare,
    NonConvergentAssignment,
    evaluate_result,
)
from .parser import ParseError, parse_expr, parse_order, render

_RATIONAL_VALUE = re.compile(r"^-(\d+(\.\d+)?|\d+/\d+)$")
_VALUE_FLAGS = {"--order", "--at", "--from", "--to"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are exit code 1, not 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _normalize_argv(argv: list[str]) -> list[str]:
    """Let negative rationals pass through argparse.

    `--order -5/3` becomes `--order=-5/3`, and a leading negative value
    after the `gamma` subcommand is protected with `--`.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok in _VALUE_FLAGS
            and i + 1 < len(argv)
            and _RATIONAL_VALUE.match(argv[i + 1])
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        if tok == "gamma" and i + 1 < len(argv) and _RATIONAL_VALUE.match(argv[i + 1]):
            out.append("--")
        i += 1
    return out


def _build_parser() -> _Parser:
    parser = _Parser(prog="fracpow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    deriv = sub.add_parser("deriv", help="derivative of a power expression")
    deriv.add_argument("expr")
    deriv.add_argument("--order", required=True)
    deriv.add_argument("--def", dest="definition", type=int, choices=(1, 2), default=2)
    deriv.add_argument("--format", choices=("text", "latex", "json"), default="text")

    ev = sub.add_parser("eval", help="numeric value of a derivative at a point")
    ev.add_argument("expr")
    ev.add_argument("--order", required=True)
    ev.add_argument("--at", required=True)
    ev.add_argument("--def", dest="definition", type=int, choices=(1, 2), default=2)
    ev.add_argument("--constants", default="zero",
                    help="'zero', a JSON file path, inline JSON, or k=v,k=v")
    ev.add_argument("--K", dest="truncation", type=int, default=None,
                    help="truncation index for infinite constant tails")

    table = sub.add_parser("table", help="TSV of (x, value) with constants zero")
    table.add_argument("expr")
    table.add_argument("--order", required=True)
    table.add_argument("--def", dest="definition", type=int, choices=(1, 2), default=2)
    table.add_argument("--from", dest="start", required=True)
    table.add_argument("--to", dest="stop", required=True)
    table.add_argument("--steps", type=int, required=True)

    gm = sub.add_parser("gamma", help="gamma of a rational (exact form when available)")
    gm.add_argument("z")

    verify = sub.add_parser("verify", help="run the theorem verification suite")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--format", choices=("text", "json"), default="text")

    comp = sub.add_parser("compose", help="n-fold chaining vs the direct order")
    comp.add_argument("expr")
    comp.add_argument("--order", required=True)
    comp.add_argument("--times", type=int, required=True)
    comp.add_argument("--def", dest="definition", type=int, choices=(1, 2), default=2)
    comp.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _parse_constants(spec: str) -> CoeffSequence:
    if spec == "zero":
        return CoeffSequence.zeros()
    if spec.lstrip().startswith("{"):
        data = json.loads(spec)
    elif os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = {}
        for piece in spec.split(","):
            k, _, v = piece.partition("=")
            if not _:
                raise ValueError(f"constants entry {piece!r} is not k=v")
            data[k.strip()] = float(v)
    tail = None
    if "tail" in data:
        tail_spec = data.pop("tail")
        kind = tail_spec.get("kind")
        if kind == "inverse_factorial_square":
            tail = InverseFactorialSquare()
        elif kind == "geometric":
            tail = Geometric(float(tail_spec["ratio"]))
        else:
            raise ValueError(f"unknown tail kind {kind!r}")
    explicit = {int(k): float(v) for k, v in data.items()}
    return CoeffSequence(explicit, tail)


def _cmd_deriv(args) -> int:
    result = derivative(parse_expr(args.expr), parse_order(args.order), args.definition)
    print(render(result, args.format))
    return 0


def _cmd_eval(args) -> int:
    result = derivative(parse_expr(args.expr), parse_order(args.order), args.definition)
    constants = _parse_constants(args.constants)
    x = float(Fraction(args.at))
    value = evaluate_result(result, x, constants, truncation=args.truncation)
    print(f"{value:.15g}")
    return 0


def _cmd_table(args) -> int:
    result = derivative(parse_expr(args.expr), parse_order(args.order), args.definition)
    a = float(Fraction(args.start))
    b = float(Fraction(args.stop))
    n = args.steps
    if n < 1:
        raise ValueError("--steps must be >= 1")
    print("x\tvalue")
    for i in range(n):
        x = a if n == 1 else a + (b - a) * i / (n - 1)
        value = evaluate_result(result, x, CoeffSequence.zeros())
        print(f"{x:.15g}\t{value:.15g}")
    return 0


def _cmd_gamma(args) -> int:
    print(format_gamma_value(gamma(parse_order(args.z))))
    return 0


def _cmd_verify(args) -> int:
    checks = run_suite(seed=args.seed, trials_per_theorem=args.trials)
    if args.format == "json":
        print(render_report_json(checks))
    else:
        print(render_report_text(checks))
    return 0 if all_pass(checks) else 3


def _cmd_compose(args) -> int:
    report = compose(
        parse_expr(args.expr), parse_order(args.order), args.times, args.definition
    )
    if args.format == "json":
        from .model import frac_result_to_json, power_expr_to_json

        print(
            json.dumps(
                {
                    "chained": frac_result_to_json(report.chained),
                    "direct": frac_result_to_json(report.direct),
                    "discrepancy": power_expr_to_json(report.discrepancy),
                }
            )
        )
    else:
        print(f"chained: {render(report.chained)}")
        print(f"direct:  {render(report.direct)}")
        print(f"P(x):    {render(report.discrepancy)}")
    return 0


_COMMANDS = {
    "deriv": _cmd_deriv,
    "eval": _cmd_eval,
    "table": _cmd_table,
    "gamma": _cmd_gamma,
    "verify": _cmd_verify,
    "compose": _cmd_compose,
}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(_normalize_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UndefinedDerivative, NonConvergentAssignment, ZeroDenominatorInRatio) as exc:
        print(f"undefined: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
