"""Rational-order derivatives of power-function sums on the half line.

The package computes d^s/dx^s of finite sums a*x^e for any rational
order s, under two definitions that share the same principal part and
differ in how many arbitrary-constant terms they attach.  Gamma-function
poles are handled by exact limit algebra, so integer orders reduce
exactly to classical differentiation and antidifferentiation.

Quick start::

    from fracpow import parse_expr, derivative, render
    r = derivative(parse_expr("x^3"), "-1")
    render(r)          # 'x^4/4 + c_{-1}'
"""

from fractions import Fraction as Rational

from .gammafn import (
    ExactRadical,
    Pole,
    Undefined,
    UNDEFINED,
    gamma,
    gamma_float,
    gamma_numeric,
    gamma_ratio,
    radical,
    reciprocal_gamma,
    to_float,
)
from .model import (
    CoeffSequence,
    ConstantFamily,
    ConstantTermSpec,
    DifferentOrder,
    FracResult,
    Geometric,
    InfiniteTailRule,
    InverseFactorialSquare,
    NegativePowerAtZeroWarning,
    NonConvergentAssignment,
    PowerExpr,
    PowerTerm,
    canonicalize,
    evaluate,
    evaluate_result,
    frac_result_from_json,
    frac_result_to_json,
    monomial,
    power_expr_from_json,
    power_expr_to_json,
    semi_equal,
)
from .deriv import (
    CompositionReport,
    ConvergenceVerdict,
    UndefinedDerivative,
    ZeroDenominatorInRatio,
    check_convergence,
    compose,
    derivative,
    derivative_chain,
    derivative_def1,
    derivative_def2,
    derivative_linear,
)
from .parser import ParseError, parse_expr, parse_order, render
from .harness import (
    LogarithmicCase,
    TheoremCheck,
    oracle_antiderivative,
    oracle_classical_derivative,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "Rational",
    "ExactRadical",
    "Pole",
    "Undefined",
    "UNDEFINED",
    "gamma",
    "gamma_float",
    "gamma_numeric",
    "gamma_ratio",
    "radical",
    "reciprocal_gamma",
    "to_float",
    "CoeffSequence",
    "ConstantFamily",
    "ConstantTermSpec",
    "DifferentOrder",
    "FracResult",
    "Geometric",
    "InfiniteTailRule",
    "InverseFactorialSquare",
    "NegativePowerAtZeroWarning",
    "NonConvergentAssignment",
    "PowerExpr",
    "PowerTerm",
    "canonicalize",
    "evaluate",
    "evaluate_result",
    "frac_result_from_json",
    "frac_result_to_json",
    "monomial",
    "power_expr_from_json",
    "power_expr_to_json",
    "semi_equal",
    "CompositionReport",
    "ConvergenceVerdict",
    "UndefinedDerivative",
    "ZeroDenominatorInRatio",
    "check_convergence",
    "compose",
    "derivative",
    "derivative_chain",
    "derivative_def1",
    "derivative_def2",
    "derivative_linear",
    "ParseError",
    "parse_expr",
    "parse_order",
    "render",
    "LogarithmicCase",
    "TheoremCheck",
    "oracle_antiderivative",
    "oracle_classical_derivative",
    "run_suite",
]
