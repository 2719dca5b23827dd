"""Rational-order derivatives of power-function sums.

Two definitions share the principal part

    a * gamma(e + 1) / gamma(e - s + 1) * x**(e - s)

per input term ``a * x**e`` and differ only in the arbitrary-constant
terms attached to the result:

* definition 1 attaches c_k * x**(k - s) / gamma(k - s + 1) for every
  k <= -1 (an infinite tail unless s is an integer),
* definition 2 replaces the gamma shift by the integer truncation of s,
  which kills every constant for s >= 0 and leaves trunc(|s|) live slots
  for s < 0.

"Entire part" is read as truncation toward zero: it is the only reading
that reproduces one live constant for order -5/3 and two for -17/7.

Chaining applications tracks each application's fresh constant family as
its own generation; prior generations are differentiated termwise as
ordinary power terms (their gamma structure folds into the arbitrary
constants).  `compose` compares an n-fold chain against the single
application at order n*s and reports the discrepancy polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .gammafn import Undefined, as_fraction, gamma_ratio
from .model import (
    CoeffSequence,
    ConstantFamily,
    ConstantTermSpec,
    FracResult,
    InfiniteTailRule,
    PowerExpr,
    PowerTerm,
    canonicalize,
    difference_support,
)

__all__ = [
    "UndefinedDerivative",
    "ZeroDenominatorInRatio",
    "ConvergenceVerdict",
    "CompositionReport",
    "derivative_def1",
    "derivative_def2",
    "derivative",
    "derivative_linear",
    "derivative_chain",
    "compose",
    "check_convergence",
]


class UndefinedDerivative(ArithmeticError):
    """The coefficient gamma(e+1)/gamma(e-s+1) diverges for this (s, e).

    Happens exactly when e + 1 is a non-positive integer while
    e - s + 1 is not: the antiderivative would need a logarithm, which
    lies outside the power-function class.
    """

    def __init__(self, order: Fraction, exponent: Fraction):
        self.order = order
        self.exponent = exponent
        super().__init__(
            f"derivative of order {order} undefined on x^({exponent}): "
            f"gamma({exponent + 1}) diverges while gamma({exponent - order + 1}) does not"
        )


class ZeroDenominatorInRatio(ArithmeticError):
    """Convergence ratio c_{k-1}/c_k undefined because some c_k = 0."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(
            f"c_{index} = 0 makes the ratio criterion indeterminate"
        )


def _principal(f: PowerExpr, s: Fraction) -> PowerExpr:
    out = []
    for t in f.terms:
        ratio = gamma_ratio(t.exponent + 1, t.exponent - s + 1)
        if isinstance(ratio, Undefined):
            raise UndefinedDerivative(s, t.exponent)
        coeff = t.coeff * ratio
        if coeff:
            out.append(PowerTerm(coeff, t.exponent - s))
    return canonicalize(out)


def derivative_def1(f: PowerExpr, s) -> FracResult:
    """First definition: infinite constant tail for non-integer orders."""
    s = as_fraction(s)
    principal = _principal(f, s)
    if s.denominator == 1:
        n = int(s)
        if n >= 0:
            family = ConstantFamily()
        else:
            family = ConstantFamily(
                specs=tuple(
                    ConstantTermSpec(k, k - s, k - s + 1) for k in range(n, 0)
                )
            )
    else:
        family = ConstantFamily(tails=(InfiniteTailRule(order=s),))
    return FracResult(principal, family, s, 1)


def derivative_def2(f: PowerExpr, s) -> FracResult:
    """Second definition: at most trunc(|s|) constants, none for s >= 0."""
    s = as_fraction(s)
    principal = _principal(f, s)
    if s >= 0:
        family = ConstantFamily()
    else:
        t = (-s).numerator // (-s).denominator  # trunc toward zero of |s|
        family = ConstantFamily(
            specs=tuple(
                ConstantTermSpec(k, k - s, Fraction(k + t + 1)) for k in range(-t, 0)
            )
        )
    return FracResult(principal, family, s, 2)


def derivative(f: PowerExpr, s, definition: int = 2) -> FracResult:
    if definition == 1:
        return derivative_def1(f, s)
    if definition == 2:
        return derivative_def2(f, s)
    raise ValueError(f"definition must be 1 or 2, got {definition}")


def derivative_linear(
    parts: Sequence[tuple], s, definition: int = 2
) -> FracResult:
    """Derivative of sum(scalar * expr) after canonicalising the sum."""
    terms = []
    for scalar, expr in parts:
        for t in expr.terms:
            terms.append(PowerTerm(scalar * t.coeff, t.exponent))
    return derivative(canonicalize(terms), s, definition)


# --- chaining ----------------------------------------------------------------


def _shift_family(family: ConstantFamily, s: Fraction) -> ConstantFamily:
    """Differentiate a prior-generation family termwise by order s.

    Each slot keeps its arbitrary constant; only the exponent pattern
    matters, so surviving slots are renormalised to the canonical shape
    gamma_arg = exponent + 1.  Slots whose coefficient ratio hits a
    denominator pole are deleted; a numerator-only pole propagates as
    `UndefinedDerivative`.
    """
    specs = []
    for spec in family.specs:
        ratio = gamma_ratio(spec.exponent + 1, spec.exponent - s + 1)
        if isinstance(ratio, Undefined):
            raise UndefinedDerivative(s, spec.exponent)
        if not ratio:
            continue
        new_exp = spec.exponent - s
        specs.append(ConstantTermSpec(spec.index, new_exp, new_exp + 1))
    tails = []
    for tail in family.tails:
        new_order = tail.order + s
        if new_order.denominator != 1:
            tails.append(InfiniteTailRule(new_order, tail.truncation))
            continue
        # integer effective order: gamma(k - order + 1) is a pole for every
        # k <= order, so the tail collapses to finitely many live slots
        for k in range(int(new_order), 0):
            new_exp = k - new_order
            specs.append(ConstantTermSpec(k, new_exp, new_exp + 1))
    return ConstantFamily(specs=tuple(specs), tails=tuple(tails))


def _merge_families(families: Sequence[ConstantFamily]) -> ConstantFamily:
    specs: list[ConstantTermSpec] = []
    seen_exponents = set()
    tails: list[InfiniteTailRule] = []
    seen_orders = set()
    for fam in families:
        for tail in fam.tails:
            if tail.order not in seen_orders:
                seen_orders.add(tail.order)
                tails.append(tail)
    for fam in families:
        for spec in fam.specs:
            if spec.exponent in seen_exponents:
                continue
            if any(t.contains_exponent(spec.exponent) for t in tails):
                continue
            seen_exponents.add(spec.exponent)
            specs.append(spec)
    specs.sort(key=lambda sp: sp.exponent)
    return ConstantFamily(specs=tuple(specs), tails=tuple(tails))


def derivative_chain(f: PowerExpr, orders: Sequence, definition: int = 2) -> FracResult:
    """Successive applications, one fresh constant generation each."""
    generations: list[ConstantFamily] = []
    current = f
    total = Fraction(0)
    for s in orders:
        s = as_fraction(s)
        result = derivative(current, s, definition)
        generations = [_shift_family(g, s) for g in generations]
        generations.append(result.family)
        current = result.principal
        total += s
    return FracResult(current, _merge_families(generations), total, definition)


@dataclass(frozen=True)
class CompositionReport:
    """n-fold chain vs the single application at order n*s.

    `discrepancy` is the polynomial by which the two sides differ: the
    non-negligible principal difference plus a unit-coefficient slot for
    every exponent that only one side's constant family can span.
    """

    chained: FracResult
    direct: FracResult
    discrepancy: PowerExpr


def _family_span_mismatch(f1: ConstantFamily, f2: ConstantFamily) -> list[Fraction]:
    out = set()
    for spec in f1.enumerated_specs():
        if not f2.contains_exponent(spec.exponent):
            out.add(spec.exponent)
    for spec in f2.enumerated_specs():
        if not f1.contains_exponent(spec.exponent):
            out.add(spec.exponent)
    return sorted(out)


def compose(f: PowerExpr, s, n: int, definition: int = 2) -> CompositionReport:
    """Apply order s n times and compare with order n*s applied once."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    s = as_fraction(s)
    chained = derivative_chain(f, [s] * n, definition)
    direct = derivative(f, n * s, definition)
    support = set(difference_support(chained.principal, direct.principal))
    diff = chained.principal - direct.principal
    terms = [t for t in diff.terms if t.exponent in support]
    for exponent in _family_span_mismatch(chained.family, direct.family):
        if exponent not in support:
            terms.append(PowerTerm(Fraction(1), exponent))
    return CompositionReport(chained, direct, canonicalize(terms))


# --- convergence of the infinite tail ----------------------------------------


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Outcome of the ratio test on a constant assignment's tail.

    passes is True only when the estimate sequence decreases over the
    window and the extrapolated limit of |k * c_{k-1} / c_k| is below
    1e-6 (the mechanical surrogate for the limit being 0).
    """

    passes: bool
    estimated_limit: float
    window: tuple[int, int]


_LIMIT_THRESHOLD = 1e-6


def _extrapolate_to_zero(ns: Sequence[int], values: Sequence[float]) -> float:
    """Quadratic Lagrange extrapolation of L(1/n) to 1/n -> 0."""
    hs = [1.0 / n for n in ns]
    total = 0.0
    for i, (hi, vi) in enumerate(zip(hs, values)):
        weight = 1.0
        for j, hj in enumerate(hs):
            if j != i:
                weight *= (0.0 - hj) / (hi - hj)
        total += float(vi) * weight
    return total


def check_convergence(seq: CoeffSequence, order, window_end: int = 200) -> ConvergenceVerdict:
    """Ratio test on the assignment's tail rule.

    Finite-support assignments pass trivially.  Otherwise the estimates
    L_k = |k * c_{k-1} / c_k| are computed from k = -2 (or just below the
    explicit support) down to -window_end; built-in tails supply their
    successive ratio in closed form so no factorial overflow occurs.
    The verdict requires eventual monotone decrease and an extrapolated
    limit under 1e-6.  The `order` argument is accepted for interface
    symmetry; the criterion itself does not involve it.
    """
    del order
    if seq.tail is None:
        return ConvergenceVerdict(True, 0.0, (-2, -2))
    start = -2
    if seq.explicit:
        start = min(start, min(seq.explicit) - 1)
    ks = range(start, -window_end - 1, -1)
    estimates: list[float] = []
    ns: list[int] = []
    for k in ks:
        boundary = k in seq.explicit or (k - 1) in seq.explicit
        if not boundary and hasattr(seq.tail, "successive_ratio"):
            ratio = seq.tail.successive_ratio(k)
        else:
            ck = seq.value(k)
            ck1 = seq.value(k - 1)
            if ck == 0.0:
                if ck1 == 0.0:
                    continue  # identically-zero stretch: nothing to test
                raise ZeroDenominatorInRatio(k)
            ratio = ck1 / ck
        estimates.append(abs(k * ratio))
        ns.append(-k)
    if len(estimates) < 4:
        passes = all(e < _LIMIT_THRESHOLD for e in estimates)
        last = estimates[-1] if estimates else 0.0
        return ConvergenceVerdict(passes, last, (start, -window_end))
    tail_len = max(10, len(estimates) // 4)
    window = estimates[-tail_len:]
    decreasing = all(
        b <= a * (1.0 + 1e-12) for a, b in zip(window, window[1:])
    )
    limit = abs(_extrapolate_to_zero(ns[-3:], estimates[-3:]))
    if not math.isfinite(limit):
        limit = math.inf
    passes = decreasing and limit < _LIMIT_THRESHOLD
    return ConvergenceVerdict(passes, limit, (start, -window_end))
