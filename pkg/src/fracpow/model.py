"""Canonical data model for power-function sums and derivative results.

A `PowerExpr` is a finite sum of `a * x**e` terms with exact rational
exponents, kept canonical (merged, sorted, zero-free).  A derivative
result couples a principal `PowerExpr` with a `ConstantFamily`: the
symbolic span of arbitrary-constant terms that makes non-positive-integer
orders non-unique.  Numbers are only attached to those constants at
evaluation time, through a `CoeffSequence`.

Coefficients are `Fraction` wherever the computation is exact,
`ExactRadical` when a single sqrt(pi) survives (half-integer gamma
values), and `float` otherwise.  Ordinary arithmetic operators do the
right thing across all three.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .gammafn import ExactRadical, is_pole_argument, reciprocal_gamma, to_float

__all__ = [
    "Coeff",
    "PowerTerm",
    "PowerExpr",
    "canonicalize",
    "monomial",
    "evaluate",
    "ConstantTermSpec",
    "InfiniteTailRule",
    "ConstantFamily",
    "FracResult",
    "CoeffSequence",
    "InverseFactorialSquare",
    "Geometric",
    "evaluate_result",
    "semi_equal",
    "difference_support",
    "DifferentOrder",
    "NonConvergentAssignment",
    "NegativePowerAtZeroWarning",
    "power_expr_to_json",
    "power_expr_from_json",
    "frac_result_to_json",
    "frac_result_from_json",
]

Coeff = Union[Fraction, ExactRadical, float]

DEFAULT_TRUNCATION = 40

#: relative threshold below which a float coefficient difference is treated
#: as arithmetic noise rather than a genuine term (support computations only)
NOISE_RTOL = 1e-9


class DifferentOrder(ValueError):
    """Semi-equality compared results of different order or definition."""


class NonConvergentAssignment(ValueError):
    """A constant assignment whose tail fails the convergence criterion."""


class NegativePowerAtZeroWarning(RuntimeWarning):
    """x = 0 hit a negative exponent; the term is defined to be 0 there."""


def _as_coeff(value) -> Coeff:
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (Fraction, ExactRadical, float)):
        return value
    raise TypeError(f"unsupported coefficient type {type(value).__name__}")


@dataclass(frozen=True)
class PowerTerm:
    """One term a * x**exponent; coeff != 0 in canonical expressions."""

    coeff: Coeff
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", _as_coeff(self.coeff))
        object.__setattr__(self, "exponent", Fraction(self.exponent))


@dataclass(frozen=True)
class PowerExpr:
    """Canonical sum of power terms: exponents strictly increasing."""

    terms: tuple[PowerTerm, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "PowerExpr") -> "PowerExpr":
        return canonicalize((*self.terms, *other.terms))

    def __sub__(self, other: "PowerExpr") -> "PowerExpr":
        return self + (-other)

    def __neg__(self) -> "PowerExpr":
        return PowerExpr(tuple(PowerTerm(-t.coeff, t.exponent) for t in self.terms))

    def scale(self, factor) -> "PowerExpr":
        factor = _as_coeff(factor)
        return canonicalize(PowerTerm(factor * t.coeff, t.exponent) for t in self.terms)

    def coefficient(self, exponent) -> Coeff:
        exponent = Fraction(exponent)
        for t in self.terms:
            if t.exponent == exponent:
                return t.coeff
        return Fraction(0)

    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(t.exponent for t in self.terms)


def canonicalize(terms: Iterable[PowerTerm | tuple]) -> PowerExpr:
    """Merge like exponents, drop zero coefficients, sort ascending."""
    merged: dict[Fraction, Coeff] = {}
    for item in terms:
        t = item if isinstance(item, PowerTerm) else PowerTerm(*item)
        if t.exponent in merged:
            merged[t.exponent] = merged[t.exponent] + t.coeff
        else:
            merged[t.exponent] = t.coeff
    kept = [(e, c) for e, c in merged.items() if c]
    kept.sort(key=lambda pair: pair[0])
    return PowerExpr(tuple(PowerTerm(c, e) for e, c in kept))


def monomial(coeff, exponent) -> PowerExpr:
    return canonicalize([PowerTerm(coeff, exponent)])


def evaluate(expr: PowerExpr, x) -> float:
    """Pointwise value on x >= 0.

    At x = 0 each term contributes its coefficient for exponent 0 and 0
    otherwise; a negative exponent there is reported through
    `NegativePowerAtZeroWarning` because the limit value diverges while
    the defined value is 0.
    """
    x = float(x)
    if x < 0:
        raise ValueError("power expressions are defined on x >= 0")
    if x == 0.0:
        total = 0.0
        for t in expr.terms:
            if t.exponent == 0:
                total += float(t.coeff)
            elif t.exponent < 0:
                warnings.warn(
                    f"x = 0 with exponent {t.exponent}: term defined as 0",
                    NegativePowerAtZeroWarning,
                    stacklevel=2,
                )
        return total
    return sum(float(t.coeff) * x ** float(t.exponent) for t in expr.terms)


# --- constant families ------------------------------------------------------


@dataclass(frozen=True)
class ConstantTermSpec:
    """One arbitrary-constant slot c_index * x**exponent / gamma(arg)."""

    index: int
    exponent: Fraction
    gamma_denominator_arg: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent))
        object.__setattr__(
            self, "gamma_denominator_arg", Fraction(self.gamma_denominator_arg)
        )

    @property
    def live(self) -> bool:
        # a pole in the denominator deletes the term identically
        return not is_pole_argument(self.gamma_denominator_arg)


@dataclass(frozen=True)
class InfiniteTailRule:
    """The infinite family pattern c_k * x**(k - order) / gamma(k - order + 1),
    k <= -1, truncated at `truncation` for numeric evaluation."""

    order: Fraction
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        object.__setattr__(self, "order", Fraction(self.order))

    def spec_for(self, k: int) -> ConstantTermSpec:
        return ConstantTermSpec(k, k - self.order, k - self.order + 1)

    def contains_exponent(self, exponent: Fraction) -> bool:
        k = exponent + self.order
        return k.denominator == 1 and k <= -1


@dataclass(frozen=True)
class ConstantFamily:
    """Finite list of live constant slots plus zero or more infinite tails.

    Single derivative results carry either a finite list (integer and
    second-definition orders) or exactly one tail (first definition,
    non-integer order).  Chained applications may accumulate several
    generations; the family is then the union.
    """

    specs: tuple[ConstantTermSpec, ...] = ()
    tails: tuple[InfiniteTailRule, ...] = ()

    @property
    def is_finite(self) -> bool:
        return not self.tails

    def __bool__(self) -> bool:
        return bool(self.specs) or bool(self.tails)

    def contains_exponent(self, exponent) -> bool:
        exponent = Fraction(exponent)
        return any(s.exponent == exponent for s in self.specs) or any(
            t.contains_exponent(exponent) for t in self.tails
        )

    def enumerated_specs(self, truncation: int | None = None) -> tuple[ConstantTermSpec, ...]:
        """Finite specs plus each tail enumerated k = -1 .. -K."""
        out = list(self.specs)
        for tail in self.tails:
            k_max = truncation if truncation is not None else tail.truncation
            out.extend(tail.spec_for(k) for k in range(-1, -k_max - 1, -1))
        return tuple(out)

    def live_exponents(self, truncation: int | None = None) -> tuple[Fraction, ...]:
        return tuple(s.exponent for s in self.enumerated_specs(truncation))


@dataclass(frozen=True)
class FracResult:
    """A derivative: principal part, constant family, order, definition."""

    principal: PowerExpr
    family: ConstantFamily
    order: Fraction
    definition: int

    def __post_init__(self):
        object.__setattr__(self, "order", Fraction(self.order))


# --- concrete constant assignments ------------------------------------------


class InverseFactorialSquare:
    """c_k = 1 / ((-k)!) ** 2; the ratio test limit is |k|/(|k|+1)^2 -> 0."""

    def value(self, k: int) -> float:
        n = -k
        if n <= 150:
            return 1.0 / float(math.factorial(n)) ** 2
        return math.exp(-2.0 * math.lgamma(n + 1))

    def successive_ratio(self, k: int) -> Fraction:
        # c_{k-1} / c_k, exact
        n = -k
        return Fraction(1, (n + 1) ** 2)

    def __eq__(self, other):
        return isinstance(other, InverseFactorialSquare)

    def __hash__(self):
        return hash(type(self))

    def __repr__(self):
        return "InverseFactorialSquare()"


@dataclass(frozen=True)
class Geometric:
    """c_k = ratio ** (-k); fails the criterion for any ratio > 0."""

    ratio: float

    def value(self, k: int) -> float:
        return self.ratio ** (-k)

    def successive_ratio(self, k: int) -> float:
        return self.ratio


@dataclass(frozen=True)
class CoeffSequence:
    """Assignment rule for the arbitrary constants c_k (finite values).

    `explicit` maps negative indices to values; `tail` supplies every
    index below the explicit support (None means zero there).
    """

    explicit: Mapping[int, float] = field(default_factory=dict)
    tail: object | None = None

    @classmethod
    def zeros(cls) -> "CoeffSequence":
        return cls({}, None)

    def value(self, k: int) -> float:
        if k in self.explicit:
            v = float(self.explicit[k])
        elif self.tail is not None:
            v = float(self.tail.value(k))
        else:
            return 0.0
        if not math.isfinite(v):
            raise ValueError(f"constant c_{k} must be finite, got {v}")
        return v


def evaluate_result(
    result: FracResult,
    x,
    assignment: CoeffSequence | None = None,
    truncation: int | None = None,
) -> float:
    """Principal value plus the constant terms under `assignment` at x > 0.

    Infinite families require the assignment to have finite support or a
    tail passing the convergence criterion; the tail sum is truncated at
    the family's truncation index (overridable here).
    """
    x = float(x)
    if x <= 0:
        raise ValueError("derivative results are evaluated on x > 0")
    if assignment is None:
        assignment = CoeffSequence.zeros()
    if result.family.tails and assignment.tail is not None:
        from .deriv import check_convergence  # late import; deriv depends on model

        verdict = check_convergence(assignment, result.order)
        if not verdict.passes:
            raise NonConvergentAssignment(
                f"tail fails the ratio criterion (limit estimate "
                f"{verdict.estimated_limit:.3g})"
            )
    total = evaluate(result.principal, x)
    for spec in result.family.enumerated_specs(truncation):
        c = assignment.value(spec.index)
        if c == 0.0:
            continue
        rec = to_float(reciprocal_gamma(spec.gamma_denominator_arg))
        total += c * x ** float(spec.exponent) * rec
    return total


# --- semi-equality -----------------------------------------------------------


def difference_support(e1: PowerExpr, e2: PowerExpr) -> tuple[Fraction, ...]:
    """Exponents where e1 and e2 genuinely differ.

    Exact coefficient differences count whenever nonzero; float
    differences are measured against the largest coefficient magnitude in
    either operand so that last-ulp arithmetic noise does not register.
    """
    diff = e1 - e2
    if not diff.terms:
        return ()
    scale = max(
        (abs(float(t.coeff)) for t in (*e1.terms, *e2.terms)),
        default=1.0,
    )
    tol = NOISE_RTOL * scale
    support = []
    for t in diff.terms:
        if isinstance(t.coeff, float) and abs(t.coeff) <= tol:
            continue
        support.append(t.exponent)
    return tuple(support)


def semi_equal(r1: FracResult, r2: FracResult) -> bool:
    """Equality modulo the constant family.

    True when the principal difference is supported inside the live
    exponent span of the results' constant families.  Results must share
    order and definition.
    """
    if r1.order != r2.order or r1.definition != r2.definition:
        raise DifferentOrder(
            f"cannot compare order {r1.order} (definition {r1.definition}) "
            f"with order {r2.order} (definition {r2.definition})"
        )
    support = difference_support(r1.principal, r2.principal)
    return all(
        r1.family.contains_exponent(e) or r2.family.contains_exponent(e)
        for e in support
    )


# --- JSON wire format --------------------------------------------------------
#
# {"terms":[{"coeff":"<decimal or p/q>","exp":"p/q"}],
#  "family":{"kind":"finite|infinite","specs":[{"k":-1,"exp":"p/q","gammaArg":"p/q"}],"K":40},
#  "order":"p/q","definition":1}
#
# Exponents and orders are exact "p/q" strings and round-trip bit-exactly.
# Exact-radical coefficients serialise as their decimal value (the schema
# carries decimals or fractions only); value-level equality still holds on
# re-parse because repr(float) round-trips.


def _coeff_to_str(c: Coeff) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return repr(float(c))


def _coeff_from_str(s: str) -> Coeff:
    s = s.strip()
    if "/" in s:
        return Fraction(s)
    try:
        return Fraction(int(s))
    except ValueError:
        return float(s)


def power_expr_to_json(expr: PowerExpr) -> dict:
    return {
        "terms": [
            {"coeff": _coeff_to_str(t.coeff), "exp": str(t.exponent)} for t in expr.terms
        ]
    }


def power_expr_from_json(data: dict) -> PowerExpr:
    return canonicalize(
        PowerTerm(_coeff_from_str(t["coeff"]), Fraction(t["exp"])) for t in data["terms"]
    )


def _family_to_json(family: ConstantFamily) -> dict:
    out: dict = {
        "kind": "finite" if family.is_finite else "infinite",
        "specs": [
            {
                "k": s.index,
                "exp": str(s.exponent),
                "gammaArg": str(s.gamma_denominator_arg),
            }
            for s in family.specs
        ],
    }
    if family.tails:
        out["K"] = family.tails[0].truncation
        if len(family.tails) > 1 or family.specs:
            # chained results may mix generations; keep every tail explicit
            out["tails"] = [
                {"order": str(t.order), "K": t.truncation} for t in family.tails
            ]
    return out


def _family_from_json(data: dict, order: Fraction) -> ConstantFamily:
    specs = tuple(
        ConstantTermSpec(int(s["k"]), Fraction(s["exp"]), Fraction(s["gammaArg"]))
        for s in data.get("specs", ())
    )
    if data.get("kind") == "infinite":
        if "tails" in data:
            tails = tuple(
                InfiniteTailRule(Fraction(t["order"]), int(t.get("K", DEFAULT_TRUNCATION)))
                for t in data["tails"]
            )
        else:
            tails = (InfiniteTailRule(order, int(data.get("K", DEFAULT_TRUNCATION))),)
        return ConstantFamily(specs=specs, tails=tails)
    return ConstantFamily(specs=specs)


def frac_result_to_json(result: FracResult) -> dict:
    out = power_expr_to_json(result.principal)
    out["family"] = _family_to_json(result.family)
    out["order"] = str(result.order)
    out["definition"] = result.definition
    return out


def frac_result_from_json(data: dict) -> FracResult:
    order = Fraction(data["order"])
    return FracResult(
        principal=power_expr_from_json(data),
        family=_family_from_json(data["family"], order),
        order=order,
        definition=int(data["definition"]),
    )
