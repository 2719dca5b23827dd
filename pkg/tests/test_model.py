"""Data model: canonical form, evaluation, semi-equality, JSON."""

import json
import math
import random
from fractions import Fraction

import pytest

from fracpow.deriv import derivative_def1, derivative_def2
from fracpow.gammafn import ExactRadical
from fracpow.model import (
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
from fracpow.parser import parse_expr


class TestCanonicalize:
    def test_merges_like_terms(self):
        assert canonicalize([(2, 3), (3, 3)]) == canonicalize([(5, 3)])

    def test_cancellation(self):
        assert canonicalize([(1, 2), (-1, 2)]) == PowerExpr()

    def test_single_term_passthrough(self):
        e = canonicalize([(-8, 11)])
        assert e.terms == (PowerTerm(Fraction(-8), Fraction(11)),)

    def test_sorted_strictly_increasing(self):
        e = canonicalize([(1, 5), (2, -1), (3, Fraction(1, 2))])
        exps = e.exponents()
        assert list(exps) == sorted(exps)

    def test_idempotent(self):
        rng = random.Random(3)
        for _ in range(50):
            terms = [
                (Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
                for _ in range(rng.randint(1, 6))
            ]
            once = canonicalize(terms)
            assert canonicalize(once.terms) == once


class TestEvaluate:
    def test_square(self):
        assert evaluate(parse_expr("x^2"), 3) == 9

    def test_constant_at_zero(self):
        assert evaluate(parse_expr("5"), 0) == 5

    def test_sqrt(self):
        assert abs(evaluate(parse_expr("x^(1/2)"), 4) - 2) < 1e-12

    def test_positive_exponent_at_zero(self):
        assert evaluate(parse_expr("x^2 + 7"), 0) == 7

    def test_negative_exponent_at_zero_warns(self):
        with pytest.warns(NegativePowerAtZeroWarning):
            assert evaluate(parse_expr("x^(-2)"), 0) == 0

    def test_negative_x_rejected(self):
        with pytest.raises(ValueError):
            evaluate(parse_expr("x"), -1)

    def test_linear_in_coefficients(self):
        rng = random.Random(5)
        for _ in range(60):
            e1 = canonicalize(
                [(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-3, 5), rng.randint(1, 3)))
                 for _ in range(2)]
            )
            e2 = canonicalize(
                [(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-3, 5), rng.randint(1, 3)))
                 for _ in range(2)]
            )
            a, b = rng.randint(-3, 3), rng.randint(-3, 3)
            x = rng.uniform(0.2, 3.0)
            lhs = evaluate(e1.scale(a) + e2.scale(b), x)
            rhs = a * evaluate(e1, x) + b * evaluate(e2, x)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


class TestConstantFamily:
    def test_spec_liveness(self):
        assert ConstantTermSpec(-1, Fraction(0), Fraction(1)).live
        assert not ConstantTermSpec(-2, Fraction(-1), Fraction(0)).live

    def test_tail_span_membership(self):
        fam = ConstantFamily(tails=(InfiniteTailRule(Fraction(1, 2)),))
        assert fam.contains_exponent(Fraction(-3, 2))  # k = -1
        assert fam.contains_exponent(Fraction(-9, 2))  # k = -4
        assert not fam.contains_exponent(Fraction(1, 2))  # k = 1 > -1
        assert not fam.contains_exponent(Fraction(1, 3))

    def test_enumeration_truncates(self):
        fam = ConstantFamily(tails=(InfiniteTailRule(Fraction(1, 2), truncation=5),))
        specs = fam.enumerated_specs()
        assert len(specs) == 5
        assert specs[0].index == -1
        assert specs[0].exponent == Fraction(-3, 2)
        assert specs[0].gamma_denominator_arg == Fraction(-1, 2)


class TestEvaluateResult:
    def test_antiderivative_with_constant(self):
        r = derivative_def1(parse_expr("x^3"), -1)
        assert evaluate_result(r, 2.0, CoeffSequence({-1: 7.0})) == pytest.approx(11.0, rel=1e-14)

    def test_all_zero_assignment_at_one(self):
        r = derivative_def2(parse_expr("2x^5 + x"), -2)
        total = evaluate_result(r, 1.0)
        coeff_sum = sum(float(t.coeff) for t in r.principal.terms)
        assert total == pytest.approx(coeff_sum, rel=1e-14)

    def test_truncation_is_converged(self):
        r = derivative_def1(parse_expr("x"), Fraction(1, 2))
        seq = CoeffSequence({}, InverseFactorialSquare())
        for x in (0.5, 1.0, 2.0):
            v30 = evaluate_result(r, x, seq, truncation=30)
            v60 = evaluate_result(r, x, seq, truncation=60)
            assert abs(v30 - v60) < 1e-12

    def test_divergent_tail_rejected(self):
        r = derivative_def1(parse_expr("x"), Fraction(1, 2))
        with pytest.raises(NonConvergentAssignment):
            evaluate_result(r, 1.0, CoeffSequence({}, Geometric(0.5)))

    def test_requires_positive_x(self):
        r = derivative_def1(parse_expr("x^3"), -1)
        with pytest.raises(ValueError):
            evaluate_result(r, 0.0)

    def test_non_finite_constant_rejected(self):
        r = derivative_def1(parse_expr("x^3"), -1)
        with pytest.raises(ValueError):
            evaluate_result(r, 1.0, CoeffSequence({-1: math.inf}))


class TestSemiEqual:
    def test_shift_by_family_term(self):
        r = derivative_def1(parse_expr("x^3"), -1)
        shifted = FracResult(
            r.principal + monomial(5, 0), r.family, r.order, r.definition
        )
        assert semi_equal(r, shifted)
        assert semi_equal(shifted, r)

    def test_non_family_term_breaks_it(self):
        r = derivative_def1(parse_expr("x^3"), -1)
        other = FracResult(
            r.principal + monomial(1, 3), r.family, r.order, r.definition
        )
        assert not semi_equal(r, other)

    def test_reflexive(self):
        r = derivative_def2(parse_expr("x^5"), Fraction(-17, 7))
        assert semi_equal(r, r)

    def test_order_mismatch_raises(self):
        r1 = derivative_def1(parse_expr("x^3"), -1)
        r2 = derivative_def1(parse_expr("x^3"), -2)
        with pytest.raises(DifferentOrder):
            semi_equal(r1, r2)

    def test_definition_mismatch_raises(self):
        f = parse_expr("x^3")
        with pytest.raises(DifferentOrder):
            semi_equal(derivative_def1(f, -1), derivative_def2(f, -1))

    def test_infinite_family_spans_shifted_constants(self):
        r = derivative_def1(parse_expr("x"), Fraction(1, 2))
        shifted = FracResult(
            r.principal + monomial(3, Fraction(-3, 2)) + monomial(-2, Fraction(-5, 2)),
            r.family, r.order, r.definition,
        )
        assert semi_equal(r, shifted)
        off_span = FracResult(
            r.principal + monomial(1, Fraction(-4, 3)), r.family, r.order, r.definition
        )
        assert not semi_equal(r, off_span)


class TestJson:
    def test_power_expr_round_trip_exact(self):
        e = parse_expr("x^(7/2) - 4x^(-1/3) + 2/3")
        again = power_expr_from_json(json.loads(json.dumps(power_expr_to_json(e))))
        assert again == e

    def test_schema_shape(self):
        r = derivative_def1(parse_expr("x^3"), -1)
        data = frac_result_to_json(r)
        assert data["order"] == "-1"
        assert data["definition"] == 1
        assert data["family"]["kind"] == "finite"
        assert data["family"]["specs"] == [{"k": -1, "exp": "0", "gammaArg": "1"}]
        assert data["terms"] == [{"coeff": "1/4", "exp": "4"}]

    def test_infinite_family_round_trip(self):
        r = derivative_def1(parse_expr("x"), Fraction(1, 2))
        data = frac_result_to_json(r)
        assert data["family"]["kind"] == "infinite"
        assert data["family"]["K"] == 40
        again = frac_result_from_json(json.loads(json.dumps(data)))
        assert again == r

    def test_float_coefficients_round_trip_bit_exact(self):
        r = derivative_def2(parse_expr("x^5"), Fraction(-1, 4))
        again = frac_result_from_json(json.loads(json.dumps(frac_result_to_json(r))))
        assert again.principal.terms[0].coeff == r.principal.terms[0].coeff
        assert again == r

    def test_radical_coefficients_round_trip_by_value(self):
        r = derivative_def2(parse_expr("x^3"), Fraction(1, 2))
        assert isinstance(r.principal.terms[0].coeff, ExactRadical)
        again = frac_result_from_json(json.loads(json.dumps(frac_result_to_json(r))))
        # exactness degrades to the decimal value, which must still compare equal
        assert again == r
