"""Input grammar, error positions, rendering, round trips."""

import json
import random
from fractions import Fraction

import pytest

from fracpow.deriv import derivative_def1, derivative_def2
from fracpow.model import PowerExpr, PowerTerm, canonicalize, frac_result_from_json
from fracpow.parser import ParseError, parse_expr, parse_order, render


def expr(*pairs):
    return canonicalize([PowerTerm(Fraction(c), Fraction(e)) for c, e in pairs])


class TestParseExpr:
    def test_monomial(self):
        assert parse_expr("3x^6") == expr((3, 6))

    def test_two_terms_sorted(self):
        got = parse_expr("x^(7/2) - 4x^(-1/3)")
        assert got.terms == (
            PowerTerm(Fraction(-4), Fraction(-1, 3)),
            PowerTerm(Fraction(1), Fraction(7, 2)),
        )

    def test_bare_constant(self):
        assert parse_expr("5") == expr((5, 0))

    def test_bare_x(self):
        assert parse_expr("x") == expr((1, 1))

    def test_leading_sign(self):
        assert parse_expr("-x") == expr((-1, 1))
        assert parse_expr("+2x") == expr((2, 1))

    def test_unicode_minus(self):
        assert parse_expr("3 − x") == expr((3, 0), (-1, 1))

    def test_explicit_star(self):
        assert parse_expr("5040*x") == expr((5040, 1))

    def test_trailing_divisor(self):
        assert parse_expr("x^4/4") == expr((Fraction(1, 4), 4))
        assert parse_expr("3x^2/5") == expr((Fraction(3, 5), 2))
        assert parse_expr("x/2") == expr((Fraction(1, 2), 1))

    def test_fraction_coefficients(self):
        assert parse_expr("(3/4)x") == expr((Fraction(3, 4), 1))
        assert parse_expr("3/4x^2") == expr((Fraction(3, 4), 2))
        assert parse_expr("3/4") == expr((Fraction(3, 4), 0))

    def test_decimal_is_exact(self):
        assert parse_expr("0.25x") == expr((Fraction(1, 4), 1))
        assert parse_expr("2.5") == expr((Fraction(5, 2), 0))

    def test_decimal_exponent(self):
        assert parse_expr("x^2.5") == expr((1, Fraction(5, 2)))

    def test_whitespace_insignificant(self):
        assert parse_expr(" 3 x ^ 2  +  x ") == parse_expr("3x^2+x")

    def test_like_terms_merge(self):
        assert parse_expr("x + x") == expr((2, 1))
        assert parse_expr("x - x") == PowerExpr()

    def test_truncated_caret(self):
        with pytest.raises(ParseError) as err:
            parse_expr("x^")
        assert err.value.position == 2

    def test_error_fields(self):
        with pytest.raises(ParseError) as err:
            parse_expr("3 + ")
        assert err.value.position == 4
        assert err.value.found == "end of input"

    def test_unexpected_character(self):
        with pytest.raises(ParseError) as err:
            parse_expr("3 & x")
        assert err.value.position == 2

    def test_bare_negative_exponent_rejected(self):
        with pytest.raises(ParseError):
            parse_expr("x^-2")
        assert parse_expr("x^(-2)") == expr((1, -2))

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_expr("3/0")
        with pytest.raises(ParseError):
            parse_expr("x^(1/0)")
        with pytest.raises(ParseError):
            parse_expr("x/0")

    def test_exponent_overflow(self):
        with pytest.raises(ParseError):
            parse_expr("x^1000001")
        with pytest.raises(ParseError):
            parse_expr("x^(1/1000001)")
        assert parse_expr("x^1000000")

    def test_juxtaposition_only_for_coefficient(self):
        with pytest.raises(ParseError):
            parse_expr("x x")


class TestParseOrder:
    def test_negative_fraction(self):
        assert parse_order("-5/3") == Fraction(-5, 3)

    def test_integer(self):
        assert parse_order("6") == Fraction(6)

    def test_decimal(self):
        assert parse_order("0.25") == Fraction(1, 4)

    def test_whitespace(self):
        assert parse_order(" - 5/3 ") == Fraction(-5, 3)

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_order("1/0")

    def test_trailing_junk(self):
        with pytest.raises(ParseError):
            parse_order("5/3 x")


class TestRender:
    def test_classical_example(self):
        r = derivative_def1(parse_expr("x^7"), 6)
        assert render(r) == "5040*x"

    def test_antiderivative_example(self):
        r = derivative_def1(parse_expr("x^3"), -1)
        assert render(r) == "x^4/4 + c_{-1}"

    def test_empty_is_zero(self):
        assert render(PowerExpr()) == "0"

    def test_triple_antiderivative(self):
        r = derivative_def1(parse_expr("5x"), -3)
        assert render(r) == "5*x^4/24 + c_{-3} + c_{-2}*x + c_{-1}*x^2/2"

    def test_second_definition_family(self):
        r = derivative_def2(parse_expr("x^5"), Fraction(-17, 7))
        text = render(r)
        assert "c_{-2}*x^(3/7)" in text
        assert "c_{-1}*x^(10/7)" in text

    def test_infinite_tail_mentions_pattern(self):
        r = derivative_def1(parse_expr("x"), Fraction(1, 2))
        text = render(r)
        assert "2/sqrt(pi)*x^(1/2)" in text
        assert "c_k*x^(k-1/2)" in text

    def test_latex(self):
        r = derivative_def1(parse_expr("x^3"), -1)
        out = render(r, "latex")
        assert "\\frac{x^{4}}{4}" in out
        assert "\\Gamma(1)" in out

    def test_latex_radical(self):
        r = derivative_def2(parse_expr("x"), Fraction(1, 2))
        out = render(r, "latex")
        assert "\\sqrt{\\pi}" in out

    def test_json_round_trips_result(self):
        r = derivative_def2(parse_expr("x^2 + x^5"), -2)
        assert frac_result_from_json(json.loads(render(r, "json"))) == r

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render(PowerExpr(), "yaml")


def random_canonical_expr(rng: random.Random) -> PowerExpr:
    terms = []
    for _ in range(rng.randint(1, 5)):
        num = rng.randint(-60, 60)
        if num == 0:
            num = 7
        coeff = Fraction(num, rng.randint(1, 9))
        exponent = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        terms.append(PowerTerm(coeff, exponent))
    e = canonicalize(terms)
    return e if e.terms else canonicalize([(1, 0)])


class TestRoundTrip:
    def test_500_random_expressions(self):
        rng = random.Random(2024)
        for _ in range(500):
            e = random_canonical_expr(rng)
            assert parse_expr(render(e)) == e, render(e)

    def test_render_parse_render_is_stable(self):
        rng = random.Random(99)
        for _ in range(100):
            e = random_canonical_expr(rng)
            text = render(e)
            assert render(parse_expr(text)) == text


class TestFuzz:
    def test_never_crashes_on_random_bytes(self):
        rng = random.Random(0xF00D)
        for _ in range(10_000):
            n = rng.randint(0, 40)
            text = bytes(rng.randrange(256) for _ in range(n)).decode("latin-1")
            try:
                parse_expr(text)
            except ParseError:
                pass

    def test_never_crashes_on_grammar_like_soup(self):
        rng = random.Random(0xBEEF)
        alphabet = "x0123456789+-*/^()., −"
        for _ in range(10_000):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 24)))
            try:
                parse_expr(text)
            except ParseError:
                pass

    def test_truncations_report_position_within_prefix(self):
        sources = [
            "3x^6 - 4x^(-1/3) + (5/7)x^2.5",
            "x^(7/2) + 1/4 - 0.125x",
            "5040*x - x^4/4",
        ]
        for source in sources:
            for i in range(len(source)):
                prefix = source[:i]
                try:
                    parse_expr(prefix)
                except ParseError as err:
                    assert err.position <= i
