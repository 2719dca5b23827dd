"""Text input language for power expressions and rational orders.

Grammar (whitespace insignificant everywhere):

    expr     := sign? term (("+" | "-") term)*
    term     := coeff? "*"? ("x" ("^" exponent)?)? ("/" integer)?
                -- at least one of coeff, "x"; the trailing "/q" divisor
                   is only accepted after an "x" part, so printed forms
                   like "x^4/4" and "5040*x" parse back
    coeff    := decimal | integer | "(" integer "/" integer ")" | integer "/" integer
    exponent := integer | decimal | "(" sign? (integer | decimal | integer "/" integer) ")"

Negative exponents require parentheses ("x^(-2)"), which keeps the
grammar unambiguous with subtraction and x^2/3 meaning (1/3)*x^2.
Decimals convert to exact rationals.  Rendering and parsing are inverse
on canonical expressions.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .gammafn import ExactRadical, gamma
from .model import (
    ConstantFamily,
    ConstantTermSpec,
    FracResult,
    PowerExpr,
    PowerTerm,
    canonicalize,
    frac_result_to_json,
    power_expr_to_json,
)

__all__ = ["ParseError", "parse_expr", "parse_order", "render"]

_EXPONENT_LIMIT = 10**6
_MINUS = ("-", "−")  # ASCII hyphen and the typographic minus
_SIGNS = ("+",) + _MINUS


class ParseError(ValueError):
    """Syntax error with the offset, what was expected, and what was found."""

    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"expected {expected} at position {position}, found {found}")


class _Scanner:
    def __init__(self, text: str):
        if not isinstance(text, str):
            raise ParseError(0, "a string", type(text).__name__)
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def fail(self, expected: str, position: int | None = None):
        pos = self.pos if position is None else position
        if pos >= len(self.text):
            found = "end of input"
        else:
            found = repr(self.text[pos : pos + 8])
        raise ParseError(pos, expected, found)

    def expect(self, ch: str, expected: str):
        if self.peek() != ch:
            self.fail(expected)
        self.advance()

    def digits(self, expected: str) -> str:
        start = self.pos
        while self.peek().isdigit():
            self.advance()
        if self.pos == start:
            self.fail(expected)
        return self.text[start : self.pos]


def _unsigned_number(sc: _Scanner, expected: str) -> Fraction:
    """integer or decimal (no sign, no slash)."""
    whole = sc.digits(expected)
    if sc.peek() == ".":
        sc.advance()
        frac = sc.digits("digits after the decimal point")
        return Fraction(whole + "." + frac)
    return Fraction(int(whole))


def _unsigned_rational(sc: _Scanner, expected: str) -> Fraction:
    """integer, decimal, or integer/integer (no sign)."""
    start = sc.pos
    whole = sc.digits(expected)
    if sc.peek() == ".":
        sc.advance()
        frac = sc.digits("digits after the decimal point")
        return Fraction(whole + "." + frac)
    save = sc.pos
    sc.skip_ws()
    if sc.peek() == "/":
        sc.advance()
        sc.skip_ws()
        if not sc.peek().isdigit():
            sc.fail("a denominator")
        den = sc.digits("a denominator")
        if int(den) == 0:
            raise ParseError(start, "a nonzero denominator", f"{whole}/{den}")
        return Fraction(int(whole), int(den))
    sc.pos = save
    return Fraction(int(whole))


def _try_coefficient(sc: _Scanner) -> Fraction | None:
    sc.skip_ws()
    ch = sc.peek()
    if ch == "(":
        # parenthesised fraction "(p/q)"
        start = sc.pos
        sc.advance()
        sc.skip_ws()
        num = sc.digits("a numerator inside '(p/q)'")
        sc.skip_ws()
        sc.expect("/", "'/' inside '(p/q)'")
        sc.skip_ws()
        den = sc.digits("a denominator inside '(p/q)'")
        sc.skip_ws()
        sc.expect(")", "')' closing the fraction")
        if int(den) == 0:
            raise ParseError(start, "a nonzero denominator", f"({num}/{den})")
        return Fraction(int(num), int(den))
    if ch.isdigit():
        return _unsigned_rational(sc, "a number")
    return None


def _check_exponent(e: Fraction, sc: _Scanner, position: int) -> Fraction:
    if abs(e.numerator) > _EXPONENT_LIMIT or e.denominator > _EXPONENT_LIMIT:
        raise ParseError(position, "an exponent within 10^6", str(e))
    return e


def _exponent(sc: _Scanner) -> Fraction:
    sc.skip_ws()
    start = sc.pos
    ch = sc.peek()
    if ch == "(":
        sc.advance()
        sc.skip_ws()
        sign = 1
        if sc.peek() in _SIGNS:
            if sc.advance() in _MINUS:
                sign = -1
            sc.skip_ws()
        value = _unsigned_rational(sc, "an exponent")
        sc.skip_ws()
        sc.expect(")", "')' closing the exponent")
        return _check_exponent(sign * value, sc, start)
    if ch.isdigit():
        # bare exponents are integers or decimals; "x^4/4" keeps the "/4"
        # as a coefficient divisor, and fractions need parentheses
        return _check_exponent(_unsigned_number(sc, "an exponent"), sc, start)
    sc.fail("an exponent")


def _term(sc: _Scanner, sign: int) -> PowerTerm:
    sc.skip_ws()
    start = sc.pos
    coeff = _try_coefficient(sc)
    sc.skip_ws()
    if coeff is not None and sc.peek() == "*":
        sc.advance()
        sc.skip_ws()
        if sc.peek() != "x":
            sc.fail("'x' after '*'")
    exponent = Fraction(0)
    has_x = False
    if sc.peek() == "x":
        sc.advance()
        has_x = True
        exponent = Fraction(1)
        sc.skip_ws()
        if sc.peek() == "^":
            sc.advance()
            exponent = _exponent(sc)
    if coeff is None and not has_x:
        sc.fail("a coefficient or 'x'", start)
    if has_x:
        save = sc.pos
        sc.skip_ws()
        if sc.peek() == "/":
            div_pos = sc.pos
            sc.advance()
            sc.skip_ws()
            den = sc.digits("a divisor")
            if int(den) == 0:
                raise ParseError(div_pos, "a nonzero divisor", den)
            coeff = (coeff if coeff is not None else Fraction(1)) / int(den)
        else:
            sc.pos = save
    value = coeff if coeff is not None else Fraction(1)
    return PowerTerm(sign * value, exponent)


def parse_expr(text: str) -> PowerExpr:
    """Parse a power expression; raises ParseError with the offset."""
    sc = _Scanner(text)
    sc.skip_ws()
    sign = 1
    if sc.peek() in "+" + _MINUS:
        if sc.advance() in _MINUS:
            sign = -1
    terms = [_term(sc, sign)]
    while True:
        sc.skip_ws()
        if sc.at_end():
            break
        ch = sc.peek()
        if ch == "+":
            sign = 1
        elif ch in _MINUS:
            sign = -1
        else:
            sc.fail("'+' or '-'")
        sc.advance()
        terms.append(_term(sc, sign))
    return canonicalize(terms)


def parse_order(text: str) -> Fraction:
    """Parse a rational order: n, -n, p/q, -p/q, or a decimal (exact)."""
    sc = _Scanner(text)
    sc.skip_ws()
    sign = 1
    if sc.peek() in "+" + _MINUS:
        if sc.advance() in _MINUS:
            sign = -1
        sc.skip_ws()
    value = _unsigned_rational(sc, "a rational order")
    sc.skip_ws()
    if not sc.at_end():
        sc.fail("end of input")
    return sign * value


# --- rendering ---------------------------------------------------------------


def _exp_text(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e)
    return f"({e})"


def _x_text(e: Fraction) -> str:
    return "x" if e == 1 else f"x^{_exp_text(e)}"


def _term_text(t: PowerTerm) -> tuple[bool, str]:
    """(negative?, body) for one canonical term."""
    c = t.coeff
    e = t.exponent
    if isinstance(c, Fraction):
        negative = c < 0
        p, q = abs(c.numerator), c.denominator
        if e == 0:
            body = str(p) if q == 1 else f"{p}/{q}"
        else:
            body = ("" if p == 1 else f"{p}*") + _x_text(e)
            if q != 1:
                body += f"/{q}"
        return negative, body
    if isinstance(c, ExactRadical):
        negative = c.rational_part < 0
        body = str(abs(c))
        if e != 0:
            body += "*" + _x_text(e)
        return negative, body
    negative = c < 0
    body = repr(abs(c))
    if e != 0:
        body += "*" + _x_text(e)
    return negative, body


def _expr_text(expr: PowerExpr) -> str:
    if not expr.terms:
        return "0"
    pieces = []
    for i, t in enumerate(expr.terms):
        negative, body = _term_text(t)
        if i == 0:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append(("- " if negative else "+ ") + body)
    return " ".join(pieces)


def _gamma_denominator_text(arg: Fraction) -> str:
    if arg.denominator == 1 and arg >= 1:
        value = gamma(arg)  # exact factorial
        return "" if value == 1 else f"/{value}"
    return f"/Γ({arg})"


def _constant_text(spec: ConstantTermSpec) -> str:
    body = f"c_{{{spec.index}}}"
    if spec.exponent != 0:
        body += "*" + _x_text(spec.exponent)
    body += _gamma_denominator_text(spec.gamma_denominator_arg)
    return body


def _signed_fraction_offset(base: str, offset: Fraction) -> str:
    if offset == 0:
        return base
    return f"{base}+{offset}" if offset > 0 else f"{base}-{-offset}"


def _family_text(family: ConstantFamily) -> list[str]:
    parts = [_constant_text(spec) for spec in family.specs]
    for tail in family.tails:
        exp = _signed_fraction_offset("k", -tail.order)
        arg = _signed_fraction_offset("k", 1 - tail.order)
        parts.append(f"Σ_{{k≤-1}} c_k*x^({exp})/Γ({arg})")
    return parts


def _result_text(result: FracResult) -> str:
    parts = [_expr_text(result.principal)] if result.principal.terms else []
    parts.extend(_family_text(result.family))
    if not parts:
        return "0"
    return " + ".join(parts)


def _exp_latex(e: Fraction) -> str:
    return f"x^{{{e}}}"


def _term_latex(t: PowerTerm) -> tuple[bool, str]:
    c = t.coeff
    e = t.exponent
    xpart = "" if e == 0 else _exp_latex(e)
    if isinstance(c, Fraction):
        negative = c < 0
        p, q = abs(c.numerator), c.denominator
        if q == 1:
            head = "" if (p == 1 and xpart) else str(p)
            return negative, head + xpart
        numerator = xpart if p == 1 and xpart else f"{p}{xpart}"
        return negative, f"\\frac{{{numerator}}}{{{q}}}"
    if isinstance(c, ExactRadical):
        negative = c.rational_part < 0
        a = abs(c)
        p, q = a.rational_part.numerator, a.rational_part.denominator
        unit = "\\sqrt{\\pi}" if abs(a.sqrt_pi_power) == 1 else f"\\pi^{{{Fraction(abs(a.sqrt_pi_power), 2)}}}"
        if a.sqrt_pi_power > 0:
            numerator = (str(p) if p != 1 else "") + unit + xpart
            return negative, numerator if q == 1 else f"\\frac{{{numerator}}}{{{q}}}"
        numerator = f"{p}{xpart}" if (p != 1 or not xpart) else xpart
        denominator = unit if q == 1 else f"{q}{unit}"
        return negative, f"\\frac{{{numerator}}}{{{denominator}}}"
    negative = c < 0
    return negative, f"{abs(c):.12g}" + xpart


def _expr_latex(expr: PowerExpr) -> str:
    if not expr.terms:
        return "0"
    pieces = []
    for i, t in enumerate(expr.terms):
        negative, body = _term_latex(t)
        if i == 0:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append(("- " if negative else "+ ") + body)
    return " ".join(pieces)


def _constant_latex(spec: ConstantTermSpec) -> str:
    xpart = "1" if spec.exponent == 0 else _exp_latex(spec.exponent)
    return (
        f"c_{{{spec.index}}} \\frac{{{xpart}}}{{\\Gamma({spec.gamma_denominator_arg})}}"
    )


def _result_latex(result: FracResult) -> str:
    parts = [_expr_latex(result.principal)] if result.principal.terms else []
    parts.extend(_constant_latex(spec) for spec in result.family.specs)
    for tail in result.family.tails:
        exp = _signed_fraction_offset("k", -tail.order)
        arg = _signed_fraction_offset("k", 1 - tail.order)
        parts.append(
            f"\\sum_{{k \\le -1}} c_k \\frac{{x^{{{exp}}}}}{{\\Gamma({arg})}}"
        )
    if not parts:
        return "0"
    return " + ".join(parts)


def render(obj: PowerExpr | FracResult, format: str = "text") -> str:
    """Render an expression or derivative result as text, latex, or json."""
    if format == "text":
        if isinstance(obj, FracResult):
            return _result_text(obj)
        return _expr_text(obj)
    if format == "latex":
        if isinstance(obj, FracResult):
            return _result_latex(obj)
        return _expr_latex(obj)
    if format == "json":
        if isinstance(obj, FracResult):
            return json.dumps(frac_result_to_json(obj))
        return json.dumps(power_expr_to_json(obj))
    raise ValueError(f"unknown format {format!r}; use text, latex, or json")
