"""
Text format for polynomial systems.

A system file starts with a header naming the variables, followed by one
polynomial per line; each polynomial is an equation f = 0:

    # Example: two roots (3, 1) and (2, 3)
    vars: z1 z2
    4*z1^2 - 16*z1 + z2^2 - 2*z2 + 13
    2*z1 + z2 - 7

Coefficients are integers, decimals or fractions p/q. They are converted
to the nearest binary float through an exact rational, so "0.1" and "1/10"
give the same coefficient.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .poly import Monomial, Polynomial, PolySystem
from .types import EmptySystemError, ParseError, UnknownVariableError

logger = logging.getLogger(__name__)

HEADER = "vars:"

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(
    r"(?P<number>[0-9]+(?:\.[0-9]+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^/])"
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "number", "ident", "op" or "end"
    text: str
    line: int
    column: int


def _tokenize(text: str, line: int) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"Unexpected character '{text[pos]}'", line, pos + 1)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(), line, pos + 1))
        pos = match.end()
    tokens.append(Token("end", "", line, len(text) + 1))
    return tokens


class _PolyParser:
    """Recursive descent over the tokens of one polynomial line."""

    def __init__(self, tokens: list[Token], names: tuple[str, ...]):
        self.tokens = tokens
        self.pos = 0
        self.index = {name: i for i, name in enumerate(names)}
        self.n = len(names)

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of line"
            raise ParseError(f"Expected {what}, found '{found}'", tok.line, tok.column)
        return self.advance()

    def parse(self) -> list[tuple[Monomial, Fraction]]:
        terms = []
        sign = 1
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            sign = -1 if tok.text == "-" else 1
            self.advance()
        terms.append(self.term(sign))
        while True:
            tok = self.peek()
            if tok.kind == "end":
                return terms
            if tok.kind == "op" and tok.text in "+-":
                self.advance()
                terms.append(self.term(-1 if tok.text == "-" else 1))
                continue
            raise ParseError(f"Expected '+' or '-', found '{tok.text}'", tok.line, tok.column)

    def term(self, sign: int) -> tuple[Monomial, Fraction]:
        start = self.peek()
        coeff: Optional[Fraction] = None
        if start.kind == "number":
            coeff = self.coefficient()
        exps = [0] * self.n
        has_factor = False
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "*":
                if coeff is None and not has_factor:
                    raise ParseError("Term cannot start with '*'", tok.line, tok.column)
                self.advance()
                tok = self.peek()
                if tok.kind != "ident":
                    raise ParseError(
                        f"Expected a variable after '*', found '{tok.text or 'end of line'}'",
                        tok.line, tok.column,
                    )
            if tok.kind != "ident":
                break
            name, power = self.factor()
            exps[self.index[name]] += power
            has_factor = True
        if coeff is None and not has_factor:
            found = start.text or "end of line"
            raise ParseError(f"Expected a term, found '{found}'", start.line, start.column)
        value = sign * (coeff if coeff is not None else Fraction(1))
        return Monomial(tuple(exps)), value

    def coefficient(self) -> Fraction:
        tok = self.advance()
        value = Fraction(tok.text)
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text == "/":
            if "." in tok.text:
                raise ParseError("Fraction numerator must be an integer", nxt.line, nxt.column)
            self.advance()
            den = self.expect("number", "a denominator")
            if "." in den.text:
                raise ParseError("Fraction denominator must be an integer", den.line, den.column)
            if int(den.text) == 0:
                raise ParseError("Division by zero in coefficient", den.line, den.column)
            value = value / int(den.text)
        return value

    def factor(self) -> tuple[str, int]:
        tok = self.advance()
        if tok.text not in self.index:
            raise UnknownVariableError(tok.text, tok.line, tok.column)
        power = 1
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text == "^":
            self.advance()
            exp = self.expect("number", "an exponent")
            if "." in exp.text:
                raise ParseError("Exponent must be a non-negative integer", exp.line, exp.column)
            power = int(exp.text)
        return tok.text, power


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _parse_header(body: str, line: int) -> tuple[str, ...]:
    stripped = body.strip()
    if not stripped.startswith(HEADER):
        column = len(body) - len(body.lstrip()) + 1
        raise ParseError(f"Expected '{HEADER}' header", line, column)
    names = tuple(stripped[len(HEADER):].split())
    if not names:
        raise ParseError("Header declares no variables", line, len(body.rstrip()) + 1)
    seen = set()
    for name in names:
        column = body.find(name) + 1
        if not _IDENT.fullmatch(name):
            raise ParseError(f"Invalid variable name '{name}'", line, column)
        if name in seen:
            raise ParseError(f"Duplicate variable '{name}'", line, column)
        seen.add(name)
    return names


def parse_polynomial(text: str, names: tuple[str, ...], line: int = 1) -> Polynomial:
    """Parse a single polynomial over the given variable names."""
    terms = _PolyParser(_tokenize(text, line), names).parse()
    acc: dict[Monomial, Fraction] = {}
    for mono, coeff in terms:
        acc[mono] = acc.get(mono, Fraction(0)) + coeff
    return Polynomial(len(names), {m: float(c) for m, c in acc.items() if c != 0})


def parse_system(text: str) -> PolySystem:
    """
    Parse a polynomial system from its text form.

    Raises:
        ParseError: Grammar violation, with line and column
        UnknownVariableError: A term uses a name missing from the header
        EmptySystemError: No equations, or an equation that sums to zero
    """
    names: tuple[str, ...] | None = None
    polys: list[Polynomial] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        if names is None:
            names = _parse_header(body, lineno)
            continue
        poly = parse_polynomial(body, names, lineno)
        if poly.is_zero:
            raise EmptySystemError("Equation is identically zero", lineno, 1)
        polys.append(poly)

    if names is None:
        raise EmptySystemError("Input contains no system")
    if not polys:
        raise EmptySystemError("System has no equations")
    logger.debug(f"Parsed {len(polys)} equations in {len(names)} variables")
    return PolySystem(tuple(polys), names)


def format_coefficient(value: float) -> str:
    """Shortest text that re-parses to exactly `value` (value >= 0)."""
    if value.is_integer() and value < 1e16:
        return str(int(value))
    text = repr(value)
    if "e" in text or "E" in text:
        frac = Fraction(value)
        return f"{frac.numerator}/{frac.denominator}"
    return text


def format_polynomial(p: Polynomial, names: tuple[str, ...] | list[str]) -> str:
    """Print p with terms in descending monomial order, e.g. "4*z1^2 - 16*z1 + 13"."""
    if p.is_zero:
        return "0"
    parts = []
    for mono, coeff in reversed(list(p.terms.items())):
        magnitude = format_coefficient(abs(coeff))
        label = mono.label(names)
        if label == "1":
            body = magnitude
        elif magnitude == "1":
            body = label
        else:
            body = f"{magnitude}*{label}"
        if not parts:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(parts)


def format_system(system: PolySystem) -> str:
    """Print a system in the input format; parse_system reads it back unchanged."""
    lines = [f"{HEADER} {' '.join(system.variable_names)}"]
    lines.extend(format_polynomial(p, system.variable_names) for p in system.polys)
    return "\n".join(lines) + "\n"
