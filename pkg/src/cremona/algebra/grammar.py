"""Text grammar for polynomials in x, y, z.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*       # '/' only by a nonzero constant
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') unary)?       # exponent must be a non-negative integer
    atom   := integer | variable | '(' expr ')'

Whitespace is ignored.  Rational coefficients are written ``3/2*x``.
"""

from __future__ import annotations

import re

from .multipoly import MultiPoly
from .rational import as_rational

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^():−]))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


def tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "-" if op == "−" else op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, names, text):
        self.tokens = tokens
        self.i = 0
        self.names = {n: k for k, n in enumerate(names)}
        self.nvars = len(names)
        self.text = text

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos, self.text)

    def error(self, msg):
        raise ParseError(msg, self.peek()[2], self.text)

    def expr(self):
        result = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            _, op, _ = self.take()
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self):
        result = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                result = result * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by a nonzero constant", pos, self.text)
                result = result.scale(1 / rhs.constant_term())
        return result

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] in (("op", "^"), ("op", "**")):
            _, _, pos = self.take()
            exp = self.unary()
            if not exp.is_constant():
                raise ParseError("exponent must be a constant", pos, self.text)
            k = exp.constant_term()
            if k.denominator != 1 or k < 0:
                raise ParseError("exponent must be a non-negative integer", pos, self.text)
            base = base ** int(k)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return MultiPoly.const(as_rational(int(val)), self.nvars)
        if kind == "name":
            if val not in self.names:
                raise ParseError(f"unknown variable {val!r}", pos, self.text)
            return MultiPoly.var(self.names[val], self.nvars)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse_poly(text: str, names=("x", "y", "z")) -> MultiPoly:
    """Parse a polynomial; raises :class:`ParseError` with a character offset."""
    parser = _Parser(tokenize(text), names, text)
    result = parser.expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos, text)
    return result


def parse_poly_tokens(tokens, start: int, stop_ops, text: str, names=("x", "y", "z")):
    """Parse one polynomial from a token stream, stopping before an op in ``stop_ops``.

    Returns ``(poly, next_index)``.  Used by the map grammar.
    """
    depth = 0
    j = start
    while True:
        kind, val, pos = tokens[j]
        if kind == "end":
            break
        if kind == "op" and val == "(":
            depth += 1
        elif kind == "op" and val == ")":
            if depth == 0:
                break
            depth -= 1
        if depth == 0 and kind == "op" and val in stop_ops:
            break
        j += 1
    if j == start:
        raise ParseError("empty polynomial", tokens[start][2], text)
    sub = tokens[start:j] + [("end", "", tokens[j][2])]
    parser = _Parser(sub, names, text)
    poly = parser.expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos, text)
    return poly, j
