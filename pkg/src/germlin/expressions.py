"""Expression mini-language for scalars, germ series, and polynomial forms.

One grammar serves three evaluation domains:

* scalars      - exact rationals and named cyclotomic values (constraints),
* series       - jets in the variable ``z`` (germ generator expressions),
* forms        - polynomials and differential forms in named variables,
                 with ``dx``-style basis 1-forms and ``*`` acting as wedge
                 on forms.

Grammar (integer literals only; rationals are built by division)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' iexp)?
    atom    := INT | NAME | '(' expr ')' | 'pow' '(' expr ',' ratio ')'
    iexp    := ['-'] INT
    ratio   := ['-'] INT ['/' INT]

``pow(f, p/q)`` is the rational power of a series with constant term 1.
Constraints are equations ``lhs = rhs`` (or ``==``).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .cyclotomic import CycloElem
from .jets import Jet, jet_mul_inverse, jet_rational_power

__all__ = [
    "ExpressionError",
    "parse_expression",
    "parse_constraint",
    "eval_scalar",
    "eval_series",
    "scalar_from_string",
    "series_from_string",
]


class ExpressionError(ValueError):
    """Raised for unparseable input or an operation invalid in the domain."""


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, object]]:
    tokens: list[tuple[str, object]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"cannot tokenize {text!r} at position {pos}")
        pos = m.end()
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2)))
        else:
            ch = m.group(3)
            if ch.isspace():
                continue
            if ch not in "+-*/^(),":
                raise ExpressionError(f"unexpected character {ch!r} in {text!r}")
            tokens.append((ch, ch))
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def next(self) -> tuple[str, object]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ExpressionError(
                f"expected {kind!r} but found {tok[1]!r} in {self.text!r}"
            )
        return tok

    def parse(self):
        node = self.expr()
        if self.peek() != "end":
            raise ExpressionError(
                f"trailing input {self.tokens[self.pos][1]!r} in {self.text!r}"
            )
        return node

    def expr(self):
        node = self.term()
        while self.peek() in "+-":
            op = self.next()[0]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() in "*/":
            op = self.next()[0]
            rhs = self.factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def factor(self):
        if self.peek() == "-":
            self.next()
            return ("neg", self.factor())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek() == "^":
            self.next()
            sign = 1
            if self.peek() == "-":
                self.next()
                sign = -1
            e = self.expect("int")[1]
            node = ("ipow", node, sign * e)
        return node

    def ratio(self) -> Fraction:
        sign = 1
        if self.peek() == "-":
            self.next()
            sign = -1
        p = self.expect("int")[1]
        q = 1
        if self.peek() == "/":
            self.next()
            q = self.expect("int")[1]
        return Fraction(sign * p, q)

    def atom(self):
        kind, value = self.next()
        if kind == "int":
            return ("num", value)
        if kind == "name":
            if value == "pow" and self.peek() == "(":
                self.next()
                base = self.expr()
                self.expect(",")
                r = self.ratio()
                self.expect(")")
                return ("rpow", base, r)
            return ("name", value)
        if kind == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionError(f"unexpected token {value!r} in {self.text!r}")


def parse_expression(text: str):
    """Parse an expression into an AST of nested tuples."""
    return _Parser(text).parse()


def parse_constraint(text: str):
    """Parse an equation ``lhs = rhs`` (or ``==``) into a pair of ASTs."""
    parts = re.split(r"==|=", text)
    if len(parts) != 2:
        raise ExpressionError(f"a constraint must be a single equation: {text!r}")
    return parse_expression(parts[0]), parse_expression(parts[1])


# -- scalar evaluation -----------------------------------------------------------


def eval_scalar(node, env: dict):
    """Evaluate in the scalar domain (Fraction / CycloElem)."""
    op = node[0]
    if op == "num":
        return Fraction(node[1])
    if op == "name":
        name = node[1]
        if name not in env:
            raise ExpressionError(f"unknown scalar name {name!r}")
        return env[name]
    if op == "neg":
        return -eval_scalar(node[1], env)
    if op in ("add", "sub", "mul", "div"):
        a = eval_scalar(node[1], env)
        b = eval_scalar(node[2], env)
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if isinstance(b, Fraction) and b == 0:
            raise ZeroDivisionError("division by zero")
        if isinstance(b, CycloElem) and b.is_zero:
            raise ZeroDivisionError("division by zero")
        return a / b
    if op == "ipow":
        return eval_scalar(node[1], env) ** node[2]
    if op == "rpow":
        raise ExpressionError("pow(..., p/q) is only defined for series")
    raise ExpressionError(f"bad AST node {op!r}")


def scalar_from_string(text: str, env: dict | None = None):
    return eval_scalar(parse_expression(text), env or {})


# -- series evaluation -------------------------------------------------------------


def eval_series(node, env: dict, order: int) -> Jet:
    """Evaluate in the series domain: jets of the given order in ``z``."""
    op = node[0]
    if op == "num":
        return Jet.constant(node[1], order)
    if op == "name":
        name = node[1]
        if name == "z":
            return Jet.identity(order)
        if name not in env:
            raise ExpressionError(f"unknown name {name!r} in series expression")
        return Jet.constant(env[name], order)
    if op == "neg":
        return -eval_series(node[1], env, order)
    if op in ("add", "sub", "mul", "div"):
        a = eval_series(node[1], env, order)
        b = eval_series(node[2], env, order)
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if b.constant_term.is_zero:
            raise ExpressionError(
                "series division needs a divisor with nonzero constant term"
            )
        return a * jet_mul_inverse(b)
    if op == "ipow":
        base = eval_series(node[1], env, order)
        e = node[2]
        if e < 0:
            if base.constant_term.is_zero:
                raise ExpressionError(
                    "negative powers need a nonzero constant term"
                )
            return jet_mul_inverse(base) ** (-e)
        return base**e
    if op == "rpow":
        base = eval_series(node[1], env, order)
        return jet_rational_power(base, node[2])
    raise ExpressionError(f"bad AST node {op!r}")


def series_from_string(text: str, env: dict | None = None, order: int = 32) -> Jet:
    return eval_series(parse_expression(text), env or {}, order)
