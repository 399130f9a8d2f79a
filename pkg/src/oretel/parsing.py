"""Recursive-descent parser for the expression grammar.

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := ("+" | "-") unary | power
    power := atom ("^" INTEGER)?
    atom  := INTEGER | NAME | "(" expr ")"

Names are ``x``, ``y``, declared parameters and, in operator expressions,
``Dx`` and ``Dy``.  Products in operator expressions are noncommutative.
"""

from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ExpressionError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        self.column = pos + 1
        super().__init__(f"{message} at column {pos + 1}")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, lookup, lift):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.lookup = lookup
        self.lift = lift

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExpressionError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
                continue
            if self._is_op(rhs):
                if not rhs.is_scalar():
                    self.fail("division by an operator", tok)
                rhs = rhs.coefficient(0, 0)
            if not rhs:
                self.fail("division by zero", tok)
            value = value * (1 / rhs)
        return value

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
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.fail("exponent must be a nonnegative integer")
            self.take()
            e = int(tok[1])
            result = base**0 if not self._is_op(base) else self.lift(1)
            for _ in range(e):
                result = result * base
            return result
        return base

    def atom(self):
        tok = self.take()
        kind, text, _ = tok
        if kind == "int":
            return self.lookup(int(text))
        if kind == "name":
            try:
                return self.lookup(text)
            except KeyError:
                self.fail(f"unknown symbol {text!r}", tok)
        if (kind, text) == ("op", "("):
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return value
        if kind == "end":
            self.fail("unexpected end of expression", tok)
        self.fail(f"unexpected {text!r}", tok)

    def _is_op(self, value):
        from .ore import OreOperator

        return isinstance(value, OreOperator)


def parse_rational(text: str, fieldspec):
    """Parse a rational function in x, y and the declared parameters."""
    field = fieldspec.field

    def lookup(name):
        if isinstance(name, int):
            return field(name)
        return fieldspec.symbol(name)

    return _Parser(text, lookup, lambda v: v).parse()


def parse_operator(text: str, spec):
    """Parse an Ore operator expression with tokens ``Dx``, ``Dy``."""
    from .ore import OreOperator

    fieldspec = spec.fieldspec
    field = fieldspec.field

    def lookup(name):
        if isinstance(name, int):
            return OreOperator.scalar(spec, field(name))
        if name == "Dx":
            return OreOperator.dx(spec)
        if name == "Dy":
            return OreOperator.dy(spec)
        return OreOperator.scalar(spec, fieldspec.symbol(name))

    def lift(value):
        if isinstance(value, OreOperator):
            return value
        return OreOperator.scalar(spec, field(value))

    value = _Parser(text, lookup, lift).parse()
    return lift(value)
