"""Small arithmetic expression language used in config files.

Grammar (``^`` is right-associative)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := unary ('^' factor)?
    unary  := '-'? atom
    atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'

Identifiers are the free variable (``t`` or ``s``), the constant ``pi``,
or one of the supported functions.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ConfigurationError

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)

_FUNCTIONS = {
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "exp": (1, np.exp),
    "abs": (1, np.abs),
    "atan": (1, np.arctan),
    "arctan": (1, np.arctan),
    "sqrt": (1, lambda x: np.sqrt(np.maximum(x, 0.0))),
    "max": (2, np.maximum),
    "min": (2, np.minimum),
}

_CONSTANTS = {"pi": np.pi, "e": np.e}


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            if src[pos:].strip() == "":
                break
            raise ConfigurationError(
                "lexical error at position %d: %r" % (pos, src[pos:])
            )
        if m.lastgroup == "num":
            tokens.append(("num", float(m.group("num")), m.start()))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident"), m.start()))
        else:
            tokens.append(("op", m.group("op"), m.start()))
        pos = m.end()
    tokens.append(("end", None, len(src)))
    return tokens


class Expression:
    """Parsed arithmetic expression in one free variable."""

    def __init__(self, src):
        self.source = src
        self._tokens = _tokenize(src)
        self._pos = 0
        self._variables = set()
        self._ast = self._parse_expr()
        if self._peek()[0] != "end":
            kind, value, start = self._peek()
            raise ConfigurationError(
                "syntax error at position %d: unexpected %r" % (start, value)
            )
        if len(self._variables) > 1:
            raise ConfigurationError(
                "expression uses more than one variable: %s"
                % sorted(self._variables)
            )
        self.variable = next(iter(self._variables)) if self._variables else None

    # -- parsing ---------------------------------------------------------

    def _peek(self):
        return self._tokens[self._pos]

    def _next(self):
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _expect_op(self, op):
        kind, value, start = self._next()
        if kind != "op" or value != op:
            raise ConfigurationError(
                "syntax error at position %d: expected %r, got %r"
                % (start, op, value)
            )

    def _parse_expr(self):
        node = self._parse_term()
        while self._peek()[:2] in (("op", "+"), ("op", "-")):
            op = self._next()[1]
            node = (op, node, self._parse_term())
        return node

    def _parse_term(self):
        node = self._parse_factor()
        while self._peek()[:2] in (("op", "*"), ("op", "/")):
            op = self._next()[1]
            node = (op, node, self._parse_factor())
        return node

    def _parse_factor(self):
        base = self._parse_unary()
        if self._peek()[:2] == ("op", "^"):
            self._next()
            return ("^", base, self._parse_factor())
        return base

    def _parse_unary(self):
        if self._peek()[:2] == ("op", "-"):
            self._next()
            return ("neg", self._parse_unary())
        return self._parse_atom()

    def _parse_atom(self):
        kind, value, start = self._next()
        if kind == "num":
            return ("const", value)
        if kind == "op" and value == "(":
            node = self._parse_expr()
            self._expect_op(")")
            return node
        if kind == "ident":
            if self._peek()[:2] == ("op", "("):
                if value not in _FUNCTIONS:
                    raise ConfigurationError(
                        "unknown function %r at position %d" % (value, start)
                    )
                self._next()
                args = [self._parse_expr()]
                while self._peek()[:2] == ("op", ","):
                    self._next()
                    args.append(self._parse_expr())
                self._expect_op(")")
                arity = _FUNCTIONS[value][0]
                if len(args) != arity:
                    raise ConfigurationError(
                        "function %r takes %d argument(s), got %d"
                        % (value, arity, len(args))
                    )
                return ("call", value, args)
            if value in _CONSTANTS:
                return ("const", _CONSTANTS[value])
            if value in ("t", "s"):
                self._variables.add(value)
                return ("var", value)
            raise ConfigurationError(
                "unknown identifier %r at position %d" % (value, start)
            )
        raise ConfigurationError(
            "syntax error at position %d: unexpected %r" % (start, value)
        )

    # -- evaluation ------------------------------------------------------

    def __call__(self, x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._eval(self._ast, x)

    def _eval(self, node, x):
        tag = node[0]
        if tag == "const":
            return node[1] if np.isscalar(x) else np.full_like(
                np.asarray(x, dtype=float), node[1]
            )
        if tag == "var":
            return x
        if tag == "neg":
            return -self._eval(node[1], x)
        if tag == "call":
            fn = _FUNCTIONS[node[1]][1]
            return fn(*[self._eval(a, x) for a in node[2]])
        a = self._eval(node[1], x)
        b = self._eval(node[2], x)
        if tag == "+":
            return a + b
        if tag == "-":
            return a - b
        if tag == "*":
            return a * b
        if tag == "/":
            # np.divide keeps evaluation total on scalars (1/0 -> inf)
            return np.divide(a, b)
        if tag == "^":
            return a ** b
        raise AssertionError("unreachable node %r" % (node,))

    def __repr__(self):
        return "Expression(%r)" % self.source


def parse_expression(src):
    """Parse ``src`` into an :class:`Expression`."""
    return Expression(src)
