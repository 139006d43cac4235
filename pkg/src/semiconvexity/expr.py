"""Tiny expression language with forward-mode differentiation.

Grammar: variables x1..xn, float literals, + - * / ^, functions log, sqrt,
abs, min, max, and parentheses.  Evaluation is vectorized: a batch of points
(m, n) yields values (m,) and gradients (m, n) propagated as dual numbers.
min/max differentiate with the left-branch convention at ties; abs uses
sign(0) = 0.
"""

import re

import numpy as np

from .errors import DomainError, ExprError

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)

_FUNCTIONS = {"log": (1, 1), "sqrt": (1, 1), "abs": (1, 1), "min": (2, None), "max": (2, None)}


def _tokenize(src):
    pos = 0
    out = []
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            stripped = src[pos:].lstrip()
            if not stripped:
                break
            raise ExprError(f"unexpected character {stripped[0]!r}", position=pos + (len(src[pos:]) - len(stripped)))
        if m.lastgroup == "num":
            out.append(("num", float(m.group("num")), m.start("num")))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name"), m.start("name")))
        else:
            out.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    out.append(("end", None, len(src)))
    return out


class Node:
    def ev(self, x):
        """Return (value (m,), gradient (m, n)) at the batch x."""
        raise NotImplementedError


class Const(Node):
    def __init__(self, v):
        self.v = float(v)

    def ev(self, x):
        m, n = x.shape
        return np.full(m, self.v), np.zeros((m, n))

    def __repr__(self):
        return repr(self.v)


class Var(Node):
    def __init__(self, index):
        self.index = index

    def ev(self, x):
        m, n = x.shape
        d = np.zeros((m, n))
        d[:, self.index] = 1.0
        return x[:, self.index].copy(), d

    def __repr__(self):
        return f"x{self.index + 1}"


class Bin(Node):
    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right

    def ev(self, x):
        lv, ld = self.left.ev(x)
        rv, rd = self.right.ev(x)
        op = self.op
        if op == "+":
            return lv + rv, ld + rd
        if op == "-":
            return lv - rv, ld - rd
        if op == "*":
            return lv * rv, ld * rv[:, None] + rd * lv[:, None]
        if op == "/":
            if np.any(rv == 0.0):
                raise DomainError("division by zero in expression evaluation")
            val = lv / rv
            return val, (ld - rd * val[:, None]) / rv[:, None]
        # power
        if isinstance(self.right, Const) and float(self.right.v).is_integer():
            k = float(self.right.v)
            val = np.power(lv, k)
            if k == 0.0:
                return val, np.zeros_like(ld)
            base = np.power(lv, k - 1.0)
            return val, (k * base)[:, None] * ld
        if np.any(lv <= 0.0):
            raise DomainError("x^y needs a positive base when the exponent is not a constant integer")
        val = np.power(lv, rv)
        dval = val[:, None] * (rd * np.log(lv)[:, None] + ld * (rv / lv)[:, None])
        return val, dval

    def __repr__(self):
        return f"({self.left!r} {self.op} {self.right!r})"


class Neg(Node):
    def __init__(self, child):
        self.child = child

    def ev(self, x):
        v, d = self.child.ev(x)
        return -v, -d

    def __repr__(self):
        return f"(-{self.child!r})"


class Call(Node):
    def __init__(self, name, args):
        self.name = name
        self.args = args

    def ev(self, x):
        name = self.name
        if name == "log":
            v, d = self.args[0].ev(x)
            if np.any(v <= 0.0):
                raise DomainError("log needs a positive argument")
            return np.log(v), d / v[:, None]
        if name == "sqrt":
            v, d = self.args[0].ev(x)
            if np.any(v < 0.0):
                raise DomainError("sqrt needs a nonnegative argument")
            s = np.sqrt(v)
            with np.errstate(divide="ignore"):
                ds = d / (2.0 * s)[:, None]
            return s, ds
        if name == "abs":
            v, d = self.args[0].ev(x)
            return np.abs(v), np.sign(v)[:, None] * d
        # min / max: left-branch wins ties
        v, d = self.args[0].ev(x)
        for arg in self.args[1:]:
            rv, rd = arg.ev(x)
            if name == "min":
                take_right = rv < v
            else:
                take_right = rv > v
            v = np.where(take_right, rv, v)
            d = np.where(take_right[:, None], rd, d)
        return v, d

    def __repr__(self):
        return f"{self.name}({', '.join(map(repr, self.args))})"


class _Parser:
    def __init__(self, tokens, n_vars):
        self.tokens = tokens
        self.i = 0
        self.n_vars = n_vars

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}", position=pos)

    def parse(self):
        node = self.addsub()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprError(f"unexpected trailing input {val!r}", position=pos)
        return node

    def addsub(self):
        node = self.muldiv()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = Bin(val, node, self.muldiv())
            else:
                return node

    def muldiv(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = Bin(val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return Bin("^", node, self.unary())
        return node

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Const(val)
        if kind == "op" and val == "(":
            node = self.addsub()
            self.expect_op(")")
            return node
        if kind == "name":
            if val in _FUNCTIONS:
                lo, hi = _FUNCTIONS[val]
                self.expect_op("(")
                args = [self.addsub()]
                while True:
                    k2, v2, p2 = self.peek()
                    if k2 == "op" and v2 == ",":
                        self.take()
                        args.append(self.addsub())
                    else:
                        break
                self.expect_op(")")
                if len(args) < lo or (hi is not None and len(args) > hi):
                    raise ExprError(f"{val} takes {'exactly' if hi == lo else 'at least'} {lo} argument(s)", position=pos)
                return Call(val, args)
            m = re.fullmatch(r"x(\d+)", val)
            if m:
                idx = int(m.group(1))
                if not (1 <= idx <= self.n_vars):
                    raise ExprError(f"variable {val} out of range for dimension {self.n_vars}", position=pos)
                return Var(idx - 1)
            raise ExprError(f"unknown identifier {val!r}", position=pos)
        raise ExprError("expected a number, variable, function or '('", position=pos)


def parse_ast(src, n_vars):
    if not isinstance(src, str) or not src.strip():
        raise ExprError("empty expression", position=0)
    return _Parser(_tokenize(src), n_vars).parse()


def evaluate_with_gradient(ast, X):
    """Batch forward-mode pass: X (m, n) -> values (m,), gradients (m, n)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    vals, grads = ast.ev(X)
    return vals, grads
