"""Expression language for elements, operators and polynomial operators.

Grammar (standard precedence, ^ > * = / > additive; * is noncommutative
and keeps the written order):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ['^' INT]
    atom   := INT | NAME | NAME '[' INT ']' | 'd' '[' NAME ']' ['^' '[' INT ']']
            | '(' expr ')' | '-' atom

Symbols by context: elements use h, x<i>, y<i>; operators additionally
dh, dx<i>, dy<i> (optionally with a divided-power order in brackets) and
Dh for the reversed h-derivative; polynomial operators use the ring
variables and d[var]^[k].  Division is by scalars only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .heisenberg import AlgebraContext, HElement, h as gen_h, x as gen_x, y as gen_y
from .operators import DOperator, dh, dh_reversed, dx, dy, identity_op, lambda_of, op_compose
from .polydiff import PDOp, p_compose
from .polyring import Poly, PolyRing

_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z][A-Za-z0-9]*)|([+\-*/^()\[\]])")


@dataclass(frozen=True)
class Token:
    kind: str  # int | name | op | end
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class Num:
    value: int
    line: int
    column: int


@dataclass(frozen=True)
class Sym:
    name: str
    order: int | None  # bracketed divided-power order, if any
    line: int
    column: int


@dataclass(frozen=True)
class Partial:
    var: str
    order: int
    line: int
    column: int


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object


def tokenize(text: str) -> list[Token]:
    tokens = []
    lines = text.split("\n")
    for line_no, line in enumerate(lines, start=1):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if not m:
                raise ParseError(f"unexpected character {line[pos]!r}", line_no, pos)
            if m.group(1):
                tokens.append(Token("int", m.group(1), line_no, pos))
            elif m.group(2):
                tokens.append(Token("name", m.group(2), line_no, pos))
            else:
                tokens.append(Token("op", m.group(3), line_no, pos))
            pos = m.end()
    tokens.append(Token("end", "", len(lines), len(lines[-1])))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.advance()
        raise ParseError(f"expected {text!r}", tok.line, tok.column)

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    def parse(self):
        expr = self.parse_expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.column)
        return expr

    def parse_expr(self):
        tok = self.peek()
        negate = False
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            negate = True
        node = self.parse_term()
        if negate:
            node = Neg(node)
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.advance()
                rhs = self.parse_term()
                node = BinOp(tok.text, node, rhs)
            else:
                return node

    def parse_term(self):
        node = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.advance()
                rhs = self.parse_factor()
                node = BinOp(tok.text, node, rhs)
            else:
                return node

    def parse_factor(self):
        node = self.parse_atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            if isinstance(node, Partial):
                return node  # its exponent was consumed by the atom
            self.advance()
            exp = self.peek()
            if exp.kind != "int":
                raise ParseError("exponent must be a nonnegative integer", exp.line, exp.column)
            self.advance()
            return Pow(node, int(exp.text))
        return node

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text), tok.line, tok.column)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            return node
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.parse_atom())
        if tok.kind == "name":
            self.advance()
            if tok.text == "d" and self._at("["):
                self.expect("[")
                var = self.peek()
                if var.kind != "name":
                    raise ParseError("expected a variable name", var.line, var.column)
                self.advance()
                self.expect("]")
                order = 1
                if self._at("^"):
                    self.expect("^")
                    self.expect("[")
                    num = self.peek()
                    if num.kind != "int":
                        raise ParseError(
                            "divided-power order must be an integer", num.line, num.column
                        )
                    self.advance()
                    self.expect("]")
                    order = int(num.text)
                return Partial(var.text, order, tok.line, tok.column)
            order = None
            if self._at("["):
                self.expect("[")
                num = self.peek()
                if num.kind != "int":
                    raise ParseError(
                        "divided-power order must be an integer", num.line, num.column
                    )
                self.advance()
                self.expect("]")
                order = int(num.text)
            return Sym(tok.text, order, tok.line, tok.column)
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.column)

    def _at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text


def parse(text: str):
    """Parse an expression to its AST; raises ParseError with position."""
    return _Parser(text).parse()


# -- evaluation -----------------------------------------------------------------

_GEN_RE = re.compile(r"^([xy])(\d+)$")
_DGEN_RE = re.compile(r"^(d[xy])(\d+)$")


class _Evaluator:
    """Shared arithmetic over a domain; subclasses provide atoms."""

    def eval(self, node):
        if isinstance(node, Num):
            return self.scalar_value(node.value)
        if isinstance(node, Neg):
            return self.negate(self.eval(node.operand))
        if isinstance(node, Pow):
            if node.exponent < 0:
                raise ValidationError("negative exponent")
            return self.power(self.eval(node.base), node.exponent)
        if isinstance(node, BinOp):
            left = self.eval(node.left)
            right = self.eval(node.right)
            if node.op == "+":
                return self.add(left, right)
            if node.op == "-":
                return self.add(left, self.negate(right))
            if node.op == "*":
                return self.multiply(left, right)
            return self.divide(left, right)
        if isinstance(node, Sym):
            return self.symbol(node)
        if isinstance(node, Partial):
            return self.partial(node)
        raise AssertionError(f"unknown node {node!r}")

    def divide(self, left, right):
        c = self.as_scalar(right)
        if c is None or c == 0:
            raise ValidationError("division is only defined by nonzero scalars")
        return self.scale(left, self.field.inv(c))

    def add(self, a, b):
        return a + b

    def negate(self, a):
        return -a

    def scale(self, a, c):
        return a.scale(c)

    def power(self, a, k):
        out = self.one_value()
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def partial(self, node):
        raise ParseError("partial symbols are not valid here", node.line, node.column)


class _ElementEvaluator(_Evaluator):
    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        self.field = ctx.field

    def scalar_value(self, v):
        return HElement.scalar(self.ctx, v)

    def one_value(self):
        return HElement.scalar(self.ctx, 1)

    def multiply(self, a, b):
        return a * b

    def as_scalar(self, a):
        z = (0, self.ctx.zero_index(), self.ctx.zero_index())
        if not a.terms:
            return self.field.zero
        if set(a.terms) == {z}:
            return a.terms[z]
        return None

    def symbol(self, node):
        name = node.name
        if node.order is not None:
            raise ParseError(
                f"{name} does not take a bracket order here", node.line, node.column
            )
        if name == "h":
            return gen_h(self.ctx)
        m = _GEN_RE.match(name)
        if m:
            idx = int(m.group(2))
            if not 1 <= idx <= self.ctx.n:
                raise ParseError(
                    f"index {idx} out of range for rank {self.ctx.n}",
                    node.line,
                    node.column,
                )
            return (gen_x if m.group(1) == "x" else gen_y)(self.ctx, idx)
        raise ParseError(f"unknown symbol {name!r}", node.line, node.column)


class _OperatorEvaluator(_Evaluator):
    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        self.field = ctx.field
        self._elems = _ElementEvaluator(ctx)

    def scalar_value(self, v):
        return identity_op(self.ctx).scale(v)

    def one_value(self):
        return identity_op(self.ctx)

    def multiply(self, a, b):
        return op_compose(a, b)

    def as_scalar(self, a):
        z = self.ctx.zero_index()
        key = (0, z, z, 0, z, z)
        if not a.terms:
            return self.field.zero
        if set(a.terms) == {key}:
            return a.terms[key]
        return None

    def symbol(self, node):
        name = node.name
        order = node.order
        if name == "Dh":
            if order is not None:
                raise ParseError("Dh does not take a bracket order", node.line, node.column)
            if self.ctx.is_weyl:
                raise ParseError("Dh is not available in Weyl mode", node.line, node.column)
            return dh_reversed(self.ctx)
        if name == "dh":
            if self.ctx.is_weyl:
                raise ParseError("dh is not available in Weyl mode", node.line, node.column)
            return dh(self.ctx, order if order is not None else 1)
        m = _DGEN_RE.match(name)
        if m:
            idx = int(m.group(2))
            if not 1 <= idx <= self.ctx.n:
                raise ParseError(
                    f"index {idx} out of range for rank {self.ctx.n}",
                    node.line,
                    node.column,
                )
            builder = dx if m.group(1) == "dx" else dy
            return builder(self.ctx, idx, order if order is not None else 1)
        return lambda_of(self._elems.symbol(node))


class _PolyEvaluator(_Evaluator):
    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.field = ring.field

    def scalar_value(self, v):
        return self.ring.constant(v)

    def one_value(self):
        return self.ring.one()

    def multiply(self, a, b):
        return a * b

    def as_scalar(self, a):
        if a.is_constant():
            return a.constant_value()
        return None

    def symbol(self, node):
        if node.order is not None:
            raise ParseError(
                "polynomial variables take ^ powers, not bracket orders",
                node.line,
                node.column,
            )
        try:
            i = self.ring.variables.index(node.name)
        except ValueError:
            raise ParseError(
                f"unknown variable {node.name!r}", node.line, node.column
            ) from None
        return self.ring.gen(i)


class _PDOpEvaluator(_Evaluator):
    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.field = ring.field
        self._polys = _PolyEvaluator(ring)

    def scalar_value(self, v):
        return PDOp.identity(self.ring).scale(v)

    def one_value(self):
        return PDOp.identity(self.ring)

    def multiply(self, a, b):
        return p_compose(a, b)

    def as_scalar(self, a):
        z = (0,) * self.ring.nvars
        if not a.terms:
            return self.field.zero
        if set(a.terms) == {(z, z)}:
            return a.terms[(z, z)]
        return None

    def symbol(self, node):
        return PDOp.mult(self._polys.symbol(node))

    def partial(self, node):
        try:
            i = self.ring.variables.index(node.var)
        except ValueError:
            raise ParseError(
                f"unknown variable {node.var!r}", node.line, node.column
            ) from None
        return PDOp.partial(self.ring, i, node.order)


def element_from_text(ctx: AlgebraContext, text: str) -> HElement:
    return _ElementEvaluator(ctx).eval(parse(text))


def operator_from_text(ctx: AlgebraContext, text: str) -> DOperator:
    return _OperatorEvaluator(ctx).eval(parse(text))


def pdop_from_text(ring: PolyRing, text: str) -> PDOp:
    return _PDOpEvaluator(ring).eval(parse(text))


def poly_from_text(ring: PolyRing, text: str) -> Poly:
    return _PolyEvaluator(ring).eval(parse(text))


def parse_poly(ring: PolyRing, text: str) -> Poly:
    return poly_from_text(ring, text)


def infer_ring_variables(text: str) -> tuple[str, ...]:
    """Variable names appearing in a polynomial-operator expression, sorted."""
    names = set()
    expr = parse(text)

    def walk(node):
        if isinstance(node, Sym):
            names.add(node.name)
        elif isinstance(node, Partial):
            names.add(node.var)
        elif isinstance(node, Neg):
            walk(node.operand)
        elif isinstance(node, Pow):
            walk(node.base)
        elif isinstance(node, BinOp):
            walk(node.left)
            walk(node.right)

    walk(expr)
    return tuple(sorted(names))
