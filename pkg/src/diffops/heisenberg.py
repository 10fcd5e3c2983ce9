"""PBW normal-form arithmetic for the Heisenberg algebra H_n.

H_n has generators h, x_1..x_n, y_1..y_n with [x_i, y_j] = delta_ij h and
all other generator commutators zero; h is central.  Every element is a
finite combination of normal monomials h^m x^I y^J, stored as a map from
(m, I, J) keys to nonzero scalars.  Weyl mode is the same algebra with h
specialized to 1, realized as the flag ``mode="weyl"`` with m forced to 0.

Products are normal-ordered with the closed form of the exhaustive
rewrite y_i x_i -> x_i y_i - h:

    y^a x^b = sum_k (-1)^k k! C(a,k) C(b,k) h^k x^(b-k) y^(a-k)

applied independently per index (different indices commute).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    IncompatibleContextError,
    UnsupportedCharacteristicError,
    UnsupportedModeError,
    ValidationError,
)
from .fields import FieldSpec
from .polyring import PolyRing

MODE_HEISENBERG = "heisenberg"
MODE_WEYL = "weyl"

#: degree of the zero element, below every integer
MINUS_INF = float("-inf")


@dataclass(frozen=True)
class AlgebraContext:
    """Rank, coefficient field and mode shared by all values of one computation."""

    n: int
    field: FieldSpec = FieldSpec(0)
    mode: str = MODE_HEISENBERG

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"rank must be >= 1, got {self.n}")
        if self.mode not in (MODE_HEISENBERG, MODE_WEYL):
            raise ValidationError(f"unknown mode {self.mode!r}")

    @property
    def is_weyl(self) -> bool:
        return self.mode == MODE_WEYL

    def zero_index(self) -> tuple[int, ...]:
        return (0,) * self.n

    def unit_index(self, i: int) -> tuple[int, ...]:
        if not 1 <= i <= self.n:
            raise ValidationError(f"index {i} out of range 1..{self.n}")
        return tuple(1 if j == i - 1 else 0 for j in range(self.n))


class HElement:
    """Element of H_n (or A_n in Weyl mode) in PBW normal form."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: dict | None = None):
        self.ctx = ctx
        clean = {}
        if terms:
            for (m, I, J), c in terms.items():
                if c == 0:
                    continue
                if len(I) != ctx.n or len(J) != ctx.n:
                    raise ValidationError("monomial rank does not match context")
                if ctx.is_weyl and m != 0:
                    raise ValidationError("Weyl-mode monomials must have m = 0")
                clean[(m, I, J)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx) -> "HElement":
        return cls(ctx, {})

    @classmethod
    def scalar(cls, ctx, c) -> "HElement":
        return cls(ctx, {(0, ctx.zero_index(), ctx.zero_index()): ctx.field.coerce(c)})

    @classmethod
    def monomial(cls, ctx, m, I, J, coeff=1) -> "HElement":
        return cls(ctx, {(int(m), tuple(I), tuple(J)): ctx.field.coerce(coeff)})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "HElement"):
        if self.ctx != other.ctx:
            raise IncompatibleContextError(f"contexts differ: {self.ctx} vs {other.ctx}")

    def __eq__(self, other):
        return (
            isinstance(other, HElement)
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _combined(self, other: "HElement", sign: int) -> "HElement":
        self._check(other)
        f = self.ctx.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = f.add(out.get(k, f.zero), c if sign > 0 else f.neg(c))
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        return HElement(self.ctx, out)

    def __add__(self, other):
        return self._combined(other, 1)

    def __sub__(self, other):
        return self._combined(other, -1)

    def __neg__(self):
        f = self.ctx.field
        return HElement(self.ctx, {k: f.neg(c) for k, c in self.terms.items()})

    def scale(self, c) -> "HElement":
        f = self.ctx.field
        c = f.coerce(c)
        return HElement(self.ctx, {k: f.mul(v, c) for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, HElement):
            return self.scale(other)
        self._check(other)
        f = self.ctx.field
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                _mul_mono(self.ctx, k1, k2, f.mul(c1, c2), out)
        return HElement(self.ctx, out)

    def __pow__(self, k: int):
        if k < 0:
            raise ValidationError("negative power of an algebra element")
        out = one(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        from .printing import format_element

        return format_element(self)


def _mul_mono(ctx, key1, key2, c, out):
    """Accumulate the normal form of c * (key1 * key2) into out."""
    f = ctx.field
    m1, I1, J1 = key1
    m2, I2, J2 = key2
    n = ctx.n
    # enumerate contraction vectors K <= min(J1, I2) coordinatewise
    stack = [((), f.one)]
    for i in range(n):
        a, b = J1[i], I2[i]
        nxt = []
        for prefix, coef in stack:
            for k in range(min(a, b) + 1):
                w = f.mul(f.factorial(k), f.mul(f.binom(a, k), f.binom(b, k)))
                if w == 0:
                    continue
                if k % 2:
                    w = f.neg(w)
                nxt.append((prefix + (k,), f.mul(coef, w)))
        stack = nxt
    for K, coef in stack:
        m = 0 if ctx.is_weyl else m1 + m2 + sum(K)
        I = tuple(I1[i] + I2[i] - K[i] for i in range(n))
        J = tuple(J1[i] + J2[i] - K[i] for i in range(n))
        key = (m, I, J)
        v = f.add(out.get(key, f.zero), f.mul(c, coef))
        if v == 0:
            out.pop(key, None)
        else:
            out[key] = v


# -- generators --------------------------------------------------------------


def one(ctx: AlgebraContext) -> HElement:
    return HElement.scalar(ctx, 1)


def h(ctx: AlgebraContext) -> HElement:
    if ctx.is_weyl:
        return one(ctx)
    return HElement.monomial(ctx, 1, ctx.zero_index(), ctx.zero_index())


def x(ctx: AlgebraContext, i: int) -> HElement:
    return HElement.monomial(ctx, 0, ctx.unit_index(i), ctx.zero_index())


def y(ctx: AlgebraContext, i: int) -> HElement:
    return HElement.monomial(ctx, 0, ctx.zero_index(), ctx.unit_index(i))


# -- operations ---------------------------------------------------------------


def multiply(a: HElement, b: HElement) -> HElement:
    """PBW normal form of the product a*b."""
    return a * b


def commutator(a: HElement, b: HElement) -> HElement:
    """[a, b] = ab - ba."""
    return a * b - b * a


def deg1(a: HElement):
    """max |I| + |J| over stored monomials; MINUS_INF for 0."""
    if not a.terms:
        return MINUS_INF
    return max(sum(I) + sum(J) for (_, I, J) in a.terms)


def deg2(a: HElement):
    """max 2m + |I| + |J| over stored monomials; MINUS_INF for 0."""
    if not a.terms:
        return MINUS_INF
    return max(2 * m + sum(I) + sum(J) for (m, I, J) in a.terms)


def specialize_weyl(a: HElement) -> HElement:
    """Image of a under h -> 1, as a Weyl-mode element."""
    if a.ctx.is_weyl:
        raise UnsupportedModeError("element is already in Weyl mode")
    wctx = AlgebraContext(a.ctx.n, a.ctx.field, MODE_WEYL)
    f = a.ctx.field
    out: dict = {}
    for (m, I, J), c in a.terms.items():
        key = (0, I, J)
        v = f.add(out.get(key, f.zero), c)
        if v == 0:
            out.pop(key, None)
        else:
            out[key] = v
    return HElement(wctx, out)


# -- characteristic p: decomposition over the centre ------------------------


def centre_ring(ctx: AlgebraContext) -> PolyRing:
    """k[h, X_1..X_n, Y_1..Y_n] with X_i = x_i^p, Y_i = y_i^p (char p)."""
    p = ctx.field.characteristic
    if p == 0:
        raise UnsupportedCharacteristicError(
            "the centre ring in 2n+1 variables exists only in characteristic p"
        )
    names = (
        ("h",)
        + tuple(f"X{i}" for i in range(1, ctx.n + 1))
        + tuple(f"Y{i}" for i in range(1, ctx.n + 1))
    )
    return PolyRing(names, ctx.field)


def central_decompose(a: HElement) -> dict:
    """Write a = sum r_{I,J}(h, x^p, y^p) x^I y^J with 0 <= I, J < p.

    Returns a map from reduced monomial keys (0, I, J) to centre
    polynomials; the decomposition is unique.
    """
    p = a.ctx.field.characteristic
    if p == 0:
        raise UnsupportedCharacteristicError("central decomposition needs char p")
    ring = centre_ring(a.ctx)
    out: dict = {}
    for (m, I, J), c in a.terms.items():
        key = (0, tuple(e % p for e in I), tuple(e % p for e in J))
        exps = (m,) + tuple(e // p for e in I) + tuple(e // p for e in J)
        poly = out.get(key, ring.zero()) + ring.monomial(exps, c)
        if poly.is_zero():
            out.pop(key, None)
        else:
            out[key] = poly
    return out


def central_recompose(ctx: AlgebraContext, parts: dict) -> HElement:
    """Inverse of central_decompose: expand centre polynomials back into H_n."""
    p = ctx.field.characteristic
    if p == 0:
        raise UnsupportedCharacteristicError("central recomposition needs char p")
    n = ctx.n
    f = ctx.field
    out: dict = {}
    for (m0, I0, J0), poly in parts.items():
        for exps, c in poly.terms.items():
            key = (
                m0 + exps[0],
                tuple(I0[i] + p * exps[1 + i] for i in range(n)),
                tuple(J0[i] + p * exps[1 + n + i] for i in range(n)),
            )
            v = f.add(out.get(key, f.zero), c)
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
    return HElement(ctx, out)
