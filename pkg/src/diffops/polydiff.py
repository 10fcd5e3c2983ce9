"""Differential operators on commutative polynomial rings, in divided powers.

A PDOp over k[t_1..t_k] is a finite combination of terms t^beta d^[alpha],
where d^[alpha] is the divided-power partial acting by

    d^[alpha](t^gamma) = prod_i C(gamma_i, alpha_i) * t^(gamma - alpha).

Divided powers make the same operator calculus work in characteristic 0
and characteristic p (where d^[p] is not a polynomial in d^[1]).
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .errors import IncompatibleContextError, ValidationError
from .heisenberg import MINUS_INF
from .polyring import Poly, PolyRing


class PDOp:
    """Differential operator with polynomial coefficients, canonical sparse form."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict | None = None):
        self.ring = ring
        clean = {}
        if terms:
            for (beta, alpha), c in terms.items():
                if c == 0:
                    continue
                if len(beta) != ring.nvars or len(alpha) != ring.nvars:
                    raise ValidationError("operator key does not match ring arity")
                clean[(tuple(beta), tuple(alpha))] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring) -> "PDOp":
        return cls(ring, {})

    @classmethod
    def identity(cls, ring) -> "PDOp":
        z = (0,) * ring.nvars
        return cls(ring, {(z, z): ring.field.one})

    @classmethod
    def mult(cls, f: Poly) -> "PDOp":
        """Multiplication operator by the polynomial f."""
        z = (0,) * f.ring.nvars
        return cls(f.ring, {(e, z): c for e, c in f.terms.items()})

    @classmethod
    def partial(cls, ring, var: int, order: int = 1) -> "PDOp":
        """Divided-power partial d^[order] in variable number var (0-based)."""
        if not 0 <= var < ring.nvars:
            raise ValidationError(f"variable index {var} out of range")
        if order < 0:
            raise ValidationError("negative partial order")
        z = (0,) * ring.nvars
        alpha = tuple(order if i == var else 0 for i in range(ring.nvars))
        return cls(ring, {(z, alpha): ring.field.one})

    @classmethod
    def term(cls, ring, beta, alpha, coeff=1) -> "PDOp":
        return cls(ring, {(tuple(beta), tuple(alpha)): ring.field.coerce(coeff)})

    # -- basics ------------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise IncompatibleContextError("operators over different rings")

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, PDOp)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def _combined(self, other, sign):
        self._check(other)
        f = self.ring.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = f.add(out.get(k, f.zero), c if sign > 0 else f.neg(c))
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        return PDOp(self.ring, out)

    def __add__(self, other):
        return self._combined(other, 1)

    def __sub__(self, other):
        return self._combined(other, -1)

    def __neg__(self):
        f = self.ring.field
        return PDOp(self.ring, {k: f.neg(c) for k, c in self.terms.items()})

    def scale(self, c) -> "PDOp":
        f = self.ring.field
        c = f.coerce(c)
        return PDOp(self.ring, {k: f.mul(v, c) for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __repr__(self):
        from .printing import format_pdop

        return format_pdop(self)


def p_apply(d: PDOp, f: Poly) -> Poly:
    """Action of the operator on a polynomial, exactly."""
    if d.ring != f.ring:
        raise IncompatibleContextError("operator and polynomial rings differ")
    fld = d.ring.field
    out: dict = {}
    for (beta, alpha), c in d.terms.items():
        for gamma, v in f.terms.items():
            w = fld.mul(c, v)
            for g, a in zip(gamma, alpha):
                if w == 0:
                    break
                w = fld.mul(w, fld.binom(g, a))
            if w == 0:
                continue
            e = tuple(g - a + b for g, a, b in zip(gamma, alpha, beta))
            nv = fld.add(out.get(e, fld.zero), w)
            if nv == 0:
                out.pop(e, None)
            else:
                out[e] = nv
    return Poly(d.ring, out)


def p_compose(d1: PDOp, d2: PDOp) -> PDOp:
    """Normal-ordered composition d1 o d2.

    Uses the divided-power Leibniz rule per variable,
    d^[a] t^b = sum_tau C(b,tau) t^(b-tau) d^[a-tau], and the merge
    d^[a] d^[b] = C(a+b, a) d^[a+b].
    """
    d1._check(d2)
    fld = d1.ring.field
    nv = d1.ring.nvars
    out: dict = {}
    for (b1, a1), c1 in d1.terms.items():
        for (b2, a2), c2 in d2.terms.items():
            base = fld.mul(c1, c2)
            # push d^[a1] through t^b2, one variable at a time
            stack = [((), base)]
            for i in range(nv):
                nxt = []
                for prefix, coef in stack:
                    for tau in range(min(a1[i], b2[i]) + 1):
                        w = fld.mul(coef, fld.binom(b2[i], tau))
                        if w == 0:
                            continue
                        # merge the surviving d^[a1-tau] with d^[a2]
                        w = fld.mul(w, fld.binom(a1[i] - tau + a2[i], a2[i]))
                        if w == 0:
                            continue
                        nxt.append((prefix + (tau,), w))
                stack = nxt
            for tau, coef in stack:
                beta = tuple(b1[i] + b2[i] - tau[i] for i in range(nv))
                alpha = tuple(a1[i] - tau[i] + a2[i] for i in range(nv))
                key = (beta, alpha)
                v = fld.add(out.get(key, fld.zero), coef)
                if v == 0:
                    out.pop(key, None)
                else:
                    out[key] = v
    return PDOp(d1.ring, out)


def p_commutator(d1: PDOp, d2: PDOp) -> PDOp:
    return p_compose(d1, d2) - p_compose(d2, d1)


def p_order(d: PDOp):
    """max |alpha| over stored terms; MINUS_INF for the zero operator."""
    if not d.terms:
        return MINUS_INF
    return max(sum(alpha) for (_, alpha) in d.terms)


def grothendieck_order_check(d: PDOp, m: int) -> bool:
    """True iff every commutator chain of length m+1 with ring variables vanishes.

    Chains with the generating variables suffice by the Leibniz rule, and
    bracket maps with commuting multipliers commute, so chains are
    enumerated as multisets.
    """
    if m < 0:
        return d.is_zero()
    mults = [PDOp.mult(d.ring.gen(i)) for i in range(d.ring.nvars)]
    for combo in combinations_with_replacement(range(d.ring.nvars), m + 1):
        cur = d
        for i in combo:
            cur = p_commutator(cur, mults[i])
            if cur.is_zero():
                break
        if not cur.is_zero():
            return False
    return True
