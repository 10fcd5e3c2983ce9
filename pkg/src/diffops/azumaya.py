"""Free-over-centre algebras and their differential-operator matrices.

A CenteredFreeAlgebra is an algebra A that is free of finite rank over a
central polynomial subring R, presented by structure constants
a_i a_j = sum_k r_{i,j}^k a_k with a_0 = 1.  The dual basis is the basis
itself with the coordinate projections f_i.  Built-in families: matrix
algebras M_n(R) and the Heisenberg algebra H_n over its centre in
characteristic p.

Every k-linear operator on A is an N x N matrix of operators on R
(columns indexed by the input coordinate); it has order <= m exactly when
every entry does.  The module provides the diagonal extension of base
operators, the basis operators that permute coordinates, the
component/assembly maps between operators on A and matrices of operators
on R, the ideal restriction/lift maps, and the determinant test for the
two-sided multiplication map A (x)_R A^o -> Hom_R(A, A).
"""

from __future__ import annotations

from .errors import MathError, ValidationError
from .fields import FieldSpec
from .heisenberg import (
    AlgebraContext,
    HElement,
    central_decompose,
    centre_ring,
)
from .polydiff import PDOp, grothendieck_order_check, p_compose
from .polyring import Poly, PolyRing, bareiss_determinant


class CenteredFreeAlgebra:
    """Finite free algebra over a central base ring, via structure constants."""

    def __init__(self, ring: PolyRing, table, labels=None, validate=True):
        self.ring = ring
        self.dim = len(table)
        self.table = table
        self.labels = list(labels) if labels else [f"a{i}" for i in range(self.dim)]
        if len(self.labels) != self.dim:
            raise ValidationError("label count does not match dimension")
        for row in table:
            if len(row) != self.dim or any(len(cell) != self.dim for cell in row):
                raise ValidationError("structure-constant table is not N x N x N")
        if validate:
            self._validate()

    def _validate(self):
        one = self.ring.one()
        zero = self.ring.zero()
        for j in range(self.dim):
            for k in range(self.dim):
                want = one if j == k else zero
                if self.table[0][j][k] != want or self.table[j][0][k] != want:
                    raise ValidationError("a_0 is not a two-sided unit")
        for i in range(self.dim):
            for j in range(self.dim):
                for l in range(self.dim):
                    for m in range(self.dim):
                        lhs = zero
                        rhs = zero
                        for k in range(self.dim):
                            lhs = lhs + self.table[i][j][k] * self.table[k][l][m]
                            rhs = rhs + self.table[j][l][k] * self.table[i][k][m]
                        if lhs != rhs:
                            raise ValidationError(
                                "structure constants are not associative"
                            )

    # -- elements are coordinate vectors over the base ring -----------------

    def zero_element(self) -> list[Poly]:
        return [self.ring.zero() for _ in range(self.dim)]

    def unit_element(self) -> list[Poly]:
        out = self.zero_element()
        out[0] = self.ring.one()
        return out

    def basis_element(self, i: int) -> list[Poly]:
        out = self.zero_element()
        out[i] = self.ring.one()
        return out

    def mul_elements(self, u: list[Poly], v: list[Poly]) -> list[Poly]:
        out = self.zero_element()
        for i, ui in enumerate(u):
            if ui.is_zero():
                continue
            for j, vj in enumerate(v):
                if vj.is_zero():
                    continue
                w = ui * vj
                for k in range(self.dim):
                    r = self.table[i][j][k]
                    if not r.is_zero():
                        out[k] = out[k] + w * r
        return out

    def add_elements(self, u, v):
        return [a + b for a, b in zip(u, v)]

    def coordinate(self, u: list[Poly], i: int) -> Poly:
        """The dual-basis functional f_i."""
        return u[i]


# -- built-in families ----------------------------------------------------------


def build_matrix_algebra(n: int, ring: PolyRing) -> CenteredFreeAlgebra:
    """M_n(R) with basis {1} u {e_ij : (i,j) != (n,n)} so that a_0 = 1."""
    if n < 1:
        raise ValidationError("matrix size must be >= 1")
    pairs = [(i, j) for i in range(n) for j in range(n) if (i, j) != (n - 1, n - 1)]
    dim = n * n

    def as_matrix(idx):
        mat = [[0] * n for _ in range(n)]
        if idx == 0:
            for i in range(n):
                mat[i][i] = 1
        else:
            i, j = pairs[idx - 1]
            mat[i][j] = 1
        return mat

    def coords(mat):
        # expand in the basis: the unit coefficient is the (n-1, n-1) entry
        c = mat[n - 1][n - 1]
        out = [c]
        for i, j in pairs:
            out.append(mat[i][j] - (c if i == j else 0))
        return out

    table = []
    for a in range(dim):
        row = []
        ma = as_matrix(a)
        for b in range(dim):
            mb = as_matrix(b)
            prod = [
                [sum(ma[i][t] * mb[t][j] for t in range(n)) for j in range(n)]
                for i in range(n)
            ]
            row.append([ring.constant(c) for c in coords(prod)])
        table.append(row)
    labels = ["1"] + [f"e{i + 1}{j + 1}" for i, j in pairs]
    return CenteredFreeAlgebra(ring, table, labels)


def heisenberg_basis_exponents(n: int, p: int):
    """Reduced exponent pairs (I, J) with 0 <= I, J < p, unit first."""
    idx = []

    def rec(vec, pos, total):
        if pos == len(vec):
            total.append(tuple(vec))
            return
        for e in range(p):
            vec[pos] = e
            rec(vec, pos + 1, total)
            vec[pos] = 0

    singles: list = []
    rec([0] * n, 0, singles)
    for I in singles:
        for J in singles:
            idx.append((I, J))
    idx.sort()
    return idx


def build_heisenberg_charp(n: int, p: int) -> CenteredFreeAlgebra:
    """H_n over its centre k[h, x^p, y^p], basis x^I y^J with 0 <= I, J < p."""
    ctx = AlgebraContext(n, FieldSpec(p))
    ring = centre_ring(ctx)
    exps = heisenberg_basis_exponents(n, p)
    index = {e: i for i, e in enumerate(exps)}
    dim = len(exps)
    table = []
    for I1, J1 in exps:
        row = []
        a = HElement.monomial(ctx, 0, I1, J1)
        for I2, J2 in exps:
            b = HElement.monomial(ctx, 0, I2, J2)
            parts = central_decompose(a * b)
            cell = [ring.zero() for _ in range(dim)]
            for (zero_m, Ir, Jr), poly in parts.items():
                cell[index[(Ir, Jr)]] = poly
            row.append(cell)
        table.append(row)
    labels = []
    for I, J in exps:
        name = "".join(f"x{i + 1}^{e}" for i, e in enumerate(I) if e) + "".join(
            f"y{i + 1}^{e}" for i, e in enumerate(J) if e
        )
        labels.append(name or "1")
    alg = CenteredFreeAlgebra(ring, table, labels)
    alg.heisenberg_params = (n, p)
    return alg


def build_weyl_charp(n: int, p: int) -> CenteredFreeAlgebra:
    """A_n (h = 1) over its centre k[x^p, y^p], basis x^I y^J with 0 <= I, J < p.

    Unlike the h-graded family, this one passes the two-sided
    multiplication isomorphism test at every point of the centre.
    """
    from .heisenberg import MODE_WEYL

    ctx = AlgebraContext(n, FieldSpec(p), MODE_WEYL)
    names = tuple(f"X{i}" for i in range(1, n + 1)) + tuple(
        f"Y{i}" for i in range(1, n + 1)
    )
    ring = PolyRing(names, FieldSpec(p))
    exps = heisenberg_basis_exponents(n, p)
    index = {e: i for i, e in enumerate(exps)}
    dim = len(exps)
    table = []
    for I1, J1 in exps:
        row = []
        a = HElement.monomial(ctx, 0, I1, J1)
        for I2, J2 in exps:
            b = HElement.monomial(ctx, 0, I2, J2)
            cell = [ring.zero() for _ in range(dim)]
            for (_m, I, J), c in (a * b).terms.items():
                red = (tuple(e % p for e in I), tuple(e % p for e in J))
                centre = tuple(e // p for e in I) + tuple(e // p for e in J)
                cell[index[red]] = cell[index[red]] + ring.monomial(centre, c)
            row.append(cell)
        table.append(row)
    return CenteredFreeAlgebra(ring, table)


def build_dual_numbers(ring: PolyRing) -> CenteredFreeAlgebra:
    """R[eps]/(eps^2): commutative, free of rank 2, not Azumaya over R."""
    one = ring.one()
    zero = ring.zero()
    table = [
        [[one, zero], [zero, one]],
        [[zero, one], [zero, zero]],
    ]
    return CenteredFreeAlgebra(ring, table, ["1", "eps"])


# -- operator matrices ----------------------------------------------------------


class OperatorMatrix:
    """Operator on a free algebra, as an N x N matrix of base-ring operators.

    Column j holds the operators applied to the coordinate of a_j; row i
    collects contributions to the coordinate of a_i.
    """

    __slots__ = ("ring", "entries")

    def __init__(self, ring: PolyRing, entries):
        self.ring = ring
        self.entries = entries
        n = len(entries)
        for row in entries:
            if len(row) != n:
                raise ValidationError("operator matrix is not square")

    @property
    def size(self) -> int:
        return len(self.entries)

    @classmethod
    def zero(cls, ring, n) -> "OperatorMatrix":
        return cls(ring, [[PDOp.zero(ring) for _ in range(n)] for _ in range(n)])

    @classmethod
    def identity(cls, ring, n) -> "OperatorMatrix":
        out = cls.zero(ring, n)
        for i in range(n):
            out.entries[i][i] = PDOp.identity(ring)
        return out

    def _check(self, other):
        if self.ring != other.ring or self.size != other.size:
            raise ValidationError("operator matrices are not compatible")

    def __eq__(self, other):
        return (
            isinstance(other, OperatorMatrix)
            and self.ring == other.ring
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(
            (self.ring, tuple(tuple(row) for row in self.entries))
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __add__(self, other):
        self._check(other)
        return OperatorMatrix(
            self.ring,
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
        )

    def __sub__(self, other):
        self._check(other)
        return OperatorMatrix(
            self.ring,
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
        )

    def __neg__(self):
        return OperatorMatrix(self.ring, [[-e for e in row] for row in self.entries])

    def scale(self, c) -> "OperatorMatrix":
        return OperatorMatrix(
            self.ring, [[e.scale(c) for e in row] for row in self.entries]
        )

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        """(self o other) as operators; matrix product with entry composition."""
        self._check(other)
        n = self.size
        out = OperatorMatrix.zero(self.ring, n)
        for i in range(n):
            for j in range(n):
                acc = PDOp.zero(self.ring)
                for t in range(n):
                    if self.entries[i][t].is_zero() or other.entries[t][j].is_zero():
                        continue
                    acc = acc + p_compose(self.entries[i][t], other.entries[t][j])
                out.entries[i][j] = acc
        return out

    def apply_to(self, coords: list[Poly]) -> list[Poly]:
        from .polydiff import p_apply

        n = self.size
        out = [self.ring.zero() for _ in range(n)]
        for j, r in enumerate(coords):
            if r.is_zero():
                continue
            for i in range(n):
                e = self.entries[i][j]
                if not e.is_zero():
                    out[i] = out[i] + p_apply(e, r)
        return out


def commutator_matrix(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a.compose(b) - b.compose(a)


def lambda_matrix(alg: CenteredFreeAlgebra, coords: list[Poly]) -> OperatorMatrix:
    """Left multiplication by the element with the given coordinates."""
    n = alg.dim
    out = OperatorMatrix.zero(alg.ring, n)
    for t in range(n):
        for s in range(n):
            acc = alg.ring.zero()
            for i, ui in enumerate(coords):
                if not ui.is_zero():
                    acc = acc + ui * alg.table[i][s][t]
            if not acc.is_zero():
                out.entries[t][s] = PDOp.mult(acc)
    return out


def rho_matrix(alg: CenteredFreeAlgebra, coords: list[Poly]) -> OperatorMatrix:
    """Right multiplication by the element with the given coordinates."""
    n = alg.dim
    out = OperatorMatrix.zero(alg.ring, n)
    for t in range(n):
        for s in range(n):
            acc = alg.ring.zero()
            for j, uj in enumerate(coords):
                if not uj.is_zero():
                    acc = acc + uj * alg.table[s][j][t]
            if not acc.is_zero():
                out.entries[t][s] = PDOp.mult(acc)
    return out


def diagonal_extend(alg: CenteredFreeAlgebra, phi: PDOp) -> OperatorMatrix:
    """Extend a base-ring operator coordinatewise: (r a_i) -> phi(r) a_i."""
    if phi.ring != alg.ring:
        raise ValidationError("operator ring does not match the algebra base ring")
    out = OperatorMatrix.zero(alg.ring, alg.dim)
    for i in range(alg.dim):
        out.entries[i][i] = phi
    return out


def matrix_unit_op(alg: CenteredFreeAlgebra, l: int, k: int) -> OperatorMatrix:
    """The order-0 operator sending a_k to a_l and the other basis coordinates to 0."""
    if not (0 <= l < alg.dim and 0 <= k < alg.dim):
        raise ValidationError("basis operator index out of range")
    out = OperatorMatrix.zero(alg.ring, alg.dim)
    out.entries[l][k] = PDOp.identity(alg.ring)
    return out


def coordinate_projection(alg: CenteredFreeAlgebra, j: int) -> OperatorMatrix:
    """f_j followed by the inclusion of R = R.a_0 into the algebra."""
    if not 0 <= j < alg.dim:
        raise ValidationError("projection index out of range")
    out = OperatorMatrix.zero(alg.ring, alg.dim)
    out.entries[0][j] = PDOp.identity(alg.ring)
    return out


def component(alg: CenteredFreeAlgebra, phi: OperatorMatrix, i: int, j: int) -> PDOp:
    """f_i o Phi o (right multiplication by a_j), restricted to R."""
    if not (0 <= i < alg.dim and 0 <= j < alg.dim):
        raise ValidationError("component index out of range")
    composed = phi.compose(rho_matrix(alg, alg.basis_element(j)))
    return composed.entries[i][0]


def decompose_operator(alg: CenteredFreeAlgebra, phi: OperatorMatrix):
    """All components f_i Phi rho_{a_j} as an N x N array of base operators."""
    return [
        [component(alg, phi, i, j) for j in range(alg.dim)] for i in range(alg.dim)
    ]


def reconstruct_operator(alg: CenteredFreeAlgebra, comps) -> OperatorMatrix:
    """Assemble sum_{i,j} rho_{a_i} o extend(comps[i][j]) o f_j."""
    n = alg.dim
    if len(comps) != n or any(len(row) != n for row in comps):
        raise ValidationError("component array is not N x N")
    out = OperatorMatrix.zero(alg.ring, n)
    for i in range(n):
        rho_i = rho_matrix(alg, alg.basis_element(i))
        for j in range(n):
            if comps[i][j].is_zero():
                continue
            piece = rho_i.compose(
                diagonal_extend(alg, comps[i][j]).compose(
                    coordinate_projection(alg, j)
                )
            )
            out = out + piece
    return out


def order_check(phi: OperatorMatrix, m: int) -> bool:
    """Order <= m on the free algebra: every entry has Grothendieck order <= m."""
    return all(
        grothendieck_order_check(e, m) for row in phi.entries for e in row
    )


def restrict_to_base(alg: CenteredFreeAlgebra, phi: OperatorMatrix) -> PDOp:
    """The ideal map to the base ring: f_0 Phi f_0 restricted to R."""
    return component(alg, phi, 0, 0)


def lift_from_base(alg: CenteredFreeAlgebra, gens) -> list[OperatorMatrix]:
    """The ideal map from the base ring, at generator level: phi -> extend(phi)."""
    return [diagonal_extend(alg, g) for g in gens]


def bimodule_scale(
    alg: CenteredFreeAlgebra, r: Poly, phi: OperatorMatrix, s: Poly
) -> OperatorMatrix:
    """r . Phi . s for central r, s: c -> r Phi(s c)."""
    mr = diagonal_extend(alg, PDOp.mult(r))
    ms = diagonal_extend(alg, PDOp.mult(s))
    return mr.compose(phi).compose(ms)


def is_azumaya(alg: CenteredFreeAlgebra, max_dim: int = 8) -> bool:
    """Determinant test for a_i (x) a_j^o -> (c -> a_i c a_j) being bijective.

    The map is written as an N^2 x N^2 matrix over the base ring; it is an
    isomorphism of free modules exactly when the determinant is a unit,
    i.e. a nonzero scalar.
    """
    n = alg.dim
    if n > max_dim:
        raise MathError(
            f"azumaya check limited to dimension {max_dim} (degree overflow guard)"
        )
    ring = alg.ring
    big = [[ring.zero() for _ in range(n * n)] for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            col = i * n + j
            for k in range(n):
                # a_i a_k a_j in coordinates
                prod = alg.mul_elements(
                    alg.mul_elements(alg.basis_element(i), alg.basis_element(k)),
                    alg.basis_element(j),
                )
                for l in range(n):
                    big[l * n + k][col] = prod[l]
    det = bareiss_determinant(big, ring)
    return det.is_constant() and not det.is_zero()


# -- H_n in characteristic p: converting normal-form operators -------------------


def doperator_to_matrix(d, alg: CenteredFreeAlgebra) -> OperatorMatrix:
    """Rewrite a normal-form operator on H_n (char p) as an operator matrix.

    Divided powers split by base-p digits: dx^[K] acts on a basis exponent
    I_b < p through C(I_b, K mod p) and on the centre variable x^p through
    the divided power of order K div p (Lucas); the multiplication part is
    split over the centre by the unique reduced decomposition.
    """
    ctx = d.ctx
    p = ctx.field.characteristic
    if p == 0:
        raise MathError("operator conversion needs characteristic p")
    n = ctx.n
    if getattr(alg, "heisenberg_params", None) != (n, p):
        raise ValidationError("algebra is not the matching Heisenberg family")
    ring = alg.ring
    exps = heisenberg_basis_exponents(n, p)
    index = {e: i for i, e in enumerate(exps)}
    f = ctx.field
    out = OperatorMatrix.zero(ring, alg.dim)
    for (m, I, J, s, K, L), c in d.terms.items():
        k_low = tuple(e % p for e in K)
        k_high = tuple(e // p for e in K)
        l_low = tuple(e % p for e in L)
        l_high = tuple(e // p for e in L)
        alpha = (s,) + k_high + l_high  # orders in (h, X_1.., Y_1..)
        u = HElement.monomial(ctx, m, I, J, c)
        for j, (Ib, Jb) in enumerate(exps):
            w = f.one
            for i in range(n):
                w = f.mul(w, f.mul(f.binom(Ib[i], k_low[i]), f.binom(Jb[i], l_low[i])))
                if w == 0:
                    break
            if w == 0:
                continue
            shifted = HElement.monomial(
                ctx,
                0,
                tuple(Ib[i] - k_low[i] for i in range(n)),
                tuple(Jb[i] - l_low[i] for i in range(n)),
                w,
            )
            parts = central_decompose(u * shifted)
            for (zero_m, Ir, Jr), poly in parts.items():
                i_row = index[(Ir, Jr)]
                terms = {(exp, alpha): cc for exp, cc in poly.terms.items()}
                out.entries[i_row][j] = out.entries[i_row][j] + PDOp(ring, terms)
    return out


# -- structure-constant records ---------------------------------------------------


def algebra_to_record(alg: CenteredFreeAlgebra) -> dict:
    from .printing import format_poly

    return {
        "dim": alg.dim,
        "characteristic": alg.ring.field.characteristic,
        "variables": list(alg.ring.variables),
        "labels": list(alg.labels),
        "table": [
            [[format_poly(c) for c in cell] for cell in row] for row in alg.table
        ],
    }


def algebra_from_record(rec: dict, validate: bool = True) -> CenteredFreeAlgebra:
    from .parsing import parse_poly

    try:
        dim = int(rec["dim"])
        char = int(rec["characteristic"])
        variables = tuple(str(v) for v in rec["variables"])
        table_rec = rec["table"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad structure-constant record: {exc}") from None
    ring = PolyRing(variables, FieldSpec(char))
    if len(table_rec) != dim:
        raise ValidationError("structure-constant table size does not match dim")
    table = [
        [[parse_poly(ring, text) for text in cell] for cell in row]
        for row in table_rec
    ]
    labels = rec.get("labels")
    alg = CenteredFreeAlgebra(ring, table, labels, validate=validate)
    hp = rec.get("heisenberg_params")
    if hp:
        alg.heisenberg_params = tuple(int(v) for v in hp)
    return alg


def matrix_to_record(phi: OperatorMatrix) -> dict:
    from .printing import pdop_records

    return {
        "size": phi.size,
        "characteristic": phi.ring.field.characteristic,
        "variables": list(phi.ring.variables),
        "entries": [[pdop_records(e) for e in row] for row in phi.entries],
    }


def matrix_from_record(rec: dict) -> OperatorMatrix:
    try:
        size = int(rec["size"])
        char = int(rec["characteristic"])
        variables = tuple(str(v) for v in rec["variables"])
        entries_rec = rec["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad operator-matrix record: {exc}") from None
    ring = PolyRing(variables, FieldSpec(char))
    if len(entries_rec) != size:
        raise ValidationError("operator-matrix record size mismatch")
    entries = []
    for row in entries_rec:
        out_row = []
        for cell in row:
            terms = {}
            for t in cell:
                key = (tuple(int(e) for e in t["beta"]), tuple(int(e) for e in t["alpha"]))
                terms[key] = ring.field.coerce(str(t["coeff"]))
            out_row.append(PDOp(ring, terms))
        entries.append(out_row)
    return OperatorMatrix(ring, entries)
