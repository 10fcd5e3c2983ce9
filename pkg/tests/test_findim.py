"""The finite-dimensional filtration oracle: centres, spans, filtrations."""

import pytest

from diffops.errors import ValidationError
from diffops.fields import FieldSpec
from diffops.findim import (
    FinAlgebra,
    LinearSubspace,
    bimodule_center,
    bimodule_span,
    dual_numbers_algebra,
    field_algebra,
    finalgebra_from_record,
    finalgebra_to_record,
    matrix_algebra,
    relative_z_filtration,
    tensor_algebra,
    z_filtration,
)

F7 = FieldSpec(7)
F5 = FieldSpec(5)
Q = FieldSpec(0)


def right_mult_matrix(alg, coords):
    f = alg.field
    d = alg.dim
    out = [[f.zero] * d for _ in range(d)]
    for j, c in enumerate(coords):
        if c == 0:
            continue
        for i in range(d):
            for k in range(d):
                v = alg.constants[i][j][k]
                if v != 0:
                    out[k][i] = f.add(out[k][i], f.mul(c, v))
    return out


def test_field_case_center_is_everything():
    alg = field_algebra(Q)
    assert bimodule_center(alg).dim == 1
    rep = z_filtration(alg)
    assert rep.dims == [1]
    assert rep.stabilized_at == 0


def test_dual_numbers_center():
    alg = dual_numbers_algebra(F7)
    centre = bimodule_center(alg)
    assert centre.dim == 2
    # the centre consists exactly of the right multiplications
    for i in range(alg.dim):
        mat = right_mult_matrix(alg, alg.basis_coords(i))
        flat = tuple(c for row in mat for c in row)
        assert centre.contains(flat)


def test_matrix_algebra_center_dim():
    alg = matrix_algebra(2, F7)
    assert alg.dim == 4
    centre = bimodule_center(alg)
    assert centre.dim == 4
    for i in range(alg.dim):
        mat = right_mult_matrix(alg, alg.basis_coords(i))
        assert centre.contains(tuple(c for row in mat for c in row))


def test_bimodule_span_in_matrix_algebra():
    # under the action (a.phi.b)(c) = a phi(bc), the orbit of the identity
    # spans exactly the left multiplications; the orbit of the centre
    # (right multiplications) spans all two-sided multiplications, which
    # for M_2 over a field is the full 16-dimensional End
    alg = matrix_algebra(2, F7)
    f = alg.field
    d = alg.dim
    ident = tuple(
        f.one if i == j else f.zero for i in range(d) for j in range(d)
    )
    span = bimodule_span(alg, LinearSubspace(d * d, f, [ident]))
    assert span.dim == 4
    for i in range(d):
        flat = tuple(c for row in alg.left_mult(alg.basis_coords(i)) for c in row)
        assert span.contains(flat)
    assert bimodule_span(alg, bimodule_center(alg)).dim == 16


def test_bimodule_span_zero_and_idempotent():
    alg = dual_numbers_algebra(F7)
    f = alg.field
    empty = LinearSubspace(alg.dim**2, f, [])
    assert bimodule_span(alg, empty).dim == 0
    centre = bimodule_center(alg)
    once = bimodule_span(alg, centre)
    twice = bimodule_span(alg, once)
    assert once == twice


def test_z_filtration_dual_numbers():
    # away from characteristic 2 the eps-derivative is NOT a derivation of
    # k[eps]/(eps^2) (it fails Leibniz on eps*eps), so it sits in level 2:
    # the chain is (2, 3, 4), with level 1 spanned by multiplications and
    # the Euler derivation eps -> eps
    rep = z_filtration(dual_numbers_algebra(F7))
    assert rep.dims == [2, 3, 4]
    assert rep.stabilized_at == 2
    f = F7
    d_eps = (f.zero, f.one, f.zero, f.zero)  # 1 -> 0, eps -> 1
    euler = (f.zero, f.zero, f.zero, f.one)  # 1 -> 0, eps -> eps
    assert not rep.subspace_at(0).contains(d_eps)
    assert not rep.subspace_at(1).contains(d_eps)
    assert rep.subspace_at(2).contains(d_eps)
    assert not rep.subspace_at(0).contains(euler)
    assert rep.subspace_at(1).contains(euler)


def test_z_filtration_dual_numbers_char2():
    # in characteristic 2 the Leibniz obstruction 2*eps vanishes and the
    # eps-derivative genuinely has order 1
    rep = z_filtration(dual_numbers_algebra(FieldSpec(2)))
    assert rep.dims == [2, 4]
    assert rep.stabilized_at == 1


def test_z_filtration_matrix_algebra_stabilizes_immediately():
    rep = z_filtration(matrix_algebra(2, F7))
    assert rep.dims == [16]
    assert rep.stabilized_at == 0


def test_z_filtration_product_field_stops_below_full():
    # k x k: no operators across the two factors; chain stops at dim 2
    f = Q
    constants = [
        [[f.one, f.zero], [f.zero, f.zero]],
        [[f.zero, f.zero], [f.zero, f.one]],
    ]
    # basis (e1, e2) idempotents; unit is e1 + e2, so change basis to (1, e2)
    table = [
        [[f.one, f.zero], [f.zero, f.one]],
        [[f.zero, f.one], [f.zero, f.one]],
    ]
    alg = FinAlgebra(f, table, 0, ["1", "e"])
    rep = z_filtration(alg)
    assert rep.dims == [2]
    assert rep.stabilized_at == 0
    assert rep.dimension_at(3) == 2


def test_level_zero_is_two_sided_multiplication_span():
    # Z_0 = span of all (c -> a c b), built here directly from left and
    # right multiplication matrices as an independent cross-check
    for alg in (dual_numbers_algebra(F7), matrix_algebra(2, F7)):
        f = alg.field
        d = alg.dim
        vecs = []
        for i in range(d):
            La = alg.left_mult(alg.basis_coords(i))
            for j in range(d):
                Rb = right_mult_matrix(alg, alg.basis_coords(j))
                flat = []
                for r in range(d):
                    for c in range(d):
                        acc = f.zero
                        for t in range(d):
                            acc = f.add(acc, f.mul(La[r][t], Rb[t][c]))
                        flat.append(acc)
                vecs.append(tuple(flat))
        lr_span = LinearSubspace(d * d, f, vecs)
        level0 = z_filtration(alg).subspace_at(0)
        assert lr_span == level0


def test_relative_with_scalars_is_full():
    alg = matrix_algebra(2, F5)
    rep = relative_z_filtration(alg, [alg.unit_coords()])
    assert rep.dims == [16]
    assert rep.stabilized_at == 0


def test_relative_validation():
    alg = matrix_algebra(2, F5)
    e12 = alg.basis_coords(alg.labels.index("e12"))
    with pytest.raises(ValidationError):
        relative_z_filtration(alg, [alg.unit_coords(), e12])
    with pytest.raises(ValidationError):
        relative_z_filtration(alg, [e12])
    with pytest.raises(ValidationError):
        relative_z_filtration(alg, [])


def test_relative_dominates_absolute_matrix_case():
    alg = matrix_algebra(2, F5)
    absolute = z_filtration(alg)
    relative = relative_z_filtration(alg, [alg.unit_coords()])
    for m in range(3):
        assert relative.subspace_at(m).contains_subspace(absolute.subspace_at(m))


def test_tensor_m2_dual_numbers_factorization():
    # dim Z_m(End(M_2 (x) R)) = 16 * dim Z_m(End R) for R = F_5[eps];
    # the honest base chain is (2, 3, 4), so the product chain is (32, 48, 64)
    base = dual_numbers_algebra(F5)
    base_rep = z_filtration(base)
    assert base_rep.dims == [2, 3, 4]
    big = tensor_algebra(matrix_algebra(2, F5), base)
    assert big.dim == 8
    rep = z_filtration(big)
    assert [rep.dimension_at(m) for m in range(3)] == [
        16 * base_rep.dimension_at(m) for m in range(3)
    ]
    assert [rep.dimension_at(m) for m in range(3)] == [32, 48, 64]


def test_relative_dominates_absolute_tensor_case():
    base = dual_numbers_algebra(F5)
    big = tensor_algebra(matrix_algebra(2, F5), base)
    # central subalgebra 1 (x) R inside M_2 (x) R
    f = F5
    d = big.dim
    unit = big.unit_coords()
    eps_idx = [i for i, lab in enumerate(big.labels) if lab == "1.eps"]
    assert len(eps_idx) == 1
    eps = big.basis_coords(eps_idx[0])
    absolute = z_filtration(big)
    relative = relative_z_filtration(big, [unit, eps])
    for m in range(3):
        assert relative.subspace_at(m).contains_subspace(absolute.subspace_at(m))


def test_filtration_levels_are_nested():
    for alg in (dual_numbers_algebra(F7), tensor_algebra(
        matrix_algebra(2, F5), dual_numbers_algebra(F5)
    )):
        rep = z_filtration(alg)
        for (i, sub), (j, nxt) in zip(rep.levels, rep.levels[1:]):
            assert j == i + 1
            assert nxt.dim > sub.dim
            assert nxt.contains_subspace(sub)


def test_record_roundtrip():
    alg = dual_numbers_algebra(F7)
    rec = finalgebra_to_record(alg)
    back = finalgebra_from_record(rec)
    assert back.constants == alg.constants
    assert back.unit == alg.unit
    rec["variables"] = ["t"]
    with pytest.raises(ValidationError):
        finalgebra_from_record(rec)
