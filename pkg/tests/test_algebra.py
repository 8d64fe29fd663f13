import numpy as np
import pytest

from tiltlab.algebra import (
    AlgebraError,
    AlgebraLawError,
    Quiver,
    RelationSet,
    UnsupportedError,
    bound_quiver_algebra,
    is_isomorphic_algebra_map,
    opposite,
    primitive_idempotents,
    radical,
    structure_algebra,
    tensor_product,
)
from tiltlab.exactla import ExactMatrix, FieldSpec, rank, vstack
from tiltlab.repmod import end_algebra

QQ = FieldSpec.rational()
F101 = FieldSpec.prime(101)


def a2(f=QQ):
    return bound_quiver_algebra(Quiver.build(["1", "2"], [("a", "1", "2")]), RelationSet(), f)


def a3_rad2(f=QQ):
    q = Quiver.build(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
    return bound_quiver_algebra(q, RelationSet.build([[(1, ("a", "b"))]]), f)


def upper_triangular(f=QQ):
    # basis e11, e12, e22
    c = np.zeros((3, 3, 3), dtype=int)
    c[0, 0, 0] = 1
    c[0, 1, 1] = 1
    c[1, 2, 1] = 1
    c[2, 2, 2] = 1
    return structure_algebra(f, c, [1, 0, 1])


def test_path_counts():
    a = a2()
    assert a.dim == 3
    assert sorted(a.labels) == ["a", "e1", "e2"]
    assert a3_rad2().dim == 5
    loop = Quiver.build(["1"], [("x", "1", "1")])
    assert bound_quiver_algebra(loop, RelationSet.build([[(1, ("x", "x"))]]), QQ).dim == 2


def test_path_product_order():
    a = a2()
    e1, a_ = a.basis_element(a.labels.index("e1")), a.basis_element(a.labels.index("a"))
    e2 = a.basis_element(a.labels.index("e2"))
    # paths compose left to right: e1 * a = a = a * e2
    assert a.mult(e1, a_) == a_
    assert a.mult(a_, e2) == a_
    assert a.mult(a_, e1).is_zero()


def test_structure_algebra_examples():
    one = structure_algebra(QQ, [[[1]]], [1])
    assert one.dim == 1
    assert upper_triangular().dim == 3


def test_non_associative_rejected():
    c = np.zeros((3, 3, 3), dtype=int)
    for i in range(3):
        c[0, i, i] = c[i, 0, i] = 1
    c[1, 1, 2] = 1  # b1*b1 = b2
    c[1, 2, 1] = 1  # b1*b2 = b1, while b2*b1 = 0
    with pytest.raises(AlgebraLawError) as err:
        structure_algebra(QQ, c, [1, 0, 0])
    assert err.value.law
    assert len(err.value.witness) == 3


def test_bad_unit_rejected():
    with pytest.raises(AlgebraError):
        structure_algebra(QQ, [[[1]]], [2])


def test_radical_examples():
    a = a2()
    J = radical(a)
    assert J.rows == 1
    arrow = a.basis_element(a.labels.index("a"))
    assert rank(vstack([J, arrow])) == 1
    semisimple = structure_algebra(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 1])
    assert radical(semisimple).rows == 0


def test_radical_of_end_t(a2_ctx):
    S, _, _ = end_algebra(a2_ctx.T)
    assert radical(S).rows == 1
    assert len(primitive_idempotents(S)) == 2


def test_radical_small_characteristic_unsupported():
    c = np.zeros((3, 3, 3), dtype=int)
    for i in range(3):
        c[i, i, i] = 1
    alg = structure_algebra(FieldSpec.prime(2), c, [1, 1, 1])
    with pytest.raises(UnsupportedError):
        radical(alg)


def test_idempotents_of_quiver_algebra():
    a = a3_rad2()
    idem = primitive_idempotents(a)
    assert len(idem) == 3
    for i, e in enumerate(idem):
        assert a.mult(e, e) == e
        for j, g in enumerate(idem):
            if i != j:
                assert a.mult(e, g).is_zero()


def test_idempotents_of_matrix_algebra():
    # M_2(Q) in the basis e11, e12, e21, e22
    c = np.zeros((4, 4, 4), dtype=int)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                c[2 * i + j, 2 * j + k, 2 * i + k] = 1
    alg = structure_algebra(QQ, c, [1, 0, 0, 1])
    idem = primitive_idempotents(alg)
    assert len(idem) == 2
    assert sum(idem[1:], idem[0]) == alg.unit


def test_opposite():
    a = a2()
    op = opposite(a)
    for i in range(3):
        for j in range(3):
            assert (op.structconst[i, j] == a.structconst[j, i]).all()
    b = a3_rad2(F101)
    assert (opposite(opposite(b)).structconst == b.structconst).all()


def test_commutative_opposite_equal():
    loop = Quiver.build(["1"], [("x", "1", "1")])
    a = bound_quiver_algebra(loop, RelationSet.build([[(1, ("x", "x", "x"))]]), QQ)
    assert (opposite(a).structconst == a.structconst).all()


def test_tensor_product_dims_and_identity_map():
    a, b = a2(F101), a3_rad2(F101)
    t = tensor_product(a, b)
    t.validate()
    assert t.dim == 15
    assert len(primitive_idempotents(t)) == 6
    assert is_isomorphic_algebra_map(b, b, ExactMatrix.identity(F101, b.dim))
    assert not is_isomorphic_algebra_map(b, b, ExactMatrix.zeros(F101, b.dim, b.dim))
