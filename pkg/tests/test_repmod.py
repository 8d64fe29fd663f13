import numpy as np
import pytest

from tiltlab.algebra import Quiver, RelationSet, bound_quiver_algebra, structure_algebra
from tiltlab.exactla import ExactMatrix, FieldSpec
from tiltlab.repmod import (
    FdModule,
    HomSpace,
    ModuleError,
    ModuleLawError,
    ModuleMap,
    canonical_modules,
    decompose,
    direct_sum,
    dual,
    end_algebra,
    hom_space,
    in_add,
    is_isomorphic,
    is_projective,
    morphism_parts,
    projective_cover,
    regular_module,
    rep_module,
)

F101 = FieldSpec.prime(101)


def test_rep_module_checks_relations(n3_ws):
    alg = n3_ws.algebra
    with pytest.raises(ModuleError):
        rep_module(alg, {"1": 1, "2": 1, "3": 1}, {"a": [[1]], "b": [[1]]})


def test_bad_action_rejected(a2_ws):
    alg = a2_ws.algebra
    arr = alg.field.zeros((alg.dim, 1, 1))
    with pytest.raises(ModuleLawError):
        FdModule(alg, arr).validate()


def test_hom_dims_a2(a2_ws):
    m = a2_ws.modules
    assert len(hom_space(m["P1"], m["S1"])) == 1
    assert len(hom_space(m["S1"], m["P1"])) == 0
    assert len(hom_space(m["T"], m["T"])) == 3


def test_hom_space_contains_identity(n3_ws):
    T = n3_ws.modules["T"]
    basis = [f.matrix for f in hom_space(T, T)]
    hs = HomSpace(T, T)
    c = hs.coords(ExactMatrix.identity(F101, T.dim))
    assert hs.combine(c) == ExactMatrix.identity(F101, T.dim)
    assert len(basis) == hs.dim


def test_hom_maps_intertwine(n3_ws):
    m = n3_ws.modules
    for f in hom_space(m["T"], m["P1"]):
        f.validate()


def test_canonical_dims(a2_ws, n3_ws):
    can = canonical_modules(a2_ws.algebra)
    assert sorted(p.dim for p in can.projectives) == [1, 2]
    assert [s.dim for s in can.simples] == [1, 1]
    can3 = canonical_modules(n3_ws.algebra)
    assert sorted(p.dim for p in can3.projectives) == [1, 2, 2]
    assert sorted(i.dim for i in can3.injectives) == [1, 2, 2]
    assert can3.regular.dim == 5


def test_canonical_semisimple():
    c = np.zeros((2, 2, 2), dtype=int)
    c[0, 0, 0] = c[1, 1, 1] = 1
    alg = structure_algebra(FieldSpec.rational(), c, [1, 1])
    can = canonical_modules(alg)
    for p, q, s in zip(can.projectives, can.injectives, can.simples):
        assert is_isomorphic(p, s)[0] and is_isomorphic(q, s)[0]


def test_morphism_parts_trivial(a2_ws):
    P1 = a2_ws.modules["P1"]
    parts = morphism_parts(P1.identity())
    assert parts.kernel.dim == 0 and parts.cokernel.dim == 0
    parts = morphism_parts(P1.zero_map(P1))
    assert parts.kernel.dim == 2 and parts.cokernel.dim == 2


def test_cokernel_of_p2_in_p1(a2_ws):
    m = a2_ws.modules
    (inc,) = hom_space(m["P2"], m["P1"])
    parts = morphism_parts(inc)
    assert parts.kernel.dim == 0
    assert is_isomorphic(parts.cokernel, m["S1"])[0]


def test_direct_sum(a2_ws):
    m = a2_ws.modules
    one, inj, proj = direct_sum([m["P1"]])
    assert is_isomorphic(one, m["P1"])[0]
    t, inj, proj = direct_sum([m["P1"], m["S1"]])
    assert t.dim == 3
    for i, p in zip(inj, proj):
        assert i.then(p).is_iso()
    assert is_isomorphic(t, m["T"])[0]


def test_end_algebra_dims(a2_ws, n3_ws):
    S, left, _ = end_algebra(a2_ws.modules["T"])
    assert S.dim == 3
    S1, _, _ = end_algebra(a2_ws.modules["S1"])
    assert S1.dim == 1
    # T = S1 + P1 + P2 over kA3/rad^2: 1+1+1 on the diagonal, Hom(P1,S1) and Hom(P2,P1)
    S3, _, _ = end_algebra(n3_ws.modules["T"])
    assert S3.dim == 5


def test_end_algebra_left_action(n3_ws):
    T = n3_ws.modules["T"]
    S, left, _ = end_algebra(T)
    for i in range(S.dim):
        for j in range(S.dim):
            prod = S.mult(S.basis_element(i), S.basis_element(j))
            # x -> x @ left[s] is a left action, so left[st] = left[t] @ left[s]
            assert left[j] @ left[i] == sum(
                (left[k].scale(prod.entry(0, k)) for k in range(1, S.dim)), left[0].scale(prod.entry(0, 0)))


def test_decompose_examples(a2_ws):
    m = a2_ws.modules
    d = decompose(m["P1"])
    assert d.multiplicities() == [1]
    double, _, _ = direct_sum([m["S2"], m["S2"]])
    assert decompose(double).multiplicities() == [2]
    reg = decompose(regular_module(a2_ws.algebra))
    assert sorted(rep.dim for rep, _ in reg.classes) == [1, 2]
    assert reg.multiplicities() == [1, 1]


def test_decompose_reassembles(n3_ws):
    T = n3_ws.modules["T"]
    d = decompose(T)
    assert len(d.summands) == 3
    total = sum((s.projection.then(s.inclusion).matrix for s in d.summands[1:]),
                d.summands[0].projection.then(d.summands[0].inclusion).matrix)
    assert total == ExactMatrix.identity(F101, T.dim)


def test_is_isomorphic_examples(a2_ws):
    m = a2_ws.modules
    ok, cert = is_isomorphic(m["T"], m["T"])
    assert ok and cert.is_iso()
    cert.validate()
    assert is_isomorphic(m["P1"], m["S1"]) == (False, None)
    assert not is_isomorphic(m["S1"], m["S2"])[0]


def test_in_add(a2_ws):
    m = a2_ws.modules
    T = m["T"]
    assert in_add(T, T)
    assert in_add(FdModule.zero(a2_ws.algebra), T)
    assert not in_add(m["P2"], T)
    assert in_add(m["S1"], T)


def test_projective_cover(n3_ws):
    m = n3_ws.modules
    P, eps = projective_cover(m["T"])
    eps.validate()
    assert morphism_parts(eps).cokernel.dim == 0
    assert P.dim == 2 + 2 + 2
    assert is_projective(m["P1"]) and not is_projective(m["S1"])


def test_dual_swaps_projective_and_injective(a2_ws):
    can = canonical_modules(a2_ws.algebra)
    for q in can.injectives:
        assert is_projective(dual(q))


def test_map_shape_checked(a2_ws):
    m = a2_ws.modules
    with pytest.raises(ModuleError):
        ModuleMap(m["P1"], m["S1"], ExactMatrix.zeros(F101, 1, 1))


def test_rational_field_modules():
    q = Quiver.build(["1", "2"], [("a", "1", "2")])
    alg = bound_quiver_algebra(q, RelationSet(), FieldSpec.rational())
    T = rep_module(alg, {"1": 2, "2": 1}, {"a": [[1], [0]]})
    S, _, _ = end_algebra(T)
    assert S.dim == 3
    assert len(decompose(T).summands) == 2
