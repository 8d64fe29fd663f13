import pytest
from hypothesis import given, settings, strategies as st

from tiltlab.exactla import ExactMatrix
from tiltlab.homology import (
    BoundedComplex,
    ChainMap,
    ComplexError,
    CoresolutionError,
    ResolutionLengthError,
    add_coresolution,
    cone,
    ext,
    ext_dim,
    hom_total_complex,
    homology,
    homology_dim,
    is_exact,
    left_add_approximation,
    min_proj_resolution,
    proj_resolution,
    quasi_iso,
    resolve_complex,
    tensor_over,
    tensor_total_complex,
    tor,
)
from tiltlab.repmod import (
    FdModule,
    canonical_modules,
    direct_sum,
    hom_space,
    in_add,
    is_isomorphic,
    is_projective,
    regular_module,
)
from tiltlab.derived import random_complex


def test_stalk_homology(a2_ws):
    S1 = a2_ws.modules["S1"]
    c = BoundedComplex.stalk(S1)
    assert is_isomorphic(homology(c, 0), S1)[0]
    assert homology_dim(c, 1) == 0 and homology_dim(c, -1) == 0


def test_p2_to_p1_complex(a2_ws):
    c = a2_ws.complexes["P2toP1"]
    assert homology_dim(c, -1) == 0
    assert is_isomorphic(homology(c, 0), a2_ws.modules["S1"])[0]


def test_exact_sequence_has_no_homology(a2_ws):
    P1 = a2_ws.modules["P1"]
    c = BoundedComplex(a2_ws.algebra, 0, [P1, P1], [ExactMatrix.identity(P1.field, 2)])
    assert is_exact(c)


def test_dd_checked(a2_ws):
    P1 = a2_ws.modules["P1"]
    I = ExactMatrix.identity(P1.field, 2)
    c = BoundedComplex(a2_ws.algebra, 0, [P1, P1, P1], [I, I])
    with pytest.raises(ComplexError, match="degree 0"):
        c.validate()


def test_cone_of_identity_exact(n3_ws):
    c = n3_ws.complexes["P3toP2"]
    assert is_exact(cone(ChainMap.identity(c)))
    assert quasi_iso(ChainMap.identity(c))


def test_cone_of_zero_map_is_shift(a2_ws):
    S1 = a2_ws.modules["S1"]
    c = BoundedComplex.stalk(S1)
    z = ChainMap(c, BoundedComplex.zero(a2_ws.algebra), {})
    k = cone(z)
    assert homology_dim(k, -1) == 1 and homology_dim(k, 0) == 0


def test_zero_map_not_quasi_iso(a2_ws):
    c = BoundedComplex.stalk(a2_ws.modules["S1"])
    assert not quasi_iso(ChainMap(c, c, {}))


def test_resolution_is_quasi_iso(a2_ws):
    S1 = a2_ws.modules["S1"]
    res = min_proj_resolution(S1, 3)
    assert res.length == 1
    pc = res.complex()
    aug = ChainMap(pc, BoundedComplex.stalk(S1), {0: res.augmentation})
    aug.validate()
    assert quasi_iso(aug)
    assert is_exact(cone(aug))


def test_projective_resolution_lengths(a2_ws, n3_ws):
    assert min_proj_resolution(a2_ws.modules["P1"], 3).length == 0
    res = min_proj_resolution(n3_ws.modules["S1"], 4)
    assert res.length == 2
    assert [p.dim for p in res.projectives] == [2, 2, 1]
    with pytest.raises(ResolutionLengthError):
        min_proj_resolution(n3_ws.modules["S1"], 1)


def test_ext_oracles(a2_ws, n3_ws):
    m = a2_ws.modules
    assert ext_dim(m["S1"], m["P2"], 1) == 1
    assert ext_dim(m["P1"], m["S2"], 1) == 0
    assert ext_dim(m["T"], m["S2"], 1) == 1
    m3 = n3_ws.modules
    assert ext_dim(m3["S1"], m3["P2"], 2) == 0
    assert ext_dim(m3["T"], m3["S3"], 2) == 1
    assert ext_dim(m3["S1"], m3["S3"], 2) == 1


def test_ext_cocycles_are_maps(n3_ws):
    m = n3_ws.modules
    r = ext(m["S1"], m["S3"], 2)
    for c in r.cocycles:
        c.validate()


def test_ext_of_projective_vanishes(n3_ws):
    can = canonical_modules(n3_ws.algebra)
    for p in can.projectives:
        for x in can.simples:
            assert ext_dim(p, x, 1) == 0 and ext_dim(p, x, 2) == 0


def test_tensor_unit_law(a2_ctx):
    reg = regular_module(a2_ctx.S)
    t = tensor_over(reg, a2_ctx.bimodule)
    assert is_isomorphic(t.module, a2_ctx.T)[0]
    z = tensor_over(FdModule.zero(a2_ctx.S), a2_ctx.bimodule)
    assert z.module.dim == 0


def test_tor_of_projective_and_degree_zero(n3_ctx):
    can = canonical_modules(n3_ctx.S)
    for p in can.projectives:
        assert tor(p, n3_ctx.bimodule, 1).dim == 0
    for s in can.simples:
        t0 = tor(s, n3_ctx.bimodule, 0).module
        assert is_isomorphic(t0, tensor_over(s, n3_ctx.bimodule).module)[0]


def test_tensor_total_of_stalk(a2_ctx):
    c = BoundedComplex.stalk(regular_module(a2_ctx.S))
    out = tensor_total_complex(c, a2_ctx.bimodule)
    assert is_isomorphic(homology(out, 0), a2_ctx.T)[0]
    z = tensor_total_complex(BoundedComplex.zero(a2_ctx.S), a2_ctx.bimodule)
    assert is_exact(z)


def test_hom_total_stalks(a2_ws):
    m = a2_ws.modules
    ht = hom_total_complex(BoundedComplex.stalk(m["P1"]), BoundedComplex.stalk(m["S1"]))
    assert ht.complex.low == 0 and ht.complex.high == 0
    assert ht.complex.term(0).dim == len(hom_space(m["P1"], m["S1"]))


def test_hom_total_from_resolution(a2_ws):
    m = a2_ws.modules
    pt = proj_resolution(m["T"], 2).complex()
    ht = hom_total_complex(pt, BoundedComplex.stalk(m["S2"])).complex
    assert {j: homology_dim(ht, j) for j in range(-1, 3)} == {-1: 0, 0: 0, 1: 1, 2: 0}


def test_hom_total_into_exact(a2_ws):
    m = a2_ws.modules
    P1 = m["P1"]
    ex = BoundedComplex(a2_ws.algebra, 0, [P1, P1], [ExactMatrix.identity(P1.field, 2)])
    ht = hom_total_complex(BoundedComplex.stalk(m["P2"]), ex).complex
    assert is_exact(ht)


def test_left_approximation(n3_ws):
    m = n3_ws.modules
    ap = left_add_approximation(m["P3"], m["T"])
    assert ap.target.dim == 2
    assert is_isomorphic(ap.target, m["P2"])[0]
    assert ap.map.matrix.rows == 1 and not ap.map.is_zero()
    none = left_add_approximation(m["S1"], m["P2"])
    assert none.target.dim == 0


def test_approximation_of_summand_splits(a2_ws):
    m = a2_ws.modules
    ap = left_add_approximation(m["S1"], m["T"])
    assert ap.map.matrix.rows == 1
    assert not ap.map.is_zero()


def test_coresolutions(a2_ws, n3_ws):
    m = a2_ws.modules
    assert add_coresolution(m["T"], m["T"], 1).length == 0
    cr = add_coresolution(regular_module(a2_ws.algebra), m["T"], 1)
    assert cr.length == 1
    for x in cr.terms:
        assert in_add(x, m["T"])
    assert is_exact(cr.complex(include_module=True))
    m3 = n3_ws.modules
    cr3 = add_coresolution(m3["P3"], m3["T"], 2)
    assert cr3.length == 2
    assert [x.dim for x in cr3.terms] == [2, 2, 1]
    assert is_isomorphic(cr3.terms[0], m3["P2"])[0]
    assert is_isomorphic(cr3.terms[1], m3["P1"])[0]
    assert is_isomorphic(cr3.terms[2], m3["S1"])[0]
    with pytest.raises(CoresolutionError):
        add_coresolution(m3["P3"], m3["T"], 1)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_resolve_complex_is_quasi_iso(n3_ws, seed):
    c = random_complex(n3_ws.algebra, seed, max_dim=4, degrees=(-1, 1))
    bottom = c.low - 2
    cr = resolve_complex(c, bottom)
    for k in range(bottom, c.high + 1):
        assert is_projective(cr.projectives[k]) or cr.projectives[k].dim == 0
    # the resolution (with the bottom kernel attached) maps quasi-isomorphically onto c
    terms = [cr.omega] + [cr.projectives[k] for k in range(bottom, c.high + 1)]
    diffs = [cr.omega_incl] + [cr.diffs[k] for k in range(bottom, c.high)]
    P = BoundedComplex(c.algebra, bottom - 1, terms, diffs)
    P.validate()
    phi = ChainMap(P, c, {k: cr.phi[k] for k in range(max(bottom, c.low), c.high + 1)})
    phi.validate()
    assert quasi_iso(phi)


def test_direct_sum_of_resolutions_adds_ext(a2_ws):
    m = a2_ws.modules
    double, _, _ = direct_sum([m["S2"], m["S2"]])
    assert ext_dim(m["T"], double, 1) == 2
