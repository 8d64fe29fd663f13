import json

import pytest

from tiltlab.derived import (
    WindowError,
    classical_probe,
    counit_check,
    e_membership,
    lg,
    random_complex,
    rh,
    unit_check,
)
from tiltlab.homology import BoundedComplex, homology, homology_dim, is_exact
from tiltlab.repmod import FdModule, canonical_modules, is_isomorphic, regular_module
from tiltlab.tiltcore import ext_dims_T, ext_module, functor_H, tor_dims_T


def dims(c, lo, hi):
    return [homology_dim(c, j) for j in range(lo, hi + 1)]


def test_rh_of_t(a2_ctx):
    out = rh(a2_ctx, BoundedComplex.stalk(a2_ctx.T))
    assert is_isomorphic(homology(out, 0), regular_module(a2_ctx.S))[0]
    assert dims(out, 1, 2) == [0, 0]


def test_rh_of_s2(a2_ctx):
    S2 = canonical_modules(a2_ctx.R).simples[1]
    out = rh(a2_ctx, BoundedComplex.stalk(S2))
    assert dims(out, 0, 1) == [0, 1]


def test_rh_of_exact(a2_ws, a2_ctx):
    P1 = a2_ws.modules["P1"]
    ex = BoundedComplex(a2_ws.algebra, 0, [P1, P1], [P1.identity()])
    assert is_exact(rh(a2_ctx, ex))


def test_rh_rejects_s_complex(a2_ctx):
    with pytest.raises(ValueError):
        rh(a2_ctx, BoundedComplex.stalk(regular_module(a2_ctx.S)))


def test_lg_of_s(a2_ctx):
    out = lg(a2_ctx, BoundedComplex.stalk(regular_module(a2_ctx.S))).complex
    assert is_isomorphic(homology(out, 0), a2_ctx.T)[0]
    assert all(homology_dim(out, j) == 0 for j in out.degrees() if j != 0)


def test_lg_of_h_perp(a2_ctx):
    I = canonical_modules(a2_ctx.R).injectives[1]
    h = functor_H(a2_ctx, I).module
    out = lg(a2_ctx, BoundedComplex.stalk(h)).complex
    assert is_isomorphic(homology(out, 0), I)[0]
    assert sum(homology_dim(out, j) for j in out.degrees()) == I.dim


def test_lg_of_ext_stalk(a2_ctx):
    S2 = canonical_modules(a2_ctx.R).simples[1]
    e = ext_module(a2_ctx, S2, 1)
    out = lg(a2_ctx, BoundedComplex.stalk(e)).complex
    assert is_isomorphic(homology(out, -1), S2)[0]
    assert homology_dim(out, 0) == 0


def test_lg_window(a2_ctx):
    nc = BoundedComplex.stalk(regular_module(a2_ctx.S))
    with pytest.raises(WindowError):
        lg(a2_ctx, nc, (0, 0))
    wide = lg(a2_ctx, nc, (-4, 1))
    assert wide.window == (-4, 1)
    assert dims(wide.complex, -4, 1) == [0, 0, 0, 0, a2_ctx.T.dim, 0]


def test_counit_examples(a2_ctx, a2_ws):
    I = canonical_modules(a2_ctx.R).injectives[0]
    assert counit_check(a2_ctx, BoundedComplex.stalk(I)).passed
    S2 = canonical_modules(a2_ctx.R).simples[1]
    rep = counit_check(a2_ctx, BoundedComplex.stalk(S2))
    assert rep.passed
    assert dims(rh(a2_ctx, BoundedComplex.stalk(S2)), 0, 1) == [0, 1]
    P1 = a2_ws.modules["P1"]
    ex = BoundedComplex(a2_ws.algebra, 0, [P1, P1], [P1.identity()])
    assert counit_check(a2_ctx, ex).passed


def test_e_membership(a2_ctx):
    assert e_membership(a2_ctx, BoundedComplex.zero(a2_ctx.S))
    assert not e_membership(a2_ctx, BoundedComplex.stalk(regular_module(a2_ctx.S)))


def test_unit_examples(a2_ctx, n3_ctx):
    assert unit_check(a2_ctx, BoundedComplex.stalk(regular_module(a2_ctx.S))).passed
    e = ext_module(a2_ctx, canonical_modules(a2_ctx.R).simples[1], 1)
    assert unit_check(a2_ctx, BoundedComplex.stalk(e)).passed
    e3 = ext_module(n3_ctx, canonical_modules(n3_ctx.R).simples[2], 2)
    assert unit_check(n3_ctx, BoundedComplex.stalk(e3)).passed


def test_classical_probe_simples(n3_ctx):
    testset = [BoundedComplex.stalk(s) for s in canonical_modules(n3_ctx.S).simples]
    out = classical_probe(n3_ctx, testset)
    assert out["passed"], out["counterexamples"]


def test_classical_probe_exact_member(a2_ctx):
    P = regular_module(a2_ctx.S)
    ex = BoundedComplex(a2_ctx.S, 0, [P, P], [P.identity()])
    out = classical_probe(a2_ctx, [ex])
    assert out["passed"]
    assert out["rows"][0]["in_E"] and not out["rows"][0]["nonzero_homology"]


@pytest.mark.parametrize("which", ["a2_ctx", "n3_ctx"])
def test_hypercohomology_on_stalks(which, request):
    ctx = request.getfixturevalue(which)
    can = canonical_modules(ctx.R)
    for m in can.simples + can.projectives + can.injectives:
        out = rh(ctx, BoundedComplex.stalk(m))
        assert dims(out, 0, ctx.n) == ext_dims_T(ctx, m)
    for s in canonical_modules(ctx.S).simples:
        out = lg(ctx, BoundedComplex.stalk(s)).complex
        assert dims(out, -ctx.n, 0)[::-1] == tor_dims_T(ctx, s)


@pytest.mark.parametrize("which", ["a2_ctx", "n3_ctx"])
def test_lg_homology_lives_in_window(which, request):
    ctx = request.getfixturevalue(which)
    for seed in range(5):
        nc = random_complex(ctx.S, seed)
        out = lg(ctx, nc).complex
        for j in out.degrees():
            if not (nc.low - ctx.n <= j <= nc.high):
                assert homology_dim(out, j) == 0


def test_random_complex_is_reproducible(n3_ctx):
    a = random_complex(n3_ctx.R, 7)
    b = random_complex(n3_ctx.R, 7)
    a.validate()
    assert a.to_json() == b.to_json()
    assert a.low >= -3 and a.high <= 3
    assert all(t.dim <= 6 for t in a.terms)


@pytest.mark.parametrize("seed", range(6))
def test_counit_shift_compatible(a2_ctx, seed):
    c = random_complex(a2_ctx.R, seed)
    assert counit_check(a2_ctx, c).passed == counit_check(a2_ctx, c.shift(1)).passed


def test_report_json_roundtrip(a2_ctx):
    rep = counit_check(a2_ctx, random_complex(a2_ctx.R, 3), seed=3)
    obj = rep.to_json()
    assert json.loads(json.dumps(obj)) == obj
    assert set(obj) >= {"degrees", "input_dims", "output_dims", "verdicts", "window", "seed"}


def test_zero_complex(a2_ctx):
    z = BoundedComplex.zero(a2_ctx.R)
    assert counit_check(a2_ctx, z).passed
    assert FdModule.zero(a2_ctx.S).dim == 0


def test_lg_for_zero_tilting(reg_ctx):
    # T = R: lg must not truncate away the lowest homology
    for s in canonical_modules(reg_ctx.S).simples:
        out = lg(reg_ctx, BoundedComplex.stalk(s)).complex
        assert homology_dim(out, 0) == 1
    assert unit_check(reg_ctx, BoundedComplex.stalk(regular_module(reg_ctx.S))).passed
