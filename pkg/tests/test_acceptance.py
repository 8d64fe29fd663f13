"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (``pytest tests/test_acceptance.py -s`` shows the lines inline) or directly with
``python3 tests/test_acceptance.py``.  Each criterion loads its fixtures afresh so that the timing
budget covers the whole computation.
"""

import sys
import time

import pytest

from tiltlab.algebra import is_isomorphic_algebra_map
from tiltlab.cli import load_fixture
from tiltlab.derived import (
    classical_probe,
    counit_check,
    e_membership,
    has_homology,
    lg,
    random_complex,
    rh,
)
from tiltlab.exactla import inverse, vstack
from tiltlab.homology import BoundedComplex, homology, homology_dim
from tiltlab.repmod import (
    canonical_modules,
    direct_sum,
    in_add,
    indecomposable_summands,
    is_isomorphic,
    regular_module,
    restrict,
)
from tiltlab.tiltcore import (
    FormalExactSequence,
    certify_tilting,
    ext_dims_T,
    ext_module,
    good_tilt_formal,
    ke_index,
    lemma13_check,
    tor_T,
    tor_dims_T,
)

RANDOM_PER_FIXTURE = 20


def context(name):
    ws = load_fixture(name)
    t = ws.tilting
    return ws, certify_tilting(ws.algebra, ws.modules[t["module"]], t["n"])


def stalks(mods):
    return [BoundedComplex.stalk(m) for m in mods]


def all_canonical(a):
    can = canonical_modules(a)
    return can.simples + can.projectives + can.injectives


# ---------------------------------------------------------------- criteria
# each returns (ok, detail, budget in seconds)


def crit1():
    ws, ctx = context("fix_a2")
    m = ws.modules
    t, _, _ = direct_sum([m["P1"], m["S1"]])
    shape = is_isomorphic(ctx.T, t)[0]
    ok = shape and ctx.report["certified"] and ctx.pd == 1 and ctx.S.dim == 3 and ctx.coresolution.length == 1
    return ok, f"pd={ctx.pd} End={ctx.S.dim} coresolution={ctx.coresolution.length}", 1.0


def crit2():
    ws, ctx = context("fix_n3")
    m = ws.modules
    summands = indecomposable_summands(ctx.T)
    shape = len(summands) == 3 and all(in_add(m[k], ctx.T) for k in ("S1", "P1", "P2"))
    ok = shape and ctx.report["certified"] and ctx.pd == 2 and ctx.S.dim == 6
    return ok, f"pd={ctx.pd} End={ctx.S.dim} (expected 6)", 1.0


def crit3():
    parts = []
    ok = True
    for name in ("fix_a2", "fix_n3"):
        _, ctx = context(name)
        d = ctx.dagger
        good = (d.exact and d.projective_terms and d.length <= ctx.n and d.injective
                and d.end_dim == ctx.R.dim and d.double_end_ok)
        ok = ok and good
        parts.append(f"{name}: length={d.length} End(_S T)={d.end_dim}/{ctx.R.dim}")
    return ok, "; ".join(parts), 1.0


def crit4():
    count, bad = 0, []
    for name in ("fix_a2", "fix_n3"):
        _, ctx = context(name)
        mods = canonical_modules(ctx.R).injectives + indecomposable_summands(ctx.T)
        for m in mods:
            for p in canonical_modules(ctx.S).projectives:
                r = lemma13_check(ctx, m, p)
                count += 1
                if not r["passed"]:
                    bad.append((name, m.name, r["failures"]))
    return not bad, f"{count} pairs checked, failures={bad}", 2.0


def _roundtrip(name, simple_index, i):
    _, ctx = context(name)
    m = canonical_modules(ctx.R).simples[simple_index]
    k = ke_index(ctx, m)
    e = ext_module(ctx, m, i)
    back = tor_T(ctx, e, i).module
    ok = k.index == i and e.dim == 1 and is_isomorphic(back, m)[0]
    return ok, f"{name}: KE index {k.index}, dim Ext^{i}={e.dim}, Tor_{i} dim {back.dim}"


def crit5():
    a = _roundtrip("fix_a2", 1, 1)
    b = _roundtrip("fix_n3", 2, 2)
    return a[0] and b[0], f"{a[1]}; {b[1]}", 2.0


def crit6():
    total, bad = 0, []
    for name in ("fix_a2", "fix_n3"):
        _, ctx = context(name)
        suite = [random_complex(ctx.R, seed) for seed in range(RANDOM_PER_FIXTURE)]
        suite += stalks(all_canonical(ctx.R))
        for k, c in enumerate(suite):
            total += 1
            if not counit_check(ctx, c).passed:
                bad.append((name, k))
    return not bad, f"{total} complexes, failures={bad}", 30.0


def crit7():
    total, bad = 0, []
    for name in ("fix_a2", "fix_n3"):
        _, ctx = context(name)
        suite = stalks(all_canonical(ctx.S))
        suite += [random_complex(ctx.S, seed) for seed in range(RANDOM_PER_FIXTURE)]
        out = classical_probe(ctx, suite)
        total += len(suite)
        bad += [(name, k) for k in out["counterexamples"]]
        # every nonzero member really is outside E
        for c in suite:
            if has_homology(c) and e_membership(ctx, c):
                bad.append((name, c.name))
    return not bad, f"{total} complexes, counterexamples={bad}", 30.0


GOOD_T = {
    0: "T0",
    1: "T0 ⊕ T1^(ω)",
    2: "T0 ⊕ T1^(ω) ⊕ T2^(ω)",
    3: "T0 ⊕ T1^(ω) ⊕ T2^(ω) ⊕ T3^(ω)",
}
GOOD_TRACE = {
    0: [],
    1: [],
    2: ["0 → R → T0 → T1 ⊕ T2^(ω) → T2^(ω) → 0"],
    3: ["0 → R → T0 → T1 → T2 ⊕ T3^(ω) → T3^(ω) → 0",
        "0 → R → T0 → T1 ⊕ T2^(ω) ⊕ T3^(ω) → T2^(ω) ⊕ T3^(ω) → T3^(ω) → 0"],
}


def crit8():
    ok = True
    for n in range(4):
        r = good_tilt_formal(FormalExactSequence.from_symbols([f"T{i}" for i in range(n + 1)]))
        ok = ok and str(r.t_prime) == GOOD_T[n]
        ok = ok and [str(s.absorbed) for s in r.trace] == GOOD_TRACE[n]
    ending = "→ T1 ⊕ T2^(ω) → T2^(ω) → 0"
    r2 = good_tilt_formal(FormalExactSequence.from_symbols(["T0", "T1", "T2"]))
    ok = ok and str(r2.trace[0].absorbed).endswith(ending)
    return ok, "n = 0..3", 0.1


def crit9():
    bad, checked = [], 0
    for name in ("fix_a2", "fix_n3"):
        ws, ctx = context(name)
        mods = list(ws.modules.values()) + all_canonical(ctx.R)
        for m in mods:
            h = rh(ctx, BoundedComplex.stalk(m))
            got = [homology_dim(h, i) for i in range(ctx.n + 1)]
            checked += 1
            if got != ext_dims_T(ctx, m):
                bad.append((name, m.name, got))
        for s in canonical_modules(ctx.S).simples:
            out = lg(ctx, BoundedComplex.stalk(s)).complex
            got = [homology_dim(out, -i) for i in range(ctx.n + 1)]
            checked += 1
            if got != tor_dims_T(ctx, s):
                bad.append((name, s.name, got))
    return not bad, f"{checked} stalks, mismatches={bad}", 5.0


def crit10():
    ws, ctx = context("fix_reg")
    R, S, T = ctx.R, ctx.S, ctx.T
    reg = regular_module(R)
    ok, g = is_isomorphic(T, reg)
    if not ok:
        return False, "T is not isomorphic to R", 1.0
    G, Gi = g.matrix, inverse(g.matrix)
    # s -> s(1) after moving T onto R along G
    phi = vstack([R.unit @ Gi @ L @ G for L in ctx.left])
    # H(m) = Hom(T, m) is a right S-module with (f.s)(t) = f(s t); under phi this is m itself
    iso = is_isomorphic_algebra_map(S, R, phi)
    back = inverse(phi)
    to_r = [back[j] for j in range(R.dim)]
    bad = []
    r_suite = list(ws.complexes.values()) + stalks(all_canonical(R))
    r_suite += [random_complex(R, seed) for seed in range(5)]
    for c in r_suite:
        out = rh(ctx, c)
        for j in range(min(c.low, out.low), max(c.high, out.high) + 1):
            if not is_isomorphic(restrict(homology(out, j), R, to_r), homology(c, j))[0]:
                bad.append(("rh", c.name, j))
    s_suite = stalks(all_canonical(S)) + [random_complex(S, seed) for seed in range(5)]
    for nc in s_suite:
        out = lg(ctx, nc).complex
        for j in range(min(nc.low, out.low), max(nc.high, out.high) + 1):
            if not is_isomorphic(homology(out, j), restrict(homology(nc, j), R, to_r))[0]:
                bad.append(("lg", nc.name, j))
    return iso and not bad, f"S≅R={iso}, {len(r_suite) + len(s_suite)} complexes, failures={bad}", 1.0


CRITERIA = [
    (1, "FIX-A2 certification", crit1),
    (2, "FIX-N3 certification", crit2),
    (3, "resolution of _S T", crit3),
    (4, "functor identities on T-perp", crit4),
    (5, "Miyashita roundtrips", crit5),
    (6, "counit suite", crit6),
    (7, "classical probe", crit7),
    (8, "good-tilting constructor", crit8),
    (9, "hypercohomology consistency", crit9),
    (10, "FIX-REG degeneracy", crit10),
]


def evaluate(num, title, fn):
    start = time.perf_counter()
    try:
        ok, detail, budget = fn()
    except Exception as exc:  # a crash is a failure of the criterion, reported like any other
        ok, detail, budget = False, f"{type(exc).__name__}: {exc}", float("inf")
    took = time.perf_counter() - start
    timely = took < budget
    passed = ok and timely
    line = f"CRITERION {num}: {'PASS' if passed else 'FAIL'} [{title}] {detail} ({took:.2f}s, budget {budget:g}s)"
    if ok and not timely:
        line += " over budget"
    return passed, line


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion{n}" for n, _, _ in CRITERIA])
def test_criterion(num, title, fn, capsys):
    passed, line = evaluate(num, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
