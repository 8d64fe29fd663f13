"""Derived functors RH and LG on bounded complexes and the counit/unit checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Algebra, primitive_idempotents
from .exactla import Coordinates, ExactMatrix, kernel_basis, row_basis, vstack
from .homology import (
    BoundedComplex,
    ComplexError,
    ComplexResolution,
    homology,
    homology_dim,
    resolve_complex,
    tensor_over,
)
from .repmod import (
    FdModule,
    HomSpace,
    ProjectiveModule,
    canonical_modules,
    direct_sum,
    is_isomorphic,
    iso_indecomposables,
    submodule,
)
from .tiltcore import TiltingContext, rh_complex


class WindowError(ComplexError):
    pass


def rh(ctx: TiltingContext, c: BoundedComplex) -> BoundedComplex:
    """``RH(c)`` as ``Hom(P•(T), c)`` with right S-action by precomposition."""
    if c.algebra is not ctx.R:
        raise ComplexError("rh needs a complex over R")
    return rh_complex(ctx, c).complex


@dataclass
class LGResult:
    complex: BoundedComplex
    window: tuple
    resolution: ComplexResolution


def _idempotent_blocks(ctx: TiltingContext):
    key = "eT"
    if key not in ctx._cache:
        idems = primitive_idempotents(ctx.S)
        bases = [row_basis(ctx.bimodule.left_of(e)) for e in idems]
        mods = [submodule(ctx.T, b)[0] for b in bases]
        coords = [Coordinates(b) if b.rows else None for b in bases]
        ctx._cache[key] = (bases, mods, coords)
    return ctx._cache[key]


def _g_projective(ctx: TiltingContext, P: ProjectiveModule):
    """``P (x)_S T`` via ``e_i S (x) T = e_i T``; returns the module and block offsets."""
    bases, mods, _ = _idempotent_blocks(ctx)
    parts = [mods[i] for i in P.summands]
    total, _, _ = direct_sum(parts, algebra=ctx.R)
    offs = list(np.cumsum([0] + [m.dim for m in parts]))
    return total, offs


def _g_vectors(ctx: TiltingContext, P: ProjectiveModule, offs, vec_rows: ExactMatrix, tvecs: ExactMatrix) -> ExactMatrix:
    """Images of ``x (x) y`` in ``G(P)`` for ``x`` a row of ``vec_rows`` (in P) and ``y`` a row of ``tvecs`` (in T).

    Row order is ``x``-major.  ``x (x) y -> sum_t x_t . y`` lands in the block of summand ``t``.
    """
    f = ctx.field
    bases, _, coords = _idempotent_blocks(ctx)
    dim = int(offs[-1])
    out = f.zeros((vec_rows.rows * tvecs.rows, dim))
    for a in range(vec_rows.rows):
        comps = P.components(vec_rows[a])
        for t, i in enumerate(P.summands):
            if comps[t].is_zero() or coords[i] is None:
                continue
            img = tvecs @ ctx.bimodule.left_of(comps[t])
            out[a * tvecs.rows:(a + 1) * tvecs.rows, offs[t]:offs[t + 1]] = coords[i].coords(img).a
    return ExactMatrix.wrap(f, out)


def lg(ctx: TiltingContext, nc: BoundedComplex, window: tuple | None = None) -> LGResult:
    """``LG(nc)``: resolve ``nc`` by projectives down to the window bottom and tensor with T.

    The kernel left at the bottom is a ``(low - bottom)``-th syzygy, hence G-acyclic once
    ``low - bottom >= max(n, 1)`` (Tor vanishes above the length of the resolution of ``_S T``).
    """
    if nc.algebra is not ctx.S:
        raise ComplexError("lg needs a complex over S")
    n = ctx.n
    need = (nc.low - n, nc.high)
    if window is None:
        window = need
    lo, hi = window
    if lo > need[0] or hi < need[1]:
        raise WindowError(f"window {window} does not contain {need}")
    # Omega is only a syzygy (hence G-acyclic) when the bottom lies strictly below nc; this matters for n = 0
    bottom = min(lo, nc.low - 1)
    cr = resolve_complex(nc, bottom)
    f = ctx.field
    T = ctx.T
    tvecs = ExactMatrix.identity(f, T.dim)
    degs = list(range(bottom, nc.high + 1))
    gmods, goffs = {}, {}
    for k in degs:
        gmods[k], goffs[k] = _g_projective(ctx, cr.projectives[k])
    diffs = []
    for k in degs[:-1]:
        P, Q = cr.projectives[k], cr.projectives[k + 1]
        D = cr.diffs[k]
        bases, _, _ = _idempotent_blocks(ctx)
        rows = []
        for t, i in enumerate(P.summands):
            u = P.generator(t) @ D
            # e_i T -> G(Q): y -> u . y
            rows.append(_g_vectors(ctx, Q, goffs[k + 1], u, bases[i]))
        M = vstack(rows, field=f, cols=gmods[k + 1].dim) if rows else ExactMatrix.zeros(f, 0, gmods[k + 1].dim)
        diffs.append(M)
    # the bottom kernel, tensored directly
    tr = tensor_over(cr.omega, ctx.bimodule)
    Pb = cr.projectives[bottom]
    if tr.module.dim:
        plain = _g_vectors(ctx, Pb, goffs[bottom], cr.omega_incl, tvecs)
        om_map = tr.section @ plain
    else:
        om_map = ExactMatrix.zeros(f, 0, gmods[bottom].dim)
    terms = [tr.module] + [gmods[k] for k in degs]
    cx = BoundedComplex(ctx.R, bottom - 1, terms, [om_map] + diffs, name="LG")
    return LGResult(cx, (lo, hi), cr)


# ---------------------------------------------------------------------------
# reports


@dataclass
class DerivedReport:
    kind: str
    degrees: list
    input_dims: list
    output_dims: list
    verdicts: list
    window: tuple
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(self.verdicts)

    def to_json(self):
        return {"kind": self.kind, "degrees": self.degrees, "input_dims": self.input_dims,
                "output_dims": self.output_dims, "verdicts": self.verdicts, "window": list(self.window),
                "seed": self.seed, "passed": self.passed}


def _compare(kind: str, inp: BoundedComplex, out: BoundedComplex, lo: int, hi: int, seed=None) -> DerivedReport:
    degs = list(range(lo, hi + 1))
    idims, odims, verdicts = [], [], []
    for j in degs:
        a, b = homology_dim(inp, j), homology_dim(out, j)
        idims.append(a)
        odims.append(b)
        if a != b:
            verdicts.append(False)
        elif a == 0:
            verdicts.append(True)
        else:
            ok, _ = is_isomorphic(homology(out, j), homology(inp, j))
            verdicts.append(bool(ok))
    return DerivedReport(kind, degs, idims, odims, verdicts, (lo, hi), seed)


def counit_check(ctx: TiltingContext, c: BoundedComplex, seed: int | None = None) -> DerivedReport:
    """Degreewise ``H^j(LG(RH(c))) ≅ H^j(c)``."""
    r = rh(ctx, c)
    out = lg(ctx, r)
    lo = min(out.complex.low, c.low)
    hi = max(out.complex.high, c.high)
    return _compare("counit", c, out.complex, lo, hi, seed)


def unit_check(ctx: TiltingContext, nc: BoundedComplex, seed: int | None = None) -> DerivedReport:
    """Degreewise ``H^j(RH(LG(nc))) ≅ H^j(nc)``."""
    out = lg(ctx, nc)
    back = rh(ctx, out.complex)
    lo = min(back.low, nc.low)
    hi = max(back.high, nc.high)
    return _compare("unit", nc, back, lo, hi, seed)


def e_membership(ctx: TiltingContext, nc: BoundedComplex) -> bool:
    """True iff ``LG(nc)`` has no homology in ``[low - n, high]``, which is where it can live."""
    out = lg(ctx, nc)
    return all(homology_dim(out.complex, j) == 0 for j in range(nc.low - ctx.n, nc.high + 1))


def has_homology(c: BoundedComplex) -> bool:
    return any(homology_dim(c, j) for j in c.degrees())


def classical_probe(ctx: TiltingContext, testset: Sequence[BoundedComplex]) -> dict:
    rows, bugs = [], []
    for k, nc in enumerate(testset):
        nonzero = has_homology(nc)
        inE = e_membership(ctx, nc)
        u = unit_check(ctx, nc)
        ok = (inE != nonzero) and u.passed
        rows.append({"index": k, "name": nc.name, "nonzero_homology": nonzero, "in_E": inE,
                     "unit_ok": u.passed})
        if not ok:
            bugs.append(k)
    return {"passed": not bugs, "rows": rows, "counterexamples": bugs}


# ---------------------------------------------------------------------------
# random complexes


def indecomposable_pool(a: Algebra) -> list[FdModule]:
    """Projectives, injectives and simples, one per isomorphism class."""
    can = canonical_modules(a)
    pool: list[FdModule] = []
    for m in can.projectives + can.injectives + can.simples:
        if not any(iso_indecomposables(m, x) is not None for x in pool):
            pool.append(m)
    return pool


def random_complex(a: Algebra, seed: int, max_dim: int = 6, degrees: tuple = (-3, 3),
                   pool: Sequence[FdModule] | None = None) -> BoundedComplex:
    """Seeded bounded complex whose terms are sums of pool modules and with ``d∘d = 0``.

    ``d^i`` is a random element of the subspace of ``Hom(C^i, C^{i+1})`` killed by
    precomposition with ``d^{i-1}``.
    """
    rng = np.random.default_rng(seed)
    f = a.field
    pool = list(pool) if pool is not None else indecomposable_pool(a)
    dlo, dhi = degrees
    lo = int(rng.integers(dlo, dhi + 1))
    hi = int(rng.integers(lo, min(dhi, lo + 3) + 1))
    terms = []
    for _ in range(lo, hi + 1):
        target = int(rng.integers(1, max_dim + 1))
        parts, d = [], 0
        for _ in range(4):
            m = pool[int(rng.integers(len(pool)))]
            if d + m.dim <= target:
                parts.append(m)
                d += m.dim
        t, _, _ = direct_sum(parts, algebra=a)
        terms.append(t)
    diffs = []
    prev = None
    for k in range(len(terms) - 1):
        hs = HomSpace(terms[k], terms[k + 1])
        if hs.dim == 0:
            D = ExactMatrix.zeros(f, terms[k].dim, terms[k + 1].dim)
        else:
            if prev is not None and prev.rows and not prev.is_zero():
                cons = ExactMatrix.wrap(f, np.stack([(prev @ F).a.reshape(-1) for F in hs.basis]))
                allowed = kernel_basis(cons)
            else:
                allowed = ExactMatrix.identity(f, hs.dim)
            if allowed.rows == 0:
                D = ExactMatrix.zeros(f, terms[k].dim, terms[k + 1].dim)
            else:
                w = ExactMatrix.wrap(f, f.random_array(rng, (1, allowed.rows)))
                D = hs.combine(w @ allowed)
        diffs.append(D)
        prev = D
    return BoundedComplex(a, lo, terms, diffs, name=f"rand{seed}")
