"""Bounded cochain complexes, resolutions, Ext/Tor and add(T)-coresolutions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import Algebra, primitive_idempotents
from .exactla import Coordinates, ExactMatrix, FieldSpec, hstack, kernel_basis, rank, row_basis, vstack
from .repmod import (
    _extend,
    FdModule,
    HomSpace,
    ModuleError,
    ModuleMap,
    ProjectiveModule,
    decompose,
    direct_sum,
    iso_indecomposables,
    morphism_parts,
    projective_cover,
    quotient,
    submodule,
)


class ComplexError(ValueError):
    pass


class ResolutionLengthError(ComplexError):
    pass


class CoresolutionError(ComplexError):
    pass


_GROUND: dict = {}


def ground_algebra(f: FieldSpec) -> Algebra:
    """The field itself as a one-dimensional algebra; modules over it are vector spaces."""
    if f not in _GROUND:
        a = Algebra(f, f.array([[[1]]]), f.array([1]), ["1"])
        a._radical = ExactMatrix.zeros(f, 0, 1)
        a._idempotents = [a.unit]
        _GROUND[f] = a
    return _GROUND[f]


def vector_space(f: FieldSpec, d: int) -> FdModule:
    a = ground_algebra(f)
    return FdModule(a, f.eye(d).reshape(1, d, d), name=f"k^{d}")


# ---------------------------------------------------------------------------
# complexes


class BoundedComplex:
    """Cochain complex with terms in degrees ``low..high``.

    ``diffs[i]`` is ``d^i: C^i -> C^{i+1}`` for ``low <= i < high``.
    """

    def __init__(self, algebra: Algebra, low: int, terms: Sequence[FdModule],
                 diffs: Sequence[ModuleMap | ExactMatrix] | None = None, name: str = ""):
        self.algebra = algebra
        self.low = int(low)
        self.terms = list(terms)
        if not self.terms:
            self.terms = [FdModule.zero(algebra)]
        self.high = self.low + len(self.terms) - 1
        self.name = name
        diffs = list(diffs) if diffs is not None else []
        if len(diffs) != len(self.terms) - 1:
            raise ComplexError(f"need {len(self.terms) - 1} differentials, got {len(diffs)}")
        self.diffs = []
        for k, d in enumerate(diffs):
            src, tgt = self.terms[k], self.terms[k + 1]
            if isinstance(d, ModuleMap):
                d = d.matrix
            self.diffs.append(ModuleMap(src, tgt, d))
        for t in self.terms:
            if t.algebra is not algebra:
                raise ComplexError("complex terms over different algebras")

    def __repr__(self):
        dims = [t.dim for t in self.terms]
        return f"<BoundedComplex [{self.low},{self.high}] dims={dims}>"

    @property
    def field(self):
        return self.algebra.field

    def term(self, i: int) -> FdModule:
        if self.low <= i <= self.high:
            return self.terms[i - self.low]
        return FdModule.zero(self.algebra)

    def d(self, i: int) -> ModuleMap:
        if self.low <= i < self.high:
            return self.diffs[i - self.low]
        return self.term(i).zero_map(self.term(i + 1))

    def degrees(self) -> range:
        return range(self.low, self.high + 1)

    def validate(self) -> None:
        for t in self.terms:
            t.validate()
        for dd in self.diffs:
            dd.validate()
        for i in range(self.low, self.high - 1):
            if not (self.d(i).matrix @ self.d(i + 1).matrix).is_zero():
                raise ComplexError(f"d∘d != 0 at degree {i}")

    @classmethod
    def stalk(cls, m: FdModule, degree: int = 0) -> "BoundedComplex":
        return cls(m.algebra, degree, [m], [], name=m.name)

    @classmethod
    def zero(cls, algebra: Algebra) -> "BoundedComplex":
        return cls(algebra, 0, [FdModule.zero(algebra)])

    def shift(self, k: int) -> "BoundedComplex":
        """``C[k]`` with ``C[k]^i = C^{i+k}`` and differential ``(-1)^k d``."""
        sign = -1 if k % 2 else 1
        return BoundedComplex(self.algebra, self.low - k, self.terms,
                              [dd.matrix.scale(sign) for dd in self.diffs], name=f"{self.name}[{k}]")

    def homology_dims(self, lo: int | None = None, hi: int | None = None) -> dict:
        lo = self.low - 1 if lo is None else lo
        hi = self.high + 1 if hi is None else hi
        return {i: homology_dim(self, i) for i in range(lo, hi + 1)}

    def to_json(self) -> dict:
        return {"low": self.low, "dims": [t.dim for t in self.terms],
                "diffs": [dd.matrix.tolist() for dd in self.diffs]}


class ChainMap:
    def __init__(self, source: BoundedComplex, target: BoundedComplex, components: dict):
        self.source = source
        self.target = target
        self.components = {}
        for i in range(min(source.low, target.low), max(source.high, target.high) + 1):
            c = components.get(i)
            s, t = source.term(i), target.term(i)
            if c is None:
                c = ExactMatrix.zeros(source.field, s.dim, t.dim)
            if isinstance(c, ModuleMap):
                c = c.matrix
            self.components[i] = ModuleMap(s, t, c)

    def component(self, i: int) -> ModuleMap:
        if i in self.components:
            return self.components[i]
        return self.source.term(i).zero_map(self.target.term(i))

    def validate(self) -> None:
        for i, c in self.components.items():
            c.validate()
            lhs = self.source.d(i).matrix @ self.component(i + 1).matrix
            rhs = c.matrix @ self.target.d(i).matrix
            if lhs != rhs:
                raise ComplexError(f"chain map square fails at degree {i}")

    @classmethod
    def identity(cls, c: BoundedComplex) -> "ChainMap":
        return cls(c, c, {i: c.term(i).identity() for i in c.degrees()})


@dataclass
class HomologyData:
    module: FdModule
    cycles: ExactMatrix  # basis rows of ker d^i in C^i coordinates
    projection: ExactMatrix  # cycles-coordinates -> homology coordinates
    section: ExactMatrix  # homology coordinates -> cycles-coordinates


def homology_data(c: BoundedComplex, i: int) -> HomologyData:
    f = c.field
    Ci = c.term(i)
    Z = kernel_basis(c.d(i).matrix)
    zmod, _ = submodule(Ci, Z) if Z.rows else (FdModule.zero(c.algebra), None)
    B = c.d(i - 1).matrix
    if Z.rows and B.rows and not B.is_zero():
        Bz = Coordinates(Z).coords(row_basis(B))
    else:
        Bz = ExactMatrix.zeros(f, 0, Z.rows)
    h, proj, sect = quotient(zmod, Bz, name=f"H{i}")
    return HomologyData(h, Z, proj.matrix, sect)


def homology(c: BoundedComplex, i: int) -> FdModule:
    return homology_data(c, i).module


def homology_dim(c: BoundedComplex, i: int) -> int:
    di = c.d(i).matrix
    dprev = c.d(i - 1).matrix
    z = c.term(i).dim - (rank(di) if di.rows and di.cols else 0)
    b = rank(dprev) if dprev.rows and dprev.cols else 0
    return z - b


def is_exact(c: BoundedComplex) -> bool:
    return all(homology_dim(c, i) == 0 for i in c.degrees())


def cone(fm: ChainMap) -> BoundedComplex:
    """Mapping cone: ``cone^i = A^{i+1} (+) B^i`` with ``d(a, b) = (-d a, f a + d b)``."""
    A, B = fm.source, fm.target
    lo = min(A.low - 1, B.low)
    hi = max(A.high - 1, B.high)
    terms = []
    for i in range(lo, hi + 1):
        t, _, _ = direct_sum([A.term(i + 1), B.term(i)], algebra=A.algebra)
        terms.append(t)
    diffs = []
    f = A.field
    for i in range(lo, hi):
        a1, b0 = A.term(i + 1), B.term(i)
        a2, b1 = A.term(i + 2), B.term(i + 1)
        top = hstack([A.d(i + 1).matrix.scale(-1), fm.component(i + 1).matrix], field=f, rows=a1.dim)
        bot = hstack([ExactMatrix.zeros(f, b0.dim, a2.dim), B.d(i).matrix], field=f, rows=b0.dim)
        diffs.append(vstack([top, bot], field=f, cols=a2.dim + b1.dim))
    return BoundedComplex(A.algebra, lo, terms, diffs, name="cone")


def quasi_iso(fm: ChainMap) -> bool:
    return is_exact(cone(fm))


# ---------------------------------------------------------------------------
# projective resolutions


@dataclass
class Resolution:
    """Projective resolution ``... -> P_1 -> P_0 -> m`` stored as a complex in degrees ``-len..0``."""

    module: FdModule
    projectives: list[ProjectiveModule]
    maps: list[ModuleMap]  # maps[k]: P_{k+1} -> P_k
    augmentation: ModuleMap  # P_0 -> m
    syzygy: FdModule  # kernel of the last map (zero when complete)
    syzygy_incl: ModuleMap

    @property
    def length(self) -> int:
        return len(self.projectives) - 1

    @property
    def complete(self) -> bool:
        return self.syzygy.dim == 0

    def complex(self) -> BoundedComplex:
        terms = list(reversed(self.projectives))
        diffs = [m.matrix for m in reversed(self.maps)]
        return BoundedComplex(self.module.algebra, -self.length, terms, diffs)


def proj_resolution(m: FdModule, length: int) -> Resolution:
    """Minimal projective resolution computed down to ``P_length`` (or until it stops)."""
    P0, pi = projective_cover(m)
    projs, maps = [P0], []
    parts = morphism_parts(pi)
    K, kin = parts.kernel, parts.kernel_incl
    while K.dim and len(projs) <= length:
        P, cov = projective_cover(K)
        maps.append(ModuleMap(P, projs[-1], cov.matrix @ kin.matrix))
        projs.append(P)
        parts = morphism_parts(cov)
        K, kin = parts.kernel, ModuleMap(parts.kernel, P, parts.kernel_incl.matrix)
    return Resolution(m, projs, maps, pi, K, kin)


def min_proj_resolution(m: FdModule, max_len: int) -> Resolution:
    res = proj_resolution(m, max_len)
    if not res.complete:
        raise ResolutionLengthError(f"projective dimension exceeds max_len={max_len}")
    return res


def hom_from_projective(P: ProjectiveModule, n: FdModule) -> list[ExactMatrix]:
    """Basis of Hom(P, n): generator ``t`` goes to a basis vector of ``n e_t``."""
    idems = primitive_idempotents(P.algebra)
    f = n.field
    out = []
    zero = ExactMatrix.zeros(f, 1, n.dim)
    for t, i in enumerate(P.summands):
        if n.dim == 0:
            break
        Ne = row_basis(n.act(idems[i]))
        for r in range(Ne.rows):
            images = [zero] * len(P.summands)
            images[t] = Ne[r]
            out.append(P.map_from_generators(n, images).matrix)
    return out


def _hom_basis(p: FdModule, n: FdModule) -> HomSpace:
    if isinstance(p, ProjectiveModule):
        return HomSpace(p, n, hom_from_projective(p, n))
    return HomSpace(p, n)


@dataclass
class ExtResult:
    dim: int
    cocycles: list[ModuleMap]


def ext(m: FdModule, n: FdModule, i: int, resolution: Resolution | None = None) -> ExtResult:
    if i < 0:
        raise ComplexError("ext degree must be non-negative")
    res = resolution if resolution is not None and resolution.length >= i + 1 or \
        (resolution is not None and resolution.complete) else proj_resolution(m, i + 1)
    f = m.field
    if i > res.length:
        return ExtResult(0, [])
    Pi = res.projectives[i]
    Hi = _hom_basis(Pi, n)
    if Hi.dim == 0:
        return ExtResult(0, [])
    # cocycles: f with (P_{i+1} -> P_i) f = 0
    if i < res.length:
        dnext = res.maps[i].matrix
        imgs = [dnext @ F for F in Hi.basis]
        flat = ExactMatrix.wrap(f, np.stack([x.a.reshape(-1) for x in imgs])) if imgs[0].a.size \
            else ExactMatrix.zeros(f, Hi.dim, 0)
        Zc = kernel_basis(flat)
    else:
        Zc = ExactMatrix.identity(f, Hi.dim)
    if Zc.rows == 0:
        return ExtResult(0, [])
    if i == 0:
        Bc = ExactMatrix.zeros(f, 0, Hi.dim)
    else:
        Hp = _hom_basis(res.projectives[i - 1], n)
        dprev = res.maps[i - 1].matrix
        Bc = Hi.coords_many([dprev @ G for G in Hp.basis]) if Hp.dim else ExactMatrix.zeros(f, 0, Hi.dim)
        Bc = row_basis(Bc) if Bc.rows else Bc
    zc = Coordinates(Zc)
    bz = zc.coords(Bc) if Bc.rows else ExactMatrix.zeros(f, 0, Zc.rows)
    # complement of the coboundaries inside the cocycles
    reps = _extend(row_basis(bz) if bz.rows else bz, ExactMatrix.identity(f, Zc.rows))
    maps = [ModuleMap(Pi, n, Hi.combine(r @ Zc)) for r in reps]
    return ExtResult(len(reps), maps)


def ext_dim(m: FdModule, n: FdModule, i: int, resolution: Resolution | None = None) -> int:
    return ext(m, n, i, resolution).dim


# ---------------------------------------------------------------------------
# bimodules and tensor products


class Bimodule:
    """An (S, R)-bimodule: right R-module ``t`` with a commuting left S-action ``x -> x @ left[s]``."""

    def __init__(self, s: Algebra, t: FdModule, left: Sequence[ExactMatrix]):
        self.s = s
        self.r = t.algebra
        self.t = t
        self.left = list(left)
        if len(self.left) != s.dim:
            raise ModuleError("need one left action matrix per basis element of S")
        self._left_arr = np.stack([L.a for L in self.left]) if t.dim else s.field.zeros((s.dim, 0, 0))

    def left_of(self, x: ExactMatrix) -> ExactMatrix:
        return ExactMatrix.wrap(self.s.field, self.s.field.combine(x.a[0], self._left_arr))

    def validate(self) -> None:
        from .repmod import ModuleLawError

        s = self.s
        for i in range(s.dim):
            Li = self.left[i]
            for j in range(self.r.dim):
                Aj = self.t.basis_action(j)
                if Li @ Aj != Aj @ Li:
                    raise ModuleLawError("left and right actions commute", (s.labels[i], self.r.labels[j]))
        # (s s') x = s (s' x): x @ L[s s'] = x @ L[s'] @ L[s]
        for i in range(s.dim):
            for j in range(s.dim):
                prod_ = s.mult(s.basis_element(i), s.basis_element(j))
                if self.left_of(prod_) != self.left[j] @ self.left[i]:
                    raise ModuleLawError("left action is multiplicative", (s.labels[i], s.labels[j]))
        if self.left_of(s.unit) != ExactMatrix.identity(s.field, self.t.dim):
            raise ModuleLawError("unit acts as identity", ("unit",))


@dataclass
class TensorResult:
    module: FdModule
    projection: ExactMatrix  # (n (x)_k t) -> n (x)_S t
    section: ExactMatrix


def _kron(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
    f = x.field
    out = np.kron(x.a, y.a)
    return ExactMatrix.wrap(f, f.reduce(out) if f.is_prime else out)


def tensor_over(n: FdModule, bm: Bimodule) -> TensorResult:
    """``n (x)_S t`` as a right R-module."""
    if n.algebra is not bm.s:
        raise ModuleError("tensor_over: module is not over the bimodule's left algebra")
    f = n.field
    dn, dt = n.dim, bm.t.dim
    R = bm.r
    if dn == 0 or dt == 0:
        z = FdModule.zero(R)
        return TensorResult(z, ExactMatrix.zeros(f, dn * dt, 0), ExactMatrix.zeros(f, 0, dn * dt))
    In, It = ExactMatrix.identity(f, dn), ExactMatrix.identity(f, dt)
    rels = []
    for g in bm.s.generators:
        rels.append(_kron(n.act(g), It) - _kron(In, bm.left_of(g)))
    W = row_basis(vstack(rels))
    plain = FdModule(R, np.stack([_kron(In, bm.t.basis_action(k)).a for k in range(R.dim)]))
    q, proj, sect = quotient(plain, W, name=f"{n.name}⊗T")
    return TensorResult(q, proj.matrix, sect)


def tensor_map(fm: ModuleMap, src: TensorResult, tgt: TensorResult, bm: Bimodule) -> ModuleMap:
    """``f (x) 1`` between tensor products computed by :func:`tensor_over`."""
    f = fm.source.field
    It = ExactMatrix.identity(f, bm.t.dim)
    M = src.section @ _kron(fm.matrix, It) @ tgt.projection if src.module.dim and tgt.module.dim \
        else ExactMatrix.zeros(f, src.module.dim, tgt.module.dim)
    return ModuleMap(src.module, tgt.module, M)


@dataclass
class TorResult:
    dim: int
    module: FdModule


def tor(n: FdModule, bm: Bimodule, i: int, resolution: Resolution | None = None) -> TorResult:
    if i < 0:
        raise ComplexError("tor degree must be non-negative")
    res = resolution if resolution is not None else proj_resolution(n, i + 1)
    if i > res.length:
        return TorResult(0, FdModule.zero(bm.r))
    cx = res.complex()
    tc = tensor_total_complex(cx, bm)
    h = homology(tc, -i)
    return TorResult(h.dim, h)


def tensor_total_complex(nc: BoundedComplex, bm: Bimodule) -> BoundedComplex:
    tens = [tensor_over(t, bm) for t in nc.terms]
    diffs = [tensor_map(nc.diffs[k], tens[k], tens[k + 1], bm).matrix for k in range(len(nc.diffs))]
    return BoundedComplex(bm.r, nc.low, [t.module for t in tens], diffs, name=f"{nc.name}⊗T")


# ---------------------------------------------------------------------------
# total Hom complex


@dataclass
class HomTotal:
    complex: BoundedComplex
    blocks: dict  # degree -> list of ((a, q), HomSpace, offset)


def hom_total_complex(p: BoundedComplex, c: BoundedComplex, left: Callable[[int], Sequence[ExactMatrix]] | None = None,
                      s_algebra: Algebra | None = None) -> HomTotal:
    """Total complex of Hom(p, c), ``d(f) = d_c f - (-1)^j f d_p``.

    With ``left`` (degree -> left S-action matrices on ``p^a``) and ``s_algebra`` the result is a
    complex of right S-modules via ``(f.s)(x) = f(s x)``; otherwise of vector spaces.
    """
    f = c.field
    lo = c.low - p.high
    hi = c.high - p.low
    blocks: dict = {}
    for j in range(lo, hi + 1):
        lst, off = [], 0
        for a in p.degrees():
            q = a + j
            if c.low <= q <= c.high and p.term(a).dim and c.term(q).dim:
                hs = _hom_basis(p.term(a), c.term(q))
                if hs.dim:
                    lst.append(((a, q), hs, off))
                    off += hs.dim
        blocks[j] = (lst, off)
    if s_algebra is not None:
        alg = s_algebra
    else:
        alg = ground_algebra(f)
    terms = []
    for j in range(lo, hi + 1):
        lst, dim = blocks[j]
        if s_algebra is None:
            terms.append(vector_space(f, dim))
            continue
        act = f.zeros((alg.dim, dim, dim))
        for (a, q), hs, off in lst:
            Ls = left(a)
            for k in range(alg.dim):
                imgs = [Ls[k] @ F for F in hs.basis]
                act[k, off:off + hs.dim, off:off + hs.dim] = hs.coords_many(imgs).a
        terms.append(FdModule(alg, act, name=f"Hom^{j}"))
    diffs = []
    for j in range(lo, hi):
        lst, dim = blocks[j]
        lst2, dim2 = blocks[j + 1]
        index2 = {key: (hs, off) for key, hs, off in lst2}
        D = f.zeros((dim, dim2))
        sign = -1 if j % 2 else 1
        for (a, q), hs, off in lst:
            # d_c o f lands in Hom(p^a, c^{q+1}); f o d_p lands in Hom(p^{a-1}, c^q)
            if (a, q + 1) in index2:
                hs2, off2 = index2[(a, q + 1)]
                Dc = c.d(q).matrix
                D[off:off + hs.dim, off2:off2 + hs2.dim] += hs2.coords_many([F @ Dc for F in hs.basis]).a
            if (a - 1, q) in index2:
                hs2, off2 = index2[(a - 1, q)]
                Dp = p.d(a - 1).matrix
                D[off:off + hs.dim, off2:off2 + hs2.dim] -= sign * hs2.coords_many([Dp @ F for F in hs.basis]).a
        diffs.append(ExactMatrix.wrap(f, f.reduce(D) if f.is_prime else D))
    cx = BoundedComplex(alg, lo, terms, diffs, name="Hom")
    return HomTotal(cx, {j: blocks[j][0] for j in blocks})


# ---------------------------------------------------------------------------
# add(T)-approximations and coresolutions


@dataclass
class Approximation:
    map: ModuleMap
    target: FdModule
    parts: list  # (class index, count)


def left_add_approximation(m: FdModule, t: FdModule, classes: list[FdModule] | None = None) -> Approximation:
    """Left add(t)-approximation ``m -> (+)_X X^{dim Hom(m, X)}`` over the indecomposable classes X of t."""
    if classes is None:
        classes = [rep for rep, _ in decompose(t).classes]
    f = m.field
    pieces, cols, parts = [], [], []
    for k, X in enumerate(classes):
        hs = HomSpace(m, X)
        if hs.dim:
            pieces += [X] * hs.dim
            cols += hs.basis
            parts.append((k, hs.dim))
    target, _, _ = direct_sum(pieces, algebra=m.algebra)
    M = hstack(cols, field=f, rows=m.dim) if cols else ExactMatrix.zeros(f, m.dim, 0)
    return Approximation(ModuleMap(m, target, M), target, parts)


@dataclass
class Coresolution:
    module: FdModule
    terms: list[FdModule]  # X_0..X_k
    coaugmentation: ModuleMap  # m -> X_0
    maps: list[ModuleMap]  # X_i -> X_{i+1}

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def complex(self, include_module: bool = False) -> BoundedComplex:
        if include_module:
            terms = [self.module] + self.terms
            diffs = [self.coaugmentation.matrix] + [x.matrix for x in self.maps]
            return BoundedComplex(self.module.algebra, -1, terms, diffs)
        return BoundedComplex(self.module.algebra, 0, self.terms, [x.matrix for x in self.maps])


def add_coresolution(m: FdModule, t: FdModule, n: int) -> Coresolution:
    classes = [rep for rep, _ in decompose(t).classes]

    def member(x: FdModule) -> bool:
        if x.dim == 0:
            return True
        return all(any(iso_indecomposables(rep, X) is not None for X in classes) for rep, _ in decompose(x).classes)

    if member(m):
        return Coresolution(m, [m], m.identity(), [])
    terms, maps = [], []
    cur = m
    prev_proj = None
    coaug = None
    for step in range(n + 1):
        ap = left_add_approximation(cur, t, classes)
        if kernel_basis(ap.map.matrix).rows:
            raise CoresolutionError(f"approximation not injective at step {step}")
        parts = morphism_parts(ap.map)
        X = ap.target
        if prev_proj is None:
            coaug = ap.map
        else:
            maps.append(ModuleMap(terms[-1], X, prev_proj.matrix @ ap.map.matrix))
        terms.append(X)
        C = parts.cokernel
        if member(C):
            if C.dim:
                maps.append(ModuleMap(X, C, parts.cokernel_proj.matrix))
                terms.append(C)
            if len(terms) - 1 > n:
                raise CoresolutionError(f"length exceeded: needs {len(terms) - 1} > {n}")
            return Coresolution(m, terms, coaug, maps)
        prev_proj = ModuleMap(X, C, parts.cokernel_proj.matrix)
        cur = C
    raise CoresolutionError(f"length exceeded: no add(T)-coresolution within {n} steps")


# ---------------------------------------------------------------------------
# projective resolutions of complexes


@dataclass
class ComplexResolution:
    """Projective terms ``P^k`` (``bottom <= k <= top``) with ``phi: P -> N`` and the bottom kernel."""

    source: BoundedComplex
    bottom: int
    projectives: dict  # degree -> ProjectiveModule
    diffs: dict  # degree k -> matrix P^k -> P^{k+1}
    phi: dict  # degree -> matrix P^k -> N^k
    omega: FdModule  # ker d_P^bottom, placed in degree bottom - 1
    omega_incl: ExactMatrix


def resolve_complex(nc: BoundedComplex, bottom: int) -> ComplexResolution:
    """Cover-lifting resolution of a bounded complex, built from the top degree down to ``bottom``."""
    a = nc.algebra
    f = nc.field
    top = nc.high
    projs: dict = {}
    dP: dict = {}
    phi: dict = {}

    def P(k):
        return projs.get(k) or FdModule.zero(a)

    for k in range(top, bottom - 1, -1):
        Pk1, Nk = P(k + 1), nc.term(k)
        Pk2, Nk1 = P(k + 2), nc.term(k + 1)
        C, _, _ = direct_sum([Pk1, Nk], algebra=a)
        # d_cone^k: (p, x) -> (-d p, phi p + d_N x)
        d_next = dP.get(k + 1, ExactMatrix.zeros(f, Pk1.dim, Pk2.dim))
        phi_next = phi.get(k + 1, ExactMatrix.zeros(f, Pk1.dim, Nk1.dim))
        top_ = hstack([d_next.scale(-1), phi_next], field=f, rows=Pk1.dim)
        bot_ = hstack([ExactMatrix.zeros(f, Nk.dim, Pk2.dim), nc.d(k).matrix], field=f, rows=Nk.dim)
        Dc = vstack([top_, bot_], field=f, cols=Pk2.dim + Nk1.dim)
        K = kernel_basis(Dc)
        Kmod, kin = submodule(C, K)
        dn_prev = nc.d(k - 1).matrix
        U = hstack([ExactMatrix.zeros(f, dn_prev.rows, Pk1.dim), dn_prev], field=f, rows=dn_prev.rows)
        U = row_basis(U) if U.rows else U
        Uk = Coordinates(K).coords(U) if (U.rows and K.rows) else ExactMatrix.zeros(f, 0, K.rows)
        Q, qproj, qsect = quotient(Kmod, Uk)
        Pk, cov = projective_cover(Q)
        # lift the generators of the cover back into C
        gens = [g @ qsect @ K for g in Pk.generator_images(cov)]
        psi = Pk.map_from_generators(C, gens).matrix
        projs[k] = Pk
        dP[k] = psi[:, :Pk1.dim].scale(-1)
        phi[k] = psi[:, Pk1.dim:]
    Pb = P(bottom)
    db = dP.get(bottom, ExactMatrix.zeros(f, Pb.dim, P(bottom + 1).dim))
    Om = kernel_basis(db) if Pb.dim else ExactMatrix.zeros(f, 0, 0)
    omega, _ = submodule(Pb, Om) if Om.rows else (FdModule.zero(a), None)
    return ComplexResolution(nc, bottom, projs, dP, phi, omega, Om)
