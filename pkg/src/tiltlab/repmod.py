"""Finite-dimensional right modules and their morphisms.

A module over an algebra ``A`` of dimension ``n`` is stored as an
``(n, d, d)`` array of action matrices, one per basis element, acting on row
vectors: ``v . b_i = v @ action[i]``.  A morphism ``M -> N`` is a
``dim M x dim N`` matrix ``F`` with ``v -> v @ F``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import Algebra, AlgebraError, UnsupportedError, opposite as _opposite, primitive_idempotents, radical
from .exactla import (
    Coordinates,
    ExactMatrix,
    charpoly_factors,
    inverse,
    is_invertible,
    kernel_basis,
    matrix_power,
    poly_eval,
    rank,
    row_basis,
    rref,
    vstack,
)


class ModuleError(ValueError):
    pass


class ModuleLawError(ModuleError):
    def __init__(self, law: str, witness: tuple):
        self.law = law
        self.witness = witness
        super().__init__(f"{law} fails at {witness}")


class DecompositionError(ModuleError):
    pass


class FdModule:
    """Finite-dimensional right module given by action matrices."""

    def __init__(self, algebra: Algebra, action, name: str = ""):
        self.algebra = algebra
        f = algebra.field
        if isinstance(action, np.ndarray):
            arr = action
        else:
            mats = list(action)
            if not mats:
                raise ModuleError("need one action matrix per basis element")
            arr = np.stack([m.a if isinstance(m, ExactMatrix) else f.array(m) for m in mats])
        if arr.ndim != 3 or arr.shape[0] != algebra.dim or arr.shape[1] != arr.shape[2]:
            raise ModuleError(f"action must have shape ({algebra.dim}, d, d), got {arr.shape}")
        arr.setflags(write=False)
        self.action = arr
        self.dim = int(arr.shape[1])
        self.name = name

    @property
    def field(self):
        return self.algebra.field

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<FdModule{nm} dim={self.dim}>"

    def basis_action(self, i: int) -> ExactMatrix:
        return ExactMatrix.wrap(self.field, self.action[i])

    def act(self, x: ExactMatrix) -> ExactMatrix:
        """Matrix of the action of the algebra element ``x``."""
        return ExactMatrix.wrap(self.field, self.field.combine(x.a[0], self.action))

    @cached_property
    def generator_actions(self) -> list[ExactMatrix]:
        return [self.act(g) for g in self.algebra.generators]

    def identity(self) -> "ModuleMap":
        return ModuleMap(self, self, ExactMatrix.identity(self.field, self.dim))

    def zero_map(self, target: "FdModule") -> "ModuleMap":
        return ModuleMap(self, target, ExactMatrix.zeros(self.field, self.dim, target.dim))

    def validate(self) -> None:
        f = self.field
        a = self.algebra
        if self.act(a.unit) != ExactMatrix.identity(f, self.dim):
            raise ModuleLawError("unit acts as identity", ("unit",))
        if self.dim == 0:
            return
        A = self.action
        lhs = np.einsum("iab,jbc->ijac", A, A)
        rhs = np.einsum("ijk,kac->ijac", a.structconst, A)
        if f.is_prime:
            lhs, rhs = f.reduce(lhs), f.reduce(rhs)
        bad = np.argwhere(np.any((lhs != rhs).reshape(a.dim, a.dim, -1), axis=2))
        if bad.size:
            i, j = (int(v) for v in bad[0])
            raise ModuleLawError("action is multiplicative", (a.labels[i], a.labels[j]))

    @classmethod
    def zero(cls, algebra: Algebra) -> "FdModule":
        return cls(algebra, algebra.field.zeros((algebra.dim, 0, 0)), name="0")


class ModuleMap:
    """Module homomorphism ``source -> target``."""

    def __init__(self, source: FdModule, target: FdModule, matrix: ExactMatrix):
        if source.algebra is not target.algebra:
            raise ModuleError("morphism between modules over different algebras")
        if matrix.shape != (source.dim, target.dim):
            raise ModuleError(f"map matrix has shape {matrix.shape}, expected {(source.dim, target.dim)}")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __repr__(self):
        return f"<ModuleMap {self.source.dim}->{self.target.dim}>"

    def validate(self) -> None:
        F = self.matrix
        for i in range(self.source.algebra.dim):
            if self.source.basis_action(i) @ F != F @ self.target.basis_action(i):
                raise ModuleLawError("map intertwines the action", (self.source.algebra.labels[i],))

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """Composite: apply ``self`` first, then ``other``."""
        if other.source is not self.target and other.source.dim != self.target.dim:
            raise ModuleError("maps do not compose")
        return ModuleMap(self.source, other.target, self.matrix @ other.matrix)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix + other.matrix)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix.scale(c))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_iso(self) -> bool:
        return is_invertible(self.matrix)


# ---------------------------------------------------------------------------
# sub- and quotient modules


def submodule(m: FdModule, basis: ExactMatrix, name: str = "") -> tuple[FdModule, ModuleMap]:
    """Submodule spanned by the (independent, invariant) rows of ``basis``."""
    f = m.field
    k = basis.rows
    if k == 0:
        z = FdModule.zero(m.algebra)
        return z, ModuleMap(z, m, ExactMatrix.zeros(f, 0, m.dim))
    coords = Coordinates(basis)
    mats = []
    for i in range(m.algebra.dim):
        mats.append(coords.coords(basis @ m.basis_action(i)).a)
    sub = FdModule(m.algebra, np.stack(mats), name=name)
    return sub, ModuleMap(sub, m, basis)


def quotient(m: FdModule, basis: ExactMatrix, name: str = "") -> tuple[FdModule, ModuleMap, ExactMatrix]:
    """Quotient ``m / span(basis)``; returns the module, projection and a linear section."""

    f = m.field
    if basis.rows:
        red, piv, _ = rref(basis)
    else:
        red, piv = basis, []
    pivset = set(piv)
    comp = [c for c in range(m.dim) if c not in pivset]
    q = len(comp)
    proj = f.zeros((m.dim, q))
    cpos = {c: i for i, c in enumerate(comp)}
    for c in comp:
        proj[c, cpos[c]] = f.scalar(1)
    for i, pc in enumerate(piv):
        for c in comp:
            v = red.a[i, c]
            if v != 0:
                proj[pc, cpos[c]] = f.reduce(-v) if f.is_prime else -v
    proj = ExactMatrix.wrap(f, proj)
    sect = ExactMatrix.wrap(f, f.eye(m.dim)[comp].reshape(q, m.dim))
    mats = [(sect @ m.basis_action(i) @ proj).a for i in range(m.algebra.dim)]
    qm = FdModule(m.algebra, np.stack(mats) if q else f.zeros((m.algebra.dim, 0, 0)), name=name)
    return qm, ModuleMap(m, qm, proj), sect


@dataclass
class MorphismParts:
    kernel: FdModule
    kernel_incl: ModuleMap
    image: FdModule
    image_incl: ModuleMap
    coimage_proj: ModuleMap
    cokernel: FdModule
    cokernel_proj: ModuleMap


def morphism_parts(fm: ModuleMap) -> MorphismParts:
    F = fm.matrix
    K = kernel_basis(F)
    ker, kin = submodule(fm.source, K, "ker")
    Ib = row_basis(F)
    im, iin = submodule(fm.target, Ib, "im")
    coords = Coordinates(Ib) if Ib.rows else None
    onto = coords.coords(F) if coords else ExactMatrix.zeros(F.field, fm.source.dim, 0)
    cok, cproj, _ = quotient(fm.target, Ib, "coker")
    return MorphismParts(ker, kin, im, iin, ModuleMap(fm.source, im, onto), cok, cproj)


def direct_sum(parts: Sequence[FdModule], algebra: Algebra | None = None) -> tuple[FdModule, list[ModuleMap], list[ModuleMap]]:
    parts = list(parts)
    if not parts:
        if algebra is None:
            raise ModuleError("empty direct sum needs an algebra")
        return FdModule.zero(algebra), [], []
    a = parts[0].algebra
    f = a.field
    if any(p.algebra is not a for p in parts):
        raise ModuleError("direct sum of modules over different algebras")
    d = sum(p.dim for p in parts)
    act = f.zeros((a.dim, d, d))
    off = 0
    for p in parts:
        act[:, off:off + p.dim, off:off + p.dim] = p.action
        off += p.dim
    total = FdModule(a, act, name="+".join(p.name or "?" for p in parts))
    inj, prj = [], []
    off = 0
    for p in parts:
        e = f.zeros((p.dim, d))
        e[:, off:off + p.dim] = f.eye(p.dim)
        E = ExactMatrix.wrap(f, e)
        inj.append(ModuleMap(p, total, E))
        prj.append(ModuleMap(total, p, E.T))
        off += p.dim
    return total, inj, prj


def restrict(m: FdModule, algebra: Algebra, images: Sequence[ExactMatrix], name: str | None = None) -> FdModule:
    """Restriction along an algebra map given by images of ``algebra``'s basis."""
    mats = np.stack([m.act(x).a for x in images]) if images else m.field.zeros((0, m.dim, m.dim))
    return FdModule(algebra, mats, name=m.name if name is None else name)


def opposite(a: Algebra) -> Algebra:
    """Opposite algebra, cached so that ``opposite(opposite(a)) is a``."""
    op = getattr(a, "_opposite_cache", None)
    if op is None:
        op = _opposite(a)
        op._opposite_cache = a
        a._opposite_cache = op
    return op


def dual(m: FdModule) -> FdModule:
    """Linear dual, a right module over the opposite algebra."""
    op = opposite(m.algebra)
    return FdModule(op, np.ascontiguousarray(np.transpose(m.action, (0, 2, 1))), name=f"D({m.name})")


# ---------------------------------------------------------------------------
# Hom spaces


def _idempotent_blocks(m: FdModule, idems: Sequence[ExactMatrix]):
    """Basis change adapted to ``m = (+) m e_i``; returns (B, Binv, block sizes)."""
    blocks = [row_basis(m.act(e)) for e in idems]
    B = vstack(blocks, field=m.field, cols=m.dim)
    return B, inverse(B) if m.dim else B, [b.rows for b in blocks]


def _try_idempotents(a: Algebra):
    if getattr(a, "_hom_idems", None) is None:
        try:
            a._hom_idems = list(primitive_idempotents(a))
        except (UnsupportedError, AlgebraError):
            a._hom_idems = []
    return a._hom_idems


def hom_matrices(m: FdModule, n: FdModule) -> list[ExactMatrix]:
    """Basis of Hom(m, n) as matrices."""
    if m.algebra is not n.algebra:
        raise ModuleError("hom_space needs modules over the same algebra")
    f = m.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    a = m.algebra
    idems = _try_idempotents(a)
    if idems:
        Bm, Bm_inv, sm = _idempotent_blocks(m, idems)
        Bn, Bn_inv, sn = _idempotent_blocks(n, idems)
        unknowns = []
        om = on = 0
        for x, y in zip(sm, sn):
            unknowns += [(om + r, on + c) for r in range(x) for c in range(y)]
            om += x
            on += y
    else:
        Bm = Bm_inv = ExactMatrix.identity(f, dm)
        Bn = Bn_inv = ExactMatrix.identity(f, dn)
        unknowns = [(r, c) for r in range(dm) for c in range(dn)]
    if not unknowns:
        return []
    T = len(unknowns)
    rows_idx = np.array([u[0] for u in unknowns])
    cols_idx = np.array([u[1] for u in unknowns])
    eqs = []
    for g in a.generators:
        Am = (Bm @ m.act(g) @ Bm_inv).a
        An = (Bn @ n.act(g) @ Bn_inv).a
        R = f.zeros((T, dm, dn))
        # A_m E_rc has column c equal to A_m[:, r]; E_rc A_n has row r equal to A_n[c, :]
        R[np.arange(T), :, cols_idx] = Am[:, rows_idx].T
        R[np.arange(T), rows_idx, :] = f.reduce(R[np.arange(T), rows_idx, :] - An[cols_idx, :]) if f.is_prime \
            else R[np.arange(T), rows_idx, :] - An[cols_idx, :]
        eqs.append(R.reshape(T, dm * dn))
    E = ExactMatrix.wrap(f, np.concatenate(eqs, axis=1))
    K = kernel_basis(E)
    out = []
    for k in range(K.rows):
        Fp = f.zeros((dm, dn))
        Fp[rows_idx, cols_idx] = K.a[k]
        out.append(Bm_inv @ ExactMatrix.wrap(f, Fp) @ Bn)
    return out


def hom_space(m: FdModule, n: FdModule) -> list[ModuleMap]:
    return [ModuleMap(m, n, F) for F in hom_matrices(m, n)]


class HomSpace:
    """Hom(m, n) with a fixed basis and coordinate extraction."""

    def __init__(self, m: FdModule, n: FdModule, basis: list[ExactMatrix] | None = None):
        self.source = m
        self.target = n
        self.basis = hom_matrices(m, n) if basis is None else basis
        self.dim = len(self.basis)
        f = m.field
        flat = vstack([ExactMatrix.wrap(f, B.a.reshape(1, -1)) for B in self.basis],
                      field=f, cols=m.dim * n.dim)
        self._flat = flat
        self._coords = Coordinates(flat) if self.dim else None

    def coords(self, F: ExactMatrix) -> ExactMatrix:
        f = self.source.field
        if self.dim == 0:
            if not F.is_zero():
                raise ModuleError("matrix is not in the (zero) Hom space")
            return ExactMatrix.zeros(f, 1, 0)
        return self._coords.coords(ExactMatrix.wrap(f, F.a.reshape(1, -1)))

    def coords_many(self, mats: Sequence[ExactMatrix]) -> ExactMatrix:
        f = self.source.field
        if not mats:
            return ExactMatrix.zeros(f, 0, self.dim)
        if self.dim == 0:
            return ExactMatrix.zeros(f, len(mats), 0)
        stacked = ExactMatrix.wrap(f, np.stack([F.a.reshape(-1) for F in mats]))
        return self._coords.coords(stacked)

    def combine(self, c: ExactMatrix) -> ExactMatrix:
        f = self.source.field
        if self.dim == 0:
            return ExactMatrix.zeros(f, self.source.dim, self.target.dim)
        v = c @ self._flat
        return ExactMatrix.wrap(f, v.a.reshape(self.source.dim, self.target.dim))


# ---------------------------------------------------------------------------
# canonical modules


@dataclass
class CanonicalModules:
    regular: FdModule
    projectives: list[FdModule]
    injectives: list[FdModule]
    simples: list[FdModule]
    projective_bases: list[ExactMatrix]


def regular_module(a: Algebra) -> FdModule:
    reg = getattr(a, "_regular", None)
    if reg is None:
        mats = np.stack([a.right_matrix(a.basis_element(i)).a for i in range(a.dim)])
        reg = FdModule(a, mats, name="A")
        a._regular = reg
    return reg


def canonical_modules(a: Algebra) -> CanonicalModules:
    cached = getattr(a, "_canonical", None)
    if cached is not None:
        return cached
    f = a.field
    reg = regular_module(a)
    idems = primitive_idempotents(a)
    J = radical(a)
    projectives, injectives, simples, pbases = [], [], [], []
    for k, e in enumerate(idems):
        U = row_basis(a.left_matrix(e))
        P, _ = submodule(reg, U, name=f"P{k + 1}")
        projectives.append(P)
        pbases.append(U)
        PJ = row_basis(vstack([U @ reg.act(J[r]) for r in range(J.rows)], field=f, cols=a.dim)) if J.rows \
            else ExactMatrix.zeros(f, 0, a.dim)
        coords = Coordinates(U)
        Sm, _, _ = quotient(P, coords.coords(PJ) if PJ.rows else ExactMatrix.zeros(f, 0, U.rows), name=f"S{k + 1}")
        simples.append(Sm)
        # left ideal A e and its left action
        L = row_basis(a.right_matrix(e))
        lc = Coordinates(L)
        mats = [lc.coords(L @ a.left_matrix(a.basis_element(i))).a.T for i in range(a.dim)]
        injectives.append(FdModule(a, np.stack(mats), name=f"I{k + 1}"))
    out = CanonicalModules(reg, projectives, injectives, simples, pbases)
    a._canonical = out
    return out


def idempotent_classes(a: Algebra) -> list[int]:
    """For each primitive idempotent, the index of its isomorphism-class representative."""
    cached = getattr(a, "_idem_classes", None)
    if cached is not None:
        return cached
    idems = primitive_idempotents(a)
    J = radical(a)
    f = a.field

    # x b y for b running over a basis is the row space of L_x @ R_y
    lefts = [a.left_matrix(e) for e in idems]
    rights = [a.right_matrix(e) for e in idems]

    def corner_dim(r, i, space=None):
        M = lefts[r] @ rights[i]
        if space is not None:
            M = space @ M if space.rows else ExactMatrix.zeros(f, 0, a.dim)
        return rank(M) if M.rows else 0

    reps: list[int] = []
    out = []
    for i, e in enumerate(idems):
        for r in reps:
            if corner_dim(r, i) > corner_dim(r, i, J):
                out.append(r)
                break
        else:
            reps.append(i)
            out.append(i)
    a._idem_classes = out
    return out


# ---------------------------------------------------------------------------
# projective modules and covers


class ProjectiveModule(FdModule):
    """Direct sum of indecomposable projectives ``e_i A`` with remembered generators."""

    def __init__(self, algebra: Algebra, summands: Sequence[int], name: str = ""):
        can = canonical_modules(algebra)
        f = algebra.field
        self.summands = list(summands)
        self.bases = [can.projective_bases[i] for i in self.summands]
        dims = [b.rows for b in self.bases]
        self.offsets = list(np.cumsum([0] + dims))
        d = int(self.offsets[-1])
        act = f.zeros((algebra.dim, d, d))
        for t, i in enumerate(self.summands):
            o = self.offsets[t]
            act[:, o:o + dims[t], o:o + dims[t]] = can.projectives[i].action
        super().__init__(algebra, act, name=name or "+".join(f"P{i + 1}" for i in self.summands))
        idems = primitive_idempotents(algebra)
        self._gen_coords = [Coordinates(self.bases[t]).coords(idems[i]) for t, i in enumerate(self.summands)]

    def generator(self, t: int) -> ExactMatrix:
        f = self.field
        v = f.zeros((1, self.dim))
        o = self.offsets[t]
        v[0, o:o + self.bases[t].rows] = self._gen_coords[t].a[0]
        return ExactMatrix.wrap(f, v)

    def map_from_generators(self, target: FdModule, images: Sequence[ExactMatrix]) -> ModuleMap:
        """The unique map sending generator ``t`` to ``images[t]``."""
        f = self.field
        rows = []
        for t, img in enumerate(images):
            # y in e_i A (A-coords) maps to img . y
            V = np.stack([(img @ target.basis_action(k)).a[0] for k in range(self.algebra.dim)]) if target.dim \
                else f.zeros((self.algebra.dim, 0))
            rows.append(self.bases[t] @ ExactMatrix.wrap(f, V))
        M = vstack(rows, field=f, cols=target.dim)
        return ModuleMap(self, target, M)

    def components(self, v: ExactMatrix) -> list[ExactMatrix]:
        """Split a vector of this module into algebra elements, one per summand."""
        out = []
        for t in range(len(self.summands)):
            o = self.offsets[t]
            block = v[:, o:o + self.bases[t].rows]
            out.append(block @ self.bases[t])
        return out

    def generator_images(self, fm: ModuleMap) -> list[ExactMatrix]:
        return [self.generator(t) @ fm.matrix for t in range(len(self.summands))]


def radical_submodule(m: FdModule) -> ExactMatrix:
    """Basis of ``m * rad(A)``."""
    f = m.field
    J = radical(m.algebra)
    if J.rows == 0 or m.dim == 0:
        return ExactMatrix.zeros(f, 0, m.dim)
    return row_basis(vstack([m.act(J[r]) for r in range(J.rows)]))


def _extend(sub: ExactMatrix, candidates: ExactMatrix) -> list[ExactMatrix]:
    chosen = []
    cur = sub
    r = cur.rows and rank(cur)
    for i in range(candidates.rows):
        trial = vstack([cur, candidates[i]]) if cur.rows else candidates[i]
        rr = rank(trial)
        if rr > r:
            chosen.append(candidates[i])
            cur, r = trial, rr
    return chosen


def top_generators(m: FdModule) -> list[tuple[int, ExactMatrix]]:
    """Vectors ``(i, v)`` with ``v in m e_i`` whose images form a basis of the top."""
    a = m.algebra
    idems = primitive_idempotents(a)
    classes = idempotent_classes(a)
    MJ = radical_submodule(m)
    gens = []
    for i, e in enumerate(idems):
        if classes[i] != i:
            continue
        Ae = m.act(e)
        Me = row_basis(Ae)
        if Me.rows == 0:
            continue
        MJe = row_basis(MJ @ Ae) if MJ.rows else ExactMatrix.zeros(m.field, 0, m.dim)
        for v in _extend(MJe, Me):
            gens.append((i, v))
    return gens


def projective_cover(m: FdModule) -> tuple[ProjectiveModule, ModuleMap]:
    gens = top_generators(m)
    P = ProjectiveModule(m.algebra, [i for i, _ in gens])
    return P, P.map_from_generators(m, [v for _, v in gens])


def is_projective(m: FdModule) -> bool:
    P, _ = projective_cover(m)
    return P.dim == m.dim


# ---------------------------------------------------------------------------
# endomorphism algebras, decomposition, isomorphism


def end_algebra(m: FdModule) -> tuple[Algebra, list[ExactMatrix], HomSpace]:
    """``End(m)`` with product ``s*t = s o t``, its left action on ``m`` and the Hom basis.

    The left action of ``s`` is ``x -> x @ L[s]``; ``L`` lists the matrices for the basis.
    """
    hs = HomSpace(m, m)
    f = m.field
    d = hs.dim
    sc = f.zeros((d, d, d))
    for i, Fi in enumerate(hs.basis):
        prods = [Fj @ Fi for Fj in hs.basis]  # s_i o s_j applies s_j first
        sc[i] = hs.coords_many(prods).a
    unit = hs.coords(ExactMatrix.identity(f, m.dim)).a[0]
    S = Algebra(f, sc, unit, [f"s{i}" for i in range(d)])
    return S, list(hs.basis), hs


def _nilpotent_span(mats: list[ExactMatrix], limit: int) -> bool:
    f = mats[0].field if mats else None
    if not mats:
        return True
    n = mats[0].rows
    gens = [M for M in mats if not M.is_zero()]
    cur = gens
    for _ in range(limit + 1):
        if not cur:
            return True
        prods = [X @ G for X in cur for G in gens]
        flat = vstack([ExactMatrix.wrap(f, P.a.reshape(1, -1)) for P in prods])
        basis = row_basis(flat)
        cur = [ExactMatrix.wrap(f, basis.a[k].reshape(n, n)) for k in range(basis.rows)]
    return not cur


def _fitting_split(phi: ExactMatrix, factor: list) -> tuple[ExactMatrix, ExactMatrix]:
    g = poly_eval(factor, phi)
    gd = matrix_power(g, phi.rows)
    return kernel_basis(gd), row_basis(gd)


def _split_rows(m: FdModule, rng: np.random.Generator) -> list[ExactMatrix]:
    """Row bases (in ``m``'s coordinates) of indecomposable summands of ``m``."""
    if m.dim == 0:
        return []
    f = m.field
    ident = ExactMatrix.identity(f, m.dim)
    E = hom_matrices(m, m)
    if len(E) == 1:
        return [ident]

    def try_split(phi):
        facs = charpoly_factors(phi)
        if len(facs) >= 2:
            return _fitting_split(phi, facs[0][0])
        return facs

    shifted = []
    nonsplit = False
    for phi in E:
        res = try_split(phi)
        if isinstance(res, tuple):
            return _recurse(m, res, rng)
        coeffs = res[0][0]
        if len(coeffs) == 2:
            lam = (-coeffs[1]) % f.p if f.is_prime else -coeffs[1]
            shifted.append(phi - ident.scale(lam))
        else:
            nonsplit = True
    if not nonsplit and _nilpotent_span(shifted, len(E)):
        return [ident]
    extra = [X @ Y for X in shifted for Y in shifted] + [X + Y for i, X in enumerate(shifted) for Y in shifted[i + 1:]]
    for _ in range(64):
        w = f.random_array(rng, (len(E),))
        extra.append(sum((E[k].scale(w[k]) for k in range(1, len(E))), E[0].scale(w[0])))
    for phi in extra:
        res = try_split(phi)
        if isinstance(res, tuple):
            return _recurse(m, res, rng)
    if nonsplit:
        raise UnsupportedError("endomorphism algebra is not split over this field")
    raise DecompositionError("could not find a splitting endomorphism")


def _recurse(m: FdModule, parts: tuple[ExactMatrix, ExactMatrix], rng) -> list[ExactMatrix]:
    out = []
    for basis in parts:
        sub, _ = submodule(m, basis)
        for rows in _split_rows(sub, rng):
            out.append(rows @ basis)
    return out


@dataclass
class Summand:
    module: FdModule
    inclusion: ModuleMap
    projection: ModuleMap
    cls: int


@dataclass
class Decomposition:
    module: FdModule
    summands: list[Summand]
    classes: list[tuple[FdModule, int]]

    def multiplicities(self) -> list[int]:
        return [k for _, k in self.classes]


def _dimension_vector(m: FdModule) -> tuple:
    try:
        idems = _try_idempotents(m.algebra)
    except Exception:  # pragma: no cover - defensive
        idems = []
    return tuple(rank(m.act(e)) for e in idems) if idems else (m.dim,)


def iso_indecomposables(x: FdModule, y: FdModule) -> ExactMatrix | None:
    """An isomorphism between indecomposables, found as a basis pair with invertible composite."""
    if x.dim != y.dim:
        return None
    if x.dim == 0:
        return ExactMatrix.zeros(x.field, 0, 0)
    if _dimension_vector(x) != _dimension_vector(y):
        return None
    fs = hom_matrices(x, y)
    if not fs:
        return None
    gs = hom_matrices(y, x)
    for F in fs:
        for G in gs:
            if is_invertible(F @ G):
                return F
    return None


def decompose(m: FdModule, seed: int = 0) -> Decomposition:
    rng = np.random.default_rng(seed)
    rows = _split_rows(m, rng)
    if not rows:
        return Decomposition(m, [], [])
    B = vstack(rows)
    Binv = inverse(B)
    summands: list[Summand] = []
    reps: list[FdModule] = []
    counts: list[int] = []
    off = 0
    for r in rows:
        X, incl = submodule(m, r)
        proj = ModuleMap(m, X, Binv[:, off:off + r.rows])
        off += r.rows
        for c, rep in enumerate(reps):
            if iso_indecomposables(rep, X) is not None:
                counts[c] += 1
                break
        else:
            c = len(reps)
            reps.append(X)
            counts.append(1)
        summands.append(Summand(X, incl, proj, c))
    return Decomposition(m, summands, list(zip(reps, counts)))


def is_isomorphic(m: FdModule, n: FdModule) -> tuple[bool, ModuleMap | None]:
    if m.algebra is not n.algebra:
        raise ModuleError("isomorphism test needs modules over the same algebra")
    if m.dim != n.dim:
        return False, None
    f = m.field
    if m.dim == 0:
        return True, ModuleMap(m, n, ExactMatrix.zeros(f, 0, 0))
    if _dimension_vector(m) != _dimension_vector(n):
        return False, None
    dm, dn = decompose(m), decompose(n)
    if len(dm.summands) != len(dn.summands):
        return False, None
    used = [False] * len(dn.summands)
    total = ExactMatrix.zeros(f, m.dim, n.dim)
    for s in dm.summands:
        for k, t in enumerate(dn.summands):
            if used[k]:
                continue
            F = iso_indecomposables(s.module, t.module)
            if F is not None:
                used[k] = True
                total = total + s.projection.matrix @ F @ t.inclusion.matrix
                break
        else:
            return False, None
    cert = ModuleMap(m, n, total)
    if not cert.is_iso():
        raise DecompositionError("assembled isomorphism is singular")
    return True, cert


def in_add(m: FdModule, t: FdModule) -> bool:
    if m.dim == 0:
        return True
    classes_t = [rep for rep, _ in decompose(t).classes]
    for rep, _ in decompose(m).classes:
        if not any(iso_indecomposables(rep, x) is not None for x in classes_t):
            return False
    return True


def indecomposable_summands(t: FdModule) -> list[FdModule]:
    return [rep for rep, _ in decompose(t).classes]


# ---------------------------------------------------------------------------
# quiver representations


def rep_module(a: Algebra, vertex_dims: dict, arrow_mats: dict, name: str = "") -> FdModule:
    """Module from a quiver representation; arrow matrices are ``dim(source) x dim(target)``."""
    if a.quiver is None:
        raise ModuleError("representation input needs a bound quiver algebra")
    q = a.quiver
    f = a.field
    dims = {v: int(vertex_dims.get(v, 0)) for v in q.vertices}
    for v in vertex_dims:
        if str(v) not in dims:
            raise ModuleError(f"unknown vertex {v!r}")
    offs, o = {}, 0
    for v in q.vertices:
        offs[v] = o
        o += dims[v]
    d = o
    arrows = {}
    for arr in q.arrows:
        s, t = dims[arr.source], dims[arr.target]
        raw = arrow_mats.get(arr.name)
        if raw is None:
            M = ExactMatrix.zeros(f, s, t)
        else:
            M = ExactMatrix(f, raw) if s and t else ExactMatrix.zeros(f, s, t)
            if M.shape != (s, t):
                raise ModuleError(f"arrow {arr.name}: matrix shape {M.shape}, expected {(s, t)}")
        arrows[arr.name] = M
    for name_ in arrow_mats:
        if name_ not in arrows:
            raise ModuleError(f"unknown arrow {name_!r}")

    def path_action(p) -> np.ndarray:
        out = f.zeros((d, d))
        if not p.arrows:
            v = p.source
            out[offs[v]:offs[v] + dims[v], offs[v]:offs[v] + dims[v]] = f.eye(dims[v])
            return out
        cur = ExactMatrix.identity(f, dims[p.source])
        for name_ in p.arrows:
            cur = cur @ arrows[name_]
        tgt = q.arrow(p.arrows[-1]).target
        out[offs[p.source]:offs[p.source] + dims[p.source], offs[tgt]:offs[tgt] + dims[tgt]] = cur.a
        return out

    # relations must act as zero
    if a.relations is not None:
        from .algebra import Path

        for k, rel in enumerate(a.relations.relations):
            acc = f.zeros((d, d))
            for c, arrows_ in rel:
                acc = acc + f.scalar(c) * path_action(Path(q.arrow(arrows_[0]).source, tuple(arrows_)))
            acc = f.reduce(acc)
            if np.any(acc != 0):
                raise ModuleLawError("relation acts as zero", (k,))
    act = np.stack([path_action(p) for p in a.paths]) if d else f.zeros((a.dim, 0, 0))
    return FdModule(a, act, name=name)
