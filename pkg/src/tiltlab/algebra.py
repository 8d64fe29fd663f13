"""Finite-dimensional associative unital algebras.

Two presentations are supported: bound quiver algebras ``kQ/I`` with a path
basis, and bare structure constants.  Elements are 1-row ``ExactMatrix``
coordinate vectors; ``structconst[i, j]`` holds the coordinates of
``b_i * b_j``.

Paths compose left to right: for arrows ``a: 1 -> 2`` and ``b: 2 -> 3`` the
product ``a * b`` is the path of length two, so ``e_1 A`` is spanned by the
paths starting at vertex 1 and right modules are covariant representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from .exactla import (
    Coordinates,
    ExactMatrix,
    FieldSpec,
    charpoly_factors,
    kernel_basis,
    rank,
    row_basis,
    solve,
    vstack,
)


class AlgebraError(ValueError):
    pass


class AlgebraLawError(AlgebraError):
    def __init__(self, law: str, witness: tuple):
        self.law = law
        self.witness = witness
        super().__init__(f"{law} fails at basis indices {witness}")


class UnsupportedError(AlgebraError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex labels")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow names")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise AlgebraError(f"arrow {a.name} has an undeclared endpoint")
        if set(names) & set(self.vertices):
            raise AlgebraError("arrow names must differ from vertex labels")

    @classmethod
    def build(cls, vertices: Sequence, arrows: Sequence[tuple]) -> "Quiver":
        return cls(tuple(str(v) for v in vertices),
                   tuple(Arrow(str(n), str(s), str(t)) for n, s, t in arrows))

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise AlgebraError(f"unknown arrow {name!r}")


@dataclass(frozen=True)
class RelationSet:
    """Relations as lists of ``(coefficient, arrows-in-traversal-order)`` terms."""

    relations: tuple[tuple[tuple[object, tuple[str, ...]], ...], ...] = ()

    @classmethod
    def build(cls, rels: Sequence[Sequence[tuple]]) -> "RelationSet":
        return cls(tuple(tuple((c, tuple(p)) for c, p in rel) for rel in rels))


@dataclass(frozen=True, order=True)
class Path:
    source: str
    arrows: tuple[str, ...] = ()

    def __len__(self):
        return len(self.arrows)

    def label(self) -> str:
        return f"e{self.source}" if not self.arrows else "*".join(self.arrows)


def _path_target(q: Quiver, p: Path) -> str:
    return q.arrow(p.arrows[-1]).target if p.arrows else p.source


def _concat(q: Quiver, p: Path, r: Path) -> Path | None:
    if _path_target(q, p) != r.source:
        return None
    return Path(p.source, p.arrows + r.arrows)


class Algebra:
    """A finite-dimensional algebra given by structure constants."""

    def __init__(
        self,
        field: FieldSpec,
        structconst: np.ndarray,
        unit: np.ndarray,
        labels: Sequence[str] | None = None,
        *,
        presentation: str = "structure_constants",
        quiver: Quiver | None = None,
        relations: RelationSet | None = None,
        paths: Sequence[Path] | None = None,
        generators: Sequence[ExactMatrix] | None = None,
        radical_basis: ExactMatrix | None = None,
        idempotents: Sequence[ExactMatrix] | None = None,
    ):
        self.field = field
        self.dim = int(structconst.shape[0])
        self.structconst = structconst
        self.structconst.setflags(write=False)
        self.unit = ExactMatrix.wrap(field, unit.reshape(1, -1).copy())
        self.labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(self.dim))
        self.presentation = presentation
        self.quiver = quiver
        self.relations = relations
        self.paths = tuple(paths) if paths is not None else None
        self._generators = list(generators) if generators is not None else None
        self._radical = radical_basis
        self._idempotents = list(idempotents) if idempotents is not None else None

    def __repr__(self):
        return f"Algebra(dim={self.dim}, field={self.field}, presentation={self.presentation})"

    # -- elements -----------------------------------------------------------

    def basis_element(self, i: int) -> ExactMatrix:
        v = self.field.zeros((1, self.dim))
        v[0, i] = self.field.scalar(1)
        return ExactMatrix.wrap(self.field, v)

    def element(self, coords) -> ExactMatrix:
        return ExactMatrix(self.field, [list(coords)])

    @cached_property
    def _mult_table(self) -> np.ndarray:
        # (dim*dim, dim): row i*dim + j holds b_i b_j
        return self.structconst.reshape(self.dim * self.dim, self.dim)

    def mult(self, x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
        f = self.field
        if f.is_prime:
            outer = f.reduce(np.einsum("ri,rj->rij", x.a, y.a).reshape(x.rows, -1))
            return ExactMatrix.wrap(f, f.matmul(outer, self._mult_table))
        rows = [f.combine(y.a[r], f.combine(x.a[r], self.structconst)) for r in range(x.rows)]
        return ExactMatrix.wrap(f, np.stack(rows) if rows else f.zeros((0, self.dim)))

    def left_matrix(self, x: ExactMatrix) -> ExactMatrix:
        """Matrix of ``y -> x*y`` in the row convention."""
        return ExactMatrix.wrap(self.field, self.field.combine(x.a[0], self.structconst))

    def right_matrix(self, x: ExactMatrix) -> ExactMatrix:
        """Matrix of ``y -> y*x`` in the row convention."""
        return ExactMatrix.wrap(self.field, self.field.combine(x.a[0], self._right_table))

    @cached_property
    def _right_table(self) -> np.ndarray:
        # [j, i, k] = c[i, j, k]
        return np.ascontiguousarray(np.transpose(self.structconst, (1, 0, 2)))

    @property
    def generators(self) -> list[ExactMatrix]:
        """Elements generating the algebra; intertwining checks only need these."""
        if self._generators is None:
            self._generators = [self.basis_element(i) for i in range(self.dim)]
        return self._generators

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        f = self.field
        c = self.structconst
        d = self.dim
        if c.shape != (d, d, d):
            raise AlgebraError(f"structure constants must have shape {(d, d, d)}")
        lhs = np.einsum("ijm,mkn->ijkn", c, c)
        rhs = np.einsum("jkm,imn->ijkn", c, c)
        if f.is_prime:
            lhs, rhs = f.reduce(lhs), f.reduce(rhs)
        bad = np.argwhere(np.any(lhs != rhs, axis=3))
        if bad.size:
            raise AlgebraLawError("associativity", tuple(int(v) for v in bad[0]))
        one = self.unit
        for i in range(d):
            b = self.basis_element(i)
            if self.mult(one, b) != b:
                raise AlgebraLawError("left unit law", (i,))
            if self.mult(b, one) != b:
                raise AlgebraLawError("right unit law", (i,))

    # -- structure ----------------------------------------------------------

    @property
    def is_split_checked(self) -> bool:
        return self._idempotents is not None

    @property
    def vertex_idempotent_indices(self) -> list[int]:
        if self.paths is None:
            return []
        return [i for i, p in enumerate(self.paths) if len(p) == 0]


def bound_quiver_algebra(q: Quiver, rels: RelationSet, field: FieldSpec, max_degree: int = 32) -> Algebra:
    """Path algebra of ``q`` modulo the ideal generated by ``rels``."""
    rel_terms = []
    for k, rel in enumerate(rels.relations):
        terms = []
        ends = set()
        for coeff, arrows in rel:
            if len(arrows) < 2:
                raise AlgebraError(f"relation {k} contains a path of length < 2")
            p = Path(q.arrow(arrows[0]).source, tuple(arrows))
            for a, b in zip(arrows, arrows[1:]):
                if q.arrow(a).target != q.arrow(b).source:
                    raise AlgebraError(f"relation {k}: arrows {a},{b} do not compose")
            ends.add((p.source, _path_target(q, p)))
            terms.append((field.scalar(coeff), p))
        if len(ends) > 1:
            raise AlgebraError(f"relation {k} mixes non-parallel paths")
        if terms:
            rel_terms.append(terms)

    out_arrows: dict[str, list[str]] = {v: [] for v in q.vertices}
    in_arrows: dict[str, list[str]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        out_arrows[a.source].append(a.name)
        in_arrows[a.target].append(a.name)

    by_len: list[list[Path]] = [[Path(v) for v in q.vertices]]

    def extend_to(n):
        while len(by_len) <= n:
            nxt = []
            for p in by_len[-1]:
                for name in out_arrows[_path_target(q, p)]:
                    nxt.append(Path(p.source, p.arrows + (name,)))
            by_len.append(nxt)

    for N in range(1, max_degree + 1):
        extend_to(N)
        # columns ordered longest first so pivots land on long paths
        cols = [p for L in range(N, -1, -1) for p in by_len[L]]
        index = {p: i for i, p in enumerate(cols)}
        gens = []
        for terms in rel_terms:
            s, t = terms[0][1].source, _path_target(q, terms[0][1])
            min_len = min(len(p) for _, p in terms)
            left = [p for L in range(0, N - min_len + 1) for p in by_len[L] if _path_target(q, p) == s]
            right = [p for L in range(0, N - min_len + 1) for p in by_len[L] if p.source == t]
            for u in left:
                for w in right:
                    if len(u) + len(w) + min_len > N:
                        continue
                    row = field.zeros(len(cols))
                    hit = False
                    for c, p in terms:
                        full = Path(u.source, u.arrows + p.arrows + w.arrows)
                        if len(full) <= N:
                            row[index[full]] = field.reduce(row[index[full]] + c) if field.is_prime else row[index[full]] + c
                            hit = True
                    if hit:
                        gens.append(row)
        top = [index[p] for p in by_len[N]]
        G = ExactMatrix.wrap(field, np.array(gens).reshape(len(gens), len(cols)) if gens else field.zeros((0, len(cols))))
        if top:
            tops = field.zeros((len(top), len(cols)))
            for k, c in enumerate(top):
                tops[k, c] = field.scalar(1)
            full = vstack([G, ExactMatrix.wrap(field, tops)])
            if rank(full) != rank(G):
                continue
            G = full
        break
    else:
        raise AlgebraError("quotient not finite-dimensional or bound too small")

    from .exactla import rref

    red, piv, r = rref(G) if G.rows else (G, [], 0)
    pivset = set(piv)
    basis_cols = [c for c in range(len(cols)) if c not in pivset]
    basis_paths = sorted((cols[c] for c in basis_cols), key=lambda p: (len(p), q.vertices.index(p.source), p.arrows))
    bindex = {p: i for i, p in enumerate(basis_paths)}
    dim = len(basis_paths)
    pivot_row = {c: i for i, c in enumerate(piv)}

    def normal_form(p: Path) -> np.ndarray:
        v = field.zeros(dim)
        if len(p) > N:
            return v
        if len(p) == N and p not in bindex:
            return v
        c = index[p]
        if c not in pivot_row:
            v[bindex[p]] = field.scalar(1)
            return v
        row = red.a[pivot_row[c]]
        for bc in basis_cols:
            if row[bc] != 0:
                v[bindex[cols[bc]]] = field.reduce(-row[bc]) if field.is_prime else -row[bc]
        return v

    c = field.zeros((dim, dim, dim))
    for i, p in enumerate(basis_paths):
        for j, r_ in enumerate(basis_paths):
            pr = _concat(q, p, r_)
            if pr is not None:
                c[i, j] = normal_form(pr)
    unit = field.zeros(dim)
    for v in q.vertices:
        unit[bindex[Path(v)]] = field.scalar(1)
    alg = Algebra(
        field, c, unit, [p.label() for p in basis_paths],
        presentation="bound_quiver", quiver=q, relations=rels, paths=basis_paths,
    )
    gens = [alg.basis_element(bindex[Path(v)]) for v in q.vertices]
    for a in q.arrows:
        p = Path(a.source, (a.name,))
        if p in bindex:
            gens.append(alg.basis_element(bindex[p]))
        else:
            gens.append(ExactMatrix.wrap(field, normal_form(p).reshape(1, -1)))
    alg._generators = gens
    alg._idempotents = [alg.basis_element(bindex[Path(v)]) for v in q.vertices]
    rad_idx = [i for i, p in enumerate(basis_paths) if len(p) >= 1]
    alg._radical = ExactMatrix.wrap(field, field.eye(dim)[rad_idx].reshape(len(rad_idx), dim))
    return alg


def structure_algebra(field: FieldSpec, structconst, unit, labels: Sequence[str] | None = None) -> Algebra:
    """Algebra from explicit structure constants; associativity and unit laws are checked."""
    c = field.array(structconst)
    if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
        raise AlgebraError("structure constants must be a dim x dim x dim array")
    u = field.array(unit).reshape(-1)
    if u.shape[0] != c.shape[0]:
        raise AlgebraError("unit has the wrong length")
    alg = Algebra(field, c, u, labels)
    alg.validate()
    return alg


def radical(a: Algebra) -> ExactMatrix:
    """Basis (rows) of the Jacobson radical."""
    if a._radical is not None:
        return a._radical
    f = a.field
    if f.is_prime and f.p <= a.dim:
        raise UnsupportedError("radical computation unsupported for this field/presentation")
    c = a.structconst
    traces = np.einsum("kmm->k", c)
    tr = np.tensordot(c, traces, axes=(2, 0))
    if f.is_prime:
        tr = f.reduce(tr)
    a._radical = kernel_basis(ExactMatrix.wrap(f, tr))
    return a._radical


def quotient_by_radical(a: Algebra):
    """Return ``(B, proj, sect)``: the algebra A/rad with projection and section matrices."""
    f = a.field
    J = radical(a)
    from .exactla import rref

    red, piv, r = rref(J) if J.rows else (J, [], 0)
    comp = [c for c in range(a.dim) if c not in set(piv)]
    k = len(comp)
    proj = f.zeros((a.dim, k))
    cpos = {c: i for i, c in enumerate(comp)}
    for c in comp:
        proj[c, cpos[c]] = f.scalar(1)
    for i, pc in enumerate(piv):
        for c in comp:
            proj[pc, cpos[c]] = f.reduce(-red.a[i, c]) if f.is_prime else -red.a[i, c]
    proj = ExactMatrix.wrap(f, proj)
    sect = ExactMatrix.wrap(f, f.eye(a.dim)[comp].reshape(k, a.dim))
    sc = f.zeros((k, k, k))
    for i in range(k):
        for j in range(k):
            prod_ = a.mult(sect[i], sect[j])
            sc[i, j] = (prod_ @ proj).a[0]
    unit = (a.unit @ proj).a[0]
    B = Algebra(f, sc, unit, [a.labels[c] for c in comp])
    B._radical = ExactMatrix.zeros(f, 0, k)
    return B, proj, sect


def _corner_basis(b: Algebra, e: ExactMatrix) -> ExactMatrix:
    rows = [b.mult(b.mult(e, b.basis_element(i)), e) for i in range(b.dim)]
    return row_basis(vstack(rows))


def _eigen_shift(b: Algebra, e: ExactMatrix, corner: ExactMatrix, x: ExactMatrix) -> ExactMatrix | None:
    """A nonzero non-unit ``x - lam*e`` of the corner algebra, or None."""
    coords = Coordinates(corner)
    L = vstack([b.mult(x, corner[i]) for i in range(corner.rows)])
    Lx = coords.coords(L)
    for coeffs, _ in charpoly_factors(Lx):
        if len(coeffs) == 2:
            lam = (-coeffs[1]) % b.field.p if b.field.is_prime else -coeffs[1]
            u = x - e.scale(lam)
            if not u.is_zero():
                return u
    return None


def _left_ideal_idempotent(b: Algebra, corner: ExactMatrix, u: ExactMatrix) -> ExactMatrix:
    """Idempotent generator of the left ideal ``C u`` of a semisimple corner ``C``."""
    L = row_basis(vstack([b.mult(corner[i], u) for i in range(corner.rows)]))
    n = L.rows
    blocks = []
    for j in range(n):
        blocks.append(np.concatenate([b.mult(L[i], L[j]).a[0] for i in range(n)]))
    M = ExactMatrix.wrap(b.field, np.array(blocks).reshape(n, -1))
    target = ExactMatrix.wrap(b.field, np.concatenate([L.a[i] for i in range(n)]).reshape(1, -1))
    sol = solve(M, target)
    if sol is None:
        raise UnsupportedError("left ideal has no idempotent generator; algebra is not semisimple")
    return sol @ L


def _split_semisimple(b: Algebra, e: ExactMatrix, rng: np.random.Generator) -> list[ExactMatrix]:
    corner = _corner_basis(b, e)
    if corner.rows == 1:
        return [e]
    candidates = [corner[i] for i in range(corner.rows)]
    candidates += [b.mult(corner[i], corner[j]) for i in range(corner.rows) for j in range(corner.rows)]
    for _ in range(32):
        w = ExactMatrix.wrap(b.field, b.field.random_array(rng, (1, corner.rows)))
        candidates.append(w @ corner)
    for x in candidates:
        u = _eigen_shift(b, e, corner, x)
        if u is None:
            continue
        f = _left_ideal_idempotent(b, corner, u)
        if f.is_zero() or f == e:
            continue
        return _split_semisimple(b, f, rng) + _split_semisimple(b, e - f, rng)
    raise UnsupportedError("semisimple quotient is not split over this field")


def _newton_lift(a: Algebra, x: ExactMatrix) -> ExactMatrix:
    for _ in range(4 * a.dim.bit_length() + 8):
        x2 = a.mult(x, x)
        if x2 == x:
            return x
        x3 = a.mult(x2, x)
        x = x2.scale(3) - x3.scale(2)
    raise AlgebraError("idempotent lifting did not converge")


def primitive_idempotents(a: Algebra) -> list[ExactMatrix]:
    """Complete set of orthogonal primitive idempotents."""
    if a._idempotents is not None:
        return a._idempotents
    B, proj, sect = quotient_by_radical(a)
    rng = np.random.default_rng(0)
    ebar = _split_semisimple(B, B.unit, rng)
    for e in ebar:
        if _corner_basis(B, e).rows != 1:
            raise UnsupportedError("semisimple quotient is not split over this field")
    lifted: list[ExactMatrix] = []
    one = a.unit
    for k, e in enumerate(ebar):
        g = one
        for fj in lifted:
            g = g - fj
        if k == len(ebar) - 1:
            lifted.append(g)
            break
        x = e @ sect
        y = a.mult(a.mult(g, x), g)
        lifted.append(_newton_lift(a, y))
    a._idempotents = lifted
    return lifted


def opposite(a: Algebra) -> Algebra:
    c = np.ascontiguousarray(np.transpose(a.structconst, (1, 0, 2)))
    op = Algebra(a.field, c, a.unit.a[0].copy(), [f"{l}^op" for l in a.labels],
                 generators=a._generators, radical_basis=a._radical, idempotents=a._idempotents)
    return op


def tensor_product(a: Algebra, b: Algebra) -> Algebra:
    """``a (x) b`` with basis pairs ``(i, j)`` in row-major order."""
    f = a.field
    da, db = a.dim, b.dim
    c = np.einsum("ikm,jln->ijklmn", a.structconst, b.structconst).reshape(da * db, da * db, da * db)
    if f.is_prime:
        c = f.reduce(c)
    unit = np.kron(a.unit.a[0], b.unit.a[0])
    if f.is_prime:
        unit = f.reduce(unit)
    labels = [f"{x}(x){y}" for x in a.labels for y in b.labels]

    def kron_rows(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
        out = np.einsum("ri,sj->rsij", x.a, y.a).reshape(x.rows * y.rows, da * db)
        return ExactMatrix.wrap(f, f.reduce(out) if f.is_prime else out)

    ia = ExactMatrix.identity(f, da)
    ib = ExactMatrix.identity(f, db)
    Ja, Jb = radical(a), radical(b)
    rad_rows = vstack([kron_rows(Ja, ib), kron_rows(ia, Jb)], field=f, cols=da * db)
    gens = [kron_rows(g, b.unit) for g in a.generators] + [kron_rows(a.unit, h) for h in b.generators]
    idem = [kron_rows(e, g) for e in primitive_idempotents(a) for g in primitive_idempotents(b)]
    return Algebra(f, c, unit, labels, generators=gens,
                   radical_basis=row_basis(rad_rows) if rad_rows.rows else rad_rows, idempotents=idem)


def is_isomorphic_algebra_map(a: Algebra, b: Algebra, phi: ExactMatrix) -> bool:
    """True when ``phi`` (rows = images of a's basis in b) is a unital algebra isomorphism."""
    if a.dim != b.dim or rank(phi) != a.dim:
        return False
    if a.unit @ phi != b.unit:
        return False
    for i, j in product(range(a.dim), repeat=2):
        lhs = a.mult(a.basis_element(i), a.basis_element(j)) @ phi
        rhs = b.mult(phi[i], phi[j])
        if lhs != rhs:
            return False
    return True
