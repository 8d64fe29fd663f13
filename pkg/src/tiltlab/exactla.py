"""Exact dense linear algebra over Q and prime fields.

Everything downstream uses the row-vector convention: a matrix ``m`` acts on
row vectors by ``x -> x @ m``.  Prime-field entries live in ``int64`` numpy
arrays reduced into ``[0, p)``; rational entries are ``Fraction`` objects in
``object`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

_INT64_LIMIT = 2**63 - 1


class FieldMismatchError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == "prime":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"modulus {self.p!r} is not prime")
            if self.p >= 2**31:
                raise ValueError("prime modulus must be below 2^31")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", int(p))

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    @property
    def characteristic(self) -> int:
        return self.p if self.is_prime else 0

    def __str__(self):
        return f"GF({self.p})" if self.is_prime else "QQ"

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p} if self.is_prime else {"kind": "rational"}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return cls(obj["kind"], obj.get("p"))

    # -- scalar / array helpers -------------------------------------------

    def scalar(self, v):
        if self.is_prime:
            if isinstance(v, Fraction):
                return (v.numerator * pow(v.denominator, -1, self.p)) % self.p
            return int(v) % self.p
        return Fraction(v)

    def inv(self, v):
        if self.is_prime:
            return pow(int(v), -1, self.p)
        return 1 / Fraction(v)

    def array(self, data) -> np.ndarray:
        if self.is_prime:
            if isinstance(data, np.ndarray) and data.dtype.kind in "iu":
                return np.mod(data.astype(np.int64), self.p)
            raw = np.asarray(data, dtype=object)
            if raw.size == 0:
                return np.zeros(raw.shape, np.int64)
            return np.vectorize(self.scalar, otypes=[np.int64])(raw)
        raw = np.asarray(data, dtype=object)
        out = np.empty(raw.shape, dtype=object)
        flat = out.reshape(-1)
        for i, v in enumerate(raw.reshape(-1)):
            flat[i] = Fraction(v)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.is_prime:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1 if self.is_prime else Fraction(1)
        return out

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.is_prime:
            return np.mod(arr, self.p)
        return arr

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if not self.is_prime:
            if a.shape[-1] == 0:
                return self.zeros(a.shape[:-1] + b.shape[-1:])
            return a @ b
        inner = a.shape[-1]
        if (self.p - 1) ** 2 * max(inner, 1) <= _INT64_LIMIT:
            return np.mod(a @ b, self.p)
        # products would overflow int64: fall back to Python integers
        out = a.astype(object) @ b.astype(object)
        return np.mod(out, self.p).astype(np.int64)

    def combine(self, coeffs: np.ndarray, arr: np.ndarray) -> np.ndarray:
        """``sum_i coeffs[i] * arr[i]``, skipping zero coefficients (cheap for sparse rational input)."""
        if self.is_prime:
            flat = self.matmul(coeffs.reshape(1, -1), arr.reshape(arr.shape[0], -1))
            return flat.reshape(arr.shape[1:])
        nz = np.flatnonzero(coeffs != 0)
        if nz.size == 0:
            return self.zeros(arr.shape[1:])
        out = arr[nz[0]] * coeffs[nz[0]]
        for i in nz[1:]:
            out = out + arr[i] * coeffs[i]
        return out

    def random_array(self, rng: np.random.Generator, shape, low=-3, high=3) -> np.ndarray:
        if self.is_prime:
            return rng.integers(0, self.p, size=shape, dtype=np.int64)
        return self.array(rng.integers(low, high + 1, size=shape))


class ExactMatrix:
    """Immutable dense matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, data, *, _trusted: bool = False):
        arr = data if _trusted else field.array(data)
        if arr.ndim != 2:
            raise ValueError("ExactMatrix needs 2-dimensional data")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def wrap(cls, field: FieldSpec, arr: np.ndarray) -> "ExactMatrix":
        return cls(field, arr, _trusted=True)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "ExactMatrix":
        return cls.wrap(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        return cls.wrap(field, field.eye(n))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, rows)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix.wrap(self.field, self.a.T.copy())

    def _check(self, other: "ExactMatrix"):
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return ExactMatrix.wrap(self.field, self.field.matmul(self.a, other.a))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix.wrap(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix.wrap(self.field, self.field.reduce(self.a - other.a))

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix.wrap(self.field, self.field.reduce(-self.a))

    def scale(self, c) -> "ExactMatrix":
        c = self.field.scalar(c)
        return ExactMatrix.wrap(self.field, self.field.reduce(self.a * c))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.a == other.a))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.a.flat)))

    def __getitem__(self, idx) -> "ExactMatrix":
        if not isinstance(idx, tuple):
            idx = (idx, slice(None))
        r, c = idx
        if isinstance(r, (int, np.integer)):
            r = slice(int(r), int(r) + 1)
        if isinstance(c, (int, np.integer)):
            c = slice(int(c), int(c) + 1)
        if not isinstance(r, slice) and not isinstance(c, slice):
            sub = self.a[np.ix_(r, c)]
        else:
            sub = self.a[r, c]
        return ExactMatrix.wrap(self.field, sub.copy())

    def entry(self, i: int, j: int):
        return self.a[i, j]

    def is_zero(self) -> bool:
        return not bool(np.any(self.a != 0))

    def tolist(self) -> list:
        if self.field.is_prime:
            return [[int(v) for v in row] for row in self.a]
        return [[str(v) if v.denominator != 1 else int(v) for v in row] for row in self.a]

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.tolist()})"


def hstack(blocks: Sequence[ExactMatrix], field: FieldSpec | None = None, rows: int | None = None) -> ExactMatrix:
    blocks = list(blocks)
    if not blocks:
        return ExactMatrix.zeros(field, rows or 0, 0)
    f = blocks[0].field
    return ExactMatrix.wrap(f, np.concatenate([b.a for b in blocks], axis=1))


def vstack(blocks: Sequence[ExactMatrix], field: FieldSpec | None = None, cols: int | None = None) -> ExactMatrix:
    blocks = list(blocks)
    if not blocks:
        return ExactMatrix.zeros(field, 0, cols or 0)
    f = blocks[0].field
    return ExactMatrix.wrap(f, np.concatenate([b.a for b in blocks], axis=0))


def block_diag(blocks: Sequence[ExactMatrix], field: FieldSpec) -> ExactMatrix:
    r = sum(b.rows for b in blocks)
    c = sum(b.cols for b in blocks)
    out = field.zeros((r, c))
    i = j = 0
    for b in blocks:
        out[i:i + b.rows, j:j + b.cols] = b.a
        i += b.rows
        j += b.cols
    return ExactMatrix.wrap(field, out)


def _rref_array(field: FieldSpec, arr: np.ndarray, ncols: int | None = None):
    """Row reduce a copy of ``arr``; pivots are searched among the first ``ncols`` columns."""
    A = arr.copy()
    rows, cols = A.shape
    limit = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    prime = field.is_prime
    p = field.p
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        piv = A[r, c]
        if prime:
            if piv != 1:
                A[r] = (A[r] * pow(int(piv), -1, p)) % p
        elif piv != 1:
            A[r] = A[r] / piv
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col != 0)
        if others.size:
            upd = np.outer(col[others], A[r])
            A[others] = (A[others] - upd) % p if prime else A[others] - upd
        pivots.append(c)
        r += 1
    return A, pivots


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank."""
    A, piv = _rref_array(m.field, m.a)
    return ExactMatrix.wrap(m.field, A), piv, len(piv)


def rank(m: ExactMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return rref(m)[2]


def row_basis(m: ExactMatrix) -> ExactMatrix:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    red, _, r = rref(m)
    return red[:r, :] if r else ExactMatrix.zeros(m.field, 0, m.cols)


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """Rows form a basis of ``{x : x @ m = 0}``."""
    f = m.field
    n = m.rows
    if n == 0:
        return ExactMatrix.zeros(f, 0, 0)
    if m.cols == 0:
        return ExactMatrix.identity(f, n)
    red, piv, r = rref(m.T)
    free = [c for c in range(n) if c not in set(piv)]
    out = f.zeros((len(free), n))
    one = 1 if f.is_prime else Fraction(1)
    for k, fc in enumerate(free):
        out[k, fc] = one
        for i, pc in enumerate(piv):
            out[k, pc] = f.reduce(-red.a[i, fc]) if f.is_prime else -red.a[i, fc]
    return ExactMatrix.wrap(f, out)


def solve(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix | None:
    """Return ``x`` with ``x @ a == b`` (row by row), or ``None`` when inconsistent."""
    a._check(b)
    if a.cols != b.cols:
        raise ValueError(f"solve: a has {a.cols} columns but b has {b.cols}")
    f = a.field
    n, k = a.rows, b.rows
    if a.cols == 0:
        return ExactMatrix.zeros(f, k, n)
    aug = np.concatenate([a.a.T, b.a.T], axis=1)
    red, piv = _rref_array(f, aug, ncols=n)
    r = len(piv)
    if r < red.shape[0] and np.any(red[r:, n:] != 0):
        return None
    x = f.zeros((k, n))
    for i, pc in enumerate(piv):
        x[:, pc] = red[i, n:]
    return ExactMatrix.wrap(f, x)


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve(m, ExactMatrix.identity(m.field, m.rows))
    if x is None:
        raise ValueError("matrix is singular")
    return x


def is_invertible(m: ExactMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


class Coordinates:
    """Precomputed coordinate extraction against a fixed row basis.

    ``coords(v)`` returns ``c`` with ``c @ basis == v`` for ``v`` in the row
    space; membership is not rechecked unless ``strict`` is set.
    """

    def __init__(self, basis: ExactMatrix):
        self.basis = basis
        f = basis.field
        self.field = f
        # columns of the basis where it is invertible
        _, piv2, r = rref(basis)
        if r != basis.rows:
            raise ValueError("coordinate basis rows are linearly dependent")
        self.cols = piv2
        sub = ExactMatrix.wrap(f, basis.a[:, piv2].copy())
        self.inv = inverse(sub) if basis.rows else ExactMatrix.zeros(f, 0, 0)

    def coords(self, v: ExactMatrix, strict: bool = True) -> ExactMatrix:
        f = self.field
        if self.basis.rows == 0:
            if strict and not v.is_zero():
                raise ValueError("vector not in the span of an empty basis")
            return ExactMatrix.zeros(f, v.rows, 0)
        sub = ExactMatrix.wrap(f, v.a[:, self.cols].copy())
        c = sub @ self.inv
        if strict and c @ self.basis != v:
            raise ValueError("vector not in the span of the basis")
        return c


def concat_rows(vectors: Iterable[ExactMatrix], field: FieldSpec, cols: int) -> ExactMatrix:
    return vstack(list(vectors), field=field, cols=cols)


def charpoly_factors(m: ExactMatrix) -> list[tuple[list, int]]:
    """Factor the characteristic polynomial of a square matrix over its field.

    Returns ``(coeffs, multiplicity)`` pairs; ``coeffs`` are the monic
    irreducible factor's coefficients from the leading term down.
    """
    from sympy import GF, QQ, Poly, symbols
    from sympy.polys.matrices import DomainMatrix

    f = m.field
    n = m.rows
    if n == 0:
        return []
    t = symbols("t")
    if f.is_prime:
        dom = GF(f.p)
        dm = DomainMatrix([[dom(int(v)) for v in row] for row in m.a], (n, n), dom)
        cp = [int(c) % f.p for c in dm.charpoly()]
        poly = Poly(cp, t, modulus=f.p)
        _, facs = poly.factor_list()
        out = []
        for fac, mult in facs:
            coeffs = [int(c) % f.p for c in fac.all_coeffs()]
            lead = pow(coeffs[0], -1, f.p)
            out.append(([(c * lead) % f.p for c in coeffs], mult))
        return out
    dm = DomainMatrix([[QQ(v.numerator, v.denominator) for v in row] for row in m.a], (n, n), QQ)
    cp = [Fraction(int(c.numerator), int(c.denominator)) for c in dm.charpoly()]
    poly = Poly(cp, t, domain=QQ)
    _, facs = poly.factor_list()
    out = []
    for fac, mult in facs:
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in fac.all_coeffs()]
        out.append(([c / coeffs[0] for c in coeffs], mult))
    return out


def poly_eval(coeffs: Sequence, m: ExactMatrix) -> ExactMatrix:
    """Evaluate a polynomial (leading coefficient first) at a square matrix by Horner."""
    f = m.field
    out = ExactMatrix.zeros(f, m.rows, m.cols)
    ident = ExactMatrix.identity(f, m.rows)
    for c in coeffs:
        out = out @ m + ident.scale(c)
    return out


def matrix_power(m: ExactMatrix, k: int) -> ExactMatrix:
    result = ExactMatrix.identity(m.field, m.rows)
    base = m
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result
