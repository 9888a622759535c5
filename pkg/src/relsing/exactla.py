"""Exact linear algebra over the rationals and prime fields.

Matrices are thin immutable wrappers around FLINT matrices (``fmpq_mat`` for
Q, ``nmod_mat`` for GF(p)).  Everything above this module phrases its
questions (Hom spaces, kernels, homotopies) as one of the operations here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import flint

_SCALAR_RE = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?")


class DimensionError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``rationals`` (characteristic 0) or ``prime`` GF(p)."""

    kind: str
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == "rationals":
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        elif self.kind == "prime":
            if not _is_prime(self.characteristic):
                raise ValueError(f"{self.characteristic} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals", 0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    def __str__(self):
        return "Q" if self.kind == "rationals" else f"GF({self.characteristic})"

    def scalar(self, value):
        """Normalize ``value`` to this field's Python scalar type.

        Rationals become ``Fraction``; GF(p) elements become ints in the
        symmetric range ``(-p/2, p/2]``.
        """
        if isinstance(value, str):
            return self.parse(value)
        if self.kind == "rationals":
            if isinstance(value, flint.fmpq):
                return Fraction(int(value.p), int(value.q))
            return Fraction(value)
        p = self.characteristic
        if isinstance(value, flint.nmod):
            v = int(value)
        elif isinstance(value, Fraction):
            v = value.numerator * pow(value.denominator, -1, p)
        else:
            v = int(value)
        v %= p
        return v - p if v > p // 2 else v

    def parse(self, text: str):
        if not isinstance(text, str) or not _SCALAR_RE.fullmatch(text):
            raise ValueError(f"malformed scalar {text!r}")
        return self.scalar(Fraction(text))

    def format(self, value) -> str:
        v = self.scalar(value)
        return str(v)

    def _to_flint(self, value):
        if self.kind == "rationals":
            if isinstance(value, (int, flint.fmpq)):
                return value
            if isinstance(value, flint.fmpz):
                return int(value)
            f = Fraction(value)
            return flint.fmpq(f.numerator, f.denominator)
        p = self.characteristic
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def _raw(self, rows: int, cols: int, entries: list):
        if self.kind == "rationals":
            return flint.fmpq_mat(rows, cols, entries)
        return flint.nmod_mat(rows, cols, entries, self.characteristic)


QQ = FieldSpec.rationals()


class Mat:
    """An immutable matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "_m")

    def __init__(self, field: FieldSpec, raw):
        self.field = field
        self._m = raw

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Mat":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        entries = [field._to_flint(field.scalar(x) if isinstance(x, str) else x) for r in rows for x in r]
        return cls(field, field._raw(len(rows), cols, entries))

    @classmethod
    def from_flat(cls, field: FieldSpec, rows: int, cols: int, entries: list) -> "Mat":
        if len(entries) != rows * cols:
            raise DimensionError("entry count does not match shape")
        return cls(field, field._raw(rows, cols, [field._to_flint(x) for x in entries]))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Mat":
        return cls(field, field._raw(rows, cols, [0] * (rows * cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Mat":
        e = [0] * (n * n)
        for i in range(n):
            e[i * n + i] = 1
        return cls(field, field._raw(n, n, e))

    @classmethod
    def column(cls, field: FieldSpec, values: Sequence) -> "Mat":
        return cls.from_flat(field, len(values), 1, list(values))

    @classmethod
    def hstack(cls, field: FieldSpec, mats: Sequence["Mat"], rows: Optional[int] = None) -> "Mat":
        mats = list(mats)
        if not mats:
            return cls.zeros(field, rows or 0, 0)
        r = mats[0].rows
        if any(m.rows != r for m in mats):
            raise DimensionError("hstack: row counts differ")
        total = sum(m.cols for m in mats)
        rows_data = [[] for _ in range(r)]
        for m in mats:
            e = m._m.entries()
            c = m.cols
            for i in range(r):
                rows_data[i].extend(e[i * c:(i + 1) * c])
        flat = [x for row in rows_data for x in row]
        return cls(field, field._raw(r, total, flat))

    @classmethod
    def vstack(cls, field: FieldSpec, mats: Sequence["Mat"], cols: Optional[int] = None) -> "Mat":
        mats = list(mats)
        if not mats:
            return cls.zeros(field, 0, cols or 0)
        c = mats[0].cols
        if any(m.cols != c for m in mats):
            raise DimensionError("vstack: column counts differ")
        flat = []
        for m in mats:
            flat.extend(m._m.entries())
        return cls(field, field._raw(sum(m.rows for m in mats), c, flat))

    @classmethod
    def block(cls, field: FieldSpec, blocks: Sequence[Sequence["Mat"]]) -> "Mat":
        return cls.vstack(field, [cls.hstack(field, row) for row in blocks])

    @classmethod
    def block_diag(cls, field: FieldSpec, mats: Sequence["Mat"]) -> "Mat":
        rows = sum(m.rows for m in mats)
        cols = sum(m.cols for m in mats)
        flat = [0] * (rows * cols)
        r0 = c0 = 0
        for m in mats:
            e = m._m.entries()
            for i in range(m.rows):
                base = (r0 + i) * cols + c0
                flat[base:base + m.cols] = e[i * m.cols:(i + 1) * m.cols]
            r0 += m.rows
            c0 += m.cols
        return cls(field, field._raw(rows, cols, flat))

    # shape and access ---------------------------------------------------

    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.field.scalar(self._m[i, j])

    def raw_entries(self) -> list:
        return self._m.entries()

    def entries(self) -> list:
        """Row-major list of Python scalars."""
        return [self.field.scalar(x) for x in self._m.entries()]

    def to_rows(self) -> list:
        e = self.entries()
        c = self.cols
        return [e[i * c:(i + 1) * c] for i in range(self.rows)]

    def col(self, j: int) -> "Mat":
        return self.select_cols([j])

    def select_cols(self, idx: Sequence[int]) -> "Mat":
        e = self._m.entries()
        c = self.cols
        flat = [e[i * c + j] for i in range(self.rows) for j in idx]
        return Mat(self.field, self.field._raw(self.rows, len(idx), flat))

    def select_rows(self, idx: Sequence[int]) -> "Mat":
        e = self._m.entries()
        c = self.cols
        flat = [x for i in idx for x in e[i * c:(i + 1) * c]]
        return Mat(self.field, self.field._raw(len(idx), c, flat))

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Mat":
        return self.select_rows(range(r0, r1)).select_cols(range(c0, c1))

    # arithmetic ---------------------------------------------------------

    def _check_field(self, other: "Mat"):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Mat.zeros(self.field, self.rows, other.cols)
        return Mat(self.field, self._m * other._m)

    def __add__(self, other: "Mat") -> "Mat":
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        if self.rows == 0 or self.cols == 0:
            return self
        return Mat(self.field, self._m + other._m)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        if self.rows == 0 or self.cols == 0:
            return self
        return Mat(self.field, -self._m)

    def scale(self, c) -> "Mat":
        if self.rows == 0 or self.cols == 0:
            return self
        return Mat(self.field, self._m * self.field._to_flint(self.field.scalar(c)))

    def transpose(self) -> "Mat":
        if self.rows == 0 or self.cols == 0:
            return Mat.zeros(self.field, self.cols, self.rows)
        return Mat(self.field, self._m.transpose())

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def kron(self, other: "Mat") -> "Mat":
        a = self._m.entries()
        b = other._m.entries()
        ar, ac, br, bc = self.rows, self.cols, other.rows, other.cols
        rows, cols = ar * br, ac * bc
        flat = [0] * (rows * cols)
        for i in range(ar):
            for j in range(ac):
                x = a[i * ac + j]
                if x == 0:
                    continue
                for k in range(br):
                    base = (i * br + k) * cols + j * bc
                    for l in range(bc):
                        y = b[k * bc + l]
                        if y != 0:
                            flat[base + l] = x * y
        return Mat(self.field, self.field._raw(rows, cols, flat))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._m.entries())

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self._m.entries() == other._m.entries())

    def __hash__(self):
        return hash((self.shape, tuple(str(x) for x in self._m.entries())))

    def __repr__(self):
        return f"Mat({self.field}, {self.to_rows()})"


# -- elimination ---------------------------------------------------------


def rref(m: Mat) -> tuple:
    """Reduced row echelon form and pivot columns (left to right)."""
    if m.rows == 0 or m.cols == 0:
        return Mat.zeros(m.field, m.rows, m.cols), []
    r, rk = m._m.rref()
    e = r.entries()
    c = m.cols
    pivots = []
    for i in range(rk):
        row = e[i * c:(i + 1) * c]
        start = pivots[-1] + 1 if pivots else 0
        for j in range(start, c):
            if row[j] != 0:
                pivots.append(j)
                break
    return Mat(m.field, r), pivots


def rank(m: Mat) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return m._m.rank()


def kernel_basis(m: Mat) -> Mat:
    """Columns spanning the right null space, one per free column."""
    n = m.cols
    if m.rows == 0:
        return Mat.identity(m.field, n)
    r, pivots = rref(m)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    e = r._m.entries()
    flat = [0] * (n * len(free))
    for k, f in enumerate(free):
        flat[f * len(free) + k] = 1
        for i, p in enumerate(pivots):
            v = e[i * n + f]
            if v != 0:
                flat[p * len(free) + k] = -v
    return Mat(m.field, m.field._raw(n, len(free), flat))


def image_basis(m: Mat) -> Mat:
    """The pivot columns of ``m``: a basis of its column space."""
    _, pivots = rref(m)
    return m.select_cols(pivots)


def solve(a: Mat, b: Mat) -> Optional[Mat]:
    """Some X with a @ X == b, or None when inconsistent.

    Free variables are set to zero, pivots taken left to right.
    """
    if a.rows != b.rows:
        raise DimensionError(f"solve: {a.shape} vs {b.shape}")
    n, k = a.cols, b.cols
    if a.rows == 0:
        return Mat.zeros(a.field, n, k)
    aug = Mat.hstack(a.field, [a, b])
    r, pivots = rref(aug)
    if pivots and pivots[-1] >= n:
        return None
    e = r._m.entries()
    w = n + k
    flat = [0] * (n * k)
    for i, p in enumerate(pivots):
        flat[p * k:(p + 1) * k] = e[i * w + n:(i + 1) * w]
    return Mat(a.field, a.field._raw(n, k, flat))


def is_invertible(m: Mat) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def inverse(m: Mat) -> Mat:
    if not is_invertible(m):
        raise ValueError("matrix is not invertible")
    if m.rows == 0:
        return m
    return Mat(m.field, m._m.inv())


def quotient_dim(ambient_dim: int, subspace: Mat) -> int:
    if subspace.rows != ambient_dim:
        raise DimensionError("subspace vectors do not live in the ambient space")
    return ambient_dim - rank(subspace)


def complement_columns(sub: Mat) -> list:
    """Indices of standard basis vectors completing the column span of ``sub``."""
    n = sub.rows
    aug = Mat.hstack(sub.field, [sub, Mat.identity(sub.field, n)])
    _, pivots = rref(aug)
    return [p - sub.cols for p in pivots if p >= sub.cols]


def stack_vectors(field: FieldSpec, length: int, vectors: Iterable[Sequence]) -> Mat:
    """Matrix whose columns are the given flat vectors (raw FLINT scalars or ints)."""
    vectors = list(vectors)
    k = len(vectors)
    flat = [0] * (length * k)
    for j, v in enumerate(vectors):
        if len(v) != length:
            raise DimensionError("vector length mismatch")
        for i, x in enumerate(v):
            if x != 0:
                flat[i * k + j] = field._to_flint(x) if isinstance(x, Fraction) else x
    return Mat(field, field._raw(length, k, flat))


def columns_of(m: Mat) -> list:
    """The columns of ``m`` as lists of raw scalars."""
    e = m.raw_entries()
    c = m.cols
    return [[e[i * c + j] for i in range(m.rows)] for j in range(c)]


def rational_eigenvalues(m: Mat) -> list:
    """Eigenvalues of a square matrix lying in its own field, in a fixed order."""
    if m.rows != m.cols:
        raise DimensionError("eigenvalues need a square matrix")
    if m.rows == 0:
        return []
    _, factors = m._m.charpoly().factor()
    out = []
    for poly, _ in factors:
        if poly.degree() == 1:
            b, a = poly.coeffs()
            out.append(m.field.scalar(-b / a))
    return sorted(set(out))
