"""Exact rational scalars and dense exact linear algebra.

Scalars are ``fractions.Fraction`` values: arbitrary-precision, always in
lowest terms, with positive denominator.  They serialize as ``"p/q"``
(just ``"p"`` when the denominator is one).  On top of that sit a small
dense matrix type and the two span computations the rest of the package
needs: exact rank and Gram matrices.  Rank reduces the rows to integers
first (rescaling rows never changes the span) and then runs plain exact
Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_scalar(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction."""
    return Fraction(text)


def format_scalar(value: Fraction) -> str:
    """Render a Fraction as ``"p/q"``, or ``"p"`` when q = 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Matrix:
    """Dense matrix of Fractions, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Fraction]):
        if len(entries) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = [Fraction(e) for e in entries]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise DimensionError("ragged rows")
            flat.extend(Fraction(x) for x in row)
        return cls(r, c, flat)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    def __getitem__(self, key):
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries)))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("shape mismatch in addition")
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("shape mismatch in subtraction")
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, factor) -> "Matrix":
        f = Fraction(factor)
        return Matrix(self.rows, self.cols, [f * e for e in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError("inner dimensions differ")
        out = [ZERO] * (self.rows * other.cols)
        for i in range(self.rows):
            base = i * self.cols
            for t in range(self.cols):
                a = self.entries[base + t]
                if a == 0:
                    continue
                obase = t * other.cols
                rbase = i * other.cols
                for j in range(other.cols):
                    b = other.entries[obase + j]
                    if b != 0:
                        out[rbase + j] += a * b
        return Matrix(self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def kron(self, other: "Matrix") -> "Matrix":
        rr, cc = self.rows * other.rows, self.cols * other.cols
        out = [ZERO] * (rr * cc)
        for i in range(self.rows):
            for j in range(self.cols):
                a = self.entries[i * self.cols + j]
                if a == 0:
                    continue
                for p in range(other.rows):
                    row = (i * other.rows + p) * cc + j * other.cols
                    obase = p * other.cols
                    for q in range(other.cols):
                        b = other.entries[obase + q]
                        if b != 0:
                            out[row + q] = a * b
        return Matrix(rr, cc, out)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entries[i * self.cols + j] == self.entries[j * self.cols + i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionError("trace of a non-square matrix")
        return sum((self.entries[i * self.cols + i] for i in range(self.rows)), ZERO)

    def flatten(self) -> list[Fraction]:
        return list(self.entries)


def _as_vector(v) -> list[Fraction]:
    if isinstance(v, Matrix):
        return v.flatten()
    if hasattr(v, "flatten"):
        return list(v.flatten())
    return [Fraction(x) for x in v]


def _integer_rows(vectors: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    rows = []
    for vec in vectors:
        denom = 1
        for x in vec:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        row = [int(x * denom) for x in vec]
        g = 0
        for x in row:
            g = gcd(g, x)
        if g > 1:
            row = [x // g for x in row]
        rows.append(row)
    return rows


def rank(vectors: Iterable) -> int:
    """Exact dimension of the rational span of the given vectors.

    Accepts any mix of Matrix/Tensor objects (flattened) and plain
    sequences of Fractions; all must have equal length.
    """
    vecs = [_as_vector(v) for v in vectors]
    if not vecs:
        return 0
    length = len(vecs[0])
    for v in vecs:
        if len(v) != length:
            raise DimensionError("vectors of unequal length")
    rows = [r for r in _integer_rows(vecs) if any(r)]
    r = 0
    col = 0
    while r < len(rows) and col < length:
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            col += 1
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][col]
        for i in range(r + 1, len(rows)):
            x = rows[i][col]
            if x == 0:
                continue
            ri = rows[i]
            rp = rows[r]
            new = [p * a - x * b for a, b in zip(ri, rp)]
            g = 0
            for a in new:
                g = gcd(g, a)
            if g > 1:
                new = [a // g for a in new]
            rows[i] = new
        r += 1
        col += 1
    return r


def gram(vectors: Iterable) -> Matrix:
    """Symmetric matrix of pairwise standard inner products."""
    vecs = [_as_vector(v) for v in vectors]
    if vecs:
        length = len(vecs[0])
        for v in vecs:
            if len(v) != length:
                raise DimensionError("vectors of unequal length")
    n = len(vecs)
    out = [ZERO] * (n * n)
    for i in range(n):
        for j in range(i, n):
            s = sum((a * b for a, b in zip(vecs[i], vecs[j])), ZERO)
            out[i * n + j] = s
            out[j * n + i] = s
    return Matrix(n, n, out)


def det(matrix: Matrix) -> Fraction:
    """Exact determinant via fraction-free Bareiss elimination."""
    if matrix.rows != matrix.cols:
        raise DimensionError("determinant of a non-square matrix")
    n = matrix.rows
    if n == 0:
        return ONE
    m = [matrix.row(i) for i in range(n)]
    sign = 1
    prev = ONE
    for col in range(n - 1):
        pivot = None
        for i in range(col, n):
            if m[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                m[i][j] = (p * m[i][j] - m[i][col] * m[col][j]) / prev
            m[i][col] = ZERO
        prev = p
    return sign * m[n - 1][n - 1]
