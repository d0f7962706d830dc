"""Exact tensor evaluation of partitions and classical-group utilities.

A Tensor represents a morphism (C^N)^(tensor k) -> (C^N)^(tensor l) as an
N^l x N^k matrix.  Multi-indices flatten big-endian; index values run
1..N externally and 0..N-1 internally.  Entries are stored sparsely (only
nonzeros), which keeps the permanent-identity computations at N=5 cheap;
the logical shape is always the full dense matrix and JSON export lists
nonzeros only.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Mapping

from . import limits
from .errors import ArityError, DimensionError, SchemaError
from .exactnum import Matrix, Scalar, format_scalar, parse_scalar
from .partition import Partition, PartitionVector, _as_vector, hat


def flatten_index(indices: Iterable[int], n: int) -> int:
    out = 0
    for i in indices:
        out = out * n + i
    return out


def unflatten_index(flat: int, n: int, length: int) -> tuple[int, ...]:
    out = [0] * length
    for pos in range(length - 1, -1, -1):
        out[pos] = flat % n
        flat //= n
    return tuple(out)


class Tensor:
    """Sparse exact matrix of shape N^l x N^k with tensor-leg bookkeeping."""

    __slots__ = ("N", "k", "l", "data")

    def __init__(self, N: int, k: int, l: int, data: Mapping[tuple[int, int], Scalar] | None = None):
        if N < 1:
            raise ValueError("N must be at least 1")
        self.N = N
        self.k = k
        self.l = l
        self.data: dict[tuple[int, int], Fraction] = {}
        if data:
            for key, value in data.items():
                value = Fraction(value)
                if value != 0:
                    self.data[key] = value

    @property
    def n_rows(self) -> int:
        return self.N**self.l

    @property
    def n_cols(self) -> int:
        return self.N**self.k

    def get(self, row: int, col: int) -> Fraction:
        return self.data.get((row, col), Fraction(0))

    def __eq__(self, other):
        return (
            isinstance(other, Tensor)
            and (self.N, self.k, self.l) == (other.N, other.k, other.l)
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.N, self.k, self.l, frozenset(self.data.items())))

    def __repr__(self):
        return f"Tensor(N={self.N}, {self.k}->{self.l}, nnz={len(self.data)})"

    def is_zero(self) -> bool:
        return not self.data

    def __add__(self, other: "Tensor") -> "Tensor":
        if (self.N, self.k, self.l) != (other.N, other.k, other.l):
            raise DimensionError("tensor shape mismatch")
        data = dict(self.data)
        for key, value in other.data.items():
            new = data.get(key, Fraction(0)) + value
            if new == 0:
                data.pop(key, None)
            else:
                data[key] = new
        return Tensor(self.N, self.k, self.l, data)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + other.scale(-1)

    def scale(self, factor) -> "Tensor":
        f = Fraction(factor)
        if f == 0:
            return Tensor(self.N, self.k, self.l)
        return Tensor(self.N, self.k, self.l, {key: f * v for key, v in self.data.items()})

    def tensor(self, other: "Tensor") -> "Tensor":
        if self.N != other.N:
            raise DimensionError("tensor factors over different N")
        rows2, cols2 = other.n_rows, other.n_cols
        data = {}
        for (r1, c1), v1 in self.data.items():
            for (r2, c2), v2 in other.data.items():
                data[(r1 * rows2 + r2, c1 * cols2 + c2)] = v1 * v2
        return Tensor(self.N, self.k + other.k, self.l + other.l, data)

    def compose(self, other: "Tensor") -> "Tensor":
        """Matrix product self . other (self applied after other)."""
        if self.N != other.N:
            raise DimensionError("composition over different N")
        if self.k != other.l:
            raise ArityError(f"cannot compose: {self.k} inputs vs {other.l} outputs")
        by_col: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in self.data.items():
            by_col.setdefault(c, []).append((r, v))
        data: dict[tuple[int, int], Fraction] = {}
        for (r2, c2), v2 in other.data.items():
            for r1, v1 in by_col.get(r2, ()):
                key = (r1, c2)
                new = data.get(key, Fraction(0)) + v1 * v2
                if new == 0:
                    data.pop(key, None)
                else:
                    data[key] = new
        return Tensor(self.N, other.k, self.l, data)

    def involution(self) -> "Tensor":
        return Tensor(self.N, self.l, self.k, {(c, r): v for (r, c), v in self.data.items()})

    def flatten(self) -> list[Fraction]:
        out = [Fraction(0)] * (self.n_rows * self.n_cols)
        cols = self.n_cols
        for (r, c), v in self.data.items():
            out[r * cols + c] = v
        return out

    def to_matrix(self) -> Matrix:
        return Matrix(self.n_rows, self.n_cols, self.flatten())

    @classmethod
    def from_matrix(cls, m: Matrix, N: int, k: int, l: int) -> "Tensor":
        if (m.rows, m.cols) != (N**l, N**k):
            raise DimensionError("matrix shape does not match tensor legs")
        data = {}
        for r in range(m.rows):
            base = r * m.cols
            for c in range(m.cols):
                v = m.entries[base + c]
                if v != 0:
                    data[(r, c)] = v
        return cls(N, k, l, data)

    @classmethod
    def identity(cls, N: int, legs: int = 1) -> "Tensor":
        size = N**legs
        return cls(N, legs, legs, {(i, i): Fraction(1) for i in range(size)})

    def to_json(self) -> dict:
        entries = sorted(self.data.items())
        return {
            "N": self.N,
            "k": self.k,
            "l": self.l,
            "entries": [[format_scalar(v), r, c] for (r, c), v in entries],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Tensor":
        try:
            data = {}
            for value, r, c in doc["entries"]:
                data[(int(r), int(c))] = parse_scalar(value)
            return cls(int(doc["N"]), int(doc["k"]), int(doc["l"]), data)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad tensor document: {exc}") from exc


def evaluate(x, N: int) -> Tensor:
    """Evaluate a partition or combination to its tensor at size N.

    The entry at (j, i) is the sum of coefficients of terms whose blocks
    are constant on the assigned indices: iterate over all block
    colorings, emit one nonzero per coloring.
    """
    xv = _as_vector(x)
    limits.check_tensor_size(N ** (xv.upper + xv.lower))
    out = Tensor(N, xv.upper, xv.lower)
    data: dict[tuple[int, int], Fraction] = {}
    for p, coeff in xv.terms.items():
        k = p.upper
        nb = p.n_blocks
        for colors in product(range(N), repeat=nb):
            col = flatten_index((colors[b] for b in p.assignment[:k]), N)
            row = flatten_index((colors[b] for b in p.assignment[k:]), N)
            key = (row, col)
            new = data.get(key, Fraction(0)) + coeff
            if new == 0:
                data.pop(key, None)
            else:
                data[key] = new
    out.data = data
    return out


def evaluate_hat(p: Partition, N: int) -> Tensor:
    """Entry 1 exactly when indices agree precisely on blocks (injective colorings)."""
    limits.check_tensor_size(N ** (p.upper + p.lower))
    k = p.upper
    nb = p.n_blocks
    data: dict[tuple[int, int], Fraction] = {}
    if nb <= N:
        for colors in permutations(range(N), nb):
            col = flatten_index((colors[b] for b in p.assignment[:k]), N)
            row = flatten_index((colors[b] for b in p.assignment[k:]), N)
            data[(row, col)] = data.get((row, col), Fraction(0)) + 1
    return Tensor(N, p.upper, p.lower, data)


def permanent_vector(N: int) -> Tensor:
    """The (0, N) tensor with entry 1 exactly on permutation tuples."""
    data = {}
    for perm in permutations(range(N)):
        data[(flatten_index(perm, N), 0)] = Fraction(1)
    return Tensor(N, 0, N, data)


def permanent(X: Matrix) -> Scalar:
    """Permutation sum without signs."""
    if X.rows != X.cols:
        raise DimensionError("permanent of a non-square matrix")
    n = X.rows
    total = Fraction(0)
    for perm in permutations(range(n)):
        prod = Fraction(1)
        for i, j in enumerate(perm):
            prod *= X[i, j]
            if prod == 0:
                break
        total += prod
    return total


def tau_matrix(N: int) -> Matrix:
    """The N x N matrix with entries delta_ij - 2/N (image of tau)."""
    two_over_n = Fraction(2, N)
    return Matrix(
        N, N, [(1 if i == j else 0) - two_over_n for i in range(N) for j in range(N)]
    )


# --- signed permutation matrices ---------------------------------------------

def signed_permutation_matrix(perm: tuple[int, ...], signs: tuple[int, ...]) -> Matrix:
    """Matrix sending e_j to signs[j] * e_perm[j]."""
    n = len(perm)
    entries = [Fraction(0)] * (n * n)
    for j in range(n):
        entries[perm[j] * n + j] = Fraction(signs[j])
    return Matrix(n, n, entries)


def as_signed_permutation(X: Matrix) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Decompose a signed permutation matrix into (perm, signs); raise otherwise."""
    if X.rows != X.cols:
        raise ValueError("not square")
    n = X.rows
    perm = [-1] * n
    signs = [0] * n
    for j in range(n):
        hits = [i for i in range(n) if X[i, j] != 0]
        if len(hits) != 1 or X[hits[0], j] not in (1, -1):
            raise ValueError("not a signed permutation matrix")
        perm[j] = hits[0]
        signs[j] = int(X[hits[0], j])
    if len(set(perm)) != n:
        raise ValueError("not a signed permutation matrix")
    return tuple(perm), tuple(signs)


def classical_D4_elements() -> list[Matrix]:
    """All 4x4 signed permutation matrices with permanent 1 (brute force)."""
    out = []
    for perm in permutations(range(4)):
        for bits in product((1, -1), repeat=4):
            sign_product = bits[0] * bits[1] * bits[2] * bits[3]
            if sign_product == 1:
                out.append(signed_permutation_matrix(perm, bits))
    return out


def classical_D4_generators() -> list[Matrix]:
    """A small generating set: adjacent swaps plus one double sign flip."""
    swaps = []
    for a in (0, 1, 2):
        perm = list(range(4))
        perm[a], perm[a + 1] = perm[a + 1], perm[a]
        swaps.append(signed_permutation_matrix(tuple(perm), (1, 1, 1, 1)))
    flip = signed_permutation_matrix((0, 1, 2, 3), (-1, -1, 1, 1))
    return swaps + [flip]


def group_closure(generators_list: list[Matrix], cap: int = 10000) -> list[Matrix]:
    """Multiplicative closure of a set of matrices (for generating-set checks)."""
    n = generators_list[0].rows
    seen = {Matrix.identity(n)}
    frontier = [Matrix.identity(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators_list:
                y = x @ g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise RuntimeError("group closure exceeded cap")
        frontier = nxt
    return sorted(seen, key=lambda m: tuple(m.entries))


def apply_signed_power(X: Matrix, vector: Tensor) -> Tensor:
    """Apply X^(tensor l) to a (0, l) tensor, using the signed permutation structure."""
    if vector.k != 0:
        raise ArityError("apply_signed_power expects a (0, l) tensor")
    perm, signs = as_signed_permutation(X)
    n = vector.N
    legs = vector.l
    data: dict[tuple[int, int], Fraction] = {}
    for (row, _), value in vector.data.items():
        idx = unflatten_index(row, n, legs)
        sign = 1
        for t in idx:
            sign *= signs[t]
        new_row = flatten_index((perm[t] for t in idx), n)
        data[(new_row, 0)] = sign * value
    return Tensor(n, 0, legs, data)


def fixed_space_dimension(matrices: list[Matrix], legs: int, N: int | None = None) -> int:
    """Dimension of the joint fixed space of X^(tensor legs) over signed permutations.

    Solved exactly with a signed union-find on the N^legs basis indices:
    each generator forces v[sigma(idx)] = sign * v[idx]; classes whose
    relations force v = -v contribute nothing.
    """
    decomposed = [as_signed_permutation(X) for X in matrices]
    if N is None:
        N = matrices[0].rows
    size = N**legs
    parent = list(range(size))
    rel = [1] * size  # sign of this element relative to its parent
    dead = [False] * size

    def find(x: int) -> tuple[int, int]:
        sign = 1
        while parent[x] != x:
            sign *= rel[x]
            x = parent[x]
        return x, sign

    def union(x: int, y: int, sign: int) -> None:
        # impose v[y] = sign * v[x]
        rx, sx = find(x)
        ry, sy = find(y)
        if rx == ry:
            if sx * sign != sy:
                dead[rx] = True
            return
        parent[ry] = rx
        rel[ry] = sx * sign * sy  # so that chain signs compose correctly
        dead[rx] = dead[rx] or dead[ry]

    for flat in range(size):
        idx = unflatten_index(flat, N, legs)
        for perm, signs in decomposed:
            sign = 1
            for t in idx:
                sign *= signs[t]
            image = flatten_index((perm[t] for t in idx), N)
            union(flat, image, sign)

    roots = set()
    for x in range(size):
        r, _ = find(x)
        roots.add(r)
    return sum(1 for r in roots if not dead[r])


def fixed_space_dimension_by_characters(group: list[Matrix], legs: int) -> Fraction:
    """Average of trace**legs over the full group; independent oracle."""
    total = Fraction(0)
    for X in group:
        total += X.trace() ** legs
    return total / len(group)


def hat_singletons_tensor(l: int, N: int) -> Tensor:
    """evaluate(hat(l lower singletons), N); equals the permanent vector at l = N."""
    from .partition import singletons

    return evaluate(hat(singletons(l)), N)
