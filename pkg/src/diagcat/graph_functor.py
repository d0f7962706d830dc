"""Evaluations of bilabelled graphs.

``evaluate_TA`` sums weighted vertex colorings into a symmetric matrix A
(weighted homomorphism counting); it ships with two interchangeable
implementations, an exhaustive coloring sum (normative on small graphs)
and a variable-elimination fast path, compared against each other in the
tests.  ``evaluate_Fpi`` expands a graph into a combination of partitions
by resolving every edge into alpha*identity + beta*disconnecter.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd

from . import limits
from .bigraph import BilabelledGraph
from .errors import DimensionError, GuardError
from .exactnum import Matrix
from .partition import Partition, PartitionVector
from .partition_tensor import Tensor, evaluate, flatten_index, tau_matrix


def _integerize(A: Matrix) -> tuple[list[list[int]], int]:
    denom = 1
    for e in A.entries:
        denom = denom * e.denominator // gcd(denom, e.denominator)
    rows = [[int(x * denom) for x in A.row(i)] for i in range(A.rows)]
    return rows, denom


def _check_weight_matrix(A: Matrix, N: int | None) -> int:
    if A.rows != A.cols:
        raise DimensionError("weight matrix must be square")
    if not A.is_symmetric():
        raise DimensionError("weight matrix must be symmetric")
    if N is not None and N != A.rows:
        raise DimensionError(f"weight matrix is {A.rows}x{A.rows}, expected {N}")
    return A.rows


def contraction_order(K: BilabelledGraph) -> list[int]:
    """Greedy min-degree elimination order over the inner vertices."""
    boundary = set(K.inputs) | set(K.outputs)
    adjacency: dict[int, set[int]] = {v: set() for v in range(K.n)}
    for u, v in K.edges:
        if u != v:
            adjacency[u].add(v)
            adjacency[v].add(u)
    remaining = set(range(K.n))
    order = []
    while True:
        inner = [v for v in remaining if v not in boundary]
        if not inner:
            return order
        v = min(inner, key=lambda x: (len(adjacency[x] & remaining), x))
        order.append(v)
        nbrs = adjacency[v] & remaining
        for a in nbrs:
            for b in nbrs:
                if a != b:
                    adjacency[a].add(b)
        remaining.discard(v)


def _brute_force_TA(K: BilabelledGraph, rows: list[list[int]], N: int) -> dict[tuple[int, int], int]:
    limits.check_tensor_size(N**K.n)
    acc: dict[tuple[int, int], int] = {}
    edges = K.edges
    inputs = K.inputs
    outputs = K.outputs
    for phi in product(range(N), repeat=K.n):
        weight = 1
        for u, v in edges:
            weight *= rows[phi[u]][phi[v]]
            if weight == 0:
                break
        if weight == 0:
            continue
        row = flatten_index((phi[v] for v in outputs), N)
        col = flatten_index((phi[v] for v in inputs), N)
        key = (row, col)
        acc[key] = acc.get(key, 0) + weight
    return acc


class _Factor:
    """Dense integer table over an ordered tuple of vertex variables."""

    __slots__ = ("vars", "table")

    def __init__(self, vars: tuple[int, ...], table: list[int]):
        self.vars = vars
        self.table = table

    @classmethod
    def scalar(cls, value: int) -> "_Factor":
        return cls((), [value])

    def join(self, other: "_Factor", N: int) -> "_Factor":
        out_vars = tuple(sorted(set(self.vars) | set(other.vars)))
        pos = {v: i for i, v in enumerate(out_vars)}
        size = N ** len(out_vars)
        table = [0] * size
        self_idx = [pos[v] for v in self.vars]
        other_idx = [pos[v] for v in other.vars]
        for assignment in product(range(N), repeat=len(out_vars)):
            a = 0
            for i in self_idx:
                a = a * N + assignment[i]
            b = 0
            for i in other_idx:
                b = b * N + assignment[i]
            value = self.table[a] * other.table[b]
            if value:
                flat = 0
                for x in assignment:
                    flat = flat * N + x
                table[flat] = value
        return _Factor(out_vars, table)

    def eliminate(self, v: int, N: int) -> "_Factor":
        pos = self.vars.index(v)
        out_vars = self.vars[:pos] + self.vars[pos + 1 :]
        size = N ** len(out_vars)
        table = [0] * size
        tail = len(self.vars) - pos - 1
        tail_size = N**tail
        for flat, value in enumerate(self.table):
            if not value:
                continue
            head = flat // (tail_size * N)
            rest = flat % tail_size
            table[head * tail_size + rest] += value
        return _Factor(out_vars, table)


def _elimination_TA(K: BilabelledGraph, rows: list[list[int]], N: int) -> dict[tuple[int, int], int]:
    limits.check_tensor_size(N ** (K.k + K.l))
    factors: list[_Factor] = []
    for (u, v), mult in sorted(K.edge_multiplicities().items()):
        if u == v:
            table = [rows[x][x] ** mult for x in range(N)]
            factors.append(_Factor((u,), table))
        else:
            table = [0] * (N * N)
            for x in range(N):
                for y in range(N):
                    table[x * N + y] = rows[x][y] ** mult
            factors.append(_Factor((u, v), table))
    scalar = 1
    for v in contraction_order(K):
        involved = [f for f in factors if v in f.vars]
        factors = [f for f in factors if v not in f.vars]
        if not involved:
            scalar *= N  # free inner vertex sums to N
            continue
        joined = involved[0]
        for f in involved[1:]:
            joined = joined.join(f, N)
        reduced = joined.eliminate(v, N)
        if reduced.vars:
            factors.append(reduced)
        else:
            scalar *= reduced.table[0]
    combined = _Factor.scalar(scalar)
    for f in factors:
        combined = combined.join(f, N)
    for v in sorted(set(K.inputs) | set(K.outputs)):
        if v not in combined.vars:
            combined = combined.join(_Factor((v,), [1] * N), N)

    acc: dict[tuple[int, int], int] = {}
    pos = {v: i for i, v in enumerate(combined.vars)}
    for assignment in product(range(N), repeat=len(combined.vars)):
        flat = 0
        for x in assignment:
            flat = flat * N + x
        value = combined.table[flat]
        if not value:
            continue
        row = flatten_index((assignment[pos[v]] for v in K.outputs), N)
        col = flatten_index((assignment[pos[v]] for v in K.inputs), N)
        key = (row, col)
        acc[key] = acc.get(key, 0) + value
    return acc


def evaluate_TA(K: BilabelledGraph, A: Matrix, N: int | None = None, method: str = "auto") -> Tensor:
    """Weighted coloring sum: entry (i, j) sums products of A over edges
    across colorings that pin the inputs to j and the outputs to i."""
    N = _check_weight_matrix(A, N)
    rows, denom = _integerize(A)
    if method == "brute":
        raw = _brute_force_TA(K, rows, N)
    elif method in ("auto", "elimination"):
        raw = _elimination_TA(K, rows, N)
    else:
        raise ValueError(f"unknown method {method!r}")
    scale = Fraction(1, denom ** len(K.edges))
    data = {key: scale * value for key, value in raw.items() if value}
    return Tensor(N, K.k, K.l, data)


def evaluate_Fpi(K: BilabelledGraph, alpha, beta, loop_parameter) -> PartitionVector:
    """Resolve each edge copy into alpha*identity + beta*disconnecter.

    The sum runs over the subsets S of the edge multiset that pick the
    disconnecter: remaining edges force their endpoints into one block,
    components without boundary contribute a free factor of N each.
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    n_param = Fraction(loop_parameter)
    edges = list(K.edges)
    if len(edges) > limits.DEFAULT_EDGE_SUBSET_CAP:
        raise GuardError(f"edge-subset expansion over {len(edges)} edges exceeds cap")
    k, l = K.k, K.l
    boundary_slots = list(K.inputs) + list(K.outputs)
    boundary = set(boundary_slots)
    terms: dict[Partition, Fraction] = {}
    for picks in product((False, True), repeat=len(edges)):
        kept = [e for e, dropped in zip(edges, picks) if not dropped]
        dropped_count = sum(picks)
        coeff = alpha ** (len(edges) - dropped_count) * beta**dropped_count
        if coeff == 0:
            continue
        parent = list(range(K.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in kept:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru
        roots = {find(v) for v in range(K.n)}
        open_roots = {find(v) for v in boundary}
        free = len(roots - open_roots)
        assignment = tuple(find(v) for v in boundary_slots)
        p = Partition(k, l, assignment)
        new = terms.get(p, Fraction(0)) + coeff * n_param**free
        if new == 0:
            terms.pop(p, None)
        else:
            terms[p] = new
    return PartitionVector(k, l, terms)


def consistency_check(K: BilabelledGraph, N: int) -> bool:
    """The two evaluations agree: T^A with A = T(tau) equals T of the expansion."""
    A = tau_matrix(N)
    left = evaluate_TA(K, A, N)
    right = evaluate(evaluate_Fpi(K, 1, Fraction(-2, N), N), N)
    return left == right
