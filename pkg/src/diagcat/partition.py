"""Set partitions of two rows of points and their linear combinations.

A partition lives on k upper and l lower points.  Points are indexed in a
single space 0..k+l-1, the first k being the upper row (left to right) and
the rest the lower row (left to right).  Block ids are normalized so that
the first occurrence of each id appears in increasing order; two
partitions are equal iff their normalized assignments agree.

The category operations follow the usual picture rules: tensor is "side by
side", composition stacks q below p and every closed middle component
contributes one factor of the loop parameter N, involution mirrors the
picture across the horizontal axis.  The right rotation moves the
rightmost lower point to the rightmost upper position; the left rotation
moves the leftmost upper point to the leftmost lower position.  Note that
these two act at opposite ends of the diagram, so they are not mutually
inverse; the true inverses are provided separately.

Composition itself is N-free: the combinatorial kernel returns the glued
partition together with the closed-loop count, and the N**loops scaling is
applied at the PartitionVector layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import ArityError, RotationError, SchemaError
from .exactnum import Scalar, format_scalar, parse_scalar


def _normalize_assignment(assignment: Iterable[int]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    out = []
    for block in assignment:
        if block not in relabel:
            relabel[block] = len(relabel)
        out.append(relabel[block])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """Set partition of k upper and l lower points."""

    upper: int
    lower: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        if self.upper < 0 or self.lower < 0:
            raise ValueError("negative point counts")
        if len(self.assignment) != self.upper + self.lower:
            raise ValueError("assignment length does not match point count")
        normalized = _normalize_assignment(self.assignment)
        object.__setattr__(self, "assignment", normalized)

    @classmethod
    def from_blocks(cls, upper: int, lower: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        n = upper + lower
        assignment = [-1] * n
        for bid, block in enumerate(blocks):
            for point in block:
                if not 0 <= point < n:
                    raise ValueError(f"point {point} out of range")
                if assignment[point] != -1:
                    raise ValueError(f"point {point} in two blocks")
                assignment[point] = bid
        if any(a == -1 for a in assignment):
            raise ValueError("every point needs a block")
        return cls(upper, lower, tuple(assignment))

    @property
    def n_points(self) -> int:
        return self.upper + self.lower

    @property
    def n_blocks(self) -> int:
        return len(set(self.assignment))

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: dict[int, list[int]] = {}
        for point, bid in enumerate(self.assignment):
            out.setdefault(bid, []).append(point)
        return tuple(tuple(out[bid]) for bid in sorted(out))

    def same_block(self, i: int, j: int) -> bool:
        return self.assignment[i] == self.assignment[j]

    def to_json(self) -> dict:
        return {
            "upper": self.upper,
            "lower": self.lower,
            "blocks": [list(b) for b in self.blocks()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Partition":
        try:
            return cls.from_blocks(int(doc["upper"]), int(doc["lower"]), doc["blocks"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad partition document: {exc}") from exc

    def __str__(self):
        ups = ",".join(str(b) for b in self.assignment[: self.upper])
        lows = ",".join(str(b) for b in self.assignment[self.upper :])
        return f"[{ups}|{lows}]"


EMPTY = Partition(0, 0, ())


# --- elementary constructors ------------------------------------------------

def identity_partition() -> Partition:
    return Partition(1, 1, (0, 0))


def disconnecter_partition() -> Partition:
    return Partition(1, 1, (0, 1))


def pair_partition() -> Partition:
    return Partition(0, 2, (0, 0))


def uppair_partition() -> Partition:
    return Partition(2, 0, (0, 0))


def crossing_partition() -> Partition:
    # u1 with l2, u2 with l1
    return Partition(2, 2, (0, 1, 1, 0))


def parallel_pairs_partition() -> Partition:
    # u1 with l1, u2 with l2
    return Partition(2, 2, (0, 1, 0, 1))


def connecter_partition() -> Partition:
    return Partition(2, 2, (0, 0, 0, 0))


def fourblock_partition() -> Partition:
    return Partition(0, 4, (0, 0, 0, 0))


def singleton_partition() -> Partition:
    return Partition(0, 1, (0,))


def singletons(l: int) -> Partition:
    """l lower points, each its own block."""
    return Partition(0, l, tuple(range(l)))


# --- partition-level operations ---------------------------------------------

def tensor_partitions(p: Partition, q: Partition) -> Partition:
    k1, l1, k2, l2 = p.upper, p.lower, q.upper, q.lower
    shift = p.n_blocks
    assignment = (
        list(p.assignment[:k1])
        + [b + shift for b in q.assignment[:k2]]
        + list(p.assignment[k1:])
        + [b + shift for b in q.assignment[k2:]]
    )
    return Partition(k1 + k2, l1 + l2, tuple(assignment))


def glue(q: Partition, p: Partition) -> tuple[Partition, int]:
    """Compose q below p; return the glued partition and the closed-loop count."""
    if p.lower != q.upper:
        raise ArityError(f"cannot glue: p has {p.lower} lower, q has {q.upper} upper points")
    k, mid, m = p.upper, p.lower, q.lower
    # union-find over p's blocks and q's blocks (q shifted)
    shift = p.n_blocks
    total = shift + q.n_blocks
    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for i in range(mid):
        union(p.assignment[k + i], shift + q.assignment[i])

    result_points = [find(p.assignment[i]) for i in range(k)]
    result_points += [find(shift + q.assignment[q.upper + j]) for j in range(m)]
    open_roots = set(result_points)
    all_roots = {find(x) for x in range(total)}
    # a middle class is closed when no upper point of p and no lower point of q meets it
    closed = len(all_roots - open_roots)
    return Partition(k, m, tuple(result_points)), closed


def involution_partition(p: Partition) -> Partition:
    assignment = p.assignment[p.upper :] + p.assignment[: p.upper]
    return Partition(p.lower, p.upper, assignment)


def rotate_right_partition(p: Partition) -> Partition:
    if p.lower < 1:
        raise RotationError("rotate_right needs at least one lower point")
    a = p.assignment
    k = p.upper
    assignment = a[:k] + (a[-1],) + a[k:-1]
    return Partition(k + 1, p.lower - 1, assignment)


def rotate_left_partition(p: Partition) -> Partition:
    if p.upper < 1:
        raise RotationError("rotate_left needs at least one upper point")
    a = p.assignment
    k = p.upper
    assignment = a[1:k] + (a[0],) + a[k:]
    return Partition(k - 1, p.lower + 1, assignment)


def rotate_right_inverse_partition(p: Partition) -> Partition:
    """Move the rightmost upper point to the rightmost lower position."""
    if p.upper < 1:
        raise RotationError("rotate_right inverse needs at least one upper point")
    a = p.assignment
    k = p.upper
    assignment = a[: k - 1] + a[k:] + (a[k - 1],)
    return Partition(k - 1, p.lower + 1, assignment)


def rotate_left_inverse_partition(p: Partition) -> Partition:
    """Move the leftmost lower point to the leftmost upper position."""
    if p.lower < 1:
        raise RotationError("rotate_left inverse needs at least one lower point")
    a = p.assignment
    k = p.upper
    assignment = (a[k],) + a[:k] + a[k + 1 :]
    return Partition(p.upper + 1, p.lower - 1, assignment)


def is_noncrossing(p: Partition) -> bool:
    """True iff no two blocks interleave in the cyclic order u_k..u_1,l_1..l_l.

    Crossing on the circle is equivalent to crossing in this fixed
    linearization, so a linear interleaving test suffices.
    """
    seq = tuple(reversed(p.assignment[: p.upper])) + p.assignment[p.upper :]
    positions: dict[int, list[int]] = {}
    for pos, bid in enumerate(seq):
        positions.setdefault(bid, []).append(pos)
    bids = sorted(positions)
    for i, b1 in enumerate(bids):
        for b2 in bids[i + 1 :]:
            merged = sorted((pos, bid) for bid in (b1, b2) for pos in positions[bid])
            changes = sum(1 for a, b in zip(merged, merged[1:]) if a[1] != b[1])
            if changes >= 3:
                return False
    return True


# --- merge order, Möbius function, hat map ----------------------------------

def _set_partitions(items: list) -> Iterator[list[list]]:
    """All set partitions of a list, by recursive insertion."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1 :]
        yield [[first]] + sub


def coarsenings(p: Partition) -> list[Partition]:
    """All partitions q >= p (every block of q is a union of blocks of p)."""
    block_ids = sorted(set(p.assignment))
    out = []
    for grouping in _set_partitions(block_ids):
        relabel = {}
        for gid, group in enumerate(grouping):
            for bid in group:
                relabel[bid] = gid
        out.append(Partition(p.upper, p.lower, tuple(relabel[b] for b in p.assignment)))
    return out


def is_coarsening(q: Partition, p: Partition) -> bool:
    """True iff q >= p in the block-merge order."""
    if (q.upper, q.lower) != (p.upper, p.lower):
        return False
    seen: dict[int, int] = {}
    for pb, qb in zip(p.assignment, q.assignment):
        if pb in seen:
            if seen[pb] != qb:
                return False
        else:
            seen[pb] = qb
    return True


@lru_cache(maxsize=None)
def _mobius_full(n: int) -> int:
    """Möbius value of the full interval in the partition lattice of n items.

    Computed by recursive interval inversion: the values mu(0̂, r) over all
    r < 1̂ factor over blocks, and their total with mu(0̂, 1̂) must vanish.
    """
    if n == 1:
        return 1
    total = 0
    for grouping in _set_partitions(list(range(n))):
        if len(grouping) == 1:
            continue
        prod = 1
        for group in grouping:
            prod *= _mobius_full(len(group))
        total += prod
    return -total


def mobius_closed_form(n: int) -> int:
    """Closed form (-1)**(n-1) * (n-1)! for the full interval; cross-check only."""
    out = 1
    for i in range(1, n):
        out *= -i
    return out


def mobius(p: Partition, q: Partition) -> Scalar:
    """Möbius function of the interval [p, q] in the merge order."""
    if not is_coarsening(q, p):
        raise ValueError("q is not a coarsening of p")
    # group p-blocks by the q-block that swallows them; the interval is a
    # product of full partition-lattice intervals, one per group
    groups: dict[int, set[int]] = {}
    for pb, qb in zip(p.assignment, q.assignment):
        groups.setdefault(qb, set()).add(pb)
    value = 1
    for members in groups.values():
        value *= _mobius_full(len(members))
    return Fraction(value)


def hat(p: Partition) -> "PartitionVector":
    """Möbius-inverted combination: sum of mu(p, q) * q over all q >= p."""
    terms = {q: mobius(p, q) for q in coarsenings(p)}
    return PartitionVector(p.upper, p.lower, terms)


# --- linear combinations ------------------------------------------------------

class PartitionVector:
    """Formal rational linear combination of partitions with a common shape."""

    __slots__ = ("upper", "lower", "terms")

    def __init__(self, upper: int, lower: int, terms: Mapping[Partition, Scalar] | None = None):
        self.upper = upper
        self.lower = lower
        self.terms: dict[Partition, Fraction] = {}
        if terms:
            for p, c in terms.items():
                if (p.upper, p.lower) != (upper, lower):
                    raise ArityError("term shape differs from vector shape")
                c = Fraction(c)
                if c != 0:
                    self.terms[p] = c

    @classmethod
    def of(cls, p: Partition, coeff=1) -> "PartitionVector":
        return cls(p.upper, p.lower, {p: Fraction(coeff)})

    def __eq__(self, other):
        return (
            isinstance(other, PartitionVector)
            and self.upper == other.upper
            and self.lower == other.lower
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.upper, self.lower, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"PartitionVector({self.upper},{self.lower}: 0)"
        body = " + ".join(
            f"{format_scalar(c)}*{p}" for p, c in sorted(self.terms.items(), key=lambda t: t[0].assignment)
        )
        return f"PartitionVector({body})"

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PartitionVector") -> "PartitionVector":
        if (self.upper, self.lower) != (other.upper, other.lower):
            raise ArityError("shape mismatch in addition")
        terms = dict(self.terms)
        for p, c in other.terms.items():
            new = terms.get(p, Fraction(0)) + c
            if new == 0:
                terms.pop(p, None)
            else:
                terms[p] = new
        return PartitionVector(self.upper, self.lower, terms)

    def __sub__(self, other: "PartitionVector") -> "PartitionVector":
        return self + other.scale(-1)

    def scale(self, factor) -> "PartitionVector":
        f = Fraction(factor)
        if f == 0:
            return PartitionVector(self.upper, self.lower, {})
        return PartitionVector(self.upper, self.lower, {p: f * c for p, c in self.terms.items()})

    def __rmul__(self, factor):
        return self.scale(factor)

    def to_json(self) -> dict:
        items = sorted(self.terms.items(), key=lambda t: t[0].assignment)
        return {
            "upper": self.upper,
            "lower": self.lower,
            "terms": [{"coeff": format_scalar(c), "partition": p.to_json()} for p, c in items],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "PartitionVector":
        try:
            upper, lower = int(doc["upper"]), int(doc["lower"])
            terms: dict[Partition, Fraction] = {}
            for item in doc["terms"]:
                p = Partition.from_json(item["partition"])
                terms[p] = terms.get(p, Fraction(0)) + parse_scalar(item["coeff"])
            return cls(upper, lower, terms)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad partition-vector document: {exc}") from exc


def _as_vector(x) -> PartitionVector:
    if isinstance(x, PartitionVector):
        return x
    if isinstance(x, Partition):
        return PartitionVector.of(x)
    raise TypeError(f"expected Partition or PartitionVector, got {type(x)!r}")


def tensor(x, y) -> PartitionVector:
    """Bilinear extension of the side-by-side product."""
    xv, yv = _as_vector(x), _as_vector(y)
    out = PartitionVector(xv.upper + yv.upper, xv.lower + yv.lower, {})
    terms: dict[Partition, Fraction] = {}
    for p, c in xv.terms.items():
        for q, d in yv.terms.items():
            r = tensor_partitions(p, q)
            new = terms.get(r, Fraction(0)) + c * d
            if new == 0:
                terms.pop(r, None)
            else:
                terms[r] = new
    out.terms = terms
    return out


def compose(q, p, loop_parameter) -> PartitionVector:
    """Bilinear composition q . p with closed loops scaled by the loop parameter."""
    qv, pv = _as_vector(q), _as_vector(p)
    if pv.lower != qv.upper:
        raise ArityError(
            f"cannot compose: lower count {pv.lower} differs from upper count {qv.upper}"
        )
    n = Fraction(loop_parameter)
    terms: dict[Partition, Fraction] = {}
    for pp, c in pv.terms.items():
        for qq, d in qv.terms.items():
            glued, loops = glue(qq, pp)
            coeff = c * d * n**loops
            new = terms.get(glued, Fraction(0)) + coeff
            if new == 0:
                terms.pop(glued, None)
            else:
                terms[glued] = new
    return PartitionVector(pv.upper, qv.lower, terms)


def involution(x) -> PartitionVector:
    """Antilinear mirror across the horizontal axis (coefficients are rational)."""
    xv = _as_vector(x)
    return PartitionVector(
        xv.lower, xv.upper, {involution_partition(p): c for p, c in xv.terms.items()}
    )


def _lift(op, x) -> PartitionVector:
    xv = _as_vector(x)
    terms: dict[Partition, Fraction] = {}
    shape = None
    for p, c in xv.terms.items():
        r = op(p)
        shape = (r.upper, r.lower)
        terms[r] = terms.get(r, Fraction(0)) + c
    if shape is None:
        # rotate an empty vector: shape bookkeeping only
        probe = op(Partition(xv.upper, xv.lower, tuple([0] * (xv.upper + xv.lower)))) if xv.upper + xv.lower else None
        if probe is None:
            raise RotationError("cannot rotate the empty shape")
        shape = (probe.upper, probe.lower)
    return PartitionVector(shape[0], shape[1], terms)


def rotate_right(x) -> PartitionVector:
    return _lift(rotate_right_partition, x)


def rotate_left(x) -> PartitionVector:
    return _lift(rotate_left_partition, x)


def rotate_right_inverse(x) -> PartitionVector:
    return _lift(rotate_right_inverse_partition, x)


def rotate_left_inverse(x) -> PartitionVector:
    return _lift(rotate_left_inverse_partition, x)


# --- distinguished generators --------------------------------------------------

@dataclass(frozen=True)
class Generators:
    pair: PartitionVector
    uppair: PartitionVector
    identity: PartitionVector
    crossing: PartitionVector
    connecter: PartitionVector
    fourblock: PartitionVector
    singleton: PartitionVector
    disconnecter: PartitionVector
    tau: PartitionVector


def generators(loop_parameter) -> Generators:
    """The named generating vectors at a fixed loop parameter N (N != 0)."""
    n = Fraction(loop_parameter)
    if n == 0:
        raise ValueError("loop parameter must be nonzero")
    identity = PartitionVector.of(identity_partition())
    disconnecter = PartitionVector.of(disconnecter_partition())
    tau = identity + disconnecter.scale(Fraction(-2) / n)
    return Generators(
        pair=PartitionVector.of(pair_partition()),
        uppair=PartitionVector.of(uppair_partition()),
        identity=identity,
        crossing=PartitionVector.of(crossing_partition()),
        connecter=PartitionVector.of(connecter_partition()),
        fourblock=PartitionVector.of(fourblock_partition()),
        singleton=PartitionVector.of(singleton_partition()),
        disconnecter=disconnecter,
        tau=tau,
    )


def tensor_power(x, exponent: int) -> PartitionVector:
    xv = _as_vector(x)
    out = PartitionVector.of(EMPTY)
    for _ in range(exponent):
        out = tensor(out, xv)
    return out


def conjugate_by_tau(x, loop_parameter) -> PartitionVector:
    """tau^(tensor l) . x . tau^(tensor k), the self-inverse category map."""
    xv = _as_vector(x)
    n = Fraction(loop_parameter)
    if n == 0:
        raise ValueError("loop parameter must be nonzero")
    gen = generators(n)
    tau_k = tensor_power(gen.tau, xv.upper)
    tau_l = tensor_power(gen.tau, xv.lower)
    return compose(tau_l, compose(xv, tau_k, n), n)


def all_partitions(upper: int, lower: int) -> list[Partition]:
    """Every partition of the given shape (Bell-number many)."""
    n = upper + lower
    out = []
    for grouping in _set_partitions(list(range(n))):
        assignment = [0] * n
        for bid, group in enumerate(grouping):
            for point in group:
                assignment[point] = bid
        out.append(Partition(upper, lower, tuple(assignment)))
    return sorted(set(out), key=lambda p: p.assignment)
