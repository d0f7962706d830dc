"""Bilabelled graphs: multigraphs with ordered input and output vertex tuples.

Edges form a multiset of unordered pairs; loops are representable because
composition can create them, but every condition checker treats a loop as
a failed bipartiteness test.  The derived graphs attach the enveloping
cycle in the cyclic slot order a_k..a_1,b_1..b_l; planarity of a
bilabelled graph means planarity of the apex graph built on that cycle.

Isomorphism fixes both tuples pointwise, so tuple vertices are anchored by
their first slot occurrence and only the inner vertices need a canonical
labeling search (refinement plus an exhaustive fallback over the residual
symmetry, which is tiny for these graphs).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import ArityError, LoopCreatedError, RotationError, SchemaError
from .partition import Partition


def _canon_edges(edges: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((min(u, v), max(u, v)) for u, v in edges))


@dataclass(frozen=True)
class BilabelledGraph:
    """Graph with vertex_count vertices, an edge multiset, and boundary tuples."""

    n: int
    edges: tuple[tuple[int, int], ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", _canon_edges(self.edges))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError("edge endpoint out of range")
        for v in self.inputs + self.outputs:
            if not 0 <= v < self.n:
                raise ValueError("tuple vertex out of range")

    # -- basic shape ----------------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.inputs)

    @property
    def l(self) -> int:
        return len(self.outputs)

    @property
    def boundary_size(self) -> int:
        return self.k + self.l

    def degree(self, v: int) -> int:
        d = 0
        for u, w in self.edges:
            if u == v:
                d += 1
            if w == v:
                d += 1
        return d

    def occurrences(self, v: int) -> int:
        return self.inputs.count(v) + self.outputs.count(v)

    def extended_degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range")
        return self.degree(v) + self.occurrences(v)

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    def edge_multiplicities(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for e in self.edges:
            out[e] = out.get(e, 0) + 1
        return out

    def multi_edge_pairs(self) -> list[tuple[int, int]]:
        return sorted(e for e, m in self.edge_multiplicities().items() if m >= 2)

    def neighbors(self, v: int) -> list[int]:
        out = set()
        for u, w in self.edges:
            if u == v:
                out.add(w)
            if w == v:
                out.add(u)
        return sorted(out)

    def __str__(self):
        return f"BG(n={self.n}, edges={list(self.edges)}, a={list(self.inputs)}, b={list(self.outputs)})"

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": self.n,
            "edges": [list(e) for e in self.edges],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "BilabelledGraph":
        try:
            return cls(
                int(doc["vertices"]),
                tuple((int(u), int(v)) for u, v in doc["edges"]),
                tuple(int(x) for x in doc["inputs"]),
                tuple(int(x) for x in doc["outputs"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad graph document: {exc}") from exc


NULL_GRAPH = BilabelledGraph(0, (), (), ())


def M(k: int, l: int) -> BilabelledGraph:
    """Single vertex carrying k input and l output strings."""
    return BilabelledGraph(1, (), (0,) * k, (0,) * l)


def X(k: int, l: int) -> BilabelledGraph:
    """Star: center 0, one outer vertex per boundary string."""
    m = k + l
    edges = tuple((0, i) for i in range(1, m + 1))
    return BilabelledGraph(m + 1, edges, tuple(range(1, k + 1)), tuple(range(k + 1, m + 1)))


def single_edge() -> BilabelledGraph:
    """Two vertices joined by one edge, input on one, output on the other."""
    return BilabelledGraph(2, ((0, 1),), (0,), (1,))


def double_edge() -> BilabelledGraph:
    return BilabelledGraph(2, ((0, 1), (0, 1)), (0,), (1,))


def from_partition(p: Partition) -> BilabelledGraph:
    """Edgeless graph with one vertex per block, tuples tracing the points."""
    k = p.upper
    inputs = tuple(p.assignment[:k])
    outputs = tuple(p.assignment[k:])
    return BilabelledGraph(p.n_blocks, (), inputs, outputs)


# -- category operations ---------------------------------------------------------

def tensor_graphs(K: BilabelledGraph, H: BilabelledGraph) -> BilabelledGraph:
    shift = K.n
    edges = K.edges + tuple((u + shift, v + shift) for u, v in H.edges)
    return BilabelledGraph(
        K.n + H.n,
        edges,
        K.inputs + tuple(v + shift for v in H.inputs),
        K.outputs + tuple(v + shift for v in H.outputs),
    )


def compose_graphs(H: BilabelledGraph, K: BilabelledGraph) -> BilabelledGraph:
    """H . K: glue K's i-th output onto H's i-th input, keeping multi-edges."""
    if len(K.outputs) != len(H.inputs):
        raise ArityError(
            f"cannot compose: {len(K.outputs)} outputs vs {len(H.inputs)} inputs"
        )
    total = K.n + H.n
    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b, c in zip(K.outputs, H.inputs):
        rb, rc = find(b), find(K.n + c)
        if rb != rc:
            parent[rc] = rb

    reps = sorted({find(x) for x in range(total)})
    label = {r: i for i, r in enumerate(reps)}
    relabel = [label[find(x)] for x in range(total)]
    edges = [(relabel[u], relabel[v]) for u, v in K.edges]
    edges += [(relabel[K.n + u], relabel[K.n + v]) for u, v in H.edges]
    return BilabelledGraph(
        len(reps),
        tuple(edges),
        tuple(relabel[v] for v in K.inputs),
        tuple(relabel[K.n + v] for v in H.outputs),
    )


def involution_graph(K: BilabelledGraph) -> BilabelledGraph:
    return BilabelledGraph(K.n, K.edges, K.outputs, K.inputs)


def rotate_right_graph(K: BilabelledGraph) -> BilabelledGraph:
    if K.l < 1:
        raise RotationError("rotate_right needs an output")
    return BilabelledGraph(K.n, K.edges, K.inputs + (K.outputs[-1],), K.outputs[:-1])


def rotate_left_graph(K: BilabelledGraph) -> BilabelledGraph:
    if K.k < 1:
        raise RotationError("rotate_left needs an input")
    return BilabelledGraph(K.n, K.edges, K.inputs[1:], (K.inputs[0],) + K.outputs)


def rotate_right_inverse_graph(K: BilabelledGraph) -> BilabelledGraph:
    if K.k < 1:
        raise RotationError("rotate_right inverse needs an input")
    return BilabelledGraph(K.n, K.edges, K.inputs[:-1], K.outputs + (K.inputs[-1],))


def rotate_left_inverse_graph(K: BilabelledGraph) -> BilabelledGraph:
    if K.l < 1:
        raise RotationError("rotate_left inverse needs an output")
    return BilabelledGraph(K.n, K.edges, (K.outputs[0],) + K.inputs, K.outputs[1:])


def cyclic_boundary(K: BilabelledGraph) -> list[int]:
    """Boundary vertices in the cyclic order a_k..a_1,b_1..b_l."""
    return list(reversed(K.inputs)) + list(K.outputs)


def all_rotations(K: BilabelledGraph) -> list[BilabelledGraph]:
    """Every re-splitting of the cyclic boundary word (closure under rotations)."""
    m = K.boundary_size
    if m == 0:
        return [K]
    seq = cyclic_boundary(K)
    seen = set()
    out = []
    for shift in range(m):
        rotated = seq[shift:] + seq[:shift]
        for split in range(m + 1):
            a = tuple(reversed(rotated[:split]))
            b = tuple(rotated[split:])
            if (a, b) in seen:
                continue
            seen.add((a, b))
            out.append(BilabelledGraph(K.n, K.edges, a, b))
    return out


# -- connectivity and bipartition -------------------------------------------------

def connected_components(K: BilabelledGraph) -> list[frozenset[int]]:
    parent = list(range(K.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in K.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    groups: dict[int, set[int]] = {}
    for v in range(K.n):
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def is_connected(K: BilabelledGraph) -> bool:
    return len(connected_components(K)) <= 1


def bipartition_classes(K: BilabelledGraph) -> tuple[frozenset[int], frozenset[int]] | None:
    """(even, odd) classes with every boundary vertex even, or None.

    Classes are fixed per component: the class holding that component's
    boundary vertices is even; a component without boundary takes the
    class of its smallest vertex.
    """
    if K.has_loops():
        return None
    color = [-1] * K.n
    adjacency: dict[int, list[int]] = {v: [] for v in range(K.n)}
    for u, v in K.edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    boundary = set(K.inputs) | set(K.outputs)
    for comp in connected_components(K):
        start = min(comp & boundary) if comp & boundary else min(comp)
        color[start] = 0
        queue = [start]
        while queue:
            x = queue.pop()
            for y in adjacency[x]:
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return None
        if any(color[v] == 1 for v in comp & boundary):
            return None
    even = frozenset(v for v in range(K.n) if color[v] == 0)
    odd = frozenset(v for v in range(K.n) if color[v] == 1)
    return even, odd


# -- derived graphs -----------------------------------------------------------------

@dataclass(frozen=True)
class DerivedGraphs:
    """K with the enveloping cycle (circle), plus apex (odot), and the core.

    Cycle vertices have ids n..n+m-1 in the cyclic slot order
    a_k..a_1,b_1..b_l; the apex of odot has id n+m.  Core data keeps the
    original vertex ids of K.
    """

    circle: BilabelledGraph
    odot: BilabelledGraph
    core_vertices: tuple[int, ...]
    core_edges: tuple[tuple[int, int], ...]
    a_core: tuple[int, ...]
    b_core: tuple[int, ...]


def _core_replacement(K: BilabelledGraph, removed: set[int], v: int) -> int:
    if v not in removed:
        return v
    for u, w in K.edges:
        if u == v:
            return w
        if w == v:
            return u
    raise ValueError(f"vertex {v} has no neighbor to stand in for it")


def derived_graphs(K: BilabelledGraph) -> DerivedGraphs:
    m = K.boundary_size
    att = cyclic_boundary(K)
    cycle_ids = list(range(K.n, K.n + m))
    extra = [(att[t], cycle_ids[t]) for t in range(m)]
    if m >= 3:
        extra += [(cycle_ids[t], cycle_ids[(t + 1) % m]) for t in range(m)]
    elif m == 2:
        extra += [(cycle_ids[0], cycle_ids[1]), (cycle_ids[0], cycle_ids[1])]
    elif m == 1:
        extra += [(cycle_ids[0], cycle_ids[0])]
    circle = BilabelledGraph(K.n + m, K.edges + tuple(extra), (), ())
    apex = K.n + m
    odot = BilabelledGraph(
        K.n + m + 1,
        circle.edges + tuple((c, apex) for c in cycle_ids),
        (),
        (),
    )
    removed = {
        v for v in range(K.n) if K.degree(v) == 1 and K.extended_degree(v) == 2
    }
    core_vertices = tuple(v for v in range(K.n) if v not in removed)
    core_edges = tuple(e for e in K.edges if e[0] not in removed and e[1] not in removed)
    a_core = tuple(_core_replacement(K, removed, v) for v in K.inputs)
    b_core = tuple(_core_replacement(K, removed, v) for v in K.outputs)
    return DerivedGraphs(circle, odot, core_vertices, core_edges, a_core, b_core)


def extended_degree(K: BilabelledGraph, v: int) -> int:
    return K.extended_degree(v)


# -- planarity -------------------------------------------------------------------

def _simplified_edges(n: int, edges: Sequence[tuple[int, int]]) -> tuple[int, list[tuple[int, int]]]:
    """Planarity-preserving simple graph: drop loops, subdivide parallel copies."""
    mult: dict[tuple[int, int], int] = {}
    for u, v in edges:
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        mult[key] = mult.get(key, 0) + 1
    simple = []
    fresh = n
    for (u, v), m in sorted(mult.items()):
        simple.append((u, v))
        for _ in range(m - 1):
            simple.append((u, fresh))
            simple.append((fresh, v))
            fresh += 1
    return fresh, simple


def is_planar_bilabelled(K: BilabelledGraph) -> bool:
    """Planarity of the apex graph (enveloping cycle plus apex)."""
    odot = derived_graphs(K).odot
    size, simple = _simplified_edges(odot.n, odot.edges)
    g = nx.Graph()
    g.add_nodes_from(range(size))
    g.add_edges_from(simple)
    planar, _ = nx.check_planarity(g)
    return planar


def _vertex_disjoint_paths(adjacency, pairs, blocked, used):
    """Match required endpoint pairs with internally disjoint paths; backtracking."""
    if not pairs:
        return True
    (s, t), rest = pairs[0], pairs[1:]

    def extend(x, taken):
        if t in adjacency[x]:
            if _vertex_disjoint_paths(adjacency, rest, blocked, used | taken):
                return True
        for y in adjacency[x]:
            if y in blocked or y in used or y in taken or y == t:
                continue
            if extend(y, taken | {y}):
                return True
        return False

    return extend(s, frozenset())


def _has_subdivision(adjacency, vertices, shape: str) -> bool:
    degrees = {v: len(adjacency[v]) for v in vertices}
    if shape == "k5":
        branch_candidates = [v for v in vertices if degrees[v] >= 4]
        for branch in combinations(branch_candidates, 5):
            blocked = set(branch)
            pairs = [(a, b) for a, b in combinations(branch, 2)]
            if _vertex_disjoint_paths(adjacency, pairs, blocked, frozenset()):
                return True
        return False
    branch_candidates = [v for v in vertices if degrees[v] >= 3]
    for left in combinations(branch_candidates, 3):
        remaining = [v for v in branch_candidates if v not in left]
        for right in combinations(remaining, 3):
            blocked = set(left) | set(right)
            pairs = [(a, b) for a in left for b in right]
            if _vertex_disjoint_paths(adjacency, pairs, blocked, frozenset()):
                return True
    return False


def planarity_oracle(K: BilabelledGraph) -> bool:
    """Kuratowski brute force on the apex graph; cross-validates the fast test."""
    odot = derived_graphs(K).odot
    size, simple = _simplified_edges(odot.n, odot.edges)
    adjacency: dict[int, set[int]] = {v: set() for v in range(size)}
    for u, v in simple:
        adjacency[u].add(v)
        adjacency[v].add(u)
    vertices = list(range(size))
    if _has_subdivision(adjacency, vertices, "k5"):
        return False
    if _has_subdivision(adjacency, vertices, "k33"):
        return False
    return True


# -- the six membership conditions -------------------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the six membership conditions with witnessing data."""

    planar: bool
    even_degrees: bool
    odd_degree_vertex: int | None
    bipartite: bool
    bipartite_witness: int | None
    no_contractible: bool
    contractible_vertex: int | None
    simple: bool
    multi_edge: tuple[int, int] | None
    boundary_components: bool
    free_component: tuple[int, ...] | None

    @property
    def passed(self) -> bool:
        return (
            self.planar
            and self.even_degrees
            and self.bipartite
            and self.no_contractible
            and self.simple
            and self.boundary_components
        )

    def as_flags(self) -> dict[str, bool]:
        return {
            "i_planar": self.planar,
            "ii_even_extended_degrees": self.even_degrees,
            "iii_bipartite_one_sided": self.bipartite,
            "iv_no_contractible_vertex": self.no_contractible,
            "v_no_multiple_edges": self.simple,
            "vi_components_touch_boundary": self.boundary_components,
        }


def check_conditions(K: BilabelledGraph) -> ConditionReport:
    odd_vertex = None
    for v in range(K.n):
        if K.extended_degree(v) % 2 != 0:
            odd_vertex = v
            break

    classes = bipartition_classes(K)
    bipartite_witness = None
    if classes is None:
        # witness: a vertex on a loop, or any boundary vertex forced odd
        loops = [u for u, v in K.edges if u == v]
        bipartite_witness = loops[0] if loops else (min(set(K.inputs) | set(K.outputs), default=None))

    contractible = None
    for v in range(K.n):
        if K.degree(v) == 2 and K.extended_degree(v) == 2:
            contractible = v
            break

    multi = K.multi_edge_pairs()
    boundary = set(K.inputs) | set(K.outputs)
    free_component = None
    for comp in connected_components(K):
        if not comp & boundary:
            free_component = tuple(sorted(comp))
            break

    return ConditionReport(
        planar=is_planar_bilabelled(K),
        even_degrees=odd_vertex is None,
        odd_degree_vertex=odd_vertex,
        bipartite=classes is not None,
        bipartite_witness=bipartite_witness,
        no_contractible=contractible is None,
        contractible_vertex=contractible,
        simple=not multi,
        multi_edge=multi[0] if multi else None,
        boundary_components=free_component is None,
        free_component=free_component,
    )


# -- rewriting: contraction and quotient normalization -------------------------------

def _delete_vertex(K: BilabelledGraph, v: int) -> BilabelledGraph:
    if K.occurrences(v):
        raise ValueError("cannot delete a boundary vertex")

    def relabel(x: int) -> int:
        return x - 1 if x > v else x

    edges = tuple((relabel(u), relabel(w)) for u, w in K.edges if u != v and w != v)
    return BilabelledGraph(
        K.n - 1,
        edges,
        tuple(relabel(x) for x in K.inputs),
        tuple(relabel(x) for x in K.outputs),
    )


def two_path_contract(K: BilabelledGraph, v: int) -> BilabelledGraph:
    """Contract both edges at an inner degree-2 vertex.

    Contracting the edges identifies v with its two neighbors; the values
    an edge weight would see at the neighbors are forced equal, so the
    image under any evaluation with square-one weights is unchanged.
    When the neighbors coincide, v simply disappears with its double
    edge; when they are distinct but already adjacent, the surviving
    edges between them turn into loops, which callers must flag (the
    membership conditions never let this happen).
    """
    if not 0 <= v < K.n:
        raise ValueError(f"vertex {v} out of range")
    if K.occurrences(v) != 0:
        raise ValueError(f"vertex {v} is not inner")
    incident = [e for e in K.edges if v in e]
    if K.degree(v) != 2:
        raise ValueError(f"vertex {v} has degree {K.degree(v)}, need exactly 2")
    if any(u == w for u, w in incident):
        raise ValueError(f"vertex {v} carries a loop; contraction undefined")
    ends = []
    for u, w in incident:
        ends.append(w if u == v else u)
    x, y = sorted(ends)
    remaining = list(K.edges)
    for e in incident:
        remaining.remove(e)

    def merge(z: int) -> int:
        return x if z == y else z

    def relabel(z: int) -> int:
        z = merge(z)
        shift = 0
        if z > v:
            shift += 1
        if x != y and z > y:
            shift += 1
        return z - shift

    edges = tuple((relabel(u), relabel(w)) for u, w in remaining)
    n = K.n - 1 if x == y else K.n - 2
    return BilabelledGraph(
        n,
        edges,
        tuple(relabel(z) for z in K.inputs),
        tuple(relabel(z) for z in K.outputs),
    )


def _normalize_moves(K: BilabelledGraph) -> list[tuple[str, object]]:
    moves: list[tuple[str, object]] = []
    for v in range(K.n):
        if K.extended_degree(v) == 0:
            moves.append(("erase_vertex", v))
    for pair in K.multi_edge_pairs():
        moves.append(("erase_edge_pair", pair))
    for v in range(K.n):
        if K.occurrences(v) == 0 and K.degree(v) == 2:
            incident = [e for e in K.edges if v in e]
            if any(u == w for u, w in incident):
                continue  # looped vertex, not a legal move
            moves.append(("contract", v))
    return moves


_PRIORITY = {"erase_vertex": 0, "erase_edge_pair": 1, "contract": 2}


def normalize(
    K: BilabelledGraph, loop_parameter, rng: random.Random | None = None
) -> tuple[Fraction, BilabelledGraph]:
    """Reduce by the quotient relations to a fixpoint, accumulating the scalar.

    Erasing an isolated (extended degree 0) vertex multiplies by N, erasing
    a parallel pair of edges by 1/N, a two-path contraction by 1.  With no
    random generator the rules apply in the priority order vertex-erase,
    pair-erase, contraction; with one, a uniformly random legal move is
    taken each step (used by the confluence tests).  Input graphs carrying
    loops are reported via LoopCreatedError, never rewritten.
    """
    n = Fraction(loop_parameter)
    if n == 0:
        raise ValueError("loop parameter must be nonzero")
    if K.has_loops():
        raise LoopCreatedError("normalization input contains a loop")
    factor = Fraction(1)
    g = K
    while True:
        moves = _normalize_moves(g)
        if not moves:
            return factor, g
        if rng is None:
            moves.sort(key=lambda mv: (_PRIORITY[mv[0]], repr(mv[1])))
            kind, target = moves[0]
        else:
            kind, target = moves[rng.randrange(len(moves))]
        if kind == "erase_vertex":
            g = _delete_vertex(g, target)
            factor *= n
        elif kind == "erase_edge_pair":
            edges = list(g.edges)
            edges.remove(target)
            edges.remove(target)
            g = BilabelledGraph(g.n, tuple(edges), g.inputs, g.outputs)
            factor /= n
        else:
            g = two_path_contract(g, target)
            if g.has_loops():
                raise LoopCreatedError("contraction created a loop")


# -- canonical forms ------------------------------------------------------------------

_CANONICAL_SEARCH_CAP = 10**6


def _refine_colors(K: BilabelledGraph, anchor: dict[int, int]) -> dict[int, int]:
    mult = K.edge_multiplicities()
    adjacency: dict[int, list[tuple[int, int]]] = {v: [] for v in range(K.n)}
    loops = {v: 0 for v in range(K.n)}
    for (u, v), m in mult.items():
        if u == v:
            loops[u] += m
            continue
        adjacency[u].append((v, m))
        adjacency[v].append((u, m))
    color = {
        v: (0, anchor[v]) if v in anchor else (1, loops[v], K.degree(v))
        for v in range(K.n)
    }
    while True:
        keys = {}
        for v in range(K.n):
            profile = tuple(sorted((m, color[w]) for w, m in adjacency[v]))
            keys[v] = (color[v], profile)
        ordered = sorted(set(keys.values()))
        index = {key: i for i, key in enumerate(ordered)}
        new_color = {v: (2, index[keys[v]]) for v in range(K.n)}
        # keep anchors fixed as their own classes
        for v in anchor:
            new_color[v] = (0, anchor[v])
        if new_color == color:
            return color
        color = new_color


@lru_cache(maxsize=200000)
def canonical_form(K: BilabelledGraph) -> bytes:
    """Canonical byte encoding; equal exactly for isomorphic graphs.

    Isomorphism must fix both tuples pointwise, so tuple vertices are
    anchored by first occurrence and the search only permutes inner
    vertices within refinement classes.
    """
    anchor: dict[int, int] = {}
    for v in K.inputs + K.outputs:
        if v not in anchor:
            anchor[v] = len(anchor)
    inner = [v for v in range(K.n) if v not in anchor]
    base = len(anchor)

    def encode(order: Sequence[int]) -> bytes:
        label = dict(anchor)
        for i, v in enumerate(order):
            label[v] = base + i
        edges = sorted(
            (min(label[u], label[w]), max(label[u], label[w])) for u, w in K.edges
        )
        payload = (
            K.n,
            tuple(label[v] for v in K.inputs),
            tuple(label[v] for v in K.outputs),
            tuple(edges),
        )
        return repr(payload).encode()

    if not inner:
        return encode(())

    color = _refine_colors(K, anchor)
    classes: dict[object, list[int]] = {}
    for v in inner:
        classes.setdefault(color[v], []).append(v)
    ordered_classes = [sorted(classes[key]) for key in sorted(classes)]

    size = 1
    for cls in ordered_classes:
        for i in range(2, len(cls) + 1):
            size *= i
    if size > _CANONICAL_SEARCH_CAP:
        raise RuntimeError("canonical labeling search too large")

    best: bytes | None = None
    for perm_choices in product(*(permutations(cls) for cls in ordered_classes)):
        order = [v for choice in perm_choices for v in choice]
        cand = encode(order)
        if best is None or cand < best:
            best = cand
    return best


def are_isomorphic(K: BilabelledGraph, H: BilabelledGraph) -> bool:
    if (K.n, K.k, K.l, len(K.edges)) != (H.n, H.k, H.l, len(H.edges)):
        return False
    return canonical_form(K) == canonical_form(H)


# -- three-connectivity of the core apex graph ------------------------------------------

def three_connectivity_check(K: BilabelledGraph) -> bool:
    """Brute-force 3-connectivity of the apex graph built on the core.

    Requires the graph to be connected with at least two core vertices.
    """
    if not is_connected(K):
        raise ValueError("graph must be connected")
    derived = derived_graphs(K)
    core = list(derived.core_vertices)
    if len(core) < 2:
        raise ValueError("core must have at least two vertices")
    index = {v: i for i, v in enumerate(core)}
    m = K.boundary_size
    att = list(reversed(derived.a_core)) + list(derived.b_core)
    total = len(core) + m + 1
    adjacency: dict[int, set[int]] = {v: set() for v in range(total)}

    def add(u: int, v: int) -> None:
        if u != v:
            adjacency[u].add(v)
            adjacency[v].add(u)

    for u, v in derived.core_edges:
        add(index[u], index[v])
    cycle = [len(core) + t for t in range(m)]
    for t in range(m):
        add(cycle[t], cycle[(t + 1) % m])
        add(index[att[t]], cycle[t])
    apex = len(core) + m
    for c in cycle:
        add(apex, c)

    def connected_without(removed: set[int]) -> bool:
        left = [v for v in range(total) if v not in removed]
        if not left:
            return True
        seen = {left[0]}
        stack = [left[0]]
        while stack:
            x = stack.pop()
            for y in adjacency[x]:
                if y not in removed and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(left)

    for pair in combinations(range(total), 2):
        if not connected_without(set(pair)):
            return False
    return True


# -- DOT rendering ----------------------------------------------------------------------

def to_dot(K: BilabelledGraph, name: str = "K") -> str:
    """DOT drawing: boundary strings as labeled pendant half-edges, parity as fill."""
    classes = bipartition_classes(K)
    even = classes[0] if classes else frozenset(range(K.n))
    lines = [f"graph {name} {{"]
    lines.append("  node [shape=circle, fontsize=10];")
    for v in range(K.n):
        style = "filled" if v in even else "solid"
        fill = ", fillcolor=black, fontcolor=white" if v in even else ""
        lines.append(f'  v{v} [label="{v}", style={style}{fill}];')
    for i, v in enumerate(K.inputs):
        lines.append(f'  a{i} [shape=none, label="a{i + 1}"];')
        lines.append(f"  a{i} -- v{v} [style=dashed];")
    for j, v in enumerate(K.outputs):
        lines.append(f'  b{j} [shape=none, label="b{j + 1}"];')
        lines.append(f"  b{j} -- v{v} [style=dashed];")
    for u, v in K.edges:
        lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
