"""Finite generating-set enumeration and the boundary-word rewriting system.

The generator seeds single-vertex graphs, grows connected members by
composing single- or two-string stars onto members with one or two
outputs, closes under rotations, and finally adjoins the small identity
graphs together with all tensor products for the disconnected members.
Deduplication is by bilabelled-graph isomorphism fixing the tuples
pointwise; rotations are distinct pool entries.

Boundary words carry a parity per letter (even for the boundary side of
the bipartition, odd for the other).  Rule (A) replaces one letter by an
odd number of fresh opposite-parity copies, rule (B) replaces two
adjacent (cyclically adjacent allowed) unequal letters of equal parity by
an even number of fresh copies.  The length-preserving case of rule (B)
drives the termination argument, so the workbench can test any word for
infinite iterability by exploring that rewriting graph modulo letter
renaming.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping

from . import limits
from .bigraph import (
    BilabelledGraph,
    M,
    NULL_GRAPH,
    X,
    all_rotations,
    bipartition_classes,
    canonical_form,
    compose_graphs,
    connected_components,
    derived_graphs,
    is_connected,
    tensor_graphs,
)
from .errors import GuardError

# -- words ---------------------------------------------------------------------

EVEN = 0
ODD = 1


@dataclass(frozen=True)
class Word:
    """Sequence of (letter id, parity); ids are equality-only labels."""

    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ids = {}
        for letter, parity in self.letters:
            if ids.setdefault(letter, parity) != parity:
                raise ValueError(f"letter {letter} used with both parities")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        # even letters lower case, odd letters upper case, by first occurrence
        names: dict[int, str] = {}
        out = []
        for letter, parity in self.letters:
            if letter not in names:
                base = "abcdefghijklmnopqrstuvwxyz"
                names[letter] = base[len(names) % len(base)]
            char = names[letter]
            out.append(char.upper() if parity == ODD else char)
        return "".join(out)

    @classmethod
    def from_string(cls, text: str) -> "Word":
        ids: dict[str, int] = {}
        letters = []
        for char in text:
            key = char.lower()
            if key not in ids:
                ids[key] = len(ids)
            letters.append((ids[key], ODD if char.isupper() else EVEN))
        return cls(tuple(letters))

    def fresh_letter(self) -> int:
        return max((letter for letter, _ in self.letters), default=-1) + 1


def canonical_pattern(word: Word) -> Word:
    """Rename ids by first occurrence within each parity class.

    Even letters take ids 0, 2, 4, ... and odd letters 1, 3, 5, ... so the
    two classes stay disjoint.
    """
    rename: dict[int, int] = {}
    counters = [0, 0]
    letters = []
    for letter, parity in word.letters:
        if letter not in rename:
            rename[letter] = 2 * counters[parity] + parity
            counters[parity] += 1
        letters.append((rename[letter], parity))
    return Word(tuple(letters))


def apply_rule_A(word: Word, position: int, l: int) -> Word:
    """Replace the letter at position by l fresh opposite-parity copies (l odd, >= 3)."""
    if l < 3 or l % 2 == 0:
        raise ValueError("rule (A) needs an odd count of at least 3")
    if not 0 <= position < len(word):
        raise ValueError("position out of range")
    _, parity = word.letters[position]
    fresh = (word.fresh_letter(), 1 - parity)
    letters = word.letters[:position] + (fresh,) * l + word.letters[position + 1 :]
    return Word(letters)


def apply_rule_B(word: Word, position: int, l: int) -> Word:
    """Replace two adjacent unequal equal-parity letters by l fresh copies (l even, >= 2).

    The pair is (position, position+1); position = len-1 wraps to pair the
    last letter with the first, in which case one fresh copy lands at the
    front and the remaining l-1 at the end.
    """
    if l < 2 or l % 2 == 1:
        raise ValueError("rule (B) needs an even count of at least 2")
    n = len(word)
    if n < 2:
        raise ValueError("word too short for rule (B)")
    if not 0 <= position < n:
        raise ValueError("position out of range")
    i, j = position, (position + 1) % n
    (id1, p1), (id2, p2) = word.letters[i], word.letters[j]
    if id1 == id2:
        raise ValueError("rule (B) needs two distinct letters")
    if p1 != p2:
        raise ValueError("rule (B) needs letters of equal parity")
    fresh = (word.fresh_letter(), 1 - p1)
    if j != 0:
        letters = word.letters[:i] + (fresh,) * l + word.letters[j + 1 :]
    else:
        letters = (fresh,) + word.letters[1 : n - 1] + (fresh,) * (l - 1)
    return Word(letters)


def _rule_B_targets(word: Word) -> list[int]:
    n = len(word)
    out = []
    for i in range(n if n > 2 else n - 1):
        (id1, p1), (id2, p2) = word.letters[i], word.letters[(i + 1) % n]
        if id1 != id2 and p1 == p2:
            out.append(i)
    return out


def is_infinitely_iterable(word: Word, state_cap: int | None = None) -> bool:
    """True iff the (B, l=2) rewriting reaches a cycle modulo letter renaming."""
    cap = state_cap if state_cap is not None else limits.DEFAULT_WORD_STATE_CAP
    start = canonical_pattern(word)
    WHITE, GRAY, BLACK = 0, 1, 2
    colors: dict[Word, int] = {}

    def successors(w: Word) -> list[Word]:
        return [canonical_pattern(apply_rule_B(w, i, 2)) for i in _rule_B_targets(w)]

    stack: list[tuple[Word, Iterable[Word]]] = [(start, iter(successors(start)))]
    colors[start] = GRAY
    while stack:
        node, it = stack[-1]
        advanced = False
        for child in it:
            state = colors.get(child, WHITE)
            if state == GRAY:
                return True
            if state == WHITE:
                if len(colors) > cap:
                    raise GuardError("word state space exceeded cap")
                colors[child] = GRAY
                stack.append((child, iter(successors(child))))
                advanced = True
                break
        if not advanced:
            colors[node] = BLACK
            stack.pop()
    return False


def boundary_word(K: BilabelledGraph) -> Word:
    """Parity-labelled word a*_k..a*_1,b*_1..b*_l of a connected member."""
    if not is_connected(K):
        raise ValueError("boundary word requires a connected graph")
    classes = bipartition_classes(K)
    if classes is None:
        raise ValueError("graph is not one-sided bipartite")
    even, _ = classes
    derived = derived_graphs(K)
    sequence = list(reversed(derived.a_core)) + list(derived.b_core)
    return Word(tuple((v, EVEN if v in even else ODD) for v in sequence))


# -- the graph pool ----------------------------------------------------------------

class GraphPool:
    """Canonical-form-deduplicated sets C(k, l) for k + l <= k0."""

    def __init__(self, k0: int):
        self.k0 = k0
        self.cells: dict[tuple[int, int], dict[bytes, BilabelledGraph]] = {}
        for total in range(k0 + 1):
            for k in range(total + 1):
                self.cells[(k, total - k)] = {}

    def add(self, graph: BilabelledGraph) -> bool:
        cell = (graph.k, graph.l)
        if graph.boundary_size > self.k0:
            raise ValueError("graph exceeds the pool bound")
        key = canonical_form(graph)
        members = self.cells[cell]
        if key in members:
            return False
        members[key] = graph
        return True

    def members(self, k: int, l: int) -> list[BilabelledGraph]:
        cell = self.cells.get((k, l), {})
        return [cell[key] for key in sorted(cell)]

    def canonical_keys(self, k: int, l: int) -> set[bytes]:
        return set(self.cells.get((k, l), {}))

    def all_members(self) -> list[BilabelledGraph]:
        out = []
        for cell in sorted(self.cells):
            out.extend(self.members(*cell))
        return out

    def connected_members(self) -> list[BilabelledGraph]:
        return [g for g in self.all_members() if g.n > 0 and is_connected(g)]

    def counts(self) -> dict[tuple[int, int], int]:
        return {cell: len(self.cells[cell]) for cell in sorted(self.cells)}

    def counts_csv(self) -> str:
        lines = ["k,l,count"]
        for (k, l), count in self.counts().items():
            lines.append(f"{k},{l},{count}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        cells = {}
        for (k, l), members in sorted(self.cells.items()):
            cells[f"{k},{l}"] = [members[key].to_json() for key in sorted(members)]
        return {"k0": self.k0, "cells": cells}

    @classmethod
    def from_json(cls, doc: Mapping) -> "GraphPool":
        pool = cls(int(doc["k0"]))
        for cell, graphs in doc["cells"].items():
            for graph_doc in graphs:
                pool.add(BilabelledGraph.from_json(graph_doc))
        return pool

    def dump(self, path) -> None:
        with open(path, "w") as handle:
            json.dump(self.to_json(), handle, sort_keys=True, indent=1)
            handle.write("\n")


# -- Algorithm A ----------------------------------------------------------------------

def _output_star_choice(H: BilabelledGraph, v: int) -> int:
    """Parity of the core stand-in of an output vertex: EVEN if v is its own
    core vertex, ODD if v is a pendant whose stand-in is its neighbor."""
    if H.degree(v) == 1 and H.extended_degree(v) == 2:
        return ODD
    return EVEN


def _insert_with_rotations(pool: GraphPool, graph: BilabelledGraph) -> bool:
    added = False
    for rotated in all_rotations(graph):
        added = pool.add(rotated) or added
    return added


def algorithm_A(k0: int, trace: list | None = None) -> GraphPool:
    """Enumerate the finite sets C(k, l) for k + l <= k0.

    Steps: (1) seed the null graph and all single-vertex graphs with at
    least four strings; (2A) extend members with one output by an odd
    number of strings; (2B) extend members with two outputs whose core
    stand-ins are distinct and of equal parity by an even number of
    strings; (3) close under rotations; (4) iterate to a fixpoint;
    (5) adjoin the identity-sized graphs and close the disconnected part
    under tensor products and rotations.
    """
    pool = GraphPool(k0)
    pool.add(NULL_GRAPH)
    for total in range(4, k0 + 1):
        for k in range(total + 1):
            pool.add(M(k, total - k))
            pool.add(X(k, total - k))

    processed: set[tuple[bytes, str, int]] = set()
    sweeps = 0
    while True:
        sweeps += 1
        if sweeps > limits.DEFAULT_ITERATION_CAP:
            raise GuardError("enumeration did not reach a fixpoint within the sweep cap")
        added_any = False

        # (2A): members with a single output, odd k
        for k in range(1, k0, 2):
            for H in pool.members(k, 1):
                key = canonical_form(H)
                for l in range(3, k0 - k + 1, 2):
                    tag = (key, "2A", l)
                    if tag in processed:
                        continue
                    processed.add(tag)
                    b = H.outputs[0]
                    if _output_star_choice(H, b) == ODD:
                        child = compose_graphs(M(1, l), H)
                    else:
                        child = compose_graphs(X(1, l), H)
                    if trace is not None:
                        trace.append(("2A", H.boundary_size, child.boundary_size))
                    added_any = _insert_with_rotations(pool, child) or added_any

        # (2B): members with two outputs, even k
        for k in range(0, k0 - 1, 2):
            for H in pool.members(k, 2):
                key = canonical_form(H)
                b1, b2 = H.outputs
                derived = derived_graphs(H)
                s1, s2 = derived.b_core
                if s1 == s2:
                    continue
                classes = bipartition_classes(H)
                if classes is None:
                    continue
                even, _ = classes
                p1 = EVEN if s1 in even else ODD
                p2 = EVEN if s2 in even else ODD
                if p1 != p2:
                    continue
                for l in range(2, k0 - k + 1, 2):
                    tag = (key, "2B", l)
                    if tag in processed:
                        continue
                    processed.add(tag)
                    if p1 == ODD:
                        child = compose_graphs(M(2, l), H)
                    else:
                        child = compose_graphs(X(2, l), H)
                    if trace is not None:
                        trace.append(("2B", H.boundary_size, child.boundary_size))
                    added_any = _insert_with_rotations(pool, child) or added_any

        if not added_any:
            break

    # (5): identity-sized graphs, then tensor closure for disconnected members
    if k0 >= 2:
        pool.add(M(0, 2))
        pool.add(M(1, 1))
        pool.add(M(2, 0))
    while True:
        added_any = False
        members = [g for g in pool.all_members() if g.n > 0]
        by_size: dict[int, list[BilabelledGraph]] = {}
        for g in members:
            by_size.setdefault(g.boundary_size, []).append(g)
        for size1, group1 in sorted(by_size.items()):
            for size2, group2 in sorted(by_size.items()):
                if size1 + size2 > k0:
                    continue
                for g1 in group1:
                    for g2 in group2:
                        pair_tag = (canonical_form(g1) + b"|" + canonical_form(g2), "prod", 0)
                        if pair_tag in processed:
                            continue
                        processed.add(pair_tag)
                        product_graph = tensor_graphs(g1, g2)
                        added_any = _insert_with_rotations(pool, product_graph) or added_any
        if not added_any:
            break
    return pool


# -- brute-force oracle ------------------------------------------------------------------

def _occurrence_vectors(minimums: list[int], parities: list[int], total: int):
    """All occurrence-count vectors with given minimums and parities mod 2."""
    if not minimums:
        if total == 0:
            yield []
        return
    head_min, head_par = minimums[0], parities[0]
    start = head_min if head_min % 2 == head_par else head_min + 1
    value = start
    while value <= total:
        for rest in _occurrence_vectors(minimums[1:], parities[1:], total - value):
            yield [value] + rest
        value += 2


def _multiset_arrangements(counts: list[tuple[int, int]]):
    """All sequences using each item its given number of times."""
    total = sum(c for _, c in counts)
    out = [None] * total
    items = [(item, count) for item, count in counts if count > 0]

    def backtrack(pos: int, remaining):
        if pos == total:
            yield tuple(out)
            return
        for idx, (item, count) in enumerate(remaining):
            if count == 0:
                continue
            out[pos] = item
            rest = list(remaining)
            rest[idx] = (item, count - 1)
            yield from backtrack(pos + 1, rest)

    yield from backtrack(0, items)


def brute_force_C(k: int, l: int, max_vertices: int, max_edges: int) -> set[bytes]:
    """Exhaustive search for all members of C(k, l) within the given bounds.

    Independent of the generator: enumerates one-sided bipartite skeletons
    (the non-boundary class needs even degree at least four, so the edge
    bound caps its size), then boundary tuples respecting the degree
    parities, deduplicates by canonical form, and finally filters by the
    full condition check including planarity.
    """
    from .bigraph import check_conditions

    m = k + l
    found: dict[bytes, BilabelledGraph] = {}
    rejected: set[bytes] = set()
    if m == 0:
        null_key = canonical_form(NULL_GRAPH)
        if check_conditions(NULL_GRAPH).passed:
            found[null_key] = NULL_GRAPH
        return set(found)

    max_odd = min(max_edges // 4, max_vertices)
    for odd_count in range(0, max_odd + 1):
        for even_count in range(1, min(max_vertices - odd_count, m) + 1):
            # odd vertices sit after the evens; each needs an even degree >= 4
            odd_ids = list(range(even_count, even_count + odd_count))
            options = []
            for size in range(4, even_count + 1, 2):
                options.extend(combinations(range(even_count), size))
            if odd_count and not options:
                continue
            neighbor_choices = [options] * odd_count
            for assignment in product(*neighbor_choices):
                edges = []
                for odd_vertex, nbrs in zip(odd_ids, assignment):
                    edges.extend((e, odd_vertex) for e in nbrs)
                if len(edges) > max_edges:
                    continue
                degrees = [0] * even_count
                for e, _ in edges:
                    degrees[e] += 1
                minimums = []
                parities = []
                for d in degrees:
                    minimums.append(2 if d in (0, 2) else (1 if d % 2 else 0))
                    parities.append(d % 2)
                skeleton = BilabelledGraph(even_count + odd_count, tuple(edges), (), ())
                components = connected_components(skeleton)
                for occ in _occurrence_vectors(minimums, parities, m):
                    if any(
                        sum(occ[v] for v in comp if v < even_count) == 0 for comp in components
                    ):
                        continue
                    counts = [(v, occ[v]) for v in range(even_count)]
                    for arrangement in _multiset_arrangements(counts):
                        candidate = BilabelledGraph(
                            even_count + odd_count,
                            tuple(edges),
                            arrangement[:k],
                            arrangement[k:],
                        )
                        key = canonical_form(candidate)
                        if key in found or key in rejected:
                            continue
                        if check_conditions(candidate).passed:
                            found[key] = candidate
                        else:
                            rejected.add(key)
    return set(found)
