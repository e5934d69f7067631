"""Automorphisms and isomorphisms of Haar graphs and Cayley digraphs by refinement and backtracking.

Colour refinement is 1-dimensional Weisfeiler-Leman with canonically ranked
signatures, so two refinements can be compared through their traces.  The search
individualizes a vertex of the smallest non-singleton cell (lowest colour, then
lowest point), fixes one path in the first graph and branches in the second.
Candidates are pruned with twins (vertices with identical neighbourhoods) and, at
the top level, with the known vertex-transitive subgroups (c, d or translation).
"""

from __future__ import annotations

from collections import deque
from typing import Optional

from .graph import CayleyDigraph, Graph, HaarGraph, canonical_c, canonical_d, is_automorphism, is_isomorphism
from .perm import Perm, PermGroup, _mk


class _Structure:
    """Neighbour lists plus twin keys; shared by every search over one graph."""

    def __init__(self, G: Graph):
        self.graph = G
        self.size = G.order
        self.out = [tuple(a) for a in G.arcs()]
        self.directed = isinstance(G, CayleyDigraph)
        if self.directed:
            inn = [[] for _ in range(self.size)]
            for x, a in enumerate(self.out):
                for y in a:
                    inn[y].append(x)
            self.inn = [tuple(sorted(a)) for a in inn]
            keys = [(self.out[v], self.inn[v]) for v in range(self.size)]
        else:
            self.inn = self.out
            keys = [self.out[v] for v in range(self.size)]
        self.twin_key = keys
        groups: dict = {}
        for v, k in enumerate(keys):
            groups.setdefault(k, []).append(v)
        self.twin_classes = [g for g in groups.values() if len(g) > 1]
        if isinstance(G, HaarGraph):
            n = G.modulus
            self.seeds = [canonical_c(n), canonical_d(n)]
        else:
            n = G.modulus
            self.seeds = [_mk([(x + 1) % n for x in range(n)])] if n > 1 else []

    def refine(self, colors: list[int]) -> tuple[list[int], tuple]:
        """Equitable refinement of ``colors`` and the trace of signatures seen on the way."""
        out, inn, directed = self.out, self.inn, self.directed
        trace = []
        k = len(set(colors))
        while True:
            if directed:
                sigs = [
                    (colors[v], tuple(sorted(colors[w] for w in out[v])), tuple(sorted(colors[w] for w in inn[v])))
                    for v in range(self.size)
                ]
            else:
                sigs = [(colors[v], tuple(sorted(colors[w] for w in out[v]))) for v in range(self.size)]
            distinct = sorted(set(sigs))
            rank = {s: i for i, s in enumerate(distinct)}
            new = [rank[s] for s in sigs]
            trace.append(tuple(sorted(sigs)))
            if len(distinct) == k:
                return new, tuple(trace)
            k = len(distinct)
            colors = new

    def individualize(self, colors: list[int], v: int) -> tuple[list[int], tuple]:
        cols = [2 * c + 1 for c in colors]
        cols[v] = 2 * colors[v]
        return self.refine(cols)

    def root(self) -> tuple[list[int], tuple]:
        return self.refine([0] * self.size)


def _target_cell(colors: list[int]) -> Optional[int]:
    """Colour of the smallest non-singleton cell (ties: lowest colour), or None if discrete."""
    counts: dict[int, int] = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    best = None
    for c, k in counts.items():
        if k > 1 and (best is None or (k, c) < best):
            best = (k, c)
    return None if best is None else best[1]


def _orbit_set(p: int, gens: list[Perm]) -> set:
    seen = {p}
    queue = deque([p])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


class _Matcher:
    """Depth-first search for an isomorphism A -> B from a pair of compatible colourings."""

    def __init__(self, A: _Structure, B: _Structure):
        self.A = A
        self.B = B

    def search(self, colA: list[int], colB: list[int], top_seeds: Optional[list[Perm]] = None) -> Optional[Perm]:
        cell = _target_cell(colA)
        if cell is None:
            where = {c: v for v, c in enumerate(colB)}
            f = _mk([where[c] for c in colA])
            return f if is_isomorphism(self.A.graph, self.B.graph, f) else None
        v = min(x for x, c in enumerate(colA) if c == cell)
        childA, traceA = self.A.individualize(colA, v)
        tried_keys = set()
        covered: set = set()
        for w in [x for x, c in enumerate(colB) if c == cell]:
            key = self.B.twin_key[w]
            if key in tried_keys or w in covered:
                continue
            tried_keys.add(key)
            if top_seeds:
                covered |= _orbit_set(w, top_seeds)
            childB, traceB = self.B.individualize(colB, w)
            if traceB != traceA:
                continue
            f = self.search(childA, childB)
            if f is not None:
                return f
        return None


def _structure(G: Graph) -> _Structure:
    return _Structure(G)


def find_isomorphism(G1: Graph, G2: Graph) -> Optional[Perm]:
    """First isomorphism G1 -> G2 in search order (f maps edges of G1 onto edges of G2), or None."""
    if type(G1) is not type(G2) or G1.order != G2.order:
        return None
    A, B = _structure(G1), _structure(G2)
    colA, tA = A.root()
    colB, tB = B.root()
    if tA != tB:
        return None
    # G2 is vertex-transitive under its seeds, so one top-level candidate per seed orbit suffices
    return _Matcher(A, B).search(colA, colB, top_seeds=B.seeds)


def are_isomorphic(G1: Graph, G2: Graph) -> bool:
    return find_isomorphism(G1, G2) is not None


def invariant(G: Graph) -> tuple:
    """Isomorphism invariant of a vertex-transitive graph: refinement traces at the root and after fixing vertex 0."""
    A = _structure(G)
    col, t0 = A.root()
    _, t1 = A.individualize(col, 0)
    return (G.order, t0, t1)


def _first_path(A: _Structure):
    colors, _ = A.root()
    levels = []
    while True:
        cell = _target_cell(colors)
        if cell is None:
            return levels
        v = min(x for x, c in enumerate(colors) if c == cell)
        levels.append((colors, cell, v))
        colors, _ = A.individualize(colors, v)


def automorphism_search(G: Graph) -> tuple[list[Perm], int]:
    """Strong generators of Aut(G) and its order, from orbit sizes along the first search path."""
    A = _structure(G)
    matcher = _Matcher(A, A)
    levels = _first_path(A)
    gens: list[Perm] = []
    seen_gens: set = set()

    def add(g: Perm):
        if g not in seen_gens and not g.is_identity():
            seen_gens.add(g)
            gens.append(g)

    twin_pairs = []
    for cls in A.twin_classes:
        for a, b in zip(cls, cls[1:]):
            t = list(range(A.size))
            t[a], t[b] = b, a
            twin_pairs.append((a, b, _mk(t)))
    order = 1
    for i in range(len(levels) - 1, -1, -1):
        colors, cell, p = levels[i]
        prefix = {lv[2] for lv in levels[:i]}
        for a, b, t in twin_pairs:
            if a not in prefix and b not in prefix:
                add(t)
        if i == 0:
            for s in A.seeds:
                add(s)
        orbit = _orbit_set(p, gens)
        childA, traceA = A.individualize(colors, p)
        rejected: set = set()
        for w in [x for x, c in enumerate(colors) if c == cell]:
            if w in orbit or w in rejected:
                continue
            childB, traceB = A.individualize(colors, w)
            g = matcher.search(childA, childB) if traceB == traceA else None
            if g is None:
                rejected |= _orbit_set(w, gens)
                continue
            assert is_automorphism(G, g) and g[p] == w and all(g[x] == x for x in prefix)
            add(g)
            orbit = _orbit_set(p, gens)
        order *= len(orbit)
    for s in A.seeds:
        add(s)
    return gens, order


def automorphism_group(G: Graph) -> PermGroup:
    """Aut(G); the generators include c and d (Haar) or the translation (Cayley)."""
    gens, order = automorphism_search(G)
    pref = None if isinstance(G, HaarGraph) else list(range(G.order))
    group = PermGroup(G.order, gens, pref)
    group._search_order = order
    assert all(is_automorphism(G, g) for g in group.generators)
    return group


def automorphism_order(G: Graph) -> int:
    return automorphism_search(G)[1]


def is_edge_transitive(G: HaarGraph, group: Optional[PermGroup] = None) -> bool:
    """Whether Aut(G) has a single orbit on the (unordered) edges."""
    group = group or automorphism_group(G)
    edges = G.edges()
    start = edges[0]
    seen = {start}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        for g in group.generators:
            a, b = g[p], g[q]
            e = (a, b) if a < b else (b, a)
            if e not in seen:
                seen.add(e)
                queue.append(e)
    return len(seen) == len(edges)
