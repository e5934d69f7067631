"""Haar graphs H(Z_n, S), Cayley digraphs Cay(Z_n, S) and the canonical permutations c, d, phi, psi.

Point encoding (fixed): x^+ is point x, x^- is point n + x, for x in [0, n).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import HaarError, InvalidModulus, NonUnit
from .perm import Perm
from .zn import ZnSet, is_unit

ENCODING = "plus=0..n-1,minus=n..2n-1"


@dataclass(frozen=True)
class HaarGraph:
    modulus: int
    connection: ZnSet
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return 2 * self.modulus

    def edges(self) -> list[tuple[int, int]]:
        n = self.modulus
        return [(x, y) for x in range(n) for y in self.adjacency[x]]

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def has_edge(self, p: int, q: int) -> bool:
        if p > q:
            p, q = q, p
        n = self.modulus
        return p < n <= q and (q - n - p) % n in self.connection

    def arcs(self) -> list[tuple[int, ...]]:
        """Neighbor lists, used by the search code uniformly with digraphs."""
        return list(self.adjacency)


@dataclass(frozen=True)
class CayleyDigraph:
    modulus: int
    connection: ZnSet
    out: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return self.modulus

    def arc_set(self) -> frozenset:
        return frozenset((x, y) for x in range(self.modulus) for y in self.out[x])

    def arcs(self) -> list[tuple[int, ...]]:
        return list(self.out)


Graph = Union[HaarGraph, CayleyDigraph]


def build_haar(S: ZnSet) -> HaarGraph:
    n = S.modulus
    if n < 2:
        raise InvalidModulus("a Haar graph needs n >= 2")
    if not S.elems:
        raise HaarError("connection set must be non-empty")
    adj = [tuple(sorted(n + (x + s) % n for s in S.elems)) for x in range(n)]
    adj += [tuple(sorted((y - s) % n for s in S.elems)) for y in range(n)]
    return HaarGraph(n, S, tuple(adj))


def build_cayley(S: ZnSet) -> CayleyDigraph:
    n = S.modulus
    out = tuple(tuple(sorted((x + s) % n for s in S.elems)) for x in range(n))
    return CayleyDigraph(n, S, out)


def is_connected(G: Graph) -> bool:
    nbrs = [set(a) for a in G.arcs()]
    if isinstance(G, CayleyDigraph):
        for x, a in enumerate(G.out):
            for y in a:
                nbrs[y].add(x)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in nbrs[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == G.order


def canonical_c(n: int) -> Perm:
    return Perm([(x + 1) % n for x in range(n)] + [n + (x + 1) % n for x in range(n)])


def canonical_d(n: int) -> Perm:
    return Perm([n + (-x) % n for x in range(n)] + [(-x) % n for x in range(n)])


def _check_r(n: int, r: int) -> None:
    if not is_unit(r, n):
        raise NonUnit(f"{r} is not a unit mod {n}")


def phi(n: int, r: int, s: int, t: int) -> Perm:
    """x^+ -> (rx+s)^+, x^- -> (rx+t)^-."""
    _check_r(n, r)
    return Perm([(r * x + s) % n for x in range(n)] + [n + (r * x + t) % n for x in range(n)])


def psi(n: int, r: int, s: int, t: int) -> Perm:
    """x^+ -> (rx+s)^-, x^- -> (rx+t)^+."""
    _check_r(n, r)
    return Perm([n + (r * x + s) % n for x in range(n)] + [(r * x + t) % n for x in range(n)])


def relabel(G: HaarGraph, f: Perm) -> frozenset:
    """Edge set of the image graph G^f: edges {f(p), f(q)}, stored as sorted pairs."""
    return frozenset(tuple(sorted((f[p], f[q]))) for p, q in G.edges())


def as_haar(n: int, edges: Iterable[tuple[int, int]]) -> Optional[ZnSet]:
    """T with edges = E(H(Z_n, T)) if the edge set is a Haar graph in the fixed encoding, else None."""
    edges = frozenset(tuple(sorted(e)) for e in edges)
    if any(not (p < n <= q) for p, q in edges):
        return None
    T = sorted({(q - n - p) % n for p, q in edges if p == 0})
    if not T:
        return None
    cand = build_haar(ZnSet(n, tuple(T)))
    return cand.connection if cand.edge_set() == edges else None


def is_automorphism(G: Graph, f: Perm) -> bool:
    if len(f) != G.order:
        return False
    if isinstance(G, CayleyDigraph):
        return all(tuple(sorted(f[y] for y in G.out[x])) == G.out[f[x]] for x in range(G.order))
    return all(tuple(sorted(f[y] for y in G.adjacency[x])) == G.adjacency[f[x]] for x in range(G.order))


def is_isomorphism(G1: Graph, G2: Graph, f: Perm) -> bool:
    """Whether f maps the edges (arcs) of G1 exactly onto those of G2."""
    if type(G1) is not type(G2) or G1.order != G2.order or len(f) != G1.order:
        return False
    a1, a2 = G1.arcs(), G2.arcs()
    return all(tuple(sorted(f[y] for y in a1[x])) == tuple(a2[f[x]]) for x in range(G1.order))


def to_json(G: Graph, emit_adjacency: bool = False) -> dict:
    out = {
        "kind": "haar" if isinstance(G, HaarGraph) else "cayley",
        "modulus": G.modulus,
        "set": list(G.connection.elems),
    }
    if isinstance(G, HaarGraph):
        out["encoding"] = ENCODING
        if emit_adjacency:
            out["edges"] = sorted([list(e) for e in G.edges()])
    elif emit_adjacency:
        out["arcs"] = sorted([[x, y] for x in range(G.modulus) for y in G.out[x]])
    return out
