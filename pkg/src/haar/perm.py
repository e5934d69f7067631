"""Permutations of range(N) and permutation groups built on a Schreier-Sims stabilizer chain.

Composition follows right actions: ``p * q`` applies ``p`` first, then ``q``, so
``(p * q)[x] == q[p[x]]``.  Conjugates are written ``g * h * g.inverse()``.

For even degree 2n the points are read as Haar-graph vertices (x^+ = x,
x^- = n + x) and stabilizer chains prefer the base order 0, n, 1, n+1, ...
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Iterator, Optional, Sequence

from .errors import NotTransitive, ResourceExceeded


class Perm(tuple):
    """A bijection of range(len(self)), stored as its tuple of images."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        p = tuple.__new__(cls, images)
        if sorted(p) != list(range(len(p))):
            raise ValueError("images do not form a permutation")
        return p

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return _mk(range(degree))

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other: "Perm") -> "Perm":
        return _mk([other[x] for x in self])

    def __rmul__(self, other):
        return NotImplemented

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Perm.identity(len(self))
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Perm":
        inv = [0] * len(self)
        for i, x in enumerate(self):
            inv[x] = i
        return _mk(inv)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self)
        out = []
        for start in range(len(self)):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self[x]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles())) if len(self) else 1

    def image_set(self, points: Iterable[int]) -> frozenset:
        return frozenset(self[p] for p in points)

    def to_json(self) -> dict:
        return {"images": list(self)}

    def __repr__(self) -> str:
        return f"Perm({list(self)})"


def _mk(images) -> Perm:
    return tuple.__new__(Perm, images)


def haar_base_order(degree: int) -> list[int]:
    if degree % 2:
        return list(range(degree))
    n = degree // 2
    out = []
    for x in range(n):
        out += [x, n + x]
    return out


@dataclass(frozen=True)
class Partition:
    """Disjoint cells covering a point set; cells sorted, each cell sorted."""

    cells: tuple[tuple[int, ...], ...]

    @classmethod
    def from_cells(cls, cells: Iterable[Iterable[int]]) -> "Partition":
        norm = sorted(tuple(sorted(c)) for c in cells)
        seen = set()
        for c in norm:
            if not c or seen.intersection(c):
                raise ValueError("cells must be non-empty and disjoint")
            seen.update(c)
        return cls(tuple(norm))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def cell_of(self, p: int) -> tuple[int, ...]:
        for c in self.cells:
            if p in c:
                return c
        raise KeyError(p)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def is_invariant_under(self, g: Perm) -> bool:
        cellset = {frozenset(c) for c in self.cells}
        return all(g.image_set(c) in cellset for c in self.cells)


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def classes(self) -> list[list]:
        groups: dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return sorted(sorted(g) for g in groups.values())


class StabChain:
    """Base, strong generators per level, and explicit transversals.

    ``transversals[i][p] = (u, u^-1)`` where ``u`` maps ``base[i]`` to ``p`` and
    fixes ``base[:i]`` pointwise.
    """

    def __init__(self, degree: int, gens: Sequence[Perm], preference: Sequence[int]):
        self.degree = degree
        self.identity = Perm.identity(degree)
        rank = {p: i for i, p in enumerate(preference)}
        for p in range(degree):
            rank.setdefault(p, len(rank))
        self._rank = rank
        self.base: list[int] = []
        self.level_gens: list[list[Perm]] = []
        self.transversals: list[dict[int, tuple[Perm, Perm]]] = []
        self._build([g for g in gens if not g.is_identity()])

    def _first_moved(self, g: Perm) -> int:
        return min((p for p in range(self.degree) if g[p] != p), key=self._rank.__getitem__)

    def _orbit(self, level: int) -> dict[int, tuple[Perm, Perm]]:
        b = self.base[level]
        gens = self.level_gens[level]
        trans = {b: (self.identity, self.identity)}
        queue = deque([b])
        while queue:
            p = queue.popleft()
            u = trans[p][0]
            for g in gens:
                q = g[p]
                if q not in trans:
                    v = u * g
                    trans[q] = (v, v.inverse())
                    queue.append(q)
        return trans

    def strip(self, h: Perm, start: int = 0) -> tuple[Perm, int]:
        for level in range(start, len(self.base)):
            p = h[self.base[level]]
            entry = self.transversals[level].get(p)
            if entry is None:
                return h, level
            h = h * entry[1]
        return h, len(self.base)

    def _build(self, gens: list[Perm]) -> None:
        base = self.base
        while True:
            # the most preferred point moved by a generator that fixes the base so far
            rest = [g for g in gens if all(g[b] == b for b in base)]
            if not rest:
                break
            base.append(min((self._first_moved(g) for g in rest), key=self._rank.__getitem__))
        k = len(base)
        self.level_gens = [[g for g in gens if all(g[b] == b for b in base[:i])] for i in range(k)]
        self.transversals = [self._orbit(i) for i in range(k)]
        i = k - 1
        while i >= 0:
            restarted = False
            trans = self.transversals[i]
            for b, (ub, _) in list(trans.items()):
                for x in list(self.level_gens[i]):
                    h = ub * x * trans[x[b]][1]
                    if h.is_identity():
                        continue
                    y, j = self.strip(h, i + 1)
                    if j < len(base) or not y.is_identity():
                        if j == len(base):
                            base.append(self._first_moved(y))
                            self.level_gens.append([])
                            self.transversals.append({})
                        for lv in range(i + 1, j + 1):
                            self.level_gens[lv].append(y)
                            self.transversals[lv] = self._orbit(lv)
                        i = j
                        restarted = True
                        break
                if restarted:
                    break
            if not restarted:
                i -= 1

    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    def contains(self, g: Perm) -> bool:
        if len(g) != self.degree:
            return False
        y, j = self.strip(g)
        return j == len(self.base) and y.is_identity()

    def iter_elements(self, start: int = 0) -> Iterator[Perm]:
        """Every element of the level-``start`` stabilizer, as u_k * ... * u_start."""
        levels = [list(t.values()) for t in self.transversals[start:]]

        def rec(idx: int, acc: Perm):
            if idx < 0:
                yield acc
                return
            for u, _ in levels[idx]:
                yield from rec(idx - 1, acc * u)

        yield from rec(len(levels) - 1, self.identity)


class PermGroup:
    """A permutation group given by generators; the stabilizer chain is built on demand."""

    def __init__(self, degree: int, generators: Iterable[Perm], base_preference: Optional[Sequence[int]] = None):
        self.degree = degree
        gens = []
        seen = set()
        for g in generators:
            g = g if isinstance(g, Perm) else Perm(g)
            if len(g) != degree:
                raise ValueError(f"generator of degree {len(g)} in a group of degree {degree}")
            if not g.is_identity() and g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators: tuple[Perm, ...] = tuple(gens)
        self.base_preference = list(base_preference) if base_preference is not None else haar_base_order(degree)
        self._chain: Optional[StabChain] = None

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.degree, self.generators, self.base_preference)
        return self._chain

    def with_base(self, preference: Sequence[int]) -> "PermGroup":
        """Same group, with a chain whose base starts with ``preference``."""
        rest = [p for p in self.base_preference if p not in set(preference)]
        return PermGroup(self.degree, self.generators, list(preference) + rest)

    def order(self) -> int:
        return self.chain.order()

    def contains(self, g: Perm) -> bool:
        return self.chain.contains(g)

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def orbit(self, p: int) -> list[int]:
        seen = {p}
        queue = deque([p])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def orbits(self, points: Optional[Iterable[int]] = None) -> Partition:
        """Orbit partition of ``points`` (all points by default) by union-find over generators."""
        pts = range(self.degree) if points is None else points
        uf = _UnionFind(range(self.degree))
        for g in self.generators:
            for x in range(self.degree):
                uf.union(x, g[x])
        wanted = {uf.find(p) for p in pts}
        return Partition.from_cells(c for c in uf.classes() if uf.find(c[0]) in wanted)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def iter_elements(self) -> Iterator[Perm]:
        return self.chain.iter_elements()


def closure_elements(G: PermGroup, cap: int) -> list[Perm]:
    """All elements of G by breadth-first products of generators, if |G| <= cap."""
    order = G.order()
    if order > cap:
        raise ResourceExceeded(order, cap)
    ident = G.identity()
    seen = {ident}
    out = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in G.generators:
            y = x * g
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
    assert len(out) == order, "closure disagrees with stabilizer chain"
    return out


def group_order(G: PermGroup) -> int:
    return G.order()


def orbits(G: PermGroup, points: Optional[Iterable[int]] = None) -> Partition:
    return G.orbits(points)


def point_stabilizer(G: PermGroup, p: int) -> PermGroup:
    """Stabilizer of point ``p``: level-1 strong generators of a chain based at ``p``."""
    H = G if G.chain.base[:1] == [p] else G.with_base([p])
    chain = H.chain
    if not chain.base or chain.base[0] != p:
        # p is fixed by the whole group
        return PermGroup(G.degree, G.generators, G.base_preference)
    gens = chain.level_gens[1] if len(chain.base) > 1 else []
    return PermGroup(G.degree, gens, G.base_preference)


def pointwise_stabilizer(G: PermGroup, points: Sequence[int]) -> PermGroup:
    H = G.with_base(points)
    chain = H.chain
    depth = 0
    pts = set(points)
    # the stabilizer of the listed points is the first chain level past them
    while depth < len(chain.base) and chain.base[depth] in pts:
        depth += 1
    if depth == 0:
        return PermGroup(G.degree, G.generators, G.base_preference)
    gens = chain.level_gens[depth] if depth < len(chain.base) else []
    return PermGroup(G.degree, gens, G.base_preference)


def _group_from_elements(degree: int, elements: Sequence[Perm], preference) -> PermGroup:
    """A small generating set for the group formed by ``elements`` (assumed closed)."""
    gens: list[Perm] = []
    ident = Perm.identity(degree)
    span = {ident}
    for x in elements:
        if x in span:
            continue
        gens.append(x)
        span = set(closure_elements(PermGroup(degree, gens, preference), len(elements)))
    return PermGroup(degree, gens, preference)


def setwise_stabilizer(G: PermGroup, W: Iterable[int], cap: int) -> PermGroup:
    """Subgroup of elements mapping the point set W onto itself."""
    W = sorted(set(W))
    Wset = frozenset(W)
    if G.order() <= cap:
        elems = [g for g in closure_elements(G, cap) if g.image_set(W) == Wset]
        return _group_from_elements(G.degree, elems, G.base_preference)
    return _setwise_stabilizer_backtrack(G, W)


def _setwise_stabilizer_backtrack(G: PermGroup, W: Sequence[int]) -> PermGroup:
    H = G.with_base(W)
    chain = H.chain
    Wset = frozenset(W)
    depth = 0
    while depth < len(chain.base) and chain.base[depth] in Wset:
        depth += 1
    reps: list[Perm] = []
    levels = [list(chain.transversals[i].values()) for i in range(depth)]

    # g = u_{k} ... u_{0}; images of the first ``depth`` base points only depend on u_0..u_{depth-1}
    def rec(idx: int, acc_inv_order: list[Perm]):
        if idx == depth:
            g = H.identity()
            for u in reversed(acc_inv_order):
                g = g * u
            if g.image_set(W) == Wset:
                reps.append(g)
            return
        for u, _ in levels[idx]:
            trial = acc_inv_order + [u]
            g = H.identity()
            for v in reversed(trial):
                g = g * v
            if all(g[chain.base[t]] in Wset for t in range(idx + 1)):
                rec(idx + 1, trial)

    rec(0, [])
    tail = chain.level_gens[depth] if depth < len(chain.base) else []
    return PermGroup(G.degree, list(tail) + reps, G.base_preference)


def minimal_block_system(G: PermGroup, seed: Iterable[int]) -> Partition:
    """Finest G-invariant partition of the orbit of seed[0] with all of ``seed`` in one cell."""
    seed = list(seed)
    if not seed:
        raise ValueError("empty seed")
    orb = set(G.orbit(seed[0]))
    if not orb.issuperset(seed):
        raise NotTransitive("seed points lie in different orbits")
    uf = _UnionFind(sorted(orb))
    queue = deque()
    for s in seed[1:]:
        if uf.union(seed[0], s):
            queue.append((seed[0], s))
    while queue:
        a, b = queue.popleft()
        for g in G.generators:
            x, y = g[a], g[b]
            if uf.union(x, y):
                queue.append((x, y))
    part = Partition.from_cells(uf.classes())
    assert all(part.is_invariant_under(g) for g in G.generators)
    return part


def cyclic_elements(h: Perm) -> list[Perm]:
    out = [Perm.identity(len(h))]
    x = h
    while not x.is_identity():
        out.append(x)
        x = x * h
    return out


def _cyclic_generator(H: PermGroup) -> Perm:
    if len(H.generators) == 1:
        return H.generators[0]
    order = H.order()
    for g in H.iter_elements():
        if g.order() == order:
            return g
    raise ValueError("group is not cyclic")


def normalizer_of_cyclic(G: PermGroup, H: PermGroup, cap: int) -> PermGroup:
    """{g in G : g H g^-1 = H} for cyclic H, by filtering the elements of G."""
    if not H.generators:
        return G
    h = _cyclic_generator(H)
    members = set(cyclic_elements(h))
    elems = [g for g in closure_elements(G, cap) if g * h * g.inverse() in members]
    N = _group_from_elements(G.degree, elems, G.base_preference)
    for g in N.generators:
        assert g * h * g.inverse() in members
    return N


def conjugating_element(G: PermGroup, H1: PermGroup, H2: PermGroup, cap: int) -> Optional[Perm]:
    """First g (in breadth-first order) with g H1 g^-1 = H2, for cyclic H1, H2; else None."""
    h1 = _cyclic_generator(H1) if H1.generators else Perm.identity(G.degree)
    h2 = _cyclic_generator(H2) if H2.generators else Perm.identity(G.degree)
    if h1.order() != h2.order():
        return None
    members = set(cyclic_elements(h2))
    for g in closure_elements(G, cap):
        if g * h1 * g.inverse() in members:
            return g
    return None
