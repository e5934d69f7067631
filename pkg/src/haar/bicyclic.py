"""Bicyclic subgroups of Haar-graph automorphism groups, bicyclic bases, and BCI / CI tests.

A bicyclic group is a cyclic subgroup of Aut(H(Z_n, S)) of order n whose two
orbits are the colour classes.  Every such group is conjugate, inside Aut, to one
with a generator x mapping 0^+ into a fixed set of orbit representatives of the
stabilizer A_{0^+}; the search enumerates the cosets A_{0^+} u_p for those
representatives p and closes the result under conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .auto import automorphism_group, find_isomorphism, invariant
from .config import max_group_order
from .errors import Disconnected, ResourceExceeded
from .graph import CayleyDigraph, Graph, HaarGraph, as_haar, build_cayley, build_haar, is_connected, relabel
from .perm import Perm, PermGroup, _mk, _UnionFind, closure_elements, point_stabilizer
from .zn import ZnSet, _units, affine_classes, affinely_equivalent, canonical_affine_form, canonical_multiplier_form, multiplier_classes


def _cycle_len(x: Perm, start: int, limit: int) -> int:
    y = x[start]
    k = 1
    while y != start and k <= limit:
        y = x[y]
        k += 1
    return k


def _is_bicyclic_generator(x: Perm, n: int) -> bool:
    return _cycle_len(x, 0, n) == n and _cycle_len(x, n, n) == n


def _is_regular_cyclic_generator(x: Perm, n: int) -> bool:
    return _cycle_len(x, 0, n) == n


def _powers(x: Perm) -> list[Perm]:
    out = [Perm.identity(len(x))]
    y = x
    while not y.is_identity():
        out.append(y)
        y = y * x
    return out


def canonical_generator(x: Perm) -> Perm:
    """Lexicographically least generator of <x>, for x whose cycle through point 0 has length |x|.

    Generators x^a (a a unit mod the order) send 0 to distinct points, so the least
    one is the power whose image of 0 is smallest; x^a shifts every cycle by a.
    """
    cycles = x.cycles()
    k = len(cycles[0])
    if k == 1:
        return x
    if any(k % len(cyc) for cyc in cycles):
        pw = _powers(x)
        return min(pw[a] for a in _units(len(pw)))
    first = cycles[0]
    a = min(_units(k), key=lambda e: first[e])
    img = [0] * len(x)
    for cyc in cycles:
        L = len(cyc)
        for i, p in enumerate(cyc):
            img[p] = cyc[(i + a) % L]
    return _mk(img)


def _cyclic_search(A: PermGroup, n: int, is_gen: Callable[[Perm, int], bool], cap: int) -> tuple[list[Perm], list[list[int]]]:
    """Canonical generators of every cyclic subgroup with a generator passing ``is_gen``, and their conjugacy classes."""
    chain = A.chain
    if not chain.base or chain.base[0] != 0:
        A = A.with_base([0])
        chain = A.chain
    stab_order = chain.order() // len(chain.transversals[0])
    stab = point_stabilizer(A, 0)
    reps = []
    seen: set = {0}
    for p in range(1, n):
        if p in seen or p not in chain.transversals[0]:
            continue
        orb = stab.orbit(p)
        seen.update(orb)
        reps.append(p)
    if stab_order * len(reps) > cap:
        raise ResourceExceeded(stab_order * len(reps), cap, "coset elements")
    found: set = set()
    for p in reps:
        u = chain.transversals[0][p][0]
        for h in chain.iter_elements(1):
            x = _mk([u[y] for y in h])
            if is_gen(x, n):
                found.add(canonical_generator(x))
    # close under conjugation by Aut so that every conjugacy class is complete
    inverses = [g.inverse() for g in A.generators]
    queue = sorted(found)
    edges = []
    while queue:
        x = queue.pop()
        for g, gi in zip(A.generators, inverses):
            y = canonical_generator(gi * x * g)
            edges.append((x, y))
            if y not in found:
                found.add(y)
                queue.append(y)
    gens = sorted(found)
    index = {x: i for i, x in enumerate(gens)}
    uf = _UnionFind(range(len(gens)))
    for x, y in edges:
        uf.union(index[x], index[y])
    return gens, uf.classes()


@dataclass
class BicyclicCatalog:
    modulus: int
    groups: list[PermGroup]
    generators: list[Perm]
    conjugacy_classes: list[list[int]]
    base_witnesses: list[Perm] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.groups)

    @property
    def class_count(self) -> int:
        return len(self.conjugacy_classes)

    def class_of(self, x: Perm) -> int:
        key = canonical_generator(x)
        i = self.generators.index(key)
        return next(k for k, cls in enumerate(self.conjugacy_classes) if i in cls)


def _require_connected(G: Graph) -> None:
    if not is_connected(G):
        raise Disconnected(f"graph over {G.connection} is disconnected")


def bicyclic_subgroups(G: HaarGraph, cap: Optional[int] = None, group: Optional[PermGroup] = None) -> BicyclicCatalog:
    """All bicyclic subgroups of Aut(G), their conjugacy classes, and a conjugating ξ per class."""
    _require_connected(G)
    cap = max_group_order() if cap is None else cap
    n = G.modulus
    A = group or automorphism_group(G)
    gens, classes = _cyclic_search(A, n, _is_bicyclic_generator, cap)
    c = canonical_generator(_mk([(x + 1) % n for x in range(n)] + [n + (x + 1) % n for x in range(n)]))
    ci = gens.index(c)
    # the class of C comes first
    classes.sort(key=lambda cls: (ci not in cls, cls))
    witnesses = []
    for k, cls in enumerate(classes):
        witnesses.append(Perm.identity(2 * n) if k == 0 else xi_for(gens[cls[0]], n))
    groups = [PermGroup(2 * n, [x]) for x in gens]
    return BicyclicCatalog(n, groups, gens, classes, witnesses)


def xi_for(x: Perm, n: int) -> Perm:
    """ξ with ξ(x^k(0^+)) = k^+ and ξ(x^k(0^-)) = k^-, so that ξ c ξ^-1 = x (apply ξ, then c, then ξ^-1)."""
    xi = [0] * (2 * n)
    y, z = 0, n
    for k in range(n):
        xi[y] = k
        xi[z] = n + k
        y, z = x[y], x[z]
    return Perm(xi)


def bicyclic_base(G: HaarGraph, cap: Optional[int] = None, catalog: Optional[BicyclicCatalog] = None) -> list[tuple[Perm, ZnSet]]:
    """One (ξ, T) per conjugacy class of bicyclic groups, with G^ξ = H(Z_n, T); C's class first with ξ = 1."""
    cat = catalog or bicyclic_subgroups(G, cap)
    out = []
    for xi in cat.base_witnesses:
        T = as_haar(G.modulus, relabel(G, xi))
        assert T is not None, "relabelled graph is not a Haar graph"
        out.append((xi, T))
    return out


def is_bci_structural(S: ZnSet, cap: Optional[int] = None) -> bool:
    return bicyclic_subgroups(build_haar(S), cap).class_count == 1


def bci_definitional_witness(S: ZnSet) -> Optional[ZnSet]:
    """Least canonical T with H(S) isomorphic to H(T) but T not affinely equivalent to S, or None."""
    n = S.modulus
    G = build_haar(S)
    conn = is_connected(G)
    inv = invariant(G)
    own = canonical_affine_form(S)[0]
    for T in affine_classes(n, len(S)):
        if T == own:
            continue
        H = build_haar(T)
        if is_connected(H) != conn or invariant(H) != inv:
            continue
        if find_isomorphism(G, H) is not None:
            return T
    return None


def is_bci_definitional(S: ZnSet) -> bool:
    return bci_definitional_witness(S) is None


def ci_definitional_witness(S: ZnSet) -> Optional[ZnSet]:
    """Least multiplier-canonical T with Cay(S) isomorphic to Cay(T) but T not a unit multiple of S."""
    n = S.modulus
    G = build_cayley(S)
    inv = invariant(G)
    own = canonical_multiplier_form(S)[0]
    for T in multiplier_classes(n, len(S)):
        if T == own:
            continue
        H = build_cayley(T)
        if invariant(H) != inv:
            continue
        if find_isomorphism(G, H) is not None:
            return T
    return None


def ci_subset_definitional(S: ZnSet) -> bool:
    return ci_definitional_witness(S) is None


def regular_cyclic_classes(S: ZnSet, cap: Optional[int] = None) -> tuple[list[Perm], list[list[int]]]:
    """Regular cyclic subgroups of Aut(Cay(Z_n, S)) and their conjugacy classes."""
    cap = max_group_order() if cap is None else cap
    G = build_cayley(S)
    A = automorphism_group(G)
    return _cyclic_search(A, S.modulus, _is_regular_cyclic_generator, cap)


def ci_subset_structural(S: ZnSet, cap: Optional[int] = None) -> bool:
    """All regular cyclic subgroups of Aut(Cay(Z_n, S)) are conjugate."""
    return len(regular_cyclic_classes(S, cap)[1]) == 1


def regular_dihedral_subgroups(A: PermGroup, cap: Optional[int] = None) -> list[frozenset]:
    """Regular subgroups of A isomorphic to the dihedral group of order deg(A), as element sets."""
    cap = max_group_order() if cap is None else cap
    deg = A.degree
    half = deg // 2
    elems = closure_elements(A, cap)
    rots = [a for a in elems if a.order() == half]
    invols = [b for b in elems if not b.is_identity() and (b * b).is_identity()]
    found: dict = {}
    for a in rots:
        ainv = a.inverse()
        pw = _powers(a)
        cyc = set(pw)
        for b in invols:
            if b in cyc or b * a * b != ainv:
                continue
            members = frozenset(pw + [p * b for p in pw])
            if members in found:
                continue
            # a transitive group of order equal to the degree is regular
            if len(PermGroup(deg, [a, b]).orbit(0)) == deg:
                found[members] = True
    return sorted(found, key=lambda m: sorted(m))


def dihedral_classes(A: PermGroup, subgroups: list[frozenset], cap: Optional[int] = None) -> list[list[int]]:
    """Conjugacy classes (under A) of the given subgroups."""
    index = {m: i for i, m in enumerate(subgroups)}
    uf = _UnionFind(range(len(subgroups)))
    for i, m in enumerate(subgroups):
        for g in A.generators:
            gi = g.inverse()
            img = frozenset(gi * x * g for x in m)
            uf.union(i, index[img])
    return uf.classes()


def bci_to_ci_reduction(S: ZnSet, cap: Optional[int] = None) -> Optional[tuple[int, bool]]:
    """Least a with A_{0^+} = A_{a^-}, and whether BCI(S) equals CI(S - a); None if no such a."""
    G = build_haar(S)
    _require_connected(G)
    n = S.modulus
    A = automorphism_group(G)
    stab = point_stabilizer(A, 0)
    for a in range(n):
        # A is vertex-transitive, so both stabilizers have the same order
        if all(g[n + a] == n + a for g in stab.generators):
            agree = is_bci_definitional(S) == ci_subset_definitional(S.shift(-a))
            return a, agree
    return None
