import pytest
from hypothesis import given
from hypothesis import strategies as st

from haar.auto import automorphism_group
from haar.errors import NotTransitive, ResourceExceeded
from haar.graph import build_haar, canonical_c, canonical_d, phi, psi
from haar.perm import (
    Partition,
    Perm,
    PermGroup,
    closure_elements,
    conjugating_element,
    group_order,
    minimal_block_system,
    normalizer_of_cyclic,
    orbits,
    point_stabilizer,
    pointwise_stabilizer,
    setwise_stabilizer,
)
from haar.zn import ZnSet

CAP = 10**6


def dihedral(n):
    return PermGroup(2 * n, [canonical_c(n), canonical_d(n)])


def test_perm_validation():
    with pytest.raises(ValueError):
        Perm([0, 0, 1])
    with pytest.raises(ValueError):
        Perm([1, 2, 3])


def test_composition_applies_left_factor_first():
    p = Perm([1, 2, 0])
    q = Perm([0, 2, 1])
    r = p * q
    assert all(r[x] == q[p[x]] for x in range(3))
    assert (p * p.inverse()).is_identity()
    assert p ** 3 == Perm.identity(3) and p ** -1 == p.inverse()


def test_cycles_and_order():
    p = Perm([1, 0, 3, 4, 2, 5])
    assert p.cycles() == [(0, 1), (2, 3, 4), (5,)]
    assert p.order() == 6


def test_closure_examples():
    assert len(closure_elements(PermGroup(6, [canonical_c(3)]), CAP)) == 3
    assert len(closure_elements(dihedral(5), CAP)) == 10
    A = automorphism_group(build_haar(ZnSet.of(10, [0, 1, 3, 4])))
    assert len(closure_elements(A, CAP)) == 80


def test_closure_respects_cap():
    with pytest.raises(ResourceExceeded):
        closure_elements(dihedral(12), 5)


def test_group_order_examples():
    assert group_order(dihedral(12)) == 24
    assert group_order(automorphism_group(build_haar(ZnSet.of(4, [0, 1, 2, 3])))) == 1152
    assert group_order(automorphism_group(build_haar(ZnSet.of(10, [0, 1, 3, 4])))) == 80


def test_orbit_examples():
    assert orbits(PermGroup(12, [canonical_c(6)])).sizes() == [6, 6]
    assert orbits(PermGroup(12, [canonical_c(6) ** 2])).sizes() == [3, 3, 3, 3]
    assert orbits(PermGroup(8, [canonical_d(4)])) == Partition.from_cells([[0, 4], [1, 7], [2, 6], [3, 5]])


def test_point_stabilizer_examples():
    # <c, d> is regular on the 2n points
    assert point_stabilizer(dihedral(5), 0).order() == 1
    A = automorphism_group(build_haar(ZnSet.of(10, [0, 1, 3, 4])))
    assert point_stabilizer(A, 0).order() == 4
    assert point_stabilizer(PermGroup(10, [canonical_c(5)]), 0).order() == 1


def test_pointwise_stabilizer():
    G = dihedral(6)
    assert pointwise_stabilizer(G, [0, 1]).order() == 1
    A = automorphism_group(build_haar(ZnSet.of(10, [0, 1, 3, 4])))
    assert pointwise_stabilizer(A, [0]).order() == 4
    assert pointwise_stabilizer(A, list(range(20))).order() == 1


def test_setwise_stabilizer_examples():
    G = dihedral(5)
    H = setwise_stabilizer(G, {0, 5}, CAP)
    assert H.order() == 2 and H.contains(canonical_d(5))
    A = automorphism_group(build_haar(ZnSet.of(10, [0, 1, 3, 4])))
    colour = setwise_stabilizer(A, set(range(10)), CAP)
    assert colour.order() == A.order() // 2
    # backtrack path agrees with the filter path
    assert setwise_stabilizer(A, set(range(10)), 1).order() == colour.order()
    n, u = 16, 2
    B = automorphism_group(build_haar(ZnSet.of(n, [0, 2, 1, 9])))
    W = {n, n + u}
    stab = point_stabilizer(B, 0)
    sw = setwise_stabilizer(B, W, CAP)
    assert all(sw.contains(g) for g in stab.generators)


def test_minimal_block_system_examples():
    G = dihedral(6)
    blocks = minimal_block_system(G, [0, 3])
    assert blocks == Partition.from_cells([[x, x + 3] for x in range(3)] + [[6 + x, 9 + x] for x in range(3)])
    with pytest.raises(NotTransitive):
        minimal_block_system(PermGroup(12, [canonical_c(6)]), [0, 6])


def _pi(n, T):
    """{X u X^psi_{1,t,-t} : X in orb(C^(n/d))} with d = |<T - T>|."""
    from haar.zn import subgroup_index

    d = subgroup_index([a - b for a in T for b in T], n)
    t = min(T)
    swap = psi(n, 1, t, -t)
    cells = []
    for x in range(n // d):
        X = list(range(x, n, n // d))
        cells.append(X + [swap[p] for p in X])
    return Partition.from_cells(cells)


def test_block_system_from_stabilizer_invariant_subsets():
    from itertools import combinations

    from haar.zn import affine_classes, generates

    checked = 0
    for n in (6, 8, 10, 12):
        for R in affine_classes(n, 4):
            if not generates([r - R.elems[0] for r in R.elems], n):
                continue
            A = automorphism_group(build_haar(R))
            stab = point_stabilizer(A, 0)
            orbs = stab.orbits([n + r for r in R.elems])
            for k in range(1, len(orbs) + 1):
                for pick in combinations(list(orbs), k):
                    T = sorted(p - n for cell in pick for p in cell)
                    if len(T) < 2:
                        continue
                    blocks = minimal_block_system(A, [0] + [n + t for t in T])
                    assert blocks == _pi(n, T), (R, T)
                    checked += 1
    assert checked > 20


def test_block_system_of_quadruple_form():
    # S = {0, u, v, v+m}: the blocks are X u X^psi_{1,0,0} for X in orb(C^u)
    n, u, v = 16, 2, 1
    m = n // 2
    S = ZnSet.of(n, [0, u, v, v + m])
    A = automorphism_group(build_haar(S))
    blocks = minimal_block_system(A, [0, n, n + u])
    swap = psi(n, 1, 0, 0)
    expected = []
    for x in range(u):
        X = list(range(x, n, u))
        expected.append(X + [swap[p] for p in X])
    assert blocks == Partition.from_cells(expected)


def test_normalizer_examples():
    n = 6
    D = dihedral(n)
    C = PermGroup(2 * n, [canonical_c(n)])
    assert normalizer_of_cyclic(D, C, CAP).order() == 2 * n
    S3 = PermGroup(6, [Perm([1, 0, 2, 3, 4, 5]), Perm([1, 2, 3, 4, 5, 0])])
    C3 = PermGroup(6, [canonical_c(3)])
    N = normalizer_of_cyclic(S3, C3, CAP)
    maps = {phi(3, r, s, t) for r in (1, 2) for s in range(3) for t in range(3)}
    maps |= {psi(3, r, s, t) for r in (1, 2) for s in range(3) for t in range(3)}
    assert all(g in maps for g in closure_elements(N, CAP))
    A = automorphism_group(build_haar(ZnSet.of(12, [0, 2, 1, 7])))
    assert A.order() // normalizer_of_cyclic(A, PermGroup(24, [canonical_c(12)]), CAP).order() == 1


def test_conjugating_element_examples():
    n = 8
    C = PermGroup(2 * n, [canonical_c(n)])
    assert conjugating_element(dihedral(n), C, C, CAP).is_identity()
    from haar.theorem import Quadruple, build_e_group

    E = build_e_group(Quadruple(8, 2, 1))
    A = automorphism_group(build_haar(ZnSet.of(8, [0, 1, 2, 5])))
    other = PermGroup(2 * n, [canonical_c(n) * E.members[1]])
    assert conjugating_element(A, C, other, CAP) is None
    B = automorphism_group(build_haar(ZnSet.of(10, [0, 1, 3, 4])))
    from haar.bicyclic import bicyclic_subgroups

    cat = bicyclic_subgroups(build_haar(ZnSet.of(10, [0, 1, 3, 4])))
    for H in cat.groups:
        g = conjugating_element(B, cat.groups[0], H, CAP)
        assert g is not None


@st.composite
def small_groups(draw):
    degree = draw(st.integers(2, 7))
    gens = draw(st.lists(st.permutations(range(degree)), min_size=1, max_size=3))
    return PermGroup(degree, [Perm(g) for g in gens])


@given(small_groups())
def test_chain_order_equals_closure_size(G):
    elems = closure_elements(G, 10**4)
    assert G.order() == len(elems)
    assert all(G.contains(g) for g in elems[:50])


@given(small_groups(), st.data())
def test_membership_is_exact(G, data):
    p = Perm(data.draw(st.permutations(range(G.degree))))
    elems = set(closure_elements(G, 10**4))
    assert G.contains(p) == (p in elems)


@given(small_groups())
def test_stabilizer_orbit_product(G):
    for p in range(G.degree):
        assert len(G.orbit(p)) * point_stabilizer(G, p).order() == G.order()


@given(small_groups())
def test_enumeration_matches_closure(G):
    assert set(G.iter_elements()) == set(closure_elements(G, 10**4))
