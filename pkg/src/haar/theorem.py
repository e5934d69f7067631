"""Decision procedure for isomorphism of connected 4-valent cyclic Haar graphs, and the
constructions and counting formulas behind it.

The quadruple form is S = {0, u, v, v+m} with n = 2m.  Two sets are isomorphic iff they
are affinely equivalent, or one normalizes to {0, u, v, v+m} and the other to
{0, u+m, v, v+m} with 2 | u, 2u | m and u/2 != v + m/(2u) (mod m/u).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Optional

from .errors import BadValency, Disconnected, ModulusMismatch, NonUnit, OddModulusNoException, OutOfRegime
from .graph import (
    as_haar,
    build_haar,
    canonical_c,
    canonical_d,
    is_automorphism,
    is_connected,
    is_isomorphism,
    phi,
    relabel,
)
from .perm import Partition, Perm, PermGroup, _mk
from .zn import AffineWitness, ZnSet, _units, affinely_equivalent, apply_affine, generates, is_unit


@dataclass(frozen=True, order=True)
class Quadruple:
    n: int
    u: int
    v: int

    def __post_init__(self):
        if self.n % 2:
            raise OddModulusNoException(f"n = {self.n} is odd")
        if not (0 <= self.u < self.n and 0 <= self.v < self.n):
            raise ValueError("u and v must be reduced mod n")
        if len({0, self.u, self.v, (self.v + self.m) % self.n}) != 4:
            raise ValueError(f"{{0, {self.u}, {self.v}, {self.v}+m}} has repeated elements")
        if not generates([self.u, self.v, self.m], self.n):
            raise Disconnected(f"<{self.u}, {self.v}, {self.m}> is not Z_{self.n}")

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def S(self) -> ZnSet:
        return ZnSet.of(self.n, [0, self.u, self.v, self.v + self.m])

    @property
    def partner(self) -> ZnSet:
        return ZnSet.of(self.n, [0, self.u + self.m, self.v, self.v + self.m])

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "u": self.u, "v": self.v}


def condition2_holds(q: Quadruple) -> bool:
    """2 | u, 2u | m and u/2 != v + m/(2u) (mod m/u), on representatives in [0, n)."""
    u, v, m = q.u, q.v, q.m
    if u == 0 or u % 2 or m % (2 * u):
        return False
    k = m // u
    return (u // 2 - v - m // (2 * u)) % k != 0


def _require_four(S: ZnSet) -> None:
    if len(S) != 4:
        raise BadValency(f"{S} does not have 4 elements")


def _require_connected(S: ZnSet) -> None:
    if not generates([s - S.elems[0] for s in S.elems], S.modulus):
        raise Disconnected(f"H({S}) is disconnected")


def normalize_quadruple(S: ZnSet) -> list[tuple[Quadruple, AffineWitness]]:
    """Every (a, b) and role choice (u, v) with aS + b = {0, u, v, v+m}; sorted by (a, b, u, v)."""
    n = S.modulus
    if n % 2:
        raise OddModulusNoException(f"n = {n} is odd, no element of order 2")
    _require_four(S)
    _require_connected(S)
    m = n // 2
    out = []
    for a in _units(n):
        for b in sorted({(-a * s) % n for s in S.elems}):
            R = {(a * s + b) % n for s in S.elems}
            for p in sorted(R):
                if p >= m or p + m not in R:
                    continue
                rest = R - {p, p + m}
                if 0 not in rest:
                    continue
                (u,) = rest - {0}
                for v in (p, p + m):
                    out.append((Quadruple(n, u, v), AffineWitness(a, b)))
    out.sort(key=lambda t: (t[1].a, t[1].b, t[0].u, t[0].v))
    return out


@dataclass(frozen=True)
class ExceptionalWitness:
    quadruple: Quadruple
    a1: int
    b1: int
    a2: int
    b2: int
    orientation: int  # 0: S -> {0,u,v,v+m}; 1: T -> {0,u,v,v+m}

    def to_json(self) -> dict:
        return {
            "u": self.quadruple.u,
            "v": self.quadruple.v,
            "a1": self.a1,
            "b1": self.b1,
            "a2": self.a2,
            "b2": self.b2,
            "orientation": self.orientation,
        }


@dataclass(frozen=True)
class IsoDecision:
    S: ZnSet
    T: ZnSet
    isomorphic: bool
    route: str  # "affine" | "exceptional" | "none"
    witness: object = None

    @property
    def verdict(self) -> str:
        return "isomorphic" if self.isomorphic else "not_isomorphic"

    def isomorphism(self) -> Optional[Perm]:
        """An explicit graph isomorphism H(S) -> H(T), edge-checked, or None for a negative verdict."""
        if not self.isomorphic:
            return None
        n = self.S.modulus
        if self.route == "affine":
            w = self.witness
            f = phi(n, w.a, 0, w.b)
        else:
            w = self.witness
            q = w.quadruple
            xi = xi_witness(q)
            to_first = phi(n, w.a1, 0, w.b1)
            to_second = phi(n, w.a2, 0, w.b2)
            if w.orientation == 0:
                f = to_first * xi * to_second.inverse()
            else:
                f = to_second * xi.inverse() * to_first.inverse()
        assert is_isomorphism(build_haar(self.S), build_haar(self.T), f)
        return f

    def to_json(self) -> dict:
        out = {"isomorphic": self.isomorphic, "route": self.route}
        if self.route == "affine":
            out["witness"] = self.witness.to_json()
        elif self.route == "exceptional":
            out.update(self.witness.to_json())
        return out


def _exceptional_candidates(X: ZnSet, Y: ZnSet, orientation: int):
    for q, w1 in normalize_quadruple(X):
        if not condition2_holds(q):
            continue
        w2 = affinely_equivalent(Y, q.partner)
        if w2 is not None:
            yield (w1.a, w1.b, w2.a, w2.b, orientation, q.u, q.v), ExceptionalWitness(q, w1.a, w1.b, w2.a, w2.b, orientation)


def decide_iso_valency4(S: ZnSet, T: ZnSet) -> IsoDecision:
    if S.modulus != T.modulus:
        raise ModulusMismatch(f"{S} and {T} live in different groups")
    _require_four(S)
    _require_four(T)
    _require_connected(S)
    _require_connected(T)
    w = affinely_equivalent(S, T)
    if w is not None:
        assert apply_affine(S, w) == T
        return IsoDecision(S, T, True, "affine", w)
    if S.modulus % 2:
        return IsoDecision(S, T, False, "none", "exhausted")
    best = None
    for key, wit in list(_exceptional_candidates(S, T, 0)) + list(_exceptional_candidates(T, S, 1)):
        if best is None or key < best[0]:
            best = (key, wit)
    if best is None:
        return IsoDecision(S, T, False, "none", "exhausted")
    wit = best[1]
    X, Y = (S, T) if wit.orientation == 0 else (T, S)
    q = wit.quadruple
    assert apply_affine(X, AffineWitness(wit.a1, wit.b1)) == q.S
    assert apply_affine(Y, AffineWitness(wit.a2, wit.b2)) == q.partner
    assert condition2_holds(q)
    return IsoDecision(S, T, True, "exceptional", wit)


# ---- the 2u = m regime -------------------------------------------------------


def lemma32_sets(u: int, d: int) -> tuple[ZnSet, ZnSet]:
    """S_1(d) = {0, u, d, d+2u} and S_2(d) = {0, 3u, d, d+2u} over Z_{4u}."""
    n = 4 * u
    return ZnSet.of(n, [0, u, d, d + 2 * u]), ZnSet.of(n, [0, 3 * u, d, d + 2 * u])


def lemma32_classify(S: ZnSet) -> tuple[int, int]:
    """(d, family) with S affinely equivalent to S_family(d), via the translate-and-scale reduction.

    The first translate S - s (s ascending) of the form {0, u', v, v+m} with u' in {n/4, 3n/4}
    is used, with v the pair element below m and v = v_1 d lifted to the least unit v_1.
    """
    n = S.modulus
    _require_four(S)
    if n % 4:
        raise OutOfRegime(f"n = {n} is not 4u")
    u, m = n // 4, n // 2
    for s in S.elems:
        R = {(x - s) % n for x in S.elems}
        rest = R - {0}
        for up in (u, 3 * u):
            if up not in rest:
                continue
            pair = sorted(rest - {up})
            if len(pair) != 2 or (pair[1] - pair[0]) != m:
                continue
            v = pair[0]
            d = gcd(n, v)
            if d not in (1, 2, 4):
                raise OutOfRegime(f"gcd(n, v) = {d} for {S}")
            v1 = next(x for x in range(v // d, n, n // d) if is_unit(x, n))
            inv = pow(v1, -1, n)
            family = 1 if (inv * up) % n == u else 2
            witness = AffineWitness(inv, (-inv * s) % n)
            assert apply_affine(S, witness) == lemma32_sets(u, d)[family - 1]
            return d, family
    raise OutOfRegime(f"{S} has no translate of the form {{0, u, v, v+m}} with 2u = m")


def lemma32_figure1_iso(u: int) -> Perm:
    """x^e -> x^e for x in [0,u) and [2u,3u), x^e -> (x+2u)^e otherwise, on Z_{4u}."""
    if u < 2:
        raise OutOfRegime("u must be at least 2")
    n = 4 * u
    f = [x if (x < u or 2 * u <= x < 3 * u) else (x + 2 * u) % n for x in range(n)]
    return Perm(f + [n + y for y in f])


def lemma32_rd(u: int, d: int) -> int:
    """The unit r_d with r_d S_1(1) + u = S_1(d), for odd u and d in {2, 4}."""
    if u % 2 == 0:
        raise OutOfRegime("r_d is only defined for odd u")
    if d == 2:
        r = 2 + u if u % 4 == 1 else 2 + 3 * u
    elif d == 4:
        r = 4 + u if u % 4 == 3 else 4 + 3 * u
    else:
        raise ValueError("d must be 2 or 4")
    return r % (4 * u)


# ---- the E group and the 2u != m regime --------------------------------------


@dataclass(frozen=True)
class EGroup:
    u: int
    members: tuple[Perm, ...]
    partition: Partition

    def e_I(self, I) -> Perm:
        g = Perm.identity(len(self.members[0]))
        for i in sorted(set(I)):
            g = g * self.members[i]
        return g

    def group(self) -> PermGroup:
        return PermGroup(len(self.members[0]), self.members)


def _require_block_regime(q: Quadruple) -> None:
    if q.u <= 1 or q.u >= q.m or q.m % q.u:
        raise OutOfRegime(f"need 1 < u < m and u | m, got u = {q.u}, m = {q.m}")


def block_index(q: Quadruple) -> list[int]:
    """i with x in i v + <u>, for every x in Z_n."""
    n, u, v = q.n, q.u, q.v
    idx = [-1] * n
    for i in range(u):
        for j in range(n // u):
            idx[(i * v + j * u) % n] = i
    assert -1 not in idx
    return idx


def build_e_group(q: Quadruple) -> EGroup:
    _require_block_regime(q)
    n, m, u = q.n, q.m, q.u
    idx = block_index(q)
    members = []
    for i in range(u):
        img = [(x + m) % n if idx[x] == i else x for x in range(n)]
        members.append(Perm(img + [n + y for y in img]))
    cells = [[x for x in range(n) if idx[x] == i] + [n + x for x in range(n) if idx[x] == i] for i in range(u)]
    E = EGroup(u, tuple(members), Partition.from_cells(cells))
    G = build_haar(q.S)
    assert all(is_automorphism(G, e) for e in members)
    assert all((e * e).is_identity() for e in members)
    assert all(a * b == b * a for a in members for b in members)
    assert E.e_I(range(u)) == canonical_c(n) ** m
    return E


def _require_formula_regime(q: Quadruple) -> None:
    _require_block_regime(q)
    if 2 * q.u == q.m:
        raise OutOfRegime("2u = m is handled separately")


def count_bicyclic_expected(q: Quadruple) -> int:
    _require_formula_regime(q)
    u, k = q.u, q.m // q.u
    return 2 ** (u - 2) if u % 2 == 0 and k % 2 else 2 ** (u - 1)


def normalizer_index_expected(q: Quadruple) -> int:
    _require_formula_regime(q)
    u, v, k = q.u, q.v, q.m // q.u
    if u % 2 == 0 and ((u - 2 * v) % k != 0 or (u // 2 - v) % k == 0):
        return 2 ** (u - 2)
    return 2 ** (u - 1)


def stabilizer_structure_expected(q: Quadruple) -> tuple[int, int]:
    """(1, 2^(u-1)) if u != 2v (mod m/u), else (2, 2^u)."""
    _require_formula_regime(q)
    u, v, k = q.u, q.v, q.m // q.u
    if (u - 2 * v) % k:
        return 1, 2 ** (u - 1)
    return 2, 2 ** u


def hypothesis_gate(q: Quadruple, group: Optional[PermGroup] = None) -> bool:
    """(a) <u,v> = Z_n, (b) 1 < u < m with u | m, (c) the stabilizer of 0^+ fixes {0^-, u^-} setwise."""
    from .auto import automorphism_group
    from .perm import point_stabilizer

    if not generates([q.u, q.v], q.n):
        return False
    if not (1 < q.u < q.m and q.m % q.u == 0):
        return False
    A = group or automorphism_group(build_haar(q.S))
    W = {q.n, q.n + q.u}
    return all({g[p] for p in W} == W for g in point_stabilizer(A, 0).generators)


def lemma33_generator(q: Quadruple) -> Perm:
    """(vi+uj)^+ -> (vi-(i+j)u)^+, (vi+uj)^- -> (vi-(i+j-1)u)^-, for u = 2v (mod m/u)."""
    _require_formula_regime(q)
    n, u, v = q.n, q.u, q.v
    if (u - 2 * v) % (q.m // u):
        raise OutOfRegime("the extra stabilizer element needs u = 2v (mod m/u)")
    img = [-1] * (2 * n)
    for i in range(u):
        for j in range(n // u):
            x = (v * i + u * j) % n
            img[x] = (v * i - (i + j) * u) % n
            img[n + x] = n + (v * i - (i + j - 1) * u) % n
    return Perm(img)


# ---- bicyclic subgroups of <D, phi_{r,s,0}> ----------------------------------


def involutive_phis(n: int) -> list[tuple[int, int]]:
    """(r, s) with r != 1 a unit and phi_{r,s,0} of order 2."""
    return [(r, s) for r in _units(n) if r != 1 and (r * r) % n == 1 for s in range(n) if ((r + 1) * s) % n == 0]


def lemma35_predicate(n: int, r: int, s: int) -> bool:
    return n % 8 == 0 and r == n // 2 + 1 and s in (0, n // 2)


def lemma35_verify(n: int, r: int, s: int, cap: Optional[int] = None) -> bool:
    """Whether <c, d, phi_{r,s,0}> has a bicyclic subgroup other than <c>, by exhaustive search."""
    from .bicyclic import _cyclic_search, _is_bicyclic_generator, canonical_generator
    from .config import max_group_order

    if not is_unit(r, n):
        raise NonUnit(f"{r} is not a unit mod {n}")
    f = phi(n, r, s, 0)
    if r == 1 or not (f * f).is_identity():
        raise OutOfRegime("phi_{r,s,0} must be an involution with r != 1")
    G = PermGroup(2 * n, [canonical_c(n), canonical_d(n), f])
    gens, _ = _cyclic_search(G, n, _is_bicyclic_generator, max_group_order() if cap is None else cap)
    return any(x != canonical_generator(canonical_c(n)) for x in gens)


# ---- the conjugating permutation xi ------------------------------------------


def xi_witness(q: Quadruple) -> Perm:
    """ξ fixing 0^+ and 0^- with ξ c ξ^-1 = c e_1 (apply left to right), mapping H(S) onto H({0,u+m,v,v+m})."""
    from .bicyclic import _is_bicyclic_generator, xi_for

    if not condition2_holds(q):
        raise OutOfRegime(f"{q} does not satisfy the exceptional condition")
    n = q.n
    E = build_e_group(q)
    c = canonical_c(n)
    x = c * E.members[1]
    assert _is_bicyclic_generator(x, n)
    xi = xi_for(x, n)
    assert xi * c * xi.inverse() == x and xi[0] == 0 and xi[n] == n
    assert as_haar(n, relabel(build_haar(q.S), xi)) == q.partner
    return xi


# ---- block quotients ---------------------------------------------------------


def quotient_action(g: Perm, n: int, ell: int) -> Perm:
    """Action of g on the blocks {(x + k ell)^e} of delta_ell, as a permutation of the 2 ell points of Z_ell."""
    out = [0] * (2 * ell)
    for x in range(ell):
        out[x] = g[x] % ell + (ell if g[x] >= n else 0)
        y = g[n + x]
        out[ell + x] = (y - n) % ell + ell if y >= n else y % ell
    return _mk(out)


def delta_partition(n: int, ell: int) -> Partition:
    """Orbits of <c^ell>: {x + k ell} on each colour class."""
    cells = []
    for x in range(ell):
        pts = list(range(x, n, ell))
        cells.append(pts)
        cells.append([n + p for p in pts])
    return Partition.from_cells(cells)


def quotient_check(q: Quadruple, group: PermGroup) -> tuple[int, list[int]]:
    """Order of the quotient group on delta_m, and the units r mod m with r u = -u and r v = v - u
    (mod m) for which the quotient equals <D, phi_{r, 0, u mod m}> there."""
    n, m = q.n, q.m
    delta = delta_partition(n, m)
    if not all(delta.is_invariant_under(g) for g in group.generators):
        raise OutOfRegime("delta_m is not a block system")
    Q = PermGroup(2 * m, [quotient_action(g, n, m) for g in group.generators])
    D = [quotient_action(canonical_c(n), n, m), quotient_action(canonical_d(n), n, m)]
    rs = []
    for r in _units(m) if m > 1 else []:
        if (r * q.u + q.u) % m or (r * q.v - q.v + q.u) % m:
            continue
        f = phi(m, r, 0, q.u % m)
        if Q.contains(f) and PermGroup(2 * m, D + [f]).order() == Q.order():
            rs.append(r)
    return Q.order(), rs


def power_identity_holds(q: Quadruple, i: int, I) -> bool:
    """(c^i e_I)^u == c^(u(i + (m/u)|I|))."""
    E = build_e_group(q)
    c = canonical_c(q.n)
    x = (c ** i) * E.e_I(I)
    return x ** q.u == c ** (q.u * (i + (q.m // q.u) * len(set(I))))


def bicyclic_criterion(q: Quadruple, i: int, I) -> tuple[bool, bool]:
    """(formula, observed): gcd(i + (m/u)|I|, 2m/u) = 1 against c^i e_I generating a bicyclic group."""
    from .bicyclic import _is_bicyclic_generator

    E = build_e_group(q)
    k = q.m // q.u
    formula = gcd(i + k * len(set(I)), 2 * k) == 1
    observed = _is_bicyclic_generator((canonical_c(q.n) ** i) * E.e_I(I), q.n)
    return formula, observed


def subsets(u: int, start: int = 0):
    items = list(range(start, u))
    for k in range(len(items) + 1):
        yield from combinations(items, k)
