"""Exhaustive verifiers for the structural claims, returning one Check row per instance."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterator, Optional

from .auto import automorphism_group, find_isomorphism
from .bicyclic import bci_to_ci_reduction, bicyclic_base, bicyclic_subgroups, is_bci_definitional
from .census import connected_classes, iso_partition
from .config import max_group_order
from .graph import as_haar, build_haar, canonical_c, is_automorphism, is_isomorphism, relabel
from .perm import PermGroup, normalizer_of_cyclic, point_stabilizer
from .theorem import (
    Quadruple,
    build_e_group,
    bicyclic_criterion,
    condition2_holds,
    count_bicyclic_expected,
    hypothesis_gate,
    involutive_phis,
    lemma32_figure1_iso,
    lemma32_rd,
    lemma32_sets,
    lemma33_generator,
    lemma35_predicate,
    lemma35_verify,
    normalizer_index_expected,
    power_identity_holds,
    quotient_check,
    stabilizer_structure_expected,
    subsets,
    xi_witness,
)
from .zn import AffineWitness, ZnSet, affinely_equivalent, apply_affine, canonical_affine_form, generates, is_unit


@dataclass(frozen=True)
class Check:
    name: str
    instance: str
    passed: bool
    detail: str = ""


def quadruples(n_max: int, n_min: int = 4, formula_regime: bool = False) -> Iterator[Quadruple]:
    """Valid (n, u, v) with v < m; with ``formula_regime`` also 1 < u < m, u | m and 2u != m."""
    for n in range(max(n_min, 4), n_max + 1, 2):
        m = n // 2
        for u in range(1, n):
            if formula_regime and not (1 < u < m and m % u == 0 and 2 * u != m):
                continue
            for v in range(m):
                if len({0, u, v, v + m}) == 4 and generates([u, v], n):
                    yield Quadruple(n, u, v)


@dataclass
class FormulaRow:
    q: Quadruple
    gate: bool
    count: int
    count_expected: int
    index: int
    index_expected: int
    stabilizer: int
    stabilizer_expected: int


def formula_rows(n_max: int, cap: Optional[int] = None) -> list[FormulaRow]:
    """Computed and predicted bicyclic count, normalizer index and stabilizer order, for gated quadruples."""
    cap = max_group_order() if cap is None else cap
    rows = []
    for q in quadruples(n_max, formula_regime=True):
        G = build_haar(q.S)
        A = automorphism_group(G)
        if not hypothesis_gate(q, A):
            continue
        cat = bicyclic_subgroups(G, cap, group=A)
        C = PermGroup(2 * q.n, [canonical_c(q.n)])
        N = normalizer_of_cyclic(A, C, cap)
        index = A.order() // N.order()
        # the conjugacy class of C has |A : N_A(C)| members
        assert index == len(cat.conjugacy_classes[0])
        rows.append(
            FormulaRow(
                q,
                True,
                cat.count,
                count_bicyclic_expected(q),
                index,
                normalizer_index_expected(q),
                point_stabilizer(A, 0).order(),
                stabilizer_structure_expected(q)[1],
            )
        )
    return rows


def check_formulas(n_max: int, cap: Optional[int] = None) -> list[Check]:
    out = []
    for r in formula_rows(n_max, cap):
        tag = f"n={r.q.n} u={r.q.u} v={r.q.v}"
        out.append(Check("bicyclic count", tag, r.count == r.count_expected, f"{r.count} vs {r.count_expected}"))
        out.append(Check("normalizer index", tag, r.index == r.index_expected, f"{r.index} vs {r.index_expected}"))
        out.append(Check("stabilizer order", tag, r.stabilizer == r.stabilizer_expected, f"{r.stabilizer} vs {r.stabilizer_expected}"))
    return out


def check_quarter_regime(n_max: int) -> list[Check]:
    """The n = 4u constructions: the explicit isomorphism, the units r_d, and when S_1(d), S_2(d) are affine."""
    out = []
    for u in range(2, n_max // 4 + 1):
        n = 4 * u
        S1, S2 = lemma32_sets(u, 1)
        f = lemma32_figure1_iso(u)
        out.append(Check("explicit isomorphism f", f"u={u}", is_isomorphism(build_haar(S1), build_haar(S2), f)))
        for d in (1, 2, 4):
            if d > 1 and u % 2 == 0:
                continue
            A1, A2 = lemma32_sets(u, d)
            expected = d in (2, 4) or u % 4 != 2
            got = affinely_equivalent(A1, A2) is not None
            out.append(Check("S_1(d) affine to S_2(d)", f"u={u} d={d}", got == expected, f"{got} vs {expected}"))
            if d > 1:
                r = lemma32_rd(u, d)
                ok = is_unit(r, n) and apply_affine(S1, AffineWitness(r, u)) == A1
                out.append(Check("unit r_d", f"u={u} d={d}", ok, f"r={r}"))
    return out


def check_stabilizer_generator(n_max: int) -> list[Check]:
    """For gated quadruples with u = 2v (mod m/u): the explicit extra stabilizer element is an automorphism outside E."""
    out = []
    for q in quadruples(n_max, formula_regime=True):
        if (q.u - 2 * q.v) % (q.m // q.u):
            continue
        G = build_haar(q.S)
        A = automorphism_group(G)
        if not hypothesis_gate(q, A):
            continue
        g = lemma33_generator(q)
        E = build_e_group(q).group()
        ok = is_automorphism(G, g) and g[0] == 0 and not E.contains(g)
        out.append(Check("extra stabilizer element", f"n={q.n} u={q.u} v={q.v}", ok))
    return out


def check_xi(n_max: int) -> list[Check]:
    out = []
    for q in quadruples(n_max):
        if not condition2_holds(q):
            continue
        n, m, u = q.n, q.m, q.u
        xi = xi_witness(q)
        c = canonical_c(n)
        x = c * build_e_group(q).members[1]
        ok = (
            xi * c * xi.inverse() == x
            and xi[0] == 0
            and xi[n] == n
            and xi[n + u] == n + (u + m) % n
            and {xi[n + q.v], xi[n + (q.v + m) % n]} == {n + q.v, n + (q.v + m) % n}
            and as_haar(n, relabel(build_haar(q.S), xi)) == q.partner
        )
        out.append(Check("conjugating map xi", f"n={n} u={u} v={q.v}", ok))
    return out


def check_involution_bicyclic(n_max: int, cap: Optional[int] = None) -> list[Check]:
    out = []
    for n in range(3, n_max + 1):
        for r, s in involutive_phis(n):
            pred = lemma35_predicate(n, r, s)
            got = lemma35_verify(n, r, s, cap)
            out.append(Check("extra bicyclic group under an involution", f"n={n} r={r} s={s}", pred == got, f"{got} vs {pred}"))
    return out


def check_block_identities(n_max: int) -> list[Check]:
    """The power identity and the gcd criterion for c^i e_I, and the quotient on the m-blocks in case 2."""
    out = []
    for q in quadruples(n_max, formula_regime=True):
        G = build_haar(q.S)
        A = automorphism_group(G)
        if not hypothesis_gate(q, A):
            continue
        tag = f"n={q.n} u={q.u} v={q.v}"
        power_ok = all(power_identity_holds(q, i, I) for i in range(q.n) if gcd(i, q.u) == 1 for I in subsets(q.u, 1))
        out.append(Check("power identity", tag, power_ok))
        crit_ok = True
        for i in range(q.n):
            if gcd(i, q.m) != 1:
                continue
            for I in subsets(q.u, 1):
                formula, observed = bicyclic_criterion(q, i, I)
                crit_ok &= formula == observed
        out.append(Check("bicyclic generator criterion", tag, crit_ok))
        if (q.u - 2 * q.v) % (q.m // q.u) == 0:
            order, rs = quotient_check(q, A)
            out.append(Check("quotient on m-blocks", tag, order == 4 * q.m and bool(rs), f"order {order}, r in {rs}"))
    return out


def check_base_decomposition(n_max: int, cap: Optional[int] = None) -> list[Check]:
    """Isomorphism class = disjoint union of the affine classes of the bicyclic base, and structural BCI = definitional."""
    out = []
    for n in range(4, n_max + 1):
        sets = connected_classes(n, 4)
        iso_class = {}
        for cls in iso_partition(sets):
            for i in cls:
                iso_class[sets[i]] = frozenset(sets[j] for j in cls)
        for S in sets:
            G = build_haar(S)
            cat = bicyclic_subgroups(G, cap)
            base = [canonical_affine_form(T)[0] for _, T in bicyclic_base(G, catalog=cat)]
            disjoint = len(set(base)) == len(base)
            ok = disjoint and frozenset(base) == iso_class[S]
            out.append(Check("base decomposition", f"n={n} S={list(S.elems)}", ok, f"{len(base)} classes"))
            structural = cat.class_count == 1
            definitional = len(iso_class[S]) == 1
            out.append(Check("structural BCI = definitional BCI", f"n={n} S={list(S.elems)}", structural == definitional))
    return out


def check_bci_ci_reduction(n_max: int, ks=(3, 4)) -> list[Check]:
    out = []
    for n in range(4, n_max + 1):
        for k in ks:
            for S in connected_classes(n, k):
                res = bci_to_ci_reduction(S)
                if res is None:
                    continue
                a, agree = res
                out.append(Check("BCI(S) = CI(S - a)", f"n={n} S={list(S.elems)} a={a}", agree))
    return out


VERIFIERS: dict[str, Callable[[int], list[Check]]] = {
    "formulas": check_formulas,
    "quarter regime": check_quarter_regime,
    "stabilizer generator": check_stabilizer_generator,
    "xi": check_xi,
    "involution bicyclic": check_involution_bicyclic,
    "block identities": check_block_identities,
    "base decomposition": lambda n: check_base_decomposition(min(n, 16)),
    "bci to ci": lambda n: check_bci_ci_reduction(min(n, 16)),
}


def run_all(n_max: int) -> list[Check]:
    out = []
    for fn in VERIFIERS.values():
        out.extend(fn(n_max))
    return out


def summarize(checks: list[Check]) -> list[tuple[str, int, int]]:
    """(name, instances, failures) in first-seen order."""
    total = Counter(c.name for c in checks)
    failed = Counter(c.name for c in checks if not c.passed)
    return [(name, total[name], failed[name]) for name in total]
