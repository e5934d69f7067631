"""End-to-end acceptance checks.  Each test records one PASS/FAIL line through the `acceptance` fixture."""

import time

from haar.auto import automorphism_group, find_isomorphism, is_edge_transitive
from haar.bicyclic import is_bci_definitional, is_bci_structural, regular_dihedral_subgroups
from haar.census import census, connected_classes
from haar.graph import build_haar, canonical_c, canonical_d, is_isomorphism
from haar.perm import PermGroup, closure_elements
from haar.theorem import decide_iso_valency4
from haar.verify import (
    check_base_decomposition,
    check_bci_ci_reduction,
    check_formulas,
    check_involution_bicyclic,
    check_quarter_regime,
    check_stabilizer_generator,
    check_xi,
    summarize,
)
from haar.zn import ZnSet


def _summary(checks):
    failed = [c for c in checks if not c.passed]
    parts = [f"{name}: {total - bad}/{total}" for name, total, bad in summarize(checks)]
    return failed, "; ".join(parts)


def test_criterion_1_edge_transitive_z10(acceptance):
    start = time.perf_counter()
    S = ZnSet.of(10, [0, 1, 3, 4])
    G = build_haar(S)
    A = automorphism_group(G)
    D = frozenset(closure_elements(PermGroup(20, [canonical_c(10), canonical_d(10)]), 10**6))
    dihedral = regular_dihedral_subgroups(A)
    other = [H for H in dihedral if H != D and len(H) == 20]
    elapsed = time.perf_counter() - start
    ok = (
        A.order() == 80
        and is_edge_transitive(G)
        and D in dihedral
        and bool(other)
        and is_bci_definitional(S)
        and is_bci_structural(S)
        and elapsed < 5
    )
    acceptance(
        1,
        "H(Z_10,{0,1,3,4}): |Aut| = 80, edge-transitive, second regular D_20, BCI both ways",
        ok,
        f"|Aut|={A.order()}, regular dihedral subgroups={len(dihedral)}, {elapsed:.2f}s",
    )


def test_criterion_2_decision_matches_oracle(acceptance):
    pairs = disagreements = 0
    for n in range(4, 25):
        classes = connected_classes(n, 4)
        graphs = [build_haar(S) for S in classes]
        for i, S in enumerate(classes):
            for j in range(i, len(classes)):
                T = classes[j]
                d = decide_iso_valency4(S, T)
                f = find_isomorphism(graphs[i], graphs[j])
                pairs += 1
                if d.isomorphic != (f is not None):
                    disagreements += 1
                elif d.isomorphic and not is_isomorphism(graphs[i], graphs[j], d.isomorphism()):
                    disagreements += 1
    acceptance(
        2,
        "valency-4 decision agrees with the isomorphism oracle for n <= 24",
        disagreements == 0 and pairs > 0,
        f"{pairs} pairs, {disagreements} disagreements",
    )


def _non_bci_moduli(ns, k):
    recs = list(census(ns, k, jobs=4))
    assert not [r for r in recs if "error" in r]
    return sorted(r["modulus"] for r in recs if r.get("summary") and r["has_non_bci"])


def test_criterion_3_four_bci_boundary(acceptance):
    found = _non_bci_moduli(range(4, 33), 4)
    acceptance(
        3,
        "k = 4 census over n in [4, 32] finds non-BCI classes exactly at n in {8, 16, 24, 32}",
        found == [8, 16, 24, 32],
        f"non-BCI moduli {found}",
    )


def test_criterion_4_three_bci(acceptance):
    found = {k: _non_bci_moduli(range(3, 31), k) for k in (1, 2, 3)}
    ok = all(not v for v in found.values())
    acceptance(4, "k <= 3 census over n in [3, 30] finds no non-BCI class", ok, f"non-BCI moduli by k {found}")


def test_criterion_5_formulas(acceptance):
    failed, detail = _summary(check_formulas(32))
    acceptance(5, "bicyclic count, normalizer index and stabilizer order match their formulas for n <= 32", not failed, detail)


def test_criterion_6_constructive_witnesses(acceptance):
    checks = check_quarter_regime(32) + check_stabilizer_generator(32) + check_xi(32)
    failed, detail = _summary(checks)
    acceptance(6, "figure isomorphism, r_d, extra stabilizer generator and xi validate for n <= 32", not failed and len(checks) > 0, detail)


def test_criterion_7_involutions(acceptance):
    checks = check_involution_bicyclic(32)
    failed, detail = _summary(checks)
    acceptance(7, "involution predicate agrees with exhaustive verification for n <= 32", not failed and len(checks) > 0, detail)


def test_criterion_8_base_decomposition(acceptance):
    checks = check_base_decomposition(16)
    failed, detail = _summary(checks)
    acceptance(8, "iso classes decompose over the bicyclic base and structural BCI = definitional BCI for n <= 16", not failed and len(checks) > 0, detail)


def test_criterion_9_bci_to_ci(acceptance):
    checks = check_bci_ci_reduction(16)
    failed, detail = _summary(checks)
    acceptance(9, "BCI(S) = CI(S - a) on reducible instances", not failed and len(checks) >= 10, detail)
