from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from permrel.bgr import (
    DistinguishingPartition,
    HypothesisError,
    binary_regular_set,
    find_defining_relation,
    in_bgr,
    in_bgr_k_bruteforce,
    kset_orbit_relations,
    orbit_closure,
    q_relation,
    relation_coset_regular,
    relation_distinguishing,
    relation_group_exhaustive,
    relation_injective_labelling,
    relation_parallel_sum,
    relation_sies,
)
from permrel.builders import (
    IsoMap,
    alternating_group,
    coset_action,
    parallel_multiple,
    symmetric_group,
)
from permrel.catalog import catalog_group
from permrel.group import PermGroup
from permrel.perm import Permutation, PointSet, from_cycles
from permrel.regular import distinguishing_number, distinguishing_partition, is_regular_set
from permrel.refine import hypergraph_automorphisms
from permrel.relations import UnorderedRelation, symmetry_group_full
from permrel.search import setwise_stabilizer


def _is_union_of_orbits(G: PermGroup, R: UnorderedRelation) -> bool:
    return R.is_invariant(G)


# ---------------------------------------------------------------- orbit closure


@pytest.mark.parametrize("key,closure", [
    ("C5", 10), ("A4", 24), ("C4", 8), ("K4", 4), ("A5", 120), ("A5^(2)", 120),
    ("C3", 6), ("D6", 12), ("L3(2)@7", 168), ("C5+I1", 10),
])
def test_closure_orders(key, closure):
    G = catalog_group(key)
    assert orbit_closure(G).order() == closure


@pytest.mark.parametrize("key", ["C5", "A4", "C4", "K4", "D5", "C3", "A5", "C6", "C2+C2"])
def test_closure_matches_enumeration(key):
    G = catalog_group(key)
    els = oracles.elements(G.gen_arrays, G.degree)
    assert orbit_closure(G).order() == oracles.orbit_closure_order(els, G.degree)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.permutations(list(range(n))), min_size=1, max_size=2))))
def test_closure_is_idempotent_and_contains_group(case):
    n, gens = case
    G = PermGroup.from_arrays([tuple(g) for g in gens], n)
    C = orbit_closure(G)
    assert G.is_subgroup_of(C)
    assert orbit_closure(C).order() == C.order()
    assert in_bgr(G) == (C.order() == G.order())
    els = oracles.elements(G.gen_arrays, n)
    assert C.order() == oracles.orbit_closure_order(els, n)


def test_psl28_closure_is_symmetric():
    assert orbit_closure(catalog_group("PSL28@9")).order() == 362880


def test_kset_orbit_relations_partition():
    G = catalog_group("L3(2)@7")
    rels = kset_orbit_relations(G, 3)
    assert sorted(len(R) for R in rels) == [7, 28]


# ---------------------------------------------------------------- BGR(k)


def test_klein_four_needs_three_values():
    K4 = catalog_group("K4")
    assert in_bgr(K4)
    assert in_bgr_k_bruteforce(K4, 2) is None
    levels = in_bgr_k_bruteforce(K4, 3)
    assert levels is not None and len(levels) == 3
    # the three levels partition the power set
    assert sum(len(L) for L in levels) == 16
    assert hypergraph_automorphisms(4, [L.masks for L in levels[:-1]])[1] == 4


def test_bruteforce_agrees_with_exhaustive_union_search():
    # two routes to BGR(2): assignments of two values, and unions of orbits
    for key in ["C6", "D5", "L3(2)@7", "K4", "A4", "C5"]:
        G = catalog_group(key)
        w = in_bgr_k_bruteforce(G, 2)
        R = relation_group_exhaustive(G)
        assert (w is None) == (R is None), key
        if R is not None:
            assert symmetry_group_full(R).order() == G.order()


def test_psl27_on_eight_points_has_no_two_valued_relation():
    G = catalog_group("L2(7)@8")
    assert in_bgr(G)
    assert relation_group_exhaustive(G) is None
    assert in_bgr_k_bruteforce(G, 2) is None
    assert in_bgr_k_bruteforce(G, 3) is not None


def test_find_defining_relation():
    G = catalog_group("L3(2)@7")
    R = find_defining_relation(G)
    assert R is not None and _is_union_of_orbits(G, R)
    assert symmetry_group_full(R).order() == 168


# ---------------------------------------------------------------- Q relation and binary sets


def test_q_relation_shape():
    Q = q_relation(5, 2)
    assert len(Q) == 10 and Q.arity() == {1, 2}
    assert symmetry_group_full(Q).order() == 120
    assert symmetry_group_full(q_relation(4, 1)).order() == 24


@pytest.mark.parametrize("n,r", [(n, r) for n in range(2, 9) for r in range(1, 4) if n * r <= 20])
def test_q_relation_defines_parallel_symmetric(n, r):
    Q = q_relation(n, r)
    P = parallel_multiple(symmetric_group(n), r)
    assert _is_union_of_orbits(P, Q)
    assert symmetry_group_full(Q).order() == P.order()


def test_binary_regular_set():
    y = binary_regular_set(8, 3)
    P = parallel_multiple(symmetric_group(8), 3)
    assert setwise_stabilizer(P, y).order() == 1
    assert len(binary_regular_set(2, 1)) >= 1
    with pytest.raises(ValueError):
        binary_regular_set(5, 2)


def test_sies_defines_alternating_multiple():
    S = parallel_multiple(symmetric_group(5), 3)
    A = parallel_multiple(alternating_group(5), 3)
    R = relation_sies(S, q_relation(5, 3), binary_regular_set(5, 3), A)
    assert _is_union_of_orbits(A, R)
    assert symmetry_group_full(R).order() == 60


def test_sies_rejects_nonregular_set():
    S = symmetric_group(5)
    with pytest.raises(HypothesisError):
        relation_sies(S, q_relation(5, 1), PointSet.of([1], 5), alternating_group(5))


# ---------------------------------------------------------------- coset constructions


def _a5_cosets():
    A5 = alternating_group(5)
    H = PermGroup([from_cycles("(1,2,3)", 5), from_cycles("(1,2)(4,5)", 5)], 5)
    N = PermGroup([from_cycles("(1,2,3)", 5)], 5)
    GH, sH = coset_action(A5, H)
    GN, sN = coset_action(A5, N)
    return GH, sH, GN, sN


def test_coset_regular_construction():
    GH, sH, GN, sN = _a5_cosets()
    assert (GH.degree, GN.degree) == (10, 20)
    Rp = find_defining_relation(GH)
    ybar = next(PointSet(10, m) for k in range(3, 8)
                for m in (sum(1 << (p - 1) for p in c) for c in itertools.combinations(range(2, 11), k))
                if is_regular_set(GH, PointSet(10, m)))
    R = relation_coset_regular(sH, sN, Rp, ybar)
    assert _is_union_of_orbits(GN, R)
    assert symmetry_group_full(R).order() == 60


def test_injective_labelling_construction():
    A5 = alternating_group(5)
    A4 = alternating_group(4)
    A4 = PermGroup([g.extend(5) for g in A4.generators], 5)
    C3 = PermGroup([from_cycles("(1,2,3)", 5)], 5)
    GH, sH = coset_action(A5, A4)
    GN, sN = coset_action(A5, C3)
    R, y = relation_injective_labelling(sH, sN)
    assert GN.degree == 20
    assert _is_union_of_orbits(GN, R)
    assert symmetry_group_full(R).order() == 60


def test_injective_labelling_needs_large_index():
    A5 = alternating_group(5)
    H = PermGroup([from_cycles("(1,2,3)", 5), from_cycles("(1,2)(4,5)", 5)], 5)
    N = PermGroup([from_cycles("(1,2,3)", 5)], 5)
    _, sH = coset_action(A5, H)
    _, sN = coset_action(A5, N)
    with pytest.raises(HypothesisError):
        relation_injective_labelling(sH, sN)


def test_distinguishing_construction():
    L = catalog_group("L3(2)@7")
    stab = setwise_stabilizer(L, PointSet.of([1], 7))
    D8 = setwise_stabilizer(stab, PointSet.of([2, 4], 7))
    assert (stab.order(), D8.order()) == (24, 8)
    GH, sH = coset_action(L, stab)
    GN, sN = coset_action(L, D8)
    assert (GH.order(), GN.degree) == (168, 21)
    d = distinguishing_number(GH)
    assert d == 4
    parts = DistinguishingPartition(distinguishing_partition(GH, d))
    assert parts.part_count == 4 and parts.is_distinguishing(GH)
    Rp = find_defining_relation(GH)
    R, y = relation_distinguishing(sH, sN, Rp, parts)
    assert _is_union_of_orbits(GN, R)
    assert symmetry_group_full(R).order() == 168


# ---------------------------------------------------------------- parallel sum


def test_parallel_sum_construction_matches_q_relation():
    S3 = parallel_multiple(symmetric_group(5), 3)
    S5 = symmetric_group(5)
    # S5^(3) (defined by Q) beside a further copy of S5: two routes to S5^(4)
    phi = IsoMap(S3, S5, [Permutation.from_array(g[:5]) for g in S3.gen_arrays])
    y = binary_regular_set(5, 3)
    R, G = relation_parallel_sum(S3, S5, phi, q_relation(5, 3), y)
    assert (G.degree, G.order()) == (20, 120)
    assert _is_union_of_orbits(G, R)
    assert symmetry_group_full(R).order() == 120
    assert G == parallel_multiple(S5, 4)
    # R1 sets are the largest in R
    assert max(R.arity()) == 19


def test_parallel_sum_rejects_nonregular_set():
    S5 = symmetric_group(5)
    phi = IsoMap(S5, S5, list(S5.generators))
    with pytest.raises(HypothesisError):
        relation_parallel_sum(S5, S5, phi, UnorderedRelation.from_sets([[j] for j in range(1, 6)], 5),
                              PointSet.of([1], 5))
