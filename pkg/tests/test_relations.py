from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from permrel.catalog import catalog_group
from permrel.group import PermGroup
from permrel.perm import DegreeMismatchError, PointSet, from_cycles, mask_points
from permrel.refine import DegreeCapError, hypergraph_automorphisms
from permrel.relations import (
    Certificate,
    NotInvariantError,
    UnorderedRelation,
    block_partition_certificate,
    certify_defining,
    is_defining_relation,
    k_homogeneous,
    load_relation,
    orbit_of_set,
    save_relation,
    set_transitive,
    split_certificate,
    symmetry_group_full,
    symmetry_group_in,
)
from permrel.search import family_stabilizer, setwise_stabilizer


def families(max_n: int = 6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(st.integers(0, (1 << n) - 1), max_size=8)))


# ---------------------------------------------------------------- relation objects


def test_relation_normal_form():
    R = UnorderedRelation.from_sets([[3, 1], [2], [1, 3], []], 4)
    assert R.point_lists() == [[], [2], [1, 3]]
    assert R.arity() == {0, 1, 2}
    assert R.cardinality_class(2).point_lists() == [[1, 3]]
    assert R.complements().point_lists() == [[2, 4], [1, 3, 4], [1, 2, 3, 4]]
    with pytest.raises(ValueError):
        UnorderedRelation.from_sets([[5]], 4)


def test_relation_image_and_union():
    R = UnorderedRelation.from_sets([[1, 2]], 3)
    p = from_cycles("(1,3)", 3)
    assert R.image(p).point_lists() == [[2, 3]]
    assert (R | R.image(p)).point_lists() == [[1, 2], [2, 3]]
    with pytest.raises(DegreeMismatchError):
        R | UnorderedRelation(4)


def test_relation_file_round_trip(tmp_path):
    R = orbit_of_set(catalog_group("L3(2)@7"), PointSet.of([1, 2, 4], 7))
    path = tmp_path / "r.json"
    save_relation(R, path)
    assert load_relation(path) == R


# ---------------------------------------------------------------- engines vs oracle


@settings(max_examples=60, deadline=None)
@given(families(6))
def test_absolute_engine_matches_enumeration(case):
    n, masks = case
    R = UnorderedRelation(n, masks)
    G = symmetry_group_full(R)
    fam = [frozenset(mask_points(m)) for m in R.masks]
    assert G.order() == oracles.family_automorphism_count(n, fam)
    assert all(R.preserved_by(g) for g in G.generators)


@settings(max_examples=40, deadline=None)
@given(families(6))
def test_relative_engine_agrees_with_absolute(case):
    # two independent routes: backtrack inside Sym(n) and refinement
    n, masks = case
    R = UnorderedRelation(n, masks)
    S = catalog_group(f"S{n}")
    assert symmetry_group_in(S, R).order() == symmetry_group_full(R).order()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["A6", "L3(2)@7", "L2(7)@8", "D6", "A5^(2)"]), st.data())
def test_setwise_stabilizer_matches_enumeration(key, data):
    G = catalog_group(key)
    els = oracles.elements(G.gen_arrays, G.degree)
    pts = data.draw(st.sets(st.integers(1, G.degree)))
    s = PointSet.of(pts, G.degree)
    H = setwise_stabilizer(G, s)
    size = oracles.stabilizer_size(els, frozenset(pts))
    assert H.order() == size
    # orbit-stabilizer identity
    assert len(oracles.orbit(els, frozenset(pts))) * size == G.order()


def test_family_stabilizer_respects_each_family():
    G = catalog_group("S6")
    a = [0b000011, 0b001100]
    b = [0b110000]
    H = family_stabilizer(G, [a, b])
    # preserve {{1,2},{3,4}} and {{5,6}}: (1,2),(3,4),(5,6),(1,3)(2,4)
    assert H.order() == 16


def test_refinement_respects_cells():
    gens, order = hypergraph_automorphisms(4, [], cells=[[0, 1], [2, 3]])
    assert order == 4


def test_absolute_engine_degree_cap():
    with pytest.raises(DegreeCapError):
        symmetry_group_full(UnorderedRelation(30, [1]), cap=24)


# ---------------------------------------------------------------- certification


def test_14T10_defining_relation():
    T = catalog_group("14T10")
    B = UnorderedRelation.from_sets([[i, i + 7] for i in range(1, 8)], 14)
    R = B | orbit_of_set(T, PointSet.of([1, 2, 3, 4], 14))
    rec = certify_defining(T, R)
    assert rec == {"defining": True, "method": "absolute", "order": 168, "note": ""}
    # dual route: relative search inside the block-preserving wreath product
    cert = block_partition_certificate(R)
    assert cert is not None and cert.overgroup.order() == 2 ** 7 * 5040
    rel = certify_defining(T, R, certificate=cert)
    assert rel["method"] == "relative" and rel["order"] == 168


def test_non_invariant_relation_rejected():
    with pytest.raises(NotInvariantError):
        certify_defining(catalog_group("A5"), UnorderedRelation.from_sets([[1, 2]], 5))


def test_empty_relation_gives_symmetric_group():
    assert symmetry_group_full(UnorderedRelation(6)).order() == 720


def test_split_certificate_bounds_the_group():
    # S3 on {1,2,3} beside S2 on {4,5}, split by the only 3-set; {1,2} cuts S3 down
    R = UnorderedRelation.from_sets([[1, 2, 3], [4], [5], [1, 2]], 5)
    cert = split_certificate(R, PointSet.of([1, 2, 3], 5))
    assert cert.overgroup.order() == 4
    G = PermGroup([from_cycles("(1,2)", 5), from_cycles("(4,5)", 5)], 5)
    assert is_defining_relation(G, R, certificate=cert)
    assert not is_defining_relation(PermGroup([from_cycles("(1,2)", 5)], 5), R, certificate=cert)


def test_certificate_must_use_whole_classes():
    G = catalog_group("A5")
    R = orbit_of_set(G, PointSet.of([1, 2], 5))
    part = UnorderedRelation.from_sets([[1, 2]], 5)
    with pytest.raises(ValueError):
        certify_defining(G, R, certificate=Certificate(catalog_group("S5"), part, "test"))


def test_homogeneity():
    P = catalog_group("PSL28@9")
    assert set_transitive(P)
    assert all(k_homogeneous(P, k) for k in range(10))
    assert not set_transitive(catalog_group("L3(2)@7"))
    assert k_homogeneous(catalog_group("L3(2)@7"), 2)
    assert not k_homogeneous(catalog_group("L3(2)@7"), 3)
