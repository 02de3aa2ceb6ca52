from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from permrel.catalog import catalog_group
from permrel.group import PermGroup, minimal_block_system, normal_closure, pointwise_stabilizer
from permrel.perm import (
    CycleParseError,
    DegreeMismatchError,
    Permutation,
    PointSet,
    act_set,
    from_cycles,
    image_mask,
    mask_points,
    points_mask,
)

perms = st.integers(1, 9).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


def _same_degree_pair():
    return st.integers(1, 9).flatmap(
        lambda n: st.tuples(st.permutations(list(range(1, n + 1))), st.permutations(list(range(1, n + 1)))))


# ---------------------------------------------------------------- permutations


def test_cycle_notation_round_trip():
    p = from_cycles("(1,3,2)(4,5)", 6)
    assert p.images == (3, 1, 2, 5, 4, 6)
    assert p.to_cycles() == "(1,3,2)(4,5)"
    assert p.order() == 6
    assert from_cycles("()", 4).is_identity()


def test_composition_is_left_to_right():
    a = from_cycles("(1,2)", 3)
    b = from_cycles("(2,3)", 3)
    # first a then b: 1 -> 2 -> 3
    assert (a * b)(1) == 3
    assert (b * a)(1) == 2


@pytest.mark.parametrize("text", ["(1,1)", "(1,2)(2,3)", "(0,1)", "(1,9)", "(1;2)", "1,2", "(1,2"])
def test_bad_cycles_rejected(text):
    with pytest.raises(CycleParseError):
        from_cycles(text, 4)


def test_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        from_cycles("(1,2)", 3) * from_cycles("(1,2)", 4)


@given(perms)
def test_cycles_parse_back(images):
    p = Permutation(images)
    assert from_cycles(p.to_cycles(), p.degree) == p


@given(_same_degree_pair())
def test_group_axioms(pair):
    a, b = Permutation(pair[0]), Permutation(pair[1])
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert (a * a.inverse()).is_identity()
    assert (a * b).array == oracles.mul(a.array, b.array)
    assert (a ** a.order()).is_identity()


@given(perms, st.data())
def test_set_action_matches_pointwise(images, data):
    p = Permutation(images)
    n = p.degree
    pts = data.draw(st.sets(st.integers(1, n)))
    s = PointSet.of(pts, n)
    assert act_set(p, s).points() == sorted(p(x) for x in pts)
    assert image_mask(p.array, s.mask) == act_set(p, s).mask


@given(st.sets(st.integers(1, 60)))
def test_mask_round_trip(pts):
    assert mask_points(points_mask(pts)) == sorted(pts)


def test_pointset_algebra():
    a = PointSet.of([1, 2, 3], 5)
    b = PointSet.of([3, 4], 5)
    assert (a | b).points() == [1, 2, 3, 4]
    assert (a & b).points() == [3]
    assert (a - b).points() == [1, 2]
    assert a.complement().points() == [4, 5]
    with pytest.raises(ValueError):
        PointSet.of([6], 5)


# ---------------------------------------------------------------- groups vs oracle


SMALL_KEYS = ["S5", "A6", "C7", "D6", "K4", "L3(2)@7", "L2(5)@6", "A5^(2)", "C5+I1", "L2(7)@8"]


@pytest.mark.parametrize("key", SMALL_KEYS)
def test_order_and_elements_match_enumeration(key):
    G = catalog_group(key)
    els = oracles.elements(G.gen_arrays, G.degree)
    assert G.order() == len(els)
    assert {g.array for g in G.elements()} == els


@pytest.mark.parametrize("key", ["A6", "L3(2)@7", "D6"])
def test_membership_matches_enumeration(key):
    G = catalog_group(key)
    els = oracles.elements(G.gen_arrays, G.degree)
    rng = random.Random(7)
    n = G.degree
    for _ in range(300):
        arr = list(range(n))
        rng.shuffle(arr)
        assert G.contains(Permutation.from_array(arr)) == (tuple(arr) in els)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.permutations(list(range(n))), min_size=1, max_size=3))))
def test_random_groups_order(case):
    n, gens = case
    gens = [tuple(g) for g in gens]
    G = PermGroup.from_arrays(gens, n)
    els = oracles.elements(gens, n)
    assert G.order() == len(els)
    # orbit-stabilizer for the point stabilizer of 1
    stab = pointwise_stabilizer(G, PointSet.of([1], n))
    assert stab.order() * len(G.orbit(1)) == G.order()


def test_orbits_and_restriction():
    G = catalog_group("A5^(2)")
    assert G.orbits() == [[1, 2, 3, 4, 5], [6, 7, 8, 9, 10]]
    assert G.restrict([6, 7, 8, 9, 10]).order() == 60
    with pytest.raises(ValueError):
        G.restrict([1, 6])


def test_block_systems():
    T = catalog_group("14T10")
    bs = minimal_block_system(T)
    assert [b.points() for b in bs] == [[i, i + 7] for i in range(1, 8)]
    assert minimal_block_system(catalog_group("L3(2)@7")) == "primitive"


def test_normal_closure():
    S5 = catalog_group("S5")
    assert normal_closure(S5, [from_cycles("(1,2,3)", 5)]).order() == 60
    assert normal_closure(S5, [from_cycles("(1,2)", 5)]).order() == 120
    K4 = normal_closure(catalog_group("S4"), [from_cycles("(1,2)(3,4)", 4)])
    assert K4.order() == 4


def test_relabel_conjugates():
    G = catalog_group("L3(2)@7")
    sigma = from_cycles("(1,5,2)(3,7)", 7)
    H = G.relabel(sigma)
    for g in G.generators:
        assert H.contains(sigma.inverse() * g * sigma)
    assert H.order() == G.order()
