from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from permrel.catalog import catalog_group
from permrel.group import PermGroup
from permrel.perm import PointSet, image_mask
from permrel.regular import (
    BudgetExceededError,
    distinguishing_number,
    distinguishing_partition,
    full_census,
    is_regular_set,
    orbit_census,
    regular_set_sizes,
    sample_regular_set,
)

SMALL = ["A5", "C5", "D6", "K4", "L3(2)@7", "L2(5)@6", "A4", "C4+I2", "A5^(2)"]


@pytest.mark.parametrize("key", SMALL)
def test_regular_sizes_match_enumeration(key):
    G = catalog_group(key)
    els = oracles.elements(G.gen_arrays, G.degree)
    expected = oracles.regular_sizes(els, G.degree)
    assert regular_set_sizes(G) == expected
    assert regular_set_sizes(G, mirror=False) == expected


@pytest.mark.parametrize("key", ["A5", "C6", "L3(2)@7", "K4", "A4"])
def test_census_counts_match_enumeration(key):
    G = catalog_group(key)
    els = oracles.elements(G.gen_arrays, G.degree)
    for k in range(G.degree + 1):
        row = orbit_census(G, k, collect=True)
        orbits = {frozenset(map(frozenset, oracles.orbit(els, s)))
                  for s in oracles.all_subsets(G.degree) if len(s) == k}
        assert row.orbit_count == len(orbits)
        assert row.max_orbit_length == max(len(o) for o in orbits)
        assert sorted(row.lengths) == sorted(len(o) for o in orbits)
        if row.witness is not None:
            assert is_regular_set(G, row.witness)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.permutations(list(range(n))), max_size=3))))
def test_regular_sizes_complement_symmetric(case):
    n, gens = case
    G = PermGroup.from_arrays([tuple(g) for g in gens], n) if gens else PermGroup.trivial(n)
    sizes = regular_set_sizes(G, mirror=False)
    assert sizes == {n - k for k in sizes}


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["L3(2)@7", "A6", "D6", "15T5"]), st.data())
def test_regular_set_matches_stabilizer(key, data):
    G = catalog_group(key)
    pts = data.draw(st.sets(st.integers(1, G.degree)))
    s = PointSet.of(pts, G.degree)
    # regular iff the orbit has full length
    orb = {s.mask}
    queue = [s.mask]
    for x in queue:
        for g in G.gen_arrays:
            y = image_mask(g, x)
            if y not in orb:
                orb.add(y)
                queue.append(y)
    assert is_regular_set(G, s) == (len(orb) == G.order())
    assert is_regular_set(G, s) == is_regular_set(G, s.complement())


@pytest.mark.parametrize("key", ["A4", "K4", "C5", "D6", "L3(2)@7", "A5", "L2(5)@6", "S4"])
def test_distinguishing_number_matches_enumeration(key):
    G = catalog_group(key)
    els = oracles.elements(G.gen_arrays, G.degree)
    d = distinguishing_number(G)
    assert d == oracles.distinguishing_number(els, G.degree)
    parts = distinguishing_partition(G, d)
    assert len(parts) <= d
    colour = {p: i for i, part in enumerate(parts) for p in part.points()}
    fixers = [g for g in els if all(colour[g[p - 1] + 1] == colour[p] for p in colour)]
    assert fixers == [tuple(range(G.degree))]


def test_distinguishing_two_iff_regular_set():
    for key in ["A6", "C7", "L2(7)@8", "15T5"]:
        G = catalog_group(key)
        assert (distinguishing_number(G) == 2) == bool(regular_set_sizes(G))


def test_budget_enforced():
    with pytest.raises(BudgetExceededError):
        orbit_census(catalog_group("S30"), 15, budget=1000)


def test_full_census_json():
    c = full_census(catalog_group("A5"))
    d = c.to_json()
    assert d["order"] == 60 and len(d["rows"]) == 6
    assert c.regular_sizes() == set()


def test_sampling_finds_regular_sets():
    G = catalog_group("15T5")
    s = sample_regular_set(G)
    assert s is not None and is_regular_set(G, s)
    assert sample_regular_set(catalog_group("A5"), trials=50) is None
