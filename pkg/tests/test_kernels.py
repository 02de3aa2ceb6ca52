from __future__ import annotations

import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from permrel import _pykernels as py
from permrel import kernels
from permrel.catalog import catalog_group
from permrel.perm import image_mask

c = pytest.importorskip("permrel._ckernels", reason="compiled kernels not built")


groups = st.integers(2, 10).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.permutations(list(range(n))), min_size=1, max_size=3)))


@settings(max_examples=40, deadline=None)
@given(groups, st.lists(st.integers(0, 1023), min_size=1, max_size=30))
def test_mask_images_agree(case, masks):
    n, gens = case
    g = tuple(gens[0])
    arr = np.asarray([m & ((1 << n) - 1) for m in masks], dtype=np.uint64)
    a = py.mask_images(g, arr)
    b = c.mask_images(g, arr)
    assert np.array_equal(np.asarray(a), np.asarray(b))
    assert [int(x) for x in a] == [image_mask(g, int(m)) for m in arr]


@pytest.mark.parametrize("key", ["A6", "L3(2)@7", "15T5", "C7", "D6", "A5^(2)"])
def test_kset_orbits_agree(key):
    G = catalog_group(key)
    gens = [g for g in G.gen_arrays if any(i != x for i, x in enumerate(g))]
    for k in range(G.degree + 1):
        a = py.kset_orbits(gens, G.degree, k, G.order(), True)
        b = c.kset_orbits(gens, G.degree, k, G.order(), True)
        assert a[:2] == b[:2]
        # witnesses may differ, but both are regular or both absent
        assert (a[2] >= 0) == (b[2] >= 0)
        assert sorted(a[3]) == sorted(b[3])
        assert sorted(a[4]) == sorted(b[4])


@pytest.mark.parametrize("key", ["C5", "A5", "K4", "L3(2)@7"])
def test_powerset_orbit_ids_agree(key):
    G = catalog_group(key)
    a = np.asarray(py.powerset_orbit_ids(G.gen_arrays, G.degree))
    b = np.asarray(c.powerset_orbit_ids(G.gen_arrays, G.degree))
    assert np.array_equal(a, b)


def test_relation_preserved_agree():
    G = catalog_group("L3(2)@7")
    masks = np.sort(np.asarray([0b0001011, 0b0010110, 0b0101100], dtype=np.uint64))
    for g in G.gen_arrays + [tuple(range(7))]:
        assert py.relation_preserved(g, masks) == c.relation_preserved(g, masks)


def test_binomial():
    for n in range(0, 40):
        for k in range(0, n + 1):
            assert py.binomial(n, k) == c.binomial(n, k) == math.comb(n, k)


def test_pure_backend_selected_by_environment():
    code = "import permrel.kernels as k; print(k.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={"PERMREL_PURE": "1", "PATH": ""},
                         capture_output=True, text=True, check=True).stdout.strip()
    assert out == "python"
    assert kernels.BACKEND in ("compiled", "python")
