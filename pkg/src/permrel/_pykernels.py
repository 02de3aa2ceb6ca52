"""Reference implementations of the hot kernels (numpy/scipy, no compiled code of ours).

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same results.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

MAX_WORD_DEGREE = 64


def _byte_tables(perm: Sequence[int], n: int) -> list[np.ndarray]:
    tables = []
    for base in range(0, n, 8):
        t = np.zeros(256, dtype=np.uint64)
        for byte in range(256):
            m = 0
            for bit in range(8):
                if byte >> bit & 1 and base + bit < n:
                    m |= 1 << perm[base + bit]
            t[byte] = m
        tables.append(t)
    return tables


def mask_images(perm: Sequence[int], masks: np.ndarray) -> np.ndarray:
    """Images of an array of uint64 bitmasks under a 0-based permutation."""
    n = len(perm)
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.zeros_like(masks)
    for i, t in enumerate(_byte_tables(perm, n)):
        out |= t[(masks >> np.uint64(8 * i)) & np.uint64(255)]
    return out


def _ksubsets(n: int, k: int) -> np.ndarray:
    """All k-subsets of n points as sorted uint64 masks."""
    if k == 0:
        return np.zeros(1, dtype=np.uint64)
    if n <= 26:
        allm = np.arange(1 << n, dtype=np.uint64)
        pc = np.zeros(allm.shape, dtype=np.uint8)
        x = allm.copy()
        while x.any():
            pc += (x & np.uint64(1)).astype(np.uint8)
            x >>= np.uint64(1)
        return allm[pc == k]
    from itertools import combinations

    vals = sorted(sum(1 << i for i in c) for c in combinations(range(n), k))
    return np.array(vals, dtype=np.uint64)


def _components(masks: np.ndarray, gens: Sequence[Sequence[int]], n: int):
    """Orbit labels for a sorted, group-invariant array of masks."""
    size = len(masks)
    rows = []
    cols = []
    idx = np.arange(size)
    for g in gens:
        img = mask_images(g, masks)
        rows.append(idx)
        cols.append(np.searchsorted(masks, img))
    if not rows:
        return size, idx
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(size, size)).tocsr()
    return connected_components(graph, directed=True, connection="weak")


def _canonical_labels(labels: np.ndarray):
    """Relabel components in order of their smallest member index."""
    uniq, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty(len(uniq), dtype=np.int64)
    remap[uniq[order]] = np.arange(len(uniq))
    return remap[labels], first[order]


def kset_orbits(gens: Sequence[Sequence[int]], n: int, k: int, group_order: int, collect: bool = False):
    """Orbits of a group on k-subsets.

    Returns ``(orbit_count, max_length, witness, reps, lengths)`` where
    ``witness`` is the smallest mask of an orbit of length ``group_order``
    (or -1) and ``reps``/``lengths`` list every orbit (by minimal mask) when
    ``collect`` is true, else are empty.
    """
    if n > MAX_WORD_DEGREE:
        raise ValueError("degree above one machine word")
    masks = _ksubsets(n, k)
    _, labels = _components(masks, gens, n)
    canon, first = _canonical_labels(labels)
    lengths = np.bincount(canon)
    count = len(lengths)
    max_len = int(lengths.max())
    witness = -1
    regular = np.nonzero(lengths == group_order)[0]
    if len(regular):
        witness = int(masks[first[regular[0]]])
    if collect:
        return count, max_len, witness, [int(m) for m in masks[first]], [int(x) for x in lengths]
    return count, max_len, witness, [], []


def powerset_orbit_ids(gens: Sequence[Sequence[int]], n: int) -> np.ndarray:
    """Orbit identifier of every subset (indexed by mask), ids by minimal mask."""
    if n > 26:
        raise ValueError("power set too large")
    masks = np.arange(1 << n, dtype=np.uint64)
    _, labels = _components(masks, gens, n)
    canon, _ = _canonical_labels(labels)
    return canon.astype(np.int32)


def relation_preserved(perm: Sequence[int], sorted_masks: np.ndarray) -> bool:
    """Whether the permutation maps the family of masks onto itself."""
    if len(sorted_masks) == 0:
        return True
    img = np.sort(mask_images(perm, sorted_masks))
    return bool(np.array_equal(img, sorted_masks))


def binomial(n: int, k: int) -> int:
    return comb(n, k)
