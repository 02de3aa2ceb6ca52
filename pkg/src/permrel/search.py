"""Backtrack search for subgroups of a permutation group.

The search walks the stabilizer chain of the ambient group ``G`` with base
``b_0..b_{k-1}``. An element is written ``h * q`` where the prefix ``q`` has
been chosen down to level ``j`` and ``h`` ranges over the stabilizer
``G^(j+1)`` of ``b_0..b_j``. Found elements are kept as generators of the
subgroup ``K`` built so far; a candidate image ``gamma`` of ``b_i`` is skipped
when it lies in the ``K^(i)``-orbit of ``b_i`` (already covered) or in the
orbit of a point whose coset held no solution.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .group import Chain, PermGroup, schreier_sims
from .perm import DegreeMismatchError, PointSet, _inv, _mul, image_mask

__all__ = [
    "subgroup_search",
    "setwise_stabilizer",
    "family_stabilizer",
    "has_nontrivial_setwise_stabilizer",
]

PRUNE, GO, ACCEPT = 0, 1, 2


class _Levels:
    """Per-level data of a chain: fixed points and nontrivial orbits of G^(j+1)."""

    def __init__(self, chain: Chain):
        n = chain.degree
        k = len(chain.base)
        full = (1 << n) - 1
        self.fixed = []
        self.orbits = []
        for j in range(k):
            gens = chain.level_generators(j + 1)
            if not gens:
                self.fixed.append(full)
                self.orbits.append([])
                continue
            parent = list(range(n))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for g in gens:
                for p in range(n):
                    a, b = find(p), find(g[p])
                    if a != b:
                        parent[b] = a
            cls: dict[int, int] = {}
            for p in range(n):
                r = find(p)
                cls[r] = cls.get(r, 0) | (1 << p)
            fixed = 0
            orbs = []
            for m in cls.values():
                if m & (m - 1):
                    orbs.append(m)
                else:
                    fixed |= m
            self.fixed.append(fixed)
            self.orbits.append(sorted(orbs))


def subgroup_search(
    G: PermGroup,
    prop: Callable[[tuple], bool],
    *,
    base: Sequence[int] = (),
    node_test: Callable[[int, tuple], int] | None = None,
    known: Iterable[tuple] = (),
    accept_depth: int | None = None,
    first_only: bool = False,
    chain: Chain | None = None,
) -> tuple[list[tuple], int, Chain]:
    """Generators and order of ``{g in G : prop(g)}``, which must be a subgroup.

    ``node_test(j, q)`` may return ``PRUNE`` (no completion ``h q`` with
    ``h`` in ``G^(j+1)`` satisfies ``prop``), ``GO``, or ``ACCEPT`` (every
    completion does). ``known`` are raw elements already known to satisfy
    ``prop``. ``accept_depth = L`` declares that ``G^(L)`` lies in the
    subgroup. With ``first_only`` the search stops at the first nontrivial
    element; the returned order is then meaningless.
    """
    n = G.degree
    if chain is None:
        chain = G.chain_with_base([b for b in base]) if base else G.chain
    bpts = chain.base
    k = len(bpts)
    trans = chain.transversals
    ident = tuple(range(n))

    found: list[tuple[tuple, int]] = []

    def level_of(g: tuple) -> int:
        lv = 0
        while lv < k and g[bpts[lv]] == bpts[lv]:
            lv += 1
        return lv

    seed = [g for g in known if g != ident]
    if accept_depth is not None and accept_depth < k:
        seed.extend(chain.level_generators(accept_depth))
    if seed:
        kch = schreier_sims(seed, n, bpts)
        for lv in range(len(kch.strong)):
            for g in kch.strong[lv]:
                if level_of(g) == lv:
                    found.append((g, lv))
    top = k if accept_depth is None else min(k, accept_depth)

    def dfs(j: int, q: tuple):
        if j == k - 1:
            return q if prop(q) else None
        nxt = j + 1
        b = bpts[nxt]
        cands = sorted(trans[nxt].values(), key=lambda t: q[t[0][b]])
        for u, _ in cands:
            q2 = _mul(u, q)
            if node_test is not None:
                t = node_test(nxt, q2)
                if t == PRUNE:
                    continue
                if t == ACCEPT:
                    return q2
            r = dfs(nxt, q2)
            if r is not None:
                return r
        return None

    order = 1
    for lv in range(k - 1, top - 1, -1):
        order *= len(trans[lv])
    for i in range(top - 1, -1, -1):
        parent = list(range(n))
        failed = [False] * n

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def absorb(g):
            for p in range(n):
                a, b = find(p), find(g[p])
                if a != b:
                    parent[b] = a
                    failed[a] = failed[a] or failed[b]

        for g, lv in found:
            if lv >= i:
                absorb(g)
        bi = bpts[i]
        for gamma in sorted(trans[i]):
            if gamma == bi:
                continue
            r = find(gamma)
            if r == find(bi) or failed[r]:
                continue
            u = trans[i][gamma][0]
            hit = None
            t = node_test(i, u) if node_test is not None else GO
            if t == ACCEPT:
                hit = u
            elif t == GO:
                hit = dfs(i, u)
            if hit is None:
                failed[find(gamma)] = True
                continue
            found.append((hit, i))
            if first_only:
                return [hit], 0, chain
            absorb(hit)
        root = find(bi)
        order *= sum(1 for p in trans[i] if find(p) == root)
    return [g for g, _ in found], order, chain


# ---------------------------------------------------------------- set stabilizers


def _setwise_parts(G: PermGroup, mask: int):
    n = G.degree
    full = (1 << n) - 1
    # search on the smaller of the set and its complement
    if (full ^ mask).bit_count() < mask.bit_count():
        mask = full ^ mask
    pts = [p for p in range(n) if mask >> p & 1]
    chain = G.chain_with_base(pts) if pts else G.chain
    levels = _Levels(chain)

    def node_test(j: int, q: tuple) -> int:
        # S h q = S  <=>  S h = S q^-1 with h in G^(j+1)
        pre = 0
        for p in range(n):
            if mask >> q[p] & 1:
                pre |= 1 << p
        fx = levels.fixed[j]
        if (pre ^ mask) & fx:
            return PRUNE
        for o in levels.orbits[j]:
            if (pre & o).bit_count() != (mask & o).bit_count():
                return PRUNE
        return ACCEPT if mask & ~fx == 0 else GO

    def prop(g: tuple) -> bool:
        return image_mask(g, mask) == mask

    return chain, node_test, prop


def setwise_stabilizer(G: PermGroup, s: PointSet) -> PermGroup:
    """``{g in G : s g = s}`` by backtrack with orbit-count pruning."""
    if s.degree != G.degree:
        raise DegreeMismatchError(f"degree {s.degree} vs group degree {G.degree}")
    if G.is_trivial():
        return PermGroup.trivial(G.degree)
    chain, node_test, prop = _setwise_parts(G, s.mask)
    gens, order, _ = subgroup_search(G, prop, node_test=node_test, chain=chain)
    return PermGroup.from_arrays(gens, G.degree, order=order)


def has_nontrivial_setwise_stabilizer(G: PermGroup, mask: int) -> bool:
    """Early-exit test used for regular sets."""
    if G.is_trivial():
        return False
    chain, node_test, prop = _setwise_parts(G, mask)
    gens, _, _ = subgroup_search(G, prop, node_test=node_test, chain=chain, first_only=True)
    return bool(gens)


# ---------------------------------------------------------------- family stabilizers


def _pack_counts(cols: list[np.ndarray]) -> list[np.ndarray]:
    # counts are at most 64, so nine 7-bit fields fit a word
    out = []
    for s in range(0, len(cols), 9):
        w = np.zeros(len(cols[0]), dtype=np.uint64)
        for t, c in enumerate(cols[s:s + 9]):
            w |= c.astype(np.uint64) << np.uint64(7 * t)
        out.append(w)
    return out


def _signature(masks: np.ndarray, fixed: int, orbits: Sequence[int]) -> np.ndarray:
    cols = [masks & np.uint64(fixed)]
    if orbits:
        cols.extend(_pack_counts([np.bitwise_count(masks & np.uint64(o)) for o in orbits]))
    if len(cols) == 1:
        return np.sort(cols[0])
    idx = np.lexsort(cols[::-1])
    return np.stack([c[idx] for c in cols])


def family_stabilizer(
    G: PermGroup,
    families: Sequence[Sequence[int]],
    *,
    base: Sequence[int] = (),
    known: Iterable[tuple] = (),
) -> PermGroup:
    """Elements of G mapping each family of bitmasks onto itself.

    Pruning compares, level by level, the multiset of invariants
    (trace on the points fixed by ``G^(j+1)``, intersection sizes with its
    orbits) of every family and of its preimage under the prefix.
    """
    n = G.degree
    if n > kernels.MAX_WORD_DEGREE:
        raise ValueError("family stabilizer supports degree up to 64")
    fams = []
    for f in families:
        arr = np.unique(np.asarray([int(m) for m in f], dtype=np.uint64))
        # families invariant under all of G impose nothing
        if all(kernels.relation_preserved(g, arr) for g in G.gen_arrays):
            continue
        fams.append(arr)
    if not fams:
        return G
    chain = G.chain_with_base(list(base)) if base else G.chain
    levels = _Levels(chain)
    k = len(chain.base)
    sigs = [[_signature(a, levels.fixed[j], levels.orbits[j]) for a in fams] for j in range(k)]

    def node_test(j: int, q: tuple) -> int:
        qi = _inv(q)
        fx, orbs = levels.fixed[j], levels.orbits[j]
        for a, ref in zip(fams, sigs[j]):
            pre = kernels.mask_images(qi, a)
            if not np.array_equal(_signature(pre, fx, orbs), ref):
                return PRUNE
        return GO

    def prop(g: tuple) -> bool:
        return all(kernels.relation_preserved(g, a) for a in fams)

    gens, order, _ = subgroup_search(G, prop, node_test=node_test, known=known, chain=chain)
    return PermGroup.from_arrays(gens, n, order=order)
