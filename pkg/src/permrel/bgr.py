"""Orbit closures, BGR(k) tests and constructive defining relations.

A group is the symmetry group of a k-valued Boolean function exactly when it
equals its orbit closure: the group of all permutations mapping every orbit
of the group on the power set onto itself.
"""

from __future__ import annotations

import itertools
from math import factorial
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .builders import CosetActionSpec, IsoMap, parallel_multiple, parallel_sum, symmetric_group
from .group import PermGroup
from .perm import PointSet, image_mask, mask_points, points_mask
from .refine import DegreeCapError, hypergraph_automorphisms
from .regular import BudgetExceededError, is_regular_set
from .relations import (
    Certificate,
    UnorderedRelation,
    certify_defining,
    orbit_of_mask,
    symmetry_group_full,
)
from .search import GO, PRUNE, _Levels, subgroup_search, setwise_stabilizer

__all__ = [
    "DEFAULT_CLOSURE_CAP",
    "DistinguishingPartition",
    "HypothesisError",
    "binary_regular_set",
    "find_defining_relation",
    "in_bgr",
    "in_bgr_k_bruteforce",
    "kset_orbit_relations",
    "orbit_closure",
    "q_relation",
    "relation_group_exhaustive",
    "relation_coset_regular",
    "relation_distinguishing",
    "relation_injective_labelling",
    "relation_parallel_sum",
    "relation_sies",
]

DEFAULT_CLOSURE_CAP = 20


class HypothesisError(ValueError):
    """A hypothesis of a construction does not hold for the given input."""


# ---------------------------------------------------------------- orbit closure


def kset_orbit_relations(G: PermGroup, k: int) -> list[UnorderedRelation]:
    """The orbits of G on k-subsets, each as a relation, ordered by least member."""
    n = G.degree
    gens = G.gen_arrays
    _, _, _, reps, _ = kernels.kset_orbits(gens, n, k, G.order(), True)
    return [UnorderedRelation(n, orbit_of_mask(gens, int(r))) for r in sorted(reps)]


def orbit_closure(G: PermGroup, *, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """The largest group with the same orbits as G on all subsets.

    Every subset is labelled by its G-orbit. Permutations preserving the
    labels of 1- and 2-subsets form an overgroup computed by refinement;
    inside it a backtrack keeps the elements preserving every label, pruning
    with the subsets of points already fixed along the search.
    """
    n = G.degree
    if n > cap:
        raise DegreeCapError(f"degree {n} above the closure cap {cap}")
    gens = [g for g in G.gen_arrays if any(i != x for i, x in enumerate(g))]
    if not gens:
        # the trivial group: every subset is its own orbit
        return PermGroup.trivial(n)
    ids = kernels.powerset_orbit_ids(gens, n)
    families = []
    for k in (1, 2):
        families.extend(R.masks for R in kset_orbit_relations(G, k))
    ogens, oorder = hypergraph_automorphisms(n, families, cap=max(n, 1))
    if oorder == G.order():
        return G
    O = PermGroup.from_arrays(ogens, n, order=oorder)
    chain = O.chain
    levels = _Levels(chain)
    all_masks = np.arange(1 << n, dtype=np.uint64)
    subs_cache: dict[int, np.ndarray] = {}

    def subs(j: int) -> np.ndarray | None:
        fx = levels.fixed[j]
        if fx.bit_count() > 16:
            return None
        if j not in subs_cache:
            pts = mask_points(fx)
            vals = [0]
            for p in pts:
                vals += [v | (1 << (p - 1)) for v in vals]
            subs_cache[j] = np.asarray(vals, dtype=np.uint64)
        return subs_cache[j]

    def node_test(j: int, q: tuple) -> int:
        s = subs(j)
        if s is None:
            return GO
        img = kernels.mask_images(q, s)
        return GO if np.array_equal(ids[img.astype(np.int64)], ids[s.astype(np.int64)]) else PRUNE

    def prop(g: tuple) -> bool:
        img = kernels.mask_images(g, all_masks)
        return bool(np.array_equal(ids[img.astype(np.int64)], ids))

    cgens, order, _ = subgroup_search(O, prop, node_test=node_test, known=gens, chain=chain)
    return PermGroup.from_arrays(cgens, n, order=order)


def in_bgr(G: PermGroup, *, cap: int = DEFAULT_CLOSURE_CAP) -> bool:
    """True iff G is the symmetry group of some k-valued Boolean function."""
    return orbit_closure(G, cap=cap).order() == G.order()


def _restricted_growth(m: int, k: int):
    # value strings up to renaming of values: each value first used in order
    a = [0] * m

    def rec(i: int, used: int):
        if i == m:
            yield tuple(a)
            return
        for v in range(min(used + 1, k)):
            a[i] = v
            yield from rec(i + 1, max(used, v + 1))

    yield from rec(0, 0)


def in_bgr_k_bruteforce(G: PermGroup, k: int, *, cap: int = 8, limit: int = 200_000):
    """A k-valued function with symmetry group G, or None.

    The function is returned as its level relations ``[R_0, ..., R_{k-1}]``
    (the subsets taking value v form ``R_v``). Functions are constant on
    G-orbits, so the search runs over assignments of values to orbits.
    """
    n = G.degree
    if n > cap:
        raise DegreeCapError(f"degree {n} above the brute-force cap {cap}")
    if k < 1:
        raise ValueError("k must be positive")
    if orbit_closure(G, cap=max(cap, n)).order() != G.order():
        return None
    gens = G.gen_arrays
    ids = kernels.powerset_orbit_ids(gens, n) if gens else np.arange(1 << n, dtype=np.int32)
    orbits: dict[int, list[int]] = {}
    for m, i in enumerate(ids.tolist()):
        orbits.setdefault(i, []).append(m)
    orb_list = [orbits[i] for i in sorted(orbits)]
    target = G.order()
    for count, values in enumerate(_restricted_growth(len(orb_list), k)):
        if count >= limit:
            raise BudgetExceededError(f"more than {limit} value assignments")
        levels = [[] for _ in range(k)]
        for orb, v in zip(orb_list, values):
            levels[v].extend(orb)
        _, order = hypergraph_automorphisms(n, levels[:-1] if k > 1 else [], cap=max(cap, n))
        if order == target:
            return [UnorderedRelation(n, lv) for lv in levels]
    return None


# ---------------------------------------------------------------- relation search


def _partial_orbits(G: PermGroup) -> list[list[int]]:
    """Orbits on subsets that are not whole cardinality classes."""
    n = G.degree
    gens = [g for g in G.gen_arrays if any(i != x for i, x in enumerate(g))]
    out = []
    for k in range(n + 1):
        if kernels.binomial(n, k) > 1 << 22:
            raise BudgetExceededError(f"C({n},{k}) subsets exceed the sweep budget")
        for R in kset_orbit_relations(G, k):
            if len(R) != kernels.binomial(n, k):
                out.append(list(R.masks))
    return out


def relation_group_exhaustive(G: PermGroup, *, max_free: int = 16,
                              cap: int = 24) -> UnorderedRelation | None:
    """Decide G in BGR(2) by trying every union of orbits on subsets.

    Whole cardinality classes are preserved by every permutation and a
    union and its complement in the power set have the same symmetry group,
    so ``2^(m-1)`` unions of the m remaining orbits settle the question.
    Returns a defining relation, or None when there is none.
    """
    orbs = _partial_orbits(G)
    m = len(orbs)
    if m > max_free:
        raise BudgetExceededError(f"{m} orbits on subsets, more than {max_free}")
    target = G.order()
    if m == 0:
        return UnorderedRelation(G.degree) if target == factorial(G.degree) else None
    for bits in range(1 << (m - 1)):
        chosen = [orbs[-1]] + [o for i, o in enumerate(orbs[:-1]) if bits >> i & 1]
        R = UnorderedRelation(G.degree, [x for o in chosen for x in o])
        if symmetry_group_full(R, cap=cap).order() == target:
            return R
    return None


def find_defining_relation(G: PermGroup, *, max_orbits: int = 2, extra: UnorderedRelation | None = None,
                           cap: int = 24, max_candidates: int = 2000) -> UnorderedRelation | None:
    """A union of at most ``max_orbits`` orbits on k-subsets defining G.

    Orbits with ``1 <= k <= n/2`` are tried by increasing k and least member;
    ``extra`` (for instance a block system) is always included. Every
    candidate is checked by the absolute engine.
    """
    n = G.degree
    if n > cap:
        raise DegreeCapError(f"degree {n} above the cap {cap}")
    base = extra if extra is not None else UnorderedRelation(n)
    target = G.order()
    if base.masks and symmetry_group_full(base, cap=cap).order() == target:
        return base
    orbs: list[UnorderedRelation] = []
    for k in range(1, n // 2 + 1):
        orbs.extend(R for R in kset_orbit_relations(G, k) if len(R) < 2000)
    tried = 0
    for size in range(1, max_orbits + 1):
        for combo in itertools.combinations(orbs, size):
            tried += 1
            if tried > max_candidates:
                return None
            R = base
            for c in combo:
                R = R | c
            if symmetry_group_full(R, cap=cap).order() == target:
                return R
    return None


# ---------------------------------------------------------------- subgroup transfer


def relation_sies(H: PermGroup, R: UnorderedRelation, y: PointSet, K: PermGroup, *,
                  assume_defining: bool = False, cap: int = 24) -> UnorderedRelation:
    """``R | y^K``, a defining relation of the subgroup K of ``H = G(R)``.

    Hypotheses: y is regular in H and the orbit of y under the symmetry
    group of R without its ``|y|``-sets meets R nowhere. When ``|y|`` is
    not an arity of R this holds automatically; otherwise it is checked with
    the absolute engine (degree at most ``cap``).
    """
    n = H.degree
    if not K.is_subgroup_of(H):
        raise HypothesisError("K is not a subgroup of H")
    if not is_regular_set(H, y):
        raise HypothesisError("y is not a regular set of H")
    if not assume_defining and n <= cap:
        if symmetry_group_full(R, cap=cap).order() != H.order() or not R.is_invariant(H):
            raise HypothesisError("R does not define H")
    k = len(y)
    if k in R.arity():
        if n > cap:
            raise HypothesisError(f"|y| = {k} is an arity of R and degree {n} is above the cap")
        Rp = R.without_cardinality(k)
        Gp = symmetry_group_full(Rp, cap=cap)
        orbit = set(orbit_of_mask(Gp.gen_arrays, y.mask))
        if orbit & set(R.masks):
            raise HypothesisError("the orbit of y under G(R without |y|-sets) meets R")
    return R | UnorderedRelation(n, orbit_of_mask(K.gen_arrays, y.mask))


def q_relation(n: int, r: int) -> UnorderedRelation:
    """Singletons of the first copy plus pairs joining equal points of neighbouring copies.

    Copy i (from 1) occupies points ``(i-1) n + 1 .. i n``.
    """
    if n < 2 or r < 1:
        raise ValueError("need n >= 2 and r >= 1")
    sets = [[j] for j in range(1, n + 1)]
    for i in range(1, r):
        for j in range(1, n + 1):
            sets.append([(i - 1) * n + j, i * n + j])
    return UnorderedRelation.from_sets(sets, n * r)


def binary_regular_set(n: int, r: int) -> PointSet:
    """Point j of copy i is taken iff bit i-1 of j-1 is set.

    The r copies of a point spell distinct numbers, so no nontrivial
    parallel permutation fixes the set. Sets of size at most 2 are replaced
    by their complement to avoid the arities of the pair relation.
    """
    if 2 ** r < n:
        raise ValueError(f"2^{r} < {n}: columns cannot be distinct")
    pts = [(i - 1) * n + j for i in range(1, r + 1) for j in range(1, n + 1) if (j - 1) >> (i - 1) & 1]
    y = PointSet.of(pts, n * r)
    if len(y) <= 2:
        y = y.complement()
    return y


# ---------------------------------------------------------------- coset constructions


@dataclass
class DistinguishingPartition:
    parts: list[PointSet]

    @property
    def part_count(self) -> int:
        return len(self.parts)

    def is_distinguishing(self, G: PermGroup) -> bool:
        K = G
        for p in self.parts:
            K = setwise_stabilizer(K, p)
            if K.order() == 1:
                return True
        return K.order() == 1


def _coset_layout(spec_H: CosetActionSpec, spec_N: CosetActionSpec):
    """For every N-coset (0-based) the index (0-based) of the H-coset containing it."""
    if spec_H.G is not spec_N.G and spec_H.G != spec_N.G:
        raise HypothesisError("the two coset actions are of different groups")
    if not spec_N.H.is_subgroup_of(spec_H.H):
        raise HypothesisError("N is not a subgroup of H")
    if spec_N.H.order() == spec_H.H.order():
        raise HypothesisError("N must be a proper subgroup of H")
    if spec_H.H.order() == spec_H.G.order():
        raise HypothesisError("H must be a proper subgroup of G")
    up = [spec_H.coset_of(r) - 1 for r in spec_N.coset_reps]
    blocks = [0] * spec_H.degree
    for i, h in enumerate(up):
        blocks[h] |= 1 << i
    return up, blocks


def _lift(R: UnorderedRelation, blocks: list[int]) -> list[int]:
    out = []
    for m in R.masks:
        x = 0
        for p in mask_points(m):
            x |= blocks[p - 1]
        out.append(x)
    return out


def relation_coset_regular(spec_H: CosetActionSpec, spec_N: CosetActionSpec, Rprime: UnorderedRelation,
                           ybar: PointSet) -> UnorderedRelation:
    """A defining relation of the action on N-cosets from one on H-cosets plus a regular set.

    ``R0`` blows every H-coset of ``Rprime`` (singletons added) up to its
    N-cosets; ``R1`` is the orbit of the lift of ``ybar`` together with the
    coset N itself.
    """
    up, blocks = _coset_layout(spec_H, spec_N)
    GH = spec_H.action()
    if not is_regular_set(GH, ybar):
        raise HypothesisError("ybar is not a regular set of the action on H-cosets")
    if 1 in ybar:
        raise HypothesisError("ybar must not contain the coset H")
    m = spec_N.degree
    singles = UnorderedRelation(spec_H.degree, [1 << i for i in range(spec_H.degree)])
    R0 = _lift(Rprime | singles, blocks)
    y = 1  # the coset N is point 1
    for p in ybar.points():
        y |= blocks[p - 1]
    GN = spec_N.action()
    R1 = orbit_of_mask(GN.gen_arrays, y)
    return UnorderedRelation(m, R0 + R1)


def relation_injective_labelling(spec_H: CosetActionSpec, spec_N: CosetActionSpec):
    """Blocks of N-cosets plus the orbit of a set meeting them in distinct numbers.

    Needs ``[H:N] >= [G:H] - 1``. Returns ``(R, y)``.
    """
    up, blocks = _coset_layout(spec_H, spec_N)
    n = spec_H.degree
    c = spec_N.degree // n
    if c < n - 1:
        raise HypothesisError(f"[H:N] = {c} is smaller than [G:H] - 1 = {n - 1}")
    counts = ([1, c] + [0] + list(range(2, c)))[:n]
    y = 0
    for i, cnt in enumerate(counts):
        pts = mask_points(blocks[i])[:cnt]
        y |= points_mask(pts)
    GN = spec_N.action()
    R = UnorderedRelation(spec_N.degree, blocks + orbit_of_mask(GN.gen_arrays, y))
    return R, PointSet(spec_N.degree, y)


def relation_distinguishing(spec_H: CosetActionSpec, spec_N: CosetActionSpec, Rprime: UnorderedRelation,
                            partition: DistinguishingPartition):
    """Lift of ``Rprime`` plus the orbit of a set with fill count ``c_j`` on the blocks of part j.

    Counts are ``c_1 = 1``, ``c_d = [H:N]`` and the least unused values in
    between. Needs ``[H:N] >= d - 1``. Returns ``(R, y)``.
    """
    up, blocks = _coset_layout(spec_H, spec_N)
    n = spec_H.degree
    c = spec_N.degree // n
    parts = sorted(partition.parts, key=lambda p: p.mask & -p.mask)
    d = len(parts)
    if c < d - 1:
        raise HypothesisError(f"[H:N] = {c} is smaller than d - 1 = {d - 1}")
    GH = spec_H.action()
    if not DistinguishingPartition(parts).is_distinguishing(GH):
        raise HypothesisError("partition is not distinguishing for the action on H-cosets")
    if d == 1:
        counts = [1]
    else:
        middle = [v for v in range(c + 1) if v not in (1, c)][: d - 2]
        counts = [1] + middle + [c]
    y = 0
    for part, cnt in zip(parts, counts):
        for p in part.points():
            y |= points_mask(mask_points(blocks[p - 1])[:cnt])
    singles = UnorderedRelation(n, [1 << i for i in range(n)])
    R0 = _lift(Rprime | singles, blocks)
    GN = spec_N.action()
    R = UnorderedRelation(spec_N.degree, R0 + orbit_of_mask(GN.gen_arrays, y))
    return R, PointSet(spec_N.degree, y)


# ---------------------------------------------------------------- parallel sums


def relation_parallel_sum(H: PermGroup, K: PermGroup, phi: IsoMap, R0: UnorderedRelation,
                          y: PointSet) -> tuple[UnorderedRelation, PermGroup]:
    """A defining relation of ``H ||_phi K`` from one of H and a regular set of H.

    H acts on ``1..n``, K on ``n+1..n+m``. ``R1`` holds every
    ``(Omega minus a point) | Delta`` and ``R2`` the orbits of
    ``y | Delta_i`` for ``0 < i < m`` with ``Delta_i`` the first i points of
    Delta. Returns the relation and the group.
    """
    if phi.source is not H and phi.source != H:
        raise HypothesisError("phi must start at H")
    if phi.target is not K and phi.target != K:
        raise HypothesisError("phi must end at K")
    n, m = H.degree, K.degree
    if not is_regular_set(H, y):
        raise HypothesisError("y is not a regular set of H")
    if len(y) == n - 1:
        y = y.complement()
    G = parallel_sum(phi)
    N = n + m
    omega = (1 << n) - 1
    delta = ((1 << N) - 1) ^ omega
    R1 = [(omega ^ (1 << p)) | delta for p in range(n)]
    R2: list[int] = []
    for i in range(1, m):
        di = points_mask(range(n + 1, n + i + 1))
        R2.extend(orbit_of_mask(G.gen_arrays, y.mask | di))
    R = UnorderedRelation(N, list(R0.masks) + R1 + R2)
    return R, G
