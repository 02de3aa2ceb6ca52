"""Composite groups: direct, subdirect and parallel sums, coset actions.

Composite domains are laid out left to right: the first summand occupies
points ``1..n1``, the second ``n1+1..n1+n2`` and so on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .group import Chain, PermGroup, pointwise_stabilizer, schreier_sims
from .perm import DegreeMismatchError, Permutation, PointSet, _inv, _mul

__all__ = [
    "CosetActionSpec",
    "IsoMap",
    "SubdirectSumSpec",
    "add_fixed_points",
    "alternating_group",
    "coset_action",
    "cyclic_group",
    "decompose_intransitive",
    "dihedral_group",
    "direct_sum",
    "inducing_permutation",
    "is_normal",
    "klein_four",
    "on_k_subsets",
    "parallel_multiple",
    "parallel_sum",
    "permutation_isomorphism",
    "subdirect_sum",
    "symmetric_group",
]


# ---------------------------------------------------------------- standard groups


def symmetric_group(n: int) -> PermGroup:
    from math import factorial

    if n < 2:
        return PermGroup.trivial(max(n, 1))
    gens = [Permutation.from_array([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(Permutation.from_array(list(range(1, n)) + [0]))
    return PermGroup(gens, n, name=f"S{n}", order=factorial(n))


def alternating_group(n: int) -> PermGroup:
    from math import factorial

    if n < 3:
        return PermGroup.trivial(max(n, 1))
    gens = [Permutation.from_array(list(range(i)) + [i + 1, i + 2, i] + list(range(i + 3, n)))
            for i in range(n - 2)]
    return PermGroup(gens, n, name=f"A{n}", order=factorial(n) // 2)


def cyclic_group(n: int) -> PermGroup:
    if n < 2:
        return PermGroup.trivial(max(n, 1))
    return PermGroup([Permutation.from_array(list(range(1, n)) + [0])], n, name=f"C{n}", order=n)


def dihedral_group(n: int) -> PermGroup:
    """Symmetries of the n-gon on its vertices (order 2n)."""
    if n < 3:
        return symmetric_group(n)
    rot = Permutation.from_array(list(range(1, n)) + [0])
    ref = Permutation.from_array([(-i) % n for i in range(n)])
    return PermGroup([rot, ref], n, name=f"D{n}", order=2 * n)


def klein_four() -> PermGroup:
    return PermGroup([Permutation([2, 1, 4, 3]), Permutation([3, 4, 1, 2])], 4, name="K4", order=4)


# ---------------------------------------------------------------- sums


def _place(arr: Sequence[int], degree: int, offset: int) -> list[int]:
    out = list(range(degree))
    for i, x in enumerate(arr):
        out[offset + i] = offset + x
    return out


def direct_sum(G: PermGroup, H: PermGroup) -> PermGroup:
    """Independent action on the disjoint union (G first)."""
    n = G.degree + H.degree
    gens = [tuple(_place(g, n, 0)) for g in G.gen_arrays]
    gens += [tuple(_place(h, n, G.degree)) for h in H.gen_arrays]
    return PermGroup.from_arrays(gens, n, order=G.order() * H.order())


def parallel_multiple(G: PermGroup, r: int) -> PermGroup:
    """G acting identically on r consecutive copies of its domain."""
    if r < 1:
        raise ValueError("r must be at least 1")
    if r == 1:
        return G
    d = G.degree
    gens = [tuple(c * d + x for c in range(r) for x in g) for g in G.gen_arrays]
    name = f"{G.name}^({r})" if G.name else None
    return PermGroup.from_arrays(gens, d * r, name=name, order=G.order())


def add_fixed_points(G: PermGroup, m: int) -> PermGroup:
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return G
    n = G.degree + m
    gens = [tuple(g) + tuple(range(G.degree, n)) for g in G.gen_arrays]
    return PermGroup.from_arrays(gens, n, order=G.order())


def is_normal(N: PermGroup, G: PermGroup) -> bool:
    """N normal in G (N must be a subgroup; checked too)."""
    if not N.is_subgroup_of(G):
        return False
    for g in G.generators:
        gi = g.inverse()
        for x in N.generators:
            if not N.contains(gi * x * g):
                return False
    return True


# ---------------------------------------------------------------- isomorphisms


def _element_from_restriction(chain: Chain, part: Sequence[int], domain: Sequence[int]) -> tuple | None:
    """The element of the group whose action on ``domain`` agrees with ``part``.

    ``part[i]`` is the image of ``domain[i]``; the chain's base must lie in
    ``domain`` and the group must act faithfully there.
    """
    cur = dict(zip(domain, part))
    prod = tuple(range(chain.degree))
    factors = []
    for lvl, b in enumerate(chain.base):
        t = chain.transversals[lvl].get(cur[b])
        if t is None:
            return None
        u, ui = t
        factors.append(u)
        cur = {p: ui[v] for p, v in cur.items()}
    if any(p != v for p, v in cur.items()):
        return None
    for u in reversed(factors):
        prod = _mul(prod, u)
    return prod


@dataclass
class IsoMap:
    """An isomorphism given by images of the source generators.

    Validation builds the graph group ``<(s_i, t_i)>`` on the disjoint union;
    the map extends to an isomorphism exactly when that group has the order
    of the source, which equals the order of the target generated by the
    images.
    """

    source: PermGroup
    target: PermGroup
    generator_images: list[Permutation]
    _graph: PermGroup | None = field(default=None, repr=False, compare=False)
    _chain: Chain | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.generator_images) != len(self.source.generators):
            raise ValueError("one image per source generator is required")
        for t in self.generator_images:
            if t.degree != self.target.degree:
                raise DegreeMismatchError("image degree differs from target degree")

    def graph(self) -> PermGroup:
        if self._graph is None:
            n1 = self.source.degree
            n = n1 + self.target.degree
            gens = [tuple(_place(s, n, 0)[:n1]) + tuple(n1 + x for x in t.array)
                    for s, t in zip(self.source.gen_arrays, self.generator_images)]
            self._graph = PermGroup.from_arrays(gens, n)
        return self._graph

    def is_valid(self) -> bool:
        if self.source.order() != self.target.order():
            return False
        img = PermGroup(self.generator_images, self.target.degree)
        if img.order() != self.target.order() or not img.is_subgroup_of(self.target):
            return False
        return self.graph().order() == self.source.order()

    def validate(self) -> "IsoMap":
        if not self.is_valid():
            raise ValueError("generator images do not extend to an isomorphism")
        return self

    def __call__(self, p: Permutation) -> Permutation:
        n1 = self.source.degree
        if self._chain is None:
            D = self.graph()
            self._chain = schreier_sims(D.gen_arrays, D.degree, list(range(n1)), D.order())
        d = _element_from_restriction(self._chain, p.array, list(range(n1)))
        if d is None:
            raise ValueError(f"{p} is not in the source group")
        return Permutation.from_array(tuple(x - n1 for x in d[n1:]))


@dataclass
class SubdirectSumSpec:
    """Data of ``G1[H1] (+)_phi G2[H2]``.

    ``pairs`` lists ``(g1, g2)`` with ``phi(H1 g1) = H2 g2``; the ``g1``
    together with ``H1`` must generate ``G1``. ``domain1``/``domain2`` give
    the (1-based) positions of the two constituents in the sum; by default
    the first constituent comes first.
    """

    G1: PermGroup
    H1: PermGroup
    G2: PermGroup
    H2: PermGroup
    pairs: list[tuple[Permutation, Permutation]]
    domain1: list[int] | None = None
    domain2: list[int] | None = None

    @classmethod
    def parallel(cls, iso: IsoMap) -> "SubdirectSumSpec":
        return cls(iso.source, PermGroup.trivial(iso.source.degree), iso.target,
                   PermGroup.trivial(iso.target.degree),
                   list(zip(iso.source.generators, iso.generator_images)))

    @property
    def degree(self) -> int:
        return self.G1.degree + self.G2.degree

    def check(self) -> None:
        if not is_normal(self.H1, self.G1):
            raise ValueError("H1 is not a normal subgroup of G1")
        if not is_normal(self.H2, self.G2):
            raise ValueError("H2 is not a normal subgroup of G2")
        if self.G1.order() * self.H2.order() != self.G2.order() * self.H1.order():
            raise ValueError("factor groups have different orders")
        for g1, g2 in self.pairs:
            if not self.G1.contains(g1) or not self.G2.contains(g2):
                raise ValueError("pair element outside its constituent")


def subdirect_sum(spec: SubdirectSumSpec) -> PermGroup:
    """Pairs ``(g, h)`` with ``phi(H1 g) = H2 h``; order ``|G1| |H2|``."""
    spec.check()
    n1, n2 = spec.G1.degree, spec.G2.degree
    n = n1 + n2
    d1 = [p - 1 for p in spec.domain1] if spec.domain1 else list(range(n1))
    d2 = [p - 1 for p in spec.domain2] if spec.domain2 else list(range(n1, n))
    if sorted(d1 + d2) != list(range(n)):
        raise ValueError("domains must partition the points")

    def embed(a: Sequence[int] | None, b: Sequence[int] | None) -> tuple:
        out = list(range(n))
        if a is not None:
            for i, x in enumerate(a):
                out[d1[i]] = d1[x]
        if b is not None:
            for i, x in enumerate(b):
                out[d2[i]] = d2[x]
        return tuple(out)

    gens = [embed(g1.array, g2.array) for g1, g2 in spec.pairs]
    gens += [embed(h, None) for h in spec.H1.gen_arrays]
    gens += [embed(None, h) for h in spec.H2.gen_arrays]
    expected = spec.G1.order() * spec.H2.order()
    G = PermGroup.from_arrays(gens, n)
    if G.order() != expected:
        raise ValueError(f"pairs do not define an isomorphism of factor groups "
                         f"(order {G.order()} instead of {expected})")
    proj = PermGroup.from_arrays([tuple(d1.index(g[p]) for p in d1) for g in gens], n1)
    if proj.order() != spec.G1.order():
        raise ValueError("pairs together with H1 do not generate G1")
    return G


def parallel_sum(iso: IsoMap) -> PermGroup:
    """``H ||_phi K``: elements ``(g, phi(g))``."""
    n1 = iso.source.degree
    n = n1 + iso.target.degree
    gens = [tuple(s) + tuple(n1 + x for x in t.array)
            for s, t in zip(iso.source.gen_arrays, iso.generator_images)]
    G = PermGroup.from_arrays(gens, n)
    if G.order() != iso.source.order():
        raise ValueError("generator images do not extend to an isomorphism")
    return G


def decompose_intransitive(G: PermGroup, block: PointSet) -> SubdirectSumSpec:
    """Constituents, kernels and factor isomorphism of G on block / complement."""
    if block.degree != G.degree:
        raise DegreeMismatchError("block degree differs from group degree")
    n = G.degree
    inside = block.points()
    outside = block.complement().points()
    if not inside or not outside:
        raise ValueError("block must be neither empty nor the whole domain")
    for g in G.gen_arrays:
        for p in inside:
            if not block.mask >> g[p - 1] & 1:
                raise ValueError("block is not a union of orbits")
    G1 = G.restrict(inside)
    G2 = G.restrict(outside)
    K1 = pointwise_stabilizer(G, block.complement())
    K2 = pointwise_stabilizer(G, block)
    H1 = PermGroup(K1.restrict(inside).generators, len(inside), order=K1.order())
    H2 = PermGroup(K2.restrict(outside).generators, len(outside), order=K2.order())
    pairs = [(a, b) for a, b in zip(G1.generators, G2.generators)]
    return SubdirectSumSpec(G1, H1, G2, H2, pairs, domain1=inside, domain2=outside)


# ---------------------------------------------------------------- coset actions


@dataclass
class CosetActionSpec:
    """Right cosets ``H r_i``; point ``i+1`` of the action is ``H r_i``."""

    G: PermGroup
    H: PermGroup
    coset_reps: list[Permutation]
    _hchain: Chain | None = field(default=None, repr=False, compare=False)
    _index: dict | None = field(default=None, repr=False, compare=False)

    @property
    def degree(self) -> int:
        return len(self.coset_reps)

    def _canon(self, g: tuple) -> tuple:
        # the element of H g with lexicographically least images of H's base
        ch = self._hchain
        for lvl, b in enumerate(ch.base):
            best = None
            for u, _ in ch.transversals[lvl].values():
                cand = _mul(u, g)
                key = cand[b]
                if best is None or key < best[0]:
                    best = (key, cand)
            g = best[1]
        # H acts regularly on the base images, so g is unique in H g
        return g

    def _prepare(self):
        if self._hchain is None:
            self._hchain = self.H.chain
            self._index = {self._canon(r.array): i for i, r in enumerate(self.coset_reps)}

    def coset_of(self, g: Permutation) -> int:
        """1-based index of the coset ``H g``."""
        self._prepare()
        return self._index[self._canon(g.array)] + 1

    def action(self) -> PermGroup:
        """The permutation group induced by G on the cosets."""
        self._prepare()
        gens = []
        for s in self.G.gen_arrays:
            gens.append(tuple(self._index[self._canon(_mul(r.array, s))] for r in self.coset_reps))
        return PermGroup.from_arrays(gens, self.degree)


def coset_action(G: PermGroup, H: PermGroup) -> tuple[PermGroup, CosetActionSpec]:
    """The action of G on right cosets of H, cosets numbered breadth first."""
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    spec = CosetActionSpec(G, H, [])
    spec._hchain = H.chain
    ident = tuple(range(G.degree))
    reps = [ident]
    index = {spec._canon(ident): 0}
    for r in reps:
        for s in G.gen_arrays:
            c = _mul(r, s)
            key = spec._canon(c)
            if key not in index:
                index[key] = len(reps)
                reps.append(c)
    spec.coset_reps = [Permutation.from_array(r) for r in reps]
    spec._index = index
    m = len(reps)
    gens = []
    for s in G.gen_arrays:
        gens.append(tuple(index[spec._canon(_mul(r, s))] for r in reps))
    return PermGroup.from_arrays(gens, m), spec


def on_k_subsets(G: PermGroup, k: int) -> PermGroup:
    """Action on k-subsets, subsets numbered in lexicographic order."""
    subsets = list(itertools.combinations(range(G.degree), k))
    index = {s: i for i, s in enumerate(subsets)}
    gens = [tuple(index[tuple(sorted(g[p] for p in s))] for s in subsets) for g in G.gen_arrays]
    return PermGroup.from_arrays(gens, len(subsets))


# ---------------------------------------------------------------- relabelling


def permutation_isomorphism(G1: PermGroup, G2: PermGroup) -> Permutation | None:
    """A permutation sigma with ``sigma^-1 G1 sigma = G2``, or None.

    Both groups must be transitive; generator images are searched among the
    elements of G2 with matching cycle type, so this is meant for small
    groups.
    """
    n = G1.degree
    if G2.degree != n or G1.order() != G2.order():
        return None
    if not (G1.is_transitive() and G2.is_transitive()):
        raise ValueError("permutation isomorphism search needs transitive groups")
    s = [g for g in G1.gen_arrays if any(i != x for i, x in enumerate(g))]
    if not s:
        return Permutation.identity(n)
    by_type: dict[tuple, list[tuple]] = {}
    for e in G2.chain.elements():
        ct = Permutation.from_array(e).cycle_type()
        by_type.setdefault(ct, []).append(e)
    cands = [by_type.get(Permutation.from_array(g).cycle_type(), []) for g in s]

    def extend(sigma: dict, i: int, images: list) -> dict | None:
        # define sigma on the orbit of point 0 under s_0..s_i
        queue = list(sigma)
        for a in queue:
            for j in range(i + 1):
                b = s[j][a]
                v = images[j][sigma[a]]
                if b in sigma:
                    if sigma[b] != v:
                        return None
                else:
                    sigma[b] = v
                    queue.append(b)
        return sigma

    def rec(i: int, sigma: dict, images: list):
        if i == len(s):
            if len(sigma) != n or len(set(sigma.values())) != n:
                return None
            if PermGroup.from_arrays(images, n).order() != G2.order():
                return None
            return sigma
        for t in cands[i]:
            got = extend(dict(sigma), i, images + [t])
            if got is not None and len(set(got.values())) == len(got):
                r = rec(i + 1, got, images + [t])
                if r is not None:
                    return r
        return None

    res = rec(0, {0: 0}, [])
    if res is None:
        return None
    sigma = Permutation.from_array([res[i] for i in range(n)])
    assert G1.relabel(sigma) == G2
    return sigma


def inducing_permutation(iso: IsoMap) -> Permutation | None:
    """sigma with ``sigma^-1 s sigma = iso(s)`` for every source generator, or None.

    For transitive groups sigma is fixed by the image of one point, so this
    tries every image of point 1. Returns None when the isomorphism is not
    induced by relabelling points.
    """
    n = iso.source.degree
    if iso.target.degree != n:
        return None
    if not iso.source.is_transitive():
        raise ValueError("inducing permutation search needs a transitive source")
    src = iso.source.gen_arrays
    dst = [t.array for t in iso.generator_images]
    for a in range(n):
        sigma = {0: a}
        queue = [0]
        ok = True
        for x in queue:
            for s, t in zip(src, dst):
                y, v = s[x], t[sigma[x]]
                if y in sigma:
                    if sigma[y] != v:
                        ok = False
                        break
                else:
                    sigma[y] = v
                    queue.append(y)
            if not ok:
                break
        if ok and len(set(sigma.values())) == n:
            return Permutation.from_array([sigma[i] for i in range(n)])
    return None
