"""Permutation groups backed by a stabilizer chain (Schreier-Sims)."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .perm import DegreeMismatchError, Permutation, PointSet, _inv, _mul

__all__ = ["Chain", "PermGroup", "group", "NotTransitiveError"]


class NotTransitiveError(ValueError):
    pass


@dataclass
class Chain:
    """Base and strong generating set.

    ``transversals[i]`` maps each point of the basic orbit of ``base[i]`` to a
    pair ``(u, u^-1)`` of raw 0-based tuples with ``base[i] u = point``.
    ``strong[i]`` holds the strong generators fixing ``base[:i]``.
    """

    degree: int
    base: list[int]
    strong: list[list[tuple]]
    transversals: list[dict]

    @property
    def order(self) -> int:
        o = 1
        for t in self.transversals:
            o *= len(t)
        return o

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        """Strip ``g``; returns the residue and the level where sifting stopped."""
        for lvl in range(start, len(self.base)):
            t = self.transversals[lvl].get(g[self.base[lvl]])
            if t is None:
                return g, lvl
            g = _mul(g, t[1])
        return g, len(self.base)

    def contains(self, g: tuple) -> bool:
        h, lvl = self.sift(g)
        return lvl == len(self.base) and all(i == x for i, x in enumerate(h))

    def level_generators(self, lvl: int) -> list[tuple]:
        return self.strong[lvl] if lvl < len(self.strong) else []

    def elements(self) -> Iterator[tuple]:
        """Every element exactly once, as raw tuples."""
        ident = tuple(range(self.degree))
        levels = [[u for u, _ in t.values()] for t in reversed(self.transversals)]
        for combo in itertools.product(*levels):
            g = ident
            for u in combo:
                g = _mul(g, u)
            yield g


def _orbit_transversal(point: int, gens: Sequence[tuple], n: int) -> dict:
    ident = tuple(range(n))
    trans = {point: (ident, ident)}
    queue = [point]
    for b in queue:
        u, _ = trans[b]
        for s in gens:
            c = s[b]
            if c not in trans:
                v = _mul(u, s)
                trans[c] = (v, _inv(v))
                queue.append(c)
    return trans


def schreier_sims(gens: Sequence[tuple], n: int, base: Sequence[int] = (), order: int | None = None) -> Chain:
    """Deterministic Schreier-Sims; ``base`` is a required base prefix.

    When ``order`` is known the construction stops as soon as the chain
    reaches it.
    """
    ident = tuple(range(n))
    base = list(dict.fromkeys(base))
    strong = [g for g in dict.fromkeys(gens) if g != ident]
    for g in strong:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(n) if g[i] != i))
    k = len(base)
    distr = [[g for g in strong if all(g[b] == b for b in base[:i])] for i in range(k)]
    trans = [_orbit_transversal(base[i], distr[i], n) for i in range(k)]

    def current_order():
        o = 1
        for t in trans:
            o *= len(t)
        return o

    if order is not None and current_order() == order:
        return Chain(n, base, distr, trans)

    i = k - 1
    while i >= 0:
        restart = False
        for beta, (u, _) in list(trans[i].items()):
            for s in distr[i]:
                us = _mul(u, s)
                w = trans[i][us[base[i]]][1]
                sg = _mul(us, w)
                if sg == ident:
                    continue
                # strip through levels below i
                h = sg
                j = i + 1
                while j < len(base):
                    t = trans[j].get(h[base[j]])
                    if t is None:
                        break
                    h = _mul(h, t[1])
                    j += 1
                if j == len(base) and h == ident:
                    continue
                if j == len(base):
                    base.append(next(p for p in range(n) if h[p] != p))
                    distr.append([])
                    trans.append({})
                for lvl in range(i + 1, j + 1):
                    distr[lvl].append(h)
                for lvl in range(i + 1, j + 1):
                    trans[lvl] = _orbit_transversal(base[lvl], distr[lvl], n)
                if order is not None and current_order() == order:
                    return Chain(n, base, distr, trans)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return Chain(n, base, distr, trans)


class PermGroup:
    """A permutation group of degree ``n`` given by generators.

    The stabilizer chain is built lazily, once, under a lock.
    """

    def __init__(self, generators: Iterable[Permutation] = (), degree: int | None = None,
                 *, name: str | None = None, order: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generator list")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatchError(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = gens
        self.name = name
        self._order_hint = order
        self._chain: Chain | None = None
        self._lock = threading.Lock()

    # -- construction helpers
    @classmethod
    def from_arrays(cls, arrays: Iterable[Sequence[int]], degree: int, **kw) -> "PermGroup":
        return cls([Permutation.from_array(a) for a in arrays], degree, **kw)

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls([], degree, order=1)

    @property
    def gen_arrays(self) -> list[tuple]:
        return [g.array for g in self.generators]

    # -- chain
    @property
    def chain(self) -> Chain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    self._chain = schreier_sims(self.gen_arrays, self.degree, self._default_base(),
                                                self._order_hint)
        return self._chain

    def _default_base(self) -> list[int]:
        # points in decreasing order of how many generators move them
        counts = [0] * self.degree
        for g in self.gen_arrays:
            for i, x in enumerate(g):
                if i != x:
                    counts[i] += 1
        return [i for i in sorted(range(self.degree), key=lambda i: (-counts[i], i)) if counts[i]][:1]

    def chain_with_base(self, prefix: Sequence[int]) -> Chain:
        """A fresh chain whose base starts with ``prefix`` (0-based points)."""
        return schreier_sims(self.gen_arrays, self.degree, prefix, self.order())

    # -- queries
    def order(self) -> int:
        return self.chain.order

    def __len__(self) -> int:
        return self.order()

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatchError(f"degree {p.degree} vs group degree {self.degree}")
        return self.chain.contains(p.array)

    def __contains__(self, p: Permutation) -> bool:
        return self.contains(p)

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return (self.degree == other.degree and self.order() == other.order()
                and self.is_subgroup_of(other) and other.is_subgroup_of(self))

    def __hash__(self) -> int:
        return hash((self.degree, self.order()))

    def elements(self) -> Iterator[Permutation]:
        for a in self.chain.elements():
            yield Permutation.from_array(a)

    def orbit(self, point: int) -> list[int]:
        """Orbit of a 1-based point, sorted."""
        seen = {point - 1}
        queue = [point - 1]
        for b in queue:
            for g in self.gen_arrays:
                c = g[b]
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
        return sorted(x + 1 for x in seen)

    def orbits(self) -> list[list[int]]:
        """Orbit partition of {1..n}; orbits sorted by minimum element."""
        out = []
        done = [False] * self.degree
        for i in range(self.degree):
            if not done[i]:
                orb = self.orbit(i + 1)
                for x in orb:
                    done[x - 1] = True
                out.append(orb)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(1)) == self.degree

    def moved_points(self) -> list[int]:
        moved = set()
        for g in self.gen_arrays:
            moved.update(i + 1 for i, x in enumerate(g) if i != x)
        return sorted(moved)

    def restrict(self, points: Sequence[int]) -> "PermGroup":
        """Action on an invariant set, relabelled 1..len(points) in the given order."""
        idx = {p - 1: i for i, p in enumerate(points)}
        gens = []
        for g in self.gen_arrays:
            arr = []
            for p in points:
                img = g[p - 1]
                if img not in idx:
                    raise ValueError("point set is not invariant under the group")
                arr.append(idx[img])
            gens.append(tuple(arr))
        return PermGroup.from_arrays(gens, len(points))

    def relabel(self, sigma: Permutation) -> "PermGroup":
        """Conjugate by sigma: the group acting on the points renamed by sigma."""
        s = sigma.array
        si = _inv(s)
        gens = [tuple(s[g[si[i]]] for i in range(self.degree)) for g in self.gen_arrays]
        return PermGroup.from_arrays(gens, self.degree, order=self._chain.order if self._chain else self._order_hint)

    def stabilizer_chain_level(self, points: Sequence[int]) -> "PermGroup":
        return pointwise_stabilizer(self, PointSet.of(points, self.degree))

    def __repr__(self) -> str:
        nm = f"{self.name!r}, " if self.name else ""
        return f"PermGroup({nm}degree={self.degree}, generators={[str(g) for g in self.generators]})"


def group(generators: Sequence[Permutation], degree: int | None = None) -> PermGroup:
    return PermGroup(generators, degree)


def pointwise_stabilizer(G: PermGroup, s: PointSet) -> PermGroup:
    """Elements of G fixing every point of s."""
    if s.degree != G.degree:
        raise DegreeMismatchError(f"degree {s.degree} vs group degree {G.degree}")
    pts = [p - 1 for p in s.points()]
    if not pts:
        return G
    ch = G.chain_with_base(pts)
    lvl = len(pts)
    gens = ch.level_generators(lvl)
    order = 1
    for t in ch.transversals[lvl:]:
        order *= len(t)
    return PermGroup.from_arrays(gens, G.degree, order=order)


def minimal_block_system(G: PermGroup):
    """A minimal nontrivial block system of a transitive group, or ``"primitive"``.

    Blocks are returned as PointSets sorted by minimum element. Among the
    minimal block systems the one with the smallest blocks is chosen, ties
    broken by the lowest partner point of 1.
    """
    n = G.degree
    if not G.is_transitive():
        raise NotTransitiveError("group is not transitive")
    if n <= 2:
        return "primitive"
    gens = G.gen_arrays
    best = None
    for beta in range(1, n):
        blocks = _minimal_block(gens, n, 0, beta)
        size = n // len(blocks)
        if size < n and (best is None or size < best[0]):
            best = (size, blocks)
            if size == 2:
                break
    if best is None:
        return "primitive"
    return [PointSet(n, m) for m in sorted(best[1], key=lambda m: (m & -m))]


def _minimal_block(gens: Sequence[tuple], n: int, a: int, b: int) -> list[int]:
    """Finest block system in which a and b share a block (union-find closure)."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parent[find(b)] = find(a)
    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        for g in gens:
            gx, gy = find(g[x]), find(g[y])
            if gx != gy:
                parent[gy] = gx
                queue.append((g[x], g[y]))
    blocks: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        blocks[r] = blocks.get(r, 0) | (1 << i)
    return list(blocks.values())


def normal_closure(G: PermGroup, elements: Iterable[Permutation]) -> PermGroup:
    """Smallest normal subgroup of G containing the given elements."""
    gens = [e.array for e in elements if not e.is_identity()]
    n = G.degree
    if not gens:
        return PermGroup.trivial(n)
    chain = schreier_sims(gens, n)
    queue = list(gens)
    Ggens = G.gen_arrays
    Ginv = [_inv(g) for g in Ggens]
    while queue:
        x = queue.pop()
        for g, gi in zip(Ggens, Ginv):
            c = _mul(_mul(gi, x), g)
            if not chain.contains(c):
                gens.append(c)
                queue.append(c)
                chain = schreier_sims(gens, n, chain.base)
    return PermGroup.from_arrays(gens, n, order=chain.order)
