"""Regular sets, orbit censuses on k-subsets and distinguishing numbers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from . import kernels
from .group import PermGroup
from .perm import DegreeMismatchError, PointSet, image_mask
from .search import has_nontrivial_setwise_stabilizer, setwise_stabilizer

__all__ = [
    "BudgetExceededError",
    "CensusRow",
    "DEFAULT_BUDGET",
    "OrbitCensus",
    "distinguishing_number",
    "distinguishing_partition",
    "is_regular_set",
    "orbit_census",
    "full_census",
    "regular_set_sizes",
    "sample_regular_set",
]

# subsets swept per cardinality before the caller is told to go deep or sample
DEFAULT_BUDGET = 1 << 26


class BudgetExceededError(RuntimeError):
    """The requested enumeration is larger than the budget."""


@dataclass
class CensusRow:
    k: int
    orbit_count: int
    max_orbit_length: int
    witness: PointSet | None = None
    representatives: list[int] = field(default_factory=list, repr=False)
    lengths: list[int] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "orbit_count": self.orbit_count,
            "max_orbit_length": self.max_orbit_length,
            "witness": self.witness.points() if self.witness is not None else None,
        }


@dataclass
class OrbitCensus:
    degree: int
    order: int
    rows: list[CensusRow]

    def regular_sizes(self) -> set[int]:
        return {r.k for r in self.rows if r.witness is not None}

    def to_json(self) -> dict:
        return {"degree": self.degree, "order": self.order, "rows": [r.to_json() for r in self.rows]}


def is_regular_set(G: PermGroup, s: PointSet) -> bool:
    """Trivial setwise stabilizer."""
    if s.degree != G.degree:
        raise DegreeMismatchError(f"degree {s.degree} vs group degree {G.degree}")
    return not has_nontrivial_setwise_stabilizer(G, s.mask)


def orbit_census(G: PermGroup, k: int, *, budget: int = DEFAULT_BUDGET, collect: bool = False) -> CensusRow:
    """Orbits of G on k-subsets: count, longest orbit and a regular witness."""
    n = G.degree
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    total = kernels.binomial(n, k)
    if total > budget:
        raise BudgetExceededError(f"C({n},{k}) = {total} subsets exceed the budget {budget}")
    order = G.order()
    gens = [g for g in G.gen_arrays if any(i != x for i, x in enumerate(g))]
    count, max_len, witness, reps, lengths = kernels.kset_orbits(gens, n, k, order, collect)
    w = PointSet(n, witness) if witness >= 0 else None
    return CensusRow(k, count, max_len, w, reps, lengths)


def full_census(G: PermGroup, ks: Iterable[int] | None = None, *, budget: int = DEFAULT_BUDGET) -> OrbitCensus:
    ks = range(G.degree + 1) if ks is None else ks
    return OrbitCensus(G.degree, G.order(), [orbit_census(G, k, budget=budget) for k in ks])


def regular_set_sizes(G: PermGroup, *, budget: int = DEFAULT_BUDGET, mirror: bool = True) -> set[int]:
    """All k admitting a regular k-set.

    With ``mirror`` only ``k <= n/2`` is swept and sizes are completed by
    complementation (a set and its complement have the same stabilizer).
    """
    n = G.degree
    ks = range(n // 2 + 1) if mirror else range(n + 1)
    out = set()
    for k in ks:
        if orbit_census(G, k, budget=budget).witness is not None:
            out.add(k)
            if mirror:
                out.add(n - k)
    return out


def sample_regular_set(G: PermGroup, k: int | None = None, *, trials: int = 200,
                       seed: int = 0) -> PointSet | None:
    """Random search for a regular set; None means only "none found"."""
    rng = random.Random(seed)
    n = G.degree
    for _ in range(trials):
        kk = k if k is not None else rng.randint(0, n)
        s = PointSet.of(rng.sample(range(1, n + 1), kk), n)
        if is_regular_set(G, s):
            return s
    return None


# ---------------------------------------------------------------- distinguishing


def _submasks(avail: int):
    # every submask of avail, ascending
    s = 0
    while True:
        yield s
        if s == avail:
            return
        s = (s - avail) & avail


def _regular_within(K: PermGroup, avail: int) -> int | None:
    """A subset of ``avail`` with trivial stabilizer in K (K preserves avail)."""
    order = K.order()
    if order == 1:
        return 0
    if (1 << avail.bit_count()) < order:
        return None
    gens = K.gen_arrays
    seen: set[int] = set()
    for s in _submasks(avail):
        if s in seen:
            continue
        # mark the whole orbit so each orbit is walked once
        orb = {s}
        queue = [s]
        for x in queue:
            for g in gens:
                y = image_mask(g, x)
                if y not in orb:
                    orb.add(y)
                    queue.append(y)
        if len(orb) == order:
            return s
        seen |= orb
    return None


def _colorable(K: PermGroup, avail: int, d: int, parts: list[int]) -> list[int] | None:
    if K.order() == 1:
        return parts + ([avail] if avail else [])
    if d <= 1:
        return None
    if d ** avail.bit_count() < K.order():
        return None
    if d == 2:
        s = _regular_within(K, avail)
        if s is None:
            return None
        return parts + [m for m in (s, avail & ~s) if m]
    low = avail & -avail
    rest = avail & ~low
    # the part holding the lowest free point, in increasing order of its other members
    for extra in _submasks(rest):
        s = low | extra
        Ks = setwise_stabilizer(K, PointSet(K.degree, s))
        r = _colorable(Ks, avail & ~s, d - 1, parts + [s])
        if r is not None:
            return r
    return None


def distinguishing_partition(G: PermGroup, d: int, *, budget: int = DEFAULT_BUDGET) -> list[PointSet] | None:
    """A partition into at most d parts whose part-wise stabilizer is trivial."""
    n = G.degree
    full = (1 << n) - 1
    if G.order() == 1:
        return [PointSet(n, full)]
    if d <= 1:
        return None
    if d ** n < G.order():
        return None
    if d == 2:
        for k in range(n // 2 + 1):
            w = orbit_census(G, k, budget=budget).witness
            if w is not None:
                return [PointSet(n, m) for m in (w.mask, full & ~w.mask) if m]
        return None
    # the first part is taken up to G-equivalence: one representative per orbit
    for k in range(n + 1):
        row = orbit_census(G, k, budget=budget, collect=True)
        for rep in row.representatives:
            Ks = setwise_stabilizer(G, PointSet(n, rep))
            r = _colorable(Ks, full & ~rep, d - 1, [rep])
            if r is not None:
                return [PointSet(n, m) for m in r if m]
    return None


def distinguishing_number(G: PermGroup, *, budget: int = DEFAULT_BUDGET, max_parts: int | None = None) -> int:
    """Least d admitting a distinguishing partition into d parts."""
    n = G.degree
    if G.order() == 1:
        return 1
    top = max_parts if max_parts is not None else n
    for d in range(2, top + 1):
        if distinguishing_partition(G, d, budget=budget) is not None:
            return d
    raise BudgetExceededError(f"no distinguishing partition with at most {top} parts")
