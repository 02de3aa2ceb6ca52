"""Unordered relations (families of subsets) and their symmetry groups."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from . import kernels
from .group import PermGroup
from .perm import DegreeMismatchError, Permutation, PointSet, image_mask, mask_points, points_mask
from .refine import DEFAULT_DEGREE_CAP, DegreeCapError, hypergraph_automorphisms
from .search import family_stabilizer

__all__ = [
    "Certificate",
    "DegreeCapError",
    "NotInvariantError",
    "UnorderedRelation",
    "block_partition_certificate",
    "split_certificate",
    "certify_defining",
    "is_defining_relation",
    "k_homogeneous",
    "load_relation",
    "orbit_of_set",
    "orbit_of_mask",
    "save_relation",
    "set_transitive",
    "symmetry_group_full",
    "symmetry_group_in",
    "union",
]


class NotInvariantError(ValueError):
    """The relation is not a union of orbits of the group it should define."""


def _sort_key(mask: int) -> tuple:
    return (mask.bit_count(), mask_points(mask))


class UnorderedRelation:
    """A family of distinct subsets of {1..degree}.

    Sets are kept ordered by cardinality, then by their sorted point lists,
    so serialization is reproducible.
    """

    __slots__ = ("degree", "_masks", "_set", "_arity")

    def __init__(self, degree: int, masks: Iterable[int] = ()):
        uniq = set(int(m) for m in masks)
        for m in uniq:
            if m < 0 or m >> degree:
                raise ValueError(f"set {mask_points(m)} not inside 1..{degree}")
        self.degree = degree
        self._masks = tuple(sorted(uniq, key=_sort_key))
        self._set = frozenset(uniq)
        self._arity = None

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], degree: int) -> "UnorderedRelation":
        masks = []
        for s in sets:
            pts = list(s)
            for p in pts:
                if not 1 <= p <= degree:
                    raise ValueError(f"point {p} outside 1..{degree}")
            masks.append(points_mask(pts))
        return cls(degree, masks)

    @classmethod
    def from_pointsets(cls, sets: Iterable[PointSet], degree: int) -> "UnorderedRelation":
        masks = []
        for s in sets:
            if s.degree != degree:
                raise DegreeMismatchError(f"set of degree {s.degree} in a relation of degree {degree}")
            masks.append(s.mask)
        return cls(degree, masks)

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def sets(self) -> list[PointSet]:
        return [PointSet(self.degree, m) for m in self._masks]

    def point_lists(self) -> list[list[int]]:
        return [mask_points(m) for m in self._masks]

    def __len__(self) -> int:
        return len(self._masks)

    def __iter__(self) -> Iterator[PointSet]:
        return iter(self.sets())

    def __contains__(self, s) -> bool:
        m = s.mask if isinstance(s, PointSet) else int(s)
        return m in self._set

    def __eq__(self, other) -> bool:
        return isinstance(other, UnorderedRelation) and self.degree == other.degree and self._set == other._set

    def __hash__(self) -> int:
        return hash((self.degree, self._set))

    def __repr__(self) -> str:
        return f"UnorderedRelation(degree={self.degree}, sets={len(self)}, arity={sorted(self.arity())})"

    def arity(self) -> frozenset[int]:
        if self._arity is None:
            self._arity = frozenset(m.bit_count() for m in self._masks)
        return self._arity

    def cardinality_class(self, k: int) -> "UnorderedRelation":
        return UnorderedRelation(self.degree, (m for m in self._masks if m.bit_count() == k))

    def without_cardinality(self, k: int) -> "UnorderedRelation":
        return UnorderedRelation(self.degree, (m for m in self._masks if m.bit_count() != k))

    def classes(self) -> list[list[int]]:
        """Member masks grouped by cardinality, ascending."""
        out: dict[int, list[int]] = {}
        for m in self._masks:
            out.setdefault(m.bit_count(), []).append(m)
        return [out[k] for k in sorted(out)]

    def complements(self) -> "UnorderedRelation":
        full = (1 << self.degree) - 1
        return UnorderedRelation(self.degree, (full ^ m for m in self._masks))

    def image(self, p: Permutation) -> "UnorderedRelation":
        if p.degree != self.degree:
            raise DegreeMismatchError(f"degree {p.degree} vs relation degree {self.degree}")
        return UnorderedRelation(self.degree, (image_mask(p.array, m) for m in self._masks))

    def preserved_by(self, p: Permutation) -> bool:
        a = p.array
        s = self._set
        return all(image_mask(a, m) in s for m in self._masks)

    def is_invariant(self, G: PermGroup) -> bool:
        return all(self.preserved_by(g) for g in G.generators)

    def __or__(self, other: "UnorderedRelation") -> "UnorderedRelation":
        return union([self, other])

    # -- files
    def to_json(self) -> dict:
        return {"degree": self.degree, "sets": self.point_lists()}

    @classmethod
    def from_json(cls, data: dict) -> "UnorderedRelation":
        return cls.from_sets(data["sets"], int(data["degree"]))


def union(relations: Sequence[UnorderedRelation]) -> UnorderedRelation:
    if not relations:
        raise ValueError("union of no relations has no degree")
    n = relations[0].degree
    masks = []
    for r in relations:
        if r.degree != n:
            raise DegreeMismatchError(f"degrees {n} and {r.degree} differ")
        masks.extend(r.masks)
    return UnorderedRelation(n, masks)


def orbit_of_mask(gens: Sequence[tuple], mask: int) -> list[int]:
    seen = {mask}
    queue = [mask]
    for x in queue:
        for g in gens:
            y = image_mask(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return queue


def orbit_of_set(G: PermGroup, s: PointSet) -> UnorderedRelation:
    """The orbit ``s^G`` as a relation."""
    if s.degree != G.degree:
        raise DegreeMismatchError(f"degree {s.degree} vs group degree {G.degree}")
    return UnorderedRelation(G.degree, orbit_of_mask(G.gen_arrays, s.mask))


# ---------------------------------------------------------------- symmetry groups


def symmetry_group_in(overgroup: PermGroup, R: UnorderedRelation, *, known: PermGroup | None = None) -> PermGroup:
    """``{g in overgroup : R g = R}`` by backtrack over the overgroup's chain.

    ``known`` optionally names a subgroup already known to preserve R; it
    seeds the search.
    """
    if overgroup.degree != R.degree:
        raise DegreeMismatchError(f"degree {R.degree} vs group degree {overgroup.degree}")
    seed = known.gen_arrays if known is not None else ()
    return family_stabilizer(overgroup, R.classes(), known=seed)


def symmetry_group_full(R: UnorderedRelation, *, cap: int = DEFAULT_DEGREE_CAP) -> PermGroup:
    """``G(R)`` inside Sym(Omega) by partition refinement."""
    gens, order = hypergraph_automorphisms(R.degree, R.classes(), cap=cap)
    perms = [Permutation.from_array(g) for g in gens]
    for p in perms:
        if not R.preserved_by(p):  # pragma: no cover - engine self-check
            raise AssertionError(f"refinement returned {p}, which does not preserve the relation")
    return PermGroup(perms, R.degree, order=order)


@dataclass
class Certificate:
    """Evidence that ``G(R) <= overgroup``.

    ``forced`` must consist of whole cardinality classes of R (so every
    symmetry of R preserves it) and ``overgroup`` must be ``G(forced)``.
    ``reason`` says why the latter holds; ``proved`` is true when the
    artifact established it itself rather than importing it.
    """

    overgroup: PermGroup
    forced: UnorderedRelation
    reason: str
    proved: bool = True


def _wreath_of_blocks(blocks: Sequence[int], n: int) -> PermGroup:
    """Full stabilizer of a partition into equal blocks (Sym(m) wr Sym(k))."""
    gens = []
    pts = [mask_points(b) for b in blocks]
    for b in pts:
        if len(b) > 1:
            arr = list(range(n))
            arr[b[0] - 1], arr[b[1] - 1] = b[1] - 1, b[0] - 1
            gens.append(tuple(arr))
            if len(b) > 2:
                arr = list(range(n))
                for x, y in zip(b, b[1:] + b[:1]):
                    arr[x - 1] = y - 1
                gens.append(tuple(arr))
    for b1, b2 in zip(pts, pts[1:]):
        arr = list(range(n))
        for x, y in zip(b1, b2):
            arr[x - 1], arr[y - 1] = y - 1, x - 1
        gens.append(tuple(arr))
    m, k = len(pts[0]), len(pts)
    order = factorial(m) ** k * factorial(k)
    return PermGroup.from_arrays(gens, n, order=order)


def block_partition_certificate(R: UnorderedRelation) -> Certificate | None:
    """A certificate from a cardinality class that partitions the domain into equal blocks."""
    n = R.degree
    full = (1 << n) - 1
    for cls in R.classes():
        acc = 0
        disjoint = True
        for m in cls:
            if acc & m:
                disjoint = False
                break
            acc |= m
        if disjoint and acc == full and len(cls) > 1 and cls[0].bit_count() > 1:
            forced = UnorderedRelation(n, cls)
            W = _wreath_of_blocks(cls, n)
            return Certificate(W, forced, "a cardinality class of R partitions the points into equal blocks; "
                               "its stabilizer is the wreath product of the block symmetric groups")
    return None


def split_certificate(R: UnorderedRelation, part: PointSet, *, cap: int = DEFAULT_DEGREE_CAP) -> Certificate:
    """A certificate for a relation whose cardinality class of ``|part|`` is ``{part}``.

    Every symmetry of R then preserves ``part`` and its complement, and
    permutes the sets of R inside each side; so ``G(R)`` lies in the direct
    sum of the symmetry groups of the two restrictions, each computed
    absolutely.
    """
    n = R.degree
    if part.degree != n:
        raise DegreeMismatchError(f"degree {part.degree} vs relation degree {n}")
    k = len(part)
    if R.cardinality_class(k).masks != (part.mask,):
        raise ValueError("the cardinality class of the part must consist of the part alone")
    inside = part.points()
    outside = part.complement().points()
    halves = []
    for pts in (inside, outside):
        pos = {p: i for i, p in enumerate(pts)}
        sub = [m for m in R.masks if m & ~points_mask(pts) == 0 and m != points_mask(pts)]
        halves.append(UnorderedRelation.from_sets([[pos[p] + 1 for p in mask_points(m)] for m in sub], len(pts)))
    A = symmetry_group_full(halves[0], cap=cap)
    B = symmetry_group_full(halves[1], cap=cap)
    gens = []
    for g in A.gen_arrays:
        arr = list(range(n))
        for i, p in enumerate(inside):
            arr[p - 1] = inside[g[i]] - 1
        gens.append(tuple(arr))
    for g in B.gen_arrays:
        arr = list(range(n))
        for i, p in enumerate(outside):
            arr[p - 1] = outside[g[i]] - 1
        gens.append(tuple(arr))
    over = PermGroup.from_arrays(gens, n, order=A.order() * B.order())
    forced = UnorderedRelation(n, [part.mask])
    return Certificate(over, forced, f"the only {k}-set of R splits the points; the symmetry groups "
                       f"of the two restrictions (orders {A.order()} and {B.order()}) bound G(R)")


def certify_defining(G: PermGroup, R: UnorderedRelation, *, certificate: Certificate | None = None,
                     cap: int = DEFAULT_DEGREE_CAP) -> dict:
    """Decide whether ``G(R) = G`` and report how.

    Returns a record with keys ``defining`` (bool), ``method``
    (``"absolute"`` or ``"relative"``), ``order`` (order of the group found)
    and ``note``.
    """
    if G.degree != R.degree:
        raise DegreeMismatchError(f"degree {R.degree} vs group degree {G.degree}")
    if not R.is_invariant(G):
        raise NotInvariantError("relation is not a union of orbits of the group")
    if certificate is None and R.degree <= cap:
        H = symmetry_group_full(R, cap=cap)
        return {"defining": H.order() == G.order(), "method": "absolute", "order": H.order(), "note": ""}
    if certificate is None:
        certificate = block_partition_certificate(R)
    if certificate is None:
        raise DegreeCapError(
            f"degree {R.degree} above the cap {cap} and no overgroup certificate available")
    forced = certificate.forced
    if not set(forced.masks) <= set(R.masks):
        raise ValueError("certificate relation is not part of R")
    for k in forced.arity():
        if set(R.cardinality_class(k).masks) != set(forced.cardinality_class(k).masks):
            raise ValueError("certificate relation must consist of whole cardinality classes of R")
    if not forced.is_invariant(certificate.overgroup):
        raise ValueError("certificate overgroup does not preserve the certificate relation")
    H = symmetry_group_in(certificate.overgroup, R, known=G)
    return {
        "defining": H.order() == G.order(),
        "method": "relative",
        "order": H.order(),
        "note": certificate.reason + ("" if certificate.proved else " (imported fact)"),
    }


def is_defining_relation(G: PermGroup, R: UnorderedRelation, *, certificate: Certificate | None = None,
                         cap: int = DEFAULT_DEGREE_CAP) -> bool:
    """True iff ``G(R) = G``; R must be a union of G-orbits."""
    return certify_defining(G, R, certificate=certificate, cap=cap)["defining"]


# ---------------------------------------------------------------- homogeneity


def k_homogeneous(G: PermGroup, k: int) -> bool:
    """Transitive on k-subsets."""
    n = G.degree
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    if k in (0, n):
        return True
    count, *_ = kernels.kset_orbits(G.gen_arrays, n, k, G.order())
    return count == 1


def set_transitive(G: PermGroup) -> bool:
    return all(k_homogeneous(G, k) for k in range(G.degree // 2 + 1))


# ---------------------------------------------------------------- files


def save_relation(R: UnorderedRelation, path: str | Path) -> None:
    Path(path).write_text(json.dumps(R.to_json()) + "\n")


def load_relation(path: str | Path) -> UnorderedRelation:
    return UnorderedRelation.from_json(json.loads(Path(path).read_text()))
