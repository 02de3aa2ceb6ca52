"""Permutations and point sets on {1..n}.

Points are 1-based at the public surface. Internally a permutation is a
tuple of 0-based images and a point set is an int bitmask (bit ``i-1`` for
point ``i``). Composition is left to right: ``(p * q)`` maps ``a`` to
``(a p) q``.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Iterator, Sequence

__all__ = [
    "CycleParseError",
    "DegreeMismatchError",
    "Permutation",
    "PointSet",
    "act_set",
    "compose",
    "from_cycles",
    "image_mask",
    "inverse",
    "mask_points",
    "points_mask",
]


class DegreeMismatchError(ValueError):
    """Raised when objects on different domains are combined."""


class CycleParseError(ValueError):
    """Base class for cycle-notation parse errors."""


class RepeatedPointError(CycleParseError):
    pass


class PointOutOfRangeError(CycleParseError):
    pass


class MalformedCycleError(CycleParseError):
    pass


# ---------------------------------------------------------------- raw helpers


def _mul(a: tuple, b: tuple) -> tuple:
    return tuple(map(b.__getitem__, a))


def _inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def image_mask(arr: Sequence[int], mask: int) -> int:
    """Image of the bitmask ``mask`` under the 0-based image array ``arr``."""
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << arr[low.bit_length() - 1]
        mask ^= low
    return out


def points_mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << (p - 1)
    return m


def mask_points(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


# ---------------------------------------------------------------- permutation


class Permutation:
    """A permutation of {1..degree}.

    Construct from 1-based images, e.g. ``Permutation([2, 1, 3])`` is the
    transposition (1,2) on three points.
    """

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Sequence[int]):
        arr = tuple(int(x) - 1 for x in images)
        n = len(arr)
        if n == 0:
            raise ValueError("degree must be positive")
        if sorted(arr) != list(range(n)):
            raise ValueError(f"images {list(images)!r} are not a bijection of 1..{n}")
        self._a = arr
        self._hash = None

    @classmethod
    def from_array(cls, arr: Sequence[int]) -> "Permutation":
        """Wrap a 0-based image tuple without validation."""
        p = object.__new__(cls)
        p._a = tuple(arr)
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls.from_array(range(degree))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        return from_cycles(text, degree)

    # -- basic accessors
    @property
    def array(self) -> tuple:
        """0-based image tuple."""
        return self._a

    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def images(self) -> tuple:
        return tuple(x + 1 for x in self._a)

    def image(self, point: int) -> int:
        return self._a[point - 1] + 1

    def __call__(self, point: int) -> int:
        return self._a[point - 1] + 1

    # -- algebra
    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if len(other._a) != len(self._a):
            raise DegreeMismatchError(f"degrees {self.degree} and {other.degree} differ")
        return Permutation.from_array(_mul(self._a, other._a))

    def inverse(self) -> "Permutation":
        return Permutation.from_array(_inv(self._a))

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, e: int) -> "Permutation":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = tuple(range(len(self._a)))
        a = base._a
        while e:
            if e & 1:
                result = _mul(result, a)
            a = _mul(a, a)
            e >>= 1
        return Permutation.from_array(result)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._a == other._a

    def __lt__(self, other: "Permutation") -> bool:
        return self._a < other._a

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._a)
        return self._hash

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._a))

    def support(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self._a) if i != x]

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its minimum, sorted by minimum."""
        seen = [False] * len(self._a)
        out = []
        for i in range(len(self._a)):
            if seen[i] or self._a[i] == i:
                seen[i] = True
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = self._a[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def to_cycles(self) -> str:
        """Canonical cycle notation: cycles by minimum element, no spaces."""
        return "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles())

    def extend(self, degree: int, offset: int = 0) -> "Permutation":
        """Embed into a larger domain, shifted by ``offset``; other points fixed."""
        n = len(self._a)
        if offset + n > degree:
            raise ValueError("extension does not fit")
        arr = list(range(degree))
        for i, x in enumerate(self._a):
            arr[offset + i] = offset + x
        return Permutation.from_array(arr)

    def __repr__(self) -> str:
        c = self.to_cycles() or "()"
        return f"Permutation({c!r}, degree={self.degree})"

    def __str__(self) -> str:
        return self.to_cycles() or "()"


_CYCLE_TOKEN = re.compile(r"\(([^()]*)\)")


def from_cycles(text: str, degree: int) -> Permutation:
    """Parse disjoint cycle notation like ``"(1,2)(3,4)"``."""
    if degree < 1:
        raise ValueError("degree must be positive")
    s = re.sub(r"\s+", "", text)
    arr = list(range(degree))
    if s in ("", "()"):
        return Permutation.from_array(arr)
    pos = 0
    seen: set[int] = set()
    for m in _CYCLE_TOKEN.finditer(s):
        if m.start() != pos:
            raise MalformedCycleError(f"unexpected text {s[pos:m.start()]!r} in {text!r}")
        pos = m.end()
        body = m.group(1)
        if body == "":
            continue
        parts = body.split(",")
        if any(not p.isdigit() for p in parts):
            raise MalformedCycleError(f"bad cycle ({body}) in {text!r}")
        pts = [int(p) for p in parts]
        for p in pts:
            if not 1 <= p <= degree:
                raise PointOutOfRangeError(f"point {p} outside 1..{degree}")
            if p in seen:
                raise RepeatedPointError(f"point {p} repeated in {text!r}")
            seen.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            arr[a - 1] = b - 1
    if pos != len(s):
        raise MalformedCycleError(f"unexpected text {s[pos:]!r} in {text!r}")
    return Permutation.from_array(arr)


def compose(p: Permutation, q: Permutation) -> Permutation:
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


# ---------------------------------------------------------------- point sets


class PointSet:
    """A subset of {1..degree} stored as a bitmask."""

    __slots__ = ("degree", "mask")

    def __init__(self, degree: int, mask: int = 0):
        if mask >> degree:
            raise ValueError(f"mask has points outside 1..{degree}")
        self.degree = degree
        self.mask = mask

    @classmethod
    def of(cls, points: Iterable[int], degree: int) -> "PointSet":
        pts = list(points)
        for p in pts:
            if not 1 <= p <= degree:
                raise ValueError(f"point {p} outside 1..{degree}")
        return cls(degree, points_mask(pts))

    @classmethod
    def full(cls, degree: int) -> "PointSet":
        return cls(degree, (1 << degree) - 1)

    def points(self) -> list[int]:
        return mask_points(self.mask)

    def __iter__(self) -> Iterator[int]:
        return iter(mask_points(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, point: int) -> bool:
        return 1 <= point <= self.degree and bool(self.mask >> (point - 1) & 1)

    def complement(self) -> "PointSet":
        return PointSet(self.degree, ((1 << self.degree) - 1) ^ self.mask)

    def _check(self, other: "PointSet") -> None:
        if other.degree != self.degree:
            raise DegreeMismatchError(f"degrees {self.degree} and {other.degree} differ")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.degree, self.mask | other.mask)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.degree, self.mask & other.mask)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.degree, self.mask & ~other.mask)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and self.degree == other.degree and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.degree, self.mask))

    def __repr__(self) -> str:
        return f"PointSet({self.points()}, degree={self.degree})"


def act_set(p: Permutation, s: PointSet) -> PointSet:
    """The image {a p : a in s}."""
    if p.degree != s.degree:
        raise DegreeMismatchError(f"degrees {p.degree} and {s.degree} differ")
    return PointSet(s.degree, image_mask(p.array, s.mask))
