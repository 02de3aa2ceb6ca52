"""Automorphism groups of colored hypergraphs by individualization-refinement.

Points start in one cell. Each refinement round gives every set a type
(its color and the sorted cells of its members) and every point the key
(cell, sorted types of the sets through it); cells split by key, subcells
ordered by key. The search individualizes the lowest point of the first
smallest non-singleton cell. The first path ends in a reference leaf; other
branches are compared to it by refinement traces and checked at leaves.
"""

from __future__ import annotations

from typing import Sequence

from .group import schreier_sims

__all__ = ["DegreeCapError", "hypergraph_automorphisms", "DEFAULT_DEGREE_CAP"]

DEFAULT_DEGREE_CAP = 24


class DegreeCapError(ValueError):
    """Raised when the absolute engine is asked for a degree above its cap."""


class _Hypergraph:
    def __init__(self, n: int, families: Sequence[Sequence[int]]):
        self.n = n
        self.sets: list[tuple[int, tuple[int, ...]]] = []
        self.lookup: list[set[int]] = []
        for color, fam in enumerate(families):
            uniq = set(int(m) for m in fam)
            self.lookup.append(uniq)
            for m in sorted(uniq):
                pts = tuple(p for p in range(n) if m >> p & 1)
                self.sets.append((color, pts))
        self.incident: list[list[int]] = [[] for _ in range(n)]
        for si, (_, pts) in enumerate(self.sets):
            for p in pts:
                self.incident[p].append(si)

    def refine(self, cells: list[list[int]]):
        """Refine to a fixpoint; returns (cells, trace hash)."""
        trace = []
        sets, incident = self.sets, self.incident
        while True:
            cell_of = [0] * self.n
            for ci, c in enumerate(cells):
                for p in c:
                    cell_of[p] = ci
            types = [(col, tuple(sorted(cell_of[p] for p in pts))) for col, pts in sets]
            ids = {t: i for i, t in enumerate(sorted(set(types)))}
            tid = [ids[t] for t in types]
            new = []
            for c in cells:
                if len(c) == 1:
                    new.append(c)
                    continue
                groups: dict[tuple, list[int]] = {}
                for p in c:
                    key = tuple(sorted(tid[s] for s in incident[p]))
                    groups.setdefault(key, []).append(p)
                if len(groups) == 1:
                    new.append(c)
                    continue
                keys = sorted(groups)
                trace.append((len(new), tuple((hash(k), len(groups[k])) for k in keys)))
                new.extend(groups[k] for k in keys)
            if len(new) == len(cells):
                return new, hash((tuple(trace), tuple(len(c) for c in new)))
            cells = new

    def is_automorphism(self, g: Sequence[int]) -> bool:
        for (col, pts) in self.sets:
            m = 0
            for p in pts:
                m |= 1 << g[p]
            if m not in self.lookup[col]:
                return False
        return True


def _target(cells: list[list[int]]) -> int:
    best = -1
    for i, c in enumerate(cells):
        if len(c) > 1 and (best < 0 or len(c) < len(cells[best])):
            best = i
    return best


def _individualize(cells: list[list[int]], ci: int, v: int) -> list[list[int]]:
    c = cells[ci]
    return cells[:ci] + [[v], [p for p in c if p != v]] + cells[ci + 1:]


def hypergraph_automorphisms(
    n: int,
    families: Sequence[Sequence[int]],
    *,
    cap: int = DEFAULT_DEGREE_CAP,
    cells: list[list[int]] | None = None,
) -> tuple[list[tuple], int]:
    """Generators (0-based tuples) and order of the group preserving each family.

    ``families`` are lists of bitmasks; each family (color) is preserved
    separately. ``cells`` optionally gives an initial ordered partition that
    must also be preserved cell by cell.
    """
    if n > cap:
        raise DegreeCapError(f"degree {n} above the cap {cap} of the absolute engine")
    hg = _Hypergraph(n, families)
    start = cells if cells is not None else [list(range(n))]
    gens: list[tuple] = []
    gen_depth: list[int] = []
    first_traces: list[int] = []
    first_leaf: list[int] = []

    def leaf_map(leaf: list[list[int]]) -> tuple:
        g = [0] * n
        for a, b in zip(first_leaf, leaf):
            g[a[0]] = b[0]
        return tuple(g)

    def explore(cells_, depth):
        cells_, tr = hg.refine(cells_)
        if depth >= len(first_traces) or tr != first_traces[depth]:
            return None
        ti = _target(cells_)
        if ti < 0:
            g = leaf_map(cells_)
            return g if hg.is_automorphism(g) else None
        for v in sorted(cells_[ti]):
            r = explore(_individualize(cells_, ti, v), depth + 1)
            if r is not None:
                return r
        return None

    def first_path(cells_, depth):
        nonlocal first_leaf
        cells_, tr = hg.refine(cells_)
        first_traces.append(tr)
        ti = _target(cells_)
        if ti < 0:
            first_leaf = [c[:] for c in cells_]
            return
        cell = sorted(cells_[ti])
        v0 = cell[0]
        first_path(_individualize(cells_, ti, v0), depth + 1)
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

        for g, d in zip(gens, gen_depth):
            if d > depth:
                absorb(g)
        for v in cell[1:]:
            r = find(v)
            if r == find(v0) or failed[r]:
                continue
            g = explore(_individualize(cells_, ti, v), depth + 1)
            if g is None:
                failed[find(v)] = True
                continue
            gens.append(g)
            gen_depth.append(depth + 1)
            absorb(g)

    first_path([c[:] for c in start], 0)
    ident = tuple(range(n))
    gens = [g for g in gens if g != ident]
    order = schreier_sims(gens, n).order if gens else 1
    return gens, order
