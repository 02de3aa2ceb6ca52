"""Brute-force oracles, independent of the chain, search and refinement code.

Everything here works on 0-based image tuples and enumerates elements or
whole symmetric groups directly, so it is only usable at tiny degrees.
"""

from __future__ import annotations

import itertools


def mul(a, b):
    # left to right: first a, then b
    return tuple(b[x] for x in a)


def cycles_to_tuple(cycles: list[tuple[int, ...]], n: int) -> tuple:
    arr = list(range(n))
    for c in cycles:
        for i, p in enumerate(c):
            arr[p - 1] = c[(i + 1) % len(c)] - 1
    return tuple(arr)


def elements(gens, n: int) -> set[tuple]:
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def set_image(g, s: frozenset) -> frozenset:
    return frozenset(g[p - 1] + 1 for p in s)


def stabilizer_size(els, s: frozenset) -> int:
    return sum(1 for g in els if set_image(g, s) == s)


def orbit(els, s: frozenset) -> set[frozenset]:
    return {set_image(g, s) for g in els}


def family_automorphism_count(n: int, family: list[frozenset]) -> int:
    fam = set(family)
    return sum(1 for g in itertools.permutations(range(n))
               if all(set_image(g, s) in fam for s in fam))


def all_subsets(n: int):
    for k in range(n + 1):
        for c in itertools.combinations(range(1, n + 1), k):
            yield frozenset(c)


def orbit_closure_order(els, n: int) -> int:
    label = {}
    for s in all_subsets(n):
        if s not in label:
            for t in orbit(els, s):
                label[t] = s
    return sum(1 for g in itertools.permutations(range(n))
               if all(label[set_image(g, s)] == label[s] for s in label))


def regular_sizes(els, n: int) -> set[int]:
    return {len(s) for s in all_subsets(n) if stabilizer_size(els, s) == 1}


def distinguishing_number(els, n: int) -> int:
    for d in range(1, n + 1):
        for colours in itertools.product(range(d), repeat=n):
            if all(g == tuple(range(n)) or any(colours[g[i]] != colours[i] for i in range(n)) for g in els):
                return d
    return n
