"""Named groups: printed generator sets plus a small grammar of builders.

Keys resolve in this order:

* catalog entries and aliases shipped in ``data/catalog.json``;
* ``S5``, ``A7``, ``C4``, ``D5``, ``K4`` with an optional ``@n`` matching the
  natural degree (``A5@5``);
* ``X^(r)`` for parallel multiples, ``X+I2`` for added fixed points and
  ``X+Y`` for direct sums of resolvable keys.

Points of a second (third) copy of a domain are renumbered ``i -> n + i``
(``2n + i``).
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from .builders import (
    alternating_group,
    add_fixed_points,
    coset_action,
    cyclic_group,
    dihedral_group,
    direct_sum,
    klein_four,
    on_k_subsets,
    parallel_multiple,
    symmetric_group,
    IsoMap,
)
from .group import PermGroup
from .perm import PointSet, from_cycles

__all__ = [
    "UnknownGroupError",
    "catalog_group",
    "catalog_entry",
    "catalog_keys",
    "catalog_manifest",
    "group_from_json",
    "group_to_json",
    "load_group",
    "save_group",
    "parallel_iso",
    "entry_set",
    "no_regular_set_primitive_keys",
]


class UnknownGroupError(KeyError):
    pass


@lru_cache(maxsize=1)
def _data() -> dict:
    text = resources.files("permrel").joinpath("data/catalog.json").read_text()
    return json.loads(text)


def group_from_json(data: dict) -> PermGroup:
    n = int(data["degree"])
    gens = [from_cycles(c, n) for c in data.get("generators", [])]
    return PermGroup(gens, n, name=data.get("name"), order=data.get("order"))


def group_to_json(G: PermGroup, name: str | None = None) -> dict:
    out: dict[str, Any] = {}
    if name or G.name:
        out["name"] = name or G.name
    out["degree"] = G.degree
    out["generators"] = [g.to_cycles() for g in G.generators if not g.is_identity()]
    return out


def load_group(path: str | Path) -> PermGroup:
    return group_from_json(json.loads(Path(path).read_text()))


def save_group(G: PermGroup, path: str | Path, name: str | None = None) -> None:
    Path(path).write_text(json.dumps(group_to_json(G, name), indent=1) + "\n")


def _canonical(name: str) -> str:
    return _data()["aliases"].get(name, name)


def catalog_keys() -> list[str]:
    d = _data()
    return sorted(list(d["groups"]) + list(d["derived"]))


def catalog_entry(name: str) -> dict:
    """Metadata of a shipped entry (generators, order, sets, structure)."""
    d = _data()
    key = _canonical(name)
    if key in d["groups"]:
        return dict(d["groups"][key], key=key)
    if key in d["derived"]:
        return dict(d["derived"][key], key=key)
    raise UnknownGroupError(name)


def no_regular_set_primitive_keys() -> list[str]:
    """The fourteen primitive simple groups without a regular set."""
    return [k for k, e in _data()["groups"].items() if e.get("family") == "no-regular-set-primitive"]


def entry_set(name: str, field: str) -> PointSet | None:
    """A point set stored with an entry; ``"complement"`` refers to the defining set."""
    e = catalog_entry(name)
    v = e.get(field)
    if v is None:
        return None
    G = catalog_group(name)
    if v == "complement":
        return entry_set(name, "defining_set").complement()
    return PointSet.of(v, G.degree)


_BUILDERS = {"S": symmetric_group, "A": alternating_group, "C": cyclic_group, "D": dihedral_group}


def _split_top(name: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in name:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


@lru_cache(maxsize=256)
def catalog_group(name: str) -> PermGroup:
    """Resolve a catalog key to a group (cached; groups are immutable)."""
    d = _data()
    key = _canonical(name.strip())
    if key in d["groups"]:
        e = d["groups"][key]
        return group_from_json({"name": key, **e})
    if key in d["derived"]:
        return _derived(key, d["derived"][key])
    m = re.fullmatch(r"([SACD])(\d+)(?:@(\d+))?", key)
    if m:
        n = int(m.group(2))
        if m.group(3) and int(m.group(3)) != n:
            raise UnknownGroupError(name)
        G = _BUILDERS[m.group(1)](n)
        G.name = key
        return G
    if key in ("K4", "K4@4"):
        return klein_four()
    if key in ("I1", "I"):
        return PermGroup.trivial(1)
    m = re.fullmatch(r"(.+)\^\((\d+)\)", key)
    if m:
        G = parallel_multiple(catalog_group(m.group(1)), int(m.group(2)))
        G.name = key
        return G
    parts = _split_top(key, "+")
    if len(parts) > 1:
        G = catalog_group(parts[0])
        for p in parts[1:]:
            f = re.fullmatch(r"I(\d*)", p)
            if f:
                G = add_fixed_points(G, int(f.group(1) or 1))
            else:
                G = direct_sum(G, catalog_group(p))
        G.name = key
        return G
    raise UnknownGroupError(name)


def _derived(key: str, e: dict) -> PermGroup:
    kind = e["kind"]
    if kind == "ksubsets":
        G = on_k_subsets(catalog_group(e["of"]), e["k"])
    elif kind == "multiple":
        G = parallel_multiple(catalog_group(e["of"]), e["r"])
    elif kind == "coset":
        big = catalog_group(e["G"])
        H = e["H"]
        sub = catalog_group(H) if isinstance(H, str) else group_from_json(H)
        G, _ = coset_action(big, sub)
    else:
        raise ValueError(f"unknown derived kind {kind!r}")
    G.name = key
    return G


def parallel_iso(name: str) -> IsoMap:
    """The isomorphism between the two constituents of a shipped parallel sum."""
    e = catalog_entry(name)
    st = e.get("structure")
    if not st or st.get("kind") != "parallel":
        raise ValueError(f"{name} is not stored as a parallel sum")
    G = catalog_group(name)
    (a1, b1), (a2, b2) = st["domains"][:2]
    H = G.restrict(list(range(a1, b1 + 1)))
    K = G.restrict(list(range(a2, b2 + 1)))
    return IsoMap(H, K, list(K.generators))


def catalog_manifest() -> list[dict]:
    """One row per shipped key: degree, order, kind."""
    d = _data()
    rows = []
    for k in catalog_keys():
        e = d["groups"].get(k) or d["derived"][k]
        rows.append({
            "key": k,
            # derived entries are built on demand to learn their degree
            "degree": e["degree"] if "degree" in e else catalog_group(k).degree,
            "order": e.get("order"),
            "kind": (e.get("structure") or {}).get("kind", e.get("kind", "generators")),
        })
    return rows
