"""Claim records and the built-in verification suites.

A claim pairs inputs (catalog keys, point sets) with an expected outcome;
running it fills in the observed outcome and a status. Claims above the
selected budget class are skipped, never guessed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .bgr import in_bgr, in_bgr_k_bruteforce
from .builders import parallel_multiple
from .catalog import catalog_entry, catalog_group, entry_set, no_regular_set_primitive_keys
from .classify import classify_simple
from .perm import PointSet
from .regular import is_regular_set, regular_set_sizes
from .relations import orbit_of_set, set_transitive, symmetry_group_in, k_homogeneous

__all__ = [
    "BUDGETS",
    "ClaimRecord",
    "ClaimParseError",
    "SUITES",
    "load_claims",
    "run_claims",
    "suite_claims",
]

BUDGETS = ("fast", "standard", "deep")


class ClaimParseError(ValueError):
    pass


@dataclass
class ClaimRecord:
    claim_id: str
    tag: str
    check: str
    inputs: dict
    expected: Any
    budget: str = "fast"
    observed: Any = None
    status: str = "pending"
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "tag": self.tag,
            "check": self.check,
            "inputs": self.inputs,
            "budget": self.budget,
            "expected": self.expected,
            "observed": self.observed,
            "status": self.status,
            "detail": self.detail,
        }


# ---------------------------------------------------------------- checks


def _set(inputs: dict, degree: int, key: str = "set") -> PointSet:
    return PointSet.of(inputs[key], degree)


def _check_regular_set(inp: dict):
    G = catalog_group(inp["group"])
    return is_regular_set(G, _set(inp, G.degree))


def _check_in_bgr(inp: dict):
    return in_bgr(catalog_group(inp["group"]))


def _check_bgr_k(inp: dict):
    w = in_bgr_k_bruteforce(catalog_group(inp["group"]), int(inp["k"]))
    return w is not None


def _check_set_transitive(inp: dict):
    return set_transitive(catalog_group(inp["group"]))


def _check_k_homogeneous(inp: dict):
    return k_homogeneous(catalog_group(inp["group"]), int(inp["k"]))


def _check_orbit_in_overgroup(inp: dict):
    G = catalog_group(inp["group"])
    over = catalog_group(inp["overgroup"])
    R = orbit_of_set(G, _set(inp, G.degree))
    return symmetry_group_in(over, R, known=G).order()


def _check_regular_sizes(inp: dict):
    return sorted(regular_set_sizes(catalog_group(inp["group"])))


def _check_classify(inp: dict):
    v = classify_simple(catalog_group(inp["group"]), name=inp["group"], witnesses="none")
    return {"bgr2": v.bgr2, "has_regular_set": v.has_regular_set}


CHECKS: dict[str, Callable[[dict], Any]] = {
    "regular_set": _check_regular_set,
    "in_bgr": _check_in_bgr,
    "bgr_k": _check_bgr_k,
    "set_transitive": _check_set_transitive,
    "k_homogeneous": _check_k_homogeneous,
    "orbit_in_overgroup": _check_orbit_in_overgroup,
    "regular_sizes": _check_regular_sizes,
    "classify": _check_classify,
}


# ---------------------------------------------------------------- suites


def _table1() -> list[ClaimRecord]:
    out = []
    for key in no_regular_set_primitive_keys():
        e = catalog_entry(key)
        H = catalog_group(key)
        sq = f"{key}^(2)"
        deep = H.degree >= 22
        out.append(ClaimRecord(
            f"table1:{key}", "parallel-square-regular-set", "regular_set",
            {"group": sq, "set": e["parallel_square_regular_set"]}, True,
            "standard" if deep else "fast"))
    return out


def _table2() -> list[ClaimRecord]:
    out = []
    keys = ["L2(5)||A5", "L2(7)||L3(2)", "L2(9)||A6", "M11@12||M11", "L4(2)||A8"]
    for key in keys:
        e = catalog_entry(key)
        G = catalog_group(key)
        budget = "fast" if G.degree <= 16 else "standard"
        out.append(ClaimRecord(
            f"pairs:{key}:defining", "pair-defining-orbit", "orbit_in_overgroup",
            {"group": key, "overgroup": e["overgroup"], "set": e["defining_set"]}, e["order"], budget))
        y = entry_set(key, "regular_set")
        out.append(ClaimRecord(
            f"pairs:{key}:regular", "pair-regular-set", "regular_set",
            {"group": key, "set": y.points()}, True, budget))
    return out


def _negatives() -> list[ClaimRecord]:
    out = []
    for n in range(3, 9):
        out.append(ClaimRecord(f"negatives:A{n}", "alternating-not-relation-group", "in_bgr",
                               {"group": f"A{n}"}, False))
    for n in (3, 4, 5):
        out.append(ClaimRecord(f"negatives:C{n}", "small-cyclic-not-relation-group", "in_bgr",
                               {"group": f"C{n}"}, False))
    out.append(ClaimRecord("negatives:PSL28:set-transitive", "psl28-set-transitive", "set_transitive",
                           {"group": "PSL28@9"}, True))
    out.append(ClaimRecord("negatives:PSL28:in_bgr", "psl28-not-relation-group", "in_bgr",
                           {"group": "PSL28@9"}, False))
    out.append(ClaimRecord("negatives:K4:k2", "klein-four-two-valued", "bgr_k", {"group": "K4", "k": 2}, False))
    out.append(ClaimRecord("negatives:K4:k3", "klein-four-three-valued", "bgr_k", {"group": "K4", "k": 3}, True))
    out.append(ClaimRecord("negatives:C5+I1", "cyclic-five-with-fixed-point", "in_bgr",
                           {"group": "C5+I1"}, False))
    return out


SUITES: dict[str, Callable[[], list[ClaimRecord]]] = {
    "table1": _table1,
    "table2": _table2,
    "negatives": _negatives,
}


def suite_claims(name: str) -> list[ClaimRecord]:
    if name not in SUITES:
        raise ClaimParseError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    return SUITES[name]()


def load_claims(path: str | Path) -> list[ClaimRecord]:
    """Claims from a JSON file: a list of objects with id, check, inputs, expected."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ClaimParseError(str(e)) from e
    if isinstance(data, dict):
        data = data.get("claims", [])
    out = []
    for i, c in enumerate(data):
        try:
            rec = ClaimRecord(str(c["id"]), c.get("tag", ""), c["check"], dict(c["inputs"]), c["expected"],
                              c.get("budget", "fast"))
        except (KeyError, TypeError) as e:
            raise ClaimParseError(f"claim {i}: missing field {e}") from e
        if rec.check not in CHECKS:
            raise ClaimParseError(f"claim {rec.claim_id}: unknown check {rec.check!r}")
        if rec.budget not in BUDGETS:
            raise ClaimParseError(f"claim {rec.claim_id}: unknown budget {rec.budget!r}")
        out.append(rec)
    return out


def run_claims(claims: list[ClaimRecord], budget: str = "fast") -> list[ClaimRecord]:
    """Run every claim within the budget; order of the output is by claim id."""
    limit = BUDGETS.index(budget)
    for c in claims:
        if BUDGETS.index(c.budget) > limit:
            c.status = "skipped-budget"
            continue
        try:
            c.observed = CHECKS[c.check](c.inputs)
        except Exception as e:  # a claim that cannot be evaluated is refuted, with the reason
            c.observed = None
            c.status = "refuted"
            c.detail = f"{type(e).__name__}: {e}"
            continue
        c.status = "verified" if c.observed == c.expected else "refuted"
    return sorted(claims, key=lambda c: c.claim_id)
