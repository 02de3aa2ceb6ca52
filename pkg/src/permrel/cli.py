"""Command-line interface: ``permrel <command> ...``.

Exit codes: 0 success, 1 a claim was refuted or a negative answer was
requested to fail, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import kernels
from .bgr import orbit_closure
from .catalog import UnknownGroupError, catalog_group, catalog_manifest, group_to_json, load_group
from .classify import NotSimpleError, classify_simple
from .claims import BUDGETS, ClaimParseError, load_claims, run_claims, suite_claims, SUITES
from .perm import CycleParseError
from .regular import BudgetExceededError, DEFAULT_BUDGET, distinguishing_number, distinguishing_partition, full_census
from .relations import load_relation, symmetry_group_full, symmetry_group_in

EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2


def _group(spec: str):
    p = Path(spec)
    if p.suffix == ".json" and p.exists():
        return load_group(p)
    return catalog_group(spec)


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=1, sort_keys=True))
    else:
        print(text)


def _budget(args) -> str:
    return "deep" if args.deep else args.budget


def cmd_verify(args) -> int:
    if args.suite in SUITES:
        claims = suite_claims(args.suite)
    else:
        claims = load_claims(args.suite)
    budget = _budget(args)
    done = run_claims(claims, budget)
    counts = {s: sum(c.status == s for c in done) for s in ("verified", "refuted", "skipped-budget")}
    report = {"suite": args.suite, "budget": budget, "claims": [c.to_json() for c in done], "summary": counts}
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    lines = [f"{c.status:15s} {c.claim_id}" + (f"  ({c.detail})" if c.detail else "") for c in done]
    lines.append(f"verified {counts['verified']}, refuted {counts['refuted']}, skipped {counts['skipped-budget']}")
    _emit(args, report, "\n".join(lines))
    return EXIT_REFUTED if counts["refuted"] else EXIT_OK


def cmd_classify(args) -> int:
    G = _group(args.group)
    v = classify_simple(G, name=args.group, witnesses="deep" if args.deep else args.budget)
    d = v.to_json()
    text = [
        f"group {args.group}: degree {v.degree}, order {v.order}, fixed points {v.fixed_point_count}",
        f"core: {v.core_description['kind']}",
        f"relation group (two-valued): {v.bgr2}",
        f"symmetry group of some Boolean function: {v.bgr_any}",
        f"regular set: {v.has_regular_set}",
        f"rule: {v.rule_fired}",
        f"witness: {v.witness_status}",
    ]
    if v.witness_regular_set is not None:
        text.append(f"regular set witness: {v.witness_regular_set.points()}")
    text.extend(f"note: {n}" for n in v.notes)
    _emit(args, d, "\n".join(text))
    return EXIT_OK


def cmd_symmetry_group(args) -> int:
    R = load_relation(args.relation)
    if args.overgroup:
        H = symmetry_group_in(_group(args.overgroup), R)
        method = "relative"
    else:
        H = symmetry_group_full(R)
        method = "absolute"
    d = group_to_json(H)
    d["order"] = H.order()
    d["method"] = method
    _emit(args, d, f"order {H.order()} ({method})\n" + "\n".join(g.to_cycles() for g in H.generators))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.key:
        G = catalog_group(args.key)
        d = group_to_json(G, args.key)
        d["order"] = G.order()
        _emit(args, d, json.dumps(d, indent=1))
        return EXIT_OK
    rows = catalog_manifest()
    _emit(args, {"groups": rows}, "\n".join(f"{r['key']:22s} degree {r['degree']:3d}  order {r['order']}" for r in rows))
    return EXIT_OK


def cmd_census(args) -> int:
    G = _group(args.group)
    budget = DEFAULT_BUDGET if not args.deep else 1 << 30
    ks = range(G.degree + 1) if args.k is None else [args.k]
    c = full_census(G, ks, budget=budget)
    lines = [f"k={r.k:2d} orbits {r.orbit_count:6d} longest {r.max_orbit_length:8d} regular "
             + (str(r.witness.points()) if r.witness else "-") for r in c.rows]
    lines.append(f"regular sizes: {sorted(c.regular_sizes())}")
    _emit(args, c.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_closure(args) -> int:
    G = _group(args.group)
    C = orbit_closure(G)
    d = group_to_json(C)
    d.update(order=C.order(), group_order=G.order(), closed=C.order() == G.order())
    _emit(args, d, f"closure order {C.order()} (group order {G.order()}); "
                   f"{'orbit closed' if d['closed'] else 'not orbit closed'}")
    return EXIT_OK


def cmd_distinguishing(args) -> int:
    G = _group(args.group)
    d = distinguishing_number(G)
    parts = distinguishing_partition(G, d)
    data = {"distinguishing_number": d, "partition": [p.points() for p in parts]}
    _emit(args, data, f"D = {d}; partition {data['partition']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--deep", action="store_true", help="allow long sweeps (same as --budget=deep)")
    common.add_argument("--budget", choices=BUDGETS, default="fast")
    p = argparse.ArgumentParser(prog="permrel", description="Symmetry groups of Boolean functions",
                                parents=[common])
    p.add_argument("--version", action="version", version=f"permrel 0.1.0 ({kernels.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("verify", parents=[common], help="run a claim suite or claim file")
    s.add_argument("suite", help=f"one of {', '.join(SUITES)} or a claim JSON file")
    s.add_argument("--report", help="write the JSON report here")
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("classify", parents=[common], help="verdict for a simple group")
    s.add_argument("group", help="catalog key or group JSON file")
    s.set_defaults(func=cmd_classify)
    s = sub.add_parser("symmetry-group", parents=[common], help="symmetry group of a relation file")
    s.add_argument("relation")
    s.add_argument("--overgroup", help="search inside this group (catalog key or file)")
    s.set_defaults(func=cmd_symmetry_group)
    s = sub.add_parser("catalog", parents=[common], help="list shipped groups or dump one")
    s.add_argument("key", nargs="?")
    s.set_defaults(func=cmd_catalog)
    s = sub.add_parser("census", parents=[common], help="orbits on k-subsets")
    s.add_argument("group")
    s.add_argument("-k", type=int)
    s.set_defaults(func=cmd_census)
    s = sub.add_parser("closure", parents=[common], help="orbit closure on the power set")
    s.add_argument("group")
    s.set_defaults(func=cmd_closure)
    s = sub.add_parser("distinguishing", parents=[common], help="distinguishing number and partition")
    s.add_argument("group")
    s.set_defaults(func=cmd_distinguishing)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except (UnknownGroupError, ClaimParseError, CycleParseError, FileNotFoundError, json.JSONDecodeError,
            NotSimpleError, ValueError) as e:
        print(f"permrel: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as e:
        print(f"permrel: budget exceeded: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
