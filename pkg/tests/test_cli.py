from __future__ import annotations

import json

import pytest

from permrel.bgr import q_relation
from permrel.catalog import catalog_group
from permrel.claims import load_claims, run_claims, suite_claims, ClaimParseError
from permrel.cli import main
from permrel.relations import UnorderedRelation, orbit_of_set, save_relation
from permrel.perm import PointSet


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("suite,count", [("table1", 14), ("table2", 10), ("negatives", 14)])
def test_builtin_suites_fast(capsys, suite, count):
    code, out, _ = _run(capsys, "verify", suite, "--json")
    data = json.loads(out)
    assert code == 0
    assert len(data["claims"]) == count
    assert data["summary"]["refuted"] == 0
    assert all(c["tag"] for c in data["claims"])
    # the fast suite skips what it cannot afford, never guesses
    assert all(c["status"] in ("verified", "skipped-budget") for c in data["claims"])


def test_report_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    _run(capsys, "verify", "negatives", "--report", str(a))
    _run(capsys, "verify", "negatives", "--report", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_refuted_claim_exits_one(tmp_path, capsys):
    path = tmp_path / "claims.json"
    path.write_text(json.dumps([{"id": "wrong", "check": "in_bgr", "inputs": {"group": "A5"}, "expected": True}]))
    code, out, _ = _run(capsys, "verify", str(path))
    assert code == 1 and "refuted" in out


def test_bad_claim_file_exits_two(tmp_path, capsys):
    path = tmp_path / "claims.json"
    path.write_text("[{\"id\": 1}]")
    code, _, err = _run(capsys, "verify", str(path))
    assert code == 2 and "ClaimParseError" in err
    with pytest.raises(ClaimParseError):
        load_claims(path)


def test_unknown_group_exits_two(capsys):
    code, _, err = _run(capsys, "classify", "Z42")
    assert code == 2


def test_non_simple_exits_two(capsys):
    code, _, err = _run(capsys, "classify", "S5")
    assert code == 2 and "NotSimpleError" in err


@pytest.mark.parametrize("key,bgr2,regular", [("A5@5", False, False), ("PSL28@9", False, False), ("15T5", True, True)])
def test_classify_examples(capsys, key, bgr2, regular):
    code, out, _ = _run(capsys, "classify", key, "--json")
    d = json.loads(out)
    assert code == 0
    assert (d["bgr2"], d["has_regular_set"]) == (bgr2, regular)


def test_classify_text_mode(capsys):
    code, out, _ = _run(capsys, "classify", "A6||A6_psi")
    assert code == 0 and "rule: alternating-six-twisted" in out


def test_symmetry_group_examples(tmp_path, capsys):
    T = catalog_group("14T10")
    B = UnorderedRelation.from_sets([[i, i + 7] for i in range(1, 8)], 14)
    rel = tmp_path / "t.json"
    save_relation(B | orbit_of_set(T, PointSet.of([1, 2, 3, 4], 14)), rel)
    code, out, _ = _run(capsys, "symmetry-group", str(rel), "--json")
    assert code == 0 and json.loads(out)["order"] == 168
    code, out, _ = _run(capsys, "symmetry-group", str(rel), "--overgroup", "S14", "--json")
    assert json.loads(out)["order"] == 168 and json.loads(out)["method"] == "relative"
    empty = tmp_path / "e.json"
    save_relation(UnorderedRelation(6), empty)
    code, out, _ = _run(capsys, "symmetry-group", str(empty), "--json")
    assert json.loads(out)["order"] == 720
    q = tmp_path / "q.json"
    save_relation(q_relation(5, 2), q)
    code, out, _ = _run(capsys, "symmetry-group", str(q), "--json")
    assert json.loads(out)["order"] == 120


def test_catalog_census_closure_distinguishing(capsys):
    code, out, _ = _run(capsys, "catalog")
    assert code == 0 and "M24@24" in out
    code, out, _ = _run(capsys, "catalog", "L3(2)@7", "--json")
    assert json.loads(out)["order"] == 168
    code, out, _ = _run(capsys, "census", "15T5")
    assert "regular sizes: [3, 4, 5, 6, 7, 8, 9, 10, 11, 12]" in out
    code, out, _ = _run(capsys, "census", "A5", "-k", "2", "--json")
    assert json.loads(out)["rows"][0]["orbit_count"] == 1
    code, out, _ = _run(capsys, "closure", "C5", "--json")
    assert json.loads(out)["order"] == 10 and not json.loads(out)["closed"]
    code, out, _ = _run(capsys, "distinguishing", "M11@12", "--json")
    assert json.loads(out)["distinguishing_number"] == 3


def test_run_claims_sorted_and_budgeted():
    claims = run_claims(suite_claims("table1"), "fast")
    assert [c.claim_id for c in claims] == sorted(c.claim_id for c in claims)
    skipped = {c.claim_id for c in claims if c.status == "skipped-budget"}
    assert skipped == {"table1:M22@22", "table1:M23@23", "table1:M24@24"}
