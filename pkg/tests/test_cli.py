from __future__ import annotations

import io
import json
from fractions import Fraction

import pytest

from heartfan.category import dataset_path
from heartfan.cli import UsageError, main, parse_charge_flag, parse_vector


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def test_flag_grammar():
    assert parse_vector("-1, 1/2") == (Fraction(-1), Fraction(1, 2))
    assert [len(r) for r in parse_charge_flag("-1,0;0,1")] == [2, 2]
    with pytest.raises(UsageError):
        parse_vector("1,x")
    with pytest.raises(UsageError):
        parse_charge_flag("1,0")


# --- compute --------------------------------------------------------------


def test_compute_heartfan(capsys):
    code, doc, _ = run_json(capsys, "compute", "heartfan", "--dataset", "a2")
    assert code == 0
    assert len(doc["cones"]) == 11
    assert doc["metadata"]["kind"] == "heartfan"


def test_compute_family(capsys):
    code, doc, _ = run_json(capsys, "compute", "family", "--kind", "kronecker", "--arrows", "3", "--depth", "4")
    assert code == 0
    assert doc["metadata"]["truncated"]
    assert [r["rational"] for r in doc["metadata"]["limit_rays"]] == [False, False]


def test_compute_walls(capsys):
    code, rep, _ = run_json(capsys, "compute", "walls", "--dataset", "a2")
    assert code == 0
    assert len(rep["chambers"]) == 5
    assert rep["stability_support"]["nonempty_semistable"] == 0
    assert len(rep["walls"]) + len(rep["other_stability_spaces"]) == 3


@pytest.mark.parametrize("what", ["cofan", "gfan", "stabilityfan"])
def test_compute_other_documents(capsys, what):
    code, doc, _ = run_json(capsys, "compute", what, "--dataset", "a2")
    assert code == 0 and doc["rank"] == 2


def test_compute_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["compute", "heartfan", "--dataset", "tube2_d4", "--out", str(a)]) == 0
    assert main(["compute", "heartfan", "--dataset", "tube2_d4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


# --- query ----------------------------------------------------------------


def test_query_semistable(capsys):
    code, rep, _ = run_json(capsys, "query", "semistable", "--dataset", "a2", "--v=-1,1")
    assert code == 0
    assert rep["semistable"] == [{"object": "E", "stable": True}]


def test_query_slice(capsys):
    code, rep, _ = run_json(capsys, "query", "slice", "--dataset", "a2", "--charge=-1,0;0,1")
    assert code == 0
    assert [(p["phase"], p["objects"]) for p in rep["phases"]] == [("1/2", ["S2"]), ("3/4", ["E"]), ("1", ["S1"])]


def test_query_support(capsys):
    code, rep, _ = run_json(capsys, "query", "support", "--dataset", "a2", "--v=0,-1")
    assert code == 0
    assert rep["cone"] == {"rays": [[0, -1]], "lineality": []}
    assert "T=<S1>;F=<S2>" in rep["heart_cones_containing"]


def test_query_support_miss_exits_one(capsys):
    code, rep, _ = run_json(capsys, "query", "support", "--kind", "projective_line", "--v=0,-1")
    assert code == 1
    assert not rep["in_support"] and rep["truncated"]


def test_query_dkp_hearts_stabspace(capsys):
    code, rep, _ = run_json(capsys, "query", "dkp", "--dataset", "a2", "--v=0,-1")
    assert code == 0 and rep["kernel"] == ["S1"]
    code, rep, _ = run_json(capsys, "query", "hearts", "--dataset", "a2", "--v=0,0")
    assert code == 0 and rep["count"] == 5
    code, rep, _ = run_json(capsys, "query", "stabspace", "--dataset", "a2", "--object", "E")
    assert code == 0 and rep["stability_space"]["rays"] == [[-1, 1]]


def test_query_bad_charge(capsys):
    code, out, err = run(capsys, "query", "slice", "--dataset", "a2", "--charge=1,0;0,1")
    assert code == 1 and "ChargeError" in err and not out


# --- verify and render ----------------------------------------------------


@pytest.mark.parametrize("name", ["a2", "semisimple2", "tube2_d4", "kronecker2_d5", "kronecker3_d5"])
def test_verify_shipped_datasets(capsys, tmp_path, name):
    p = tmp_path / "fan.json"
    assert main(["compute", "heartfan", "--dataset", name, "--out", str(p)]) == 0
    code, rep, _ = run_json(capsys, "verify", str(p))
    assert code == 0 and rep["ok"]
    expected = "pass" if name in ("a2", "semisimple2") else "skipped"
    assert rep["checks"]["completeness"] == expected


def test_verify_family_skips_completeness(capsys, tmp_path):
    p = tmp_path / "fam.json"
    assert main(["compute", "family", "--kind", "projective_line", "--out", str(p)]) == 0
    code, rep, _ = run_json(capsys, "verify", str(p))
    assert code == 0 and rep["checks"]["completeness"] == "skipped"


def test_verify_corrupted_document(capsys, tmp_path):
    p = tmp_path / "fan.json"
    assert main(["compute", "heartfan", "--dataset", "a2", "--out", str(p)]) == 0
    doc = json.loads(p.read_text())
    for c in doc["cones"]:
        if c["rays"] == [[-1, 1], [0, 1]]:
            c["rays"] = [[-1, 1], [1, 1]]
    p.write_text(json.dumps(doc))
    code, rep, _ = run_json(capsys, "verify", str(p))
    assert code == 1 and not rep["ok"]
    assert any("meet in" in v for v in rep["violations"])


def test_render(capsys, tmp_path, monkeypatch):
    p = tmp_path / "fan.json"
    assert main(["compute", "heartfan", "--dataset", "a2", "--out", str(p)]) == 0
    code, out, _ = run(capsys, "render", str(p))
    assert code == 0 and out.count("<polygon") == 5
    monkeypatch.setattr("sys.stdin", io.StringIO(p.read_text()))
    code, again, _ = run(capsys, "render", "-")
    assert code == 0 and again == out


def test_render_rank_error(capsys, tmp_path):
    p = tmp_path / "fan.json"
    p.write_text('{"format": "heartfan-fan/1", "rank": 3, "cones": [], "faces": []}')
    code, _, err = run(capsys, "render", str(p))
    assert code == 1 and "UnsupportedRankError" in err


# --- exit codes and data lookup -------------------------------------------


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "compute", "heartfan")[0] == 2
    assert run(capsys, "query", "semistable", "--dataset", "a2")[0] == 2
    assert run(capsys, "query", "semistable", "--dataset", "a2", "--v=a")[0] == 2
    assert run(capsys, "query", "stabspace", "--dataset", "a2", "--object", "Q")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["compute", "nothing"])
    assert e.value.code == 2


def test_runtime_errors_exit_one(capsys, tmp_path):
    assert run(capsys, "compute", "heartfan", "--dataset", "missing")[0] == 1
    assert run(capsys, "verify", str(tmp_path / "absent.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "verify", str(bad))[0] == 1
    assert run(capsys, "compute", "family", "--kind", "torus")[0] == 1


def test_data_directory_from_environment(capsys, tmp_path, monkeypatch):
    doc = json.loads(dataset_path("a2").read_text())
    doc["name"] = "renamed"
    (tmp_path / "custom.json").write_text(json.dumps(doc))
    monkeypatch.setenv("HEARTFAN_DATA", str(tmp_path))
    code, doc, _ = run_json(capsys, "compute", "heartfan", "--dataset", "custom")
    assert code == 0 and doc["metadata"]["dataset"] == "renamed"
    # built-in datasets stay reachable
    assert run(capsys, "compute", "heartfan", "--dataset", "tube2_d4")[0] == 0
