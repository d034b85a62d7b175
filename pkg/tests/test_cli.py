from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest

from functorlab import cli

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def _base(**extra) -> dict:
    inst = {
        "version": 1,
        "field": "GF(2)",
        "rings": {"Z2": [2]},
        "categories": {"B": {"ring": "Z2", "N": 1}},
        "functors": {"P1": {"op": "standard_projective", "cat": "B", "object": 1}},
        "jobs": [],
    }
    inst.update(extra)
    return inst


def test_shipped_instances_validate():
    for path in sorted(INSTANCES.glob("*.json")):
        inst = cli.load_instance(path)
        jsonschema.validate(inst, cli.SCHEMA)


def test_load_instance_errors(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json", encoding="utf-8")
    with pytest.raises(cli.InstanceError):
        cli.load_instance(bad_json)
    no_jobs = tmp_path / "nojobs.json"
    no_jobs.write_text(json.dumps({"version": 1, "field": "GF(2)"}), encoding="utf-8")
    with pytest.raises(cli.InstanceError, match="schema"):
        cli.load_instance(no_jobs)
    with pytest.raises(cli.InstanceError):
        cli.load_instance(tmp_path / "missing.json")


def test_environment_rejects_bad_names():
    with pytest.raises(cli.InstanceError, match="unknown ring"):
        cli.Environment(_base(categories={"B": {"ring": "nope", "N": 1}}, functors={}))
    with pytest.raises(cli.InstanceError, match="unknown functor"):
        cli.Environment(_base(functors={"D": {"op": "dual", "arg": "P9"}}))
    with pytest.raises(cli.InstanceError, match="object"):
        cli.Environment(_base(functors={"P": {"op": "standard_projective", "cat": "B", "object": 5}}))
    with pytest.raises(cli.InstanceError, match="field"):
        cli.Environment(_base(field="ZZ"))


def test_exit_code_precedence():
    assert cli.exit_code([]) == cli.EXIT_OK
    assert cli.exit_code(["computed", "confirmed"]) == cli.EXIT_OK
    assert cli.exit_code(["inconclusive-sizing", "hypotheses-unmet"]) == cli.EXIT_UNMET
    assert cli.exit_code(["hypotheses-unmet", "refuted-at-instance"]) == cli.EXIT_REFUTED
    assert cli.exit_code(["refuted-at-instance", "invalid"]) == cli.EXIT_PARSE
    assert cli.exit_code(["inconclusive-sizing"]) == cli.EXIT_SIZING


def test_estimate_forecasts_bar_ranks():
    inst = _base(jobs=[{"kind": "ext", "left": "P1", "right": "P1", "n_max": 2},
                       {"kind": "check:pirashvili", "F": "P1", "reduced": ["P1"]}])
    out = cli.estimate(inst)
    fc = out["jobs"][0]["forecast"]
    assert fc["degrees"] == [0, 3] and fc["bar_ranks"][0] == 1 + 2 * 2
    assert out["jobs"][1]["forecast"] is None


def test_unknown_job_and_theorem_are_invalid(tmp_path):
    inst = _base(jobs=[{"kind": "frobnicate"}, {"kind": "check:nonsense"}])
    assert cli.run(inst, tmp_path) == cli.EXIT_PARSE
    for i in range(2):
        body = json.loads((tmp_path / f"job_{i:03d}.json").read_text())
        assert body["status"] == "invalid"


def test_cap_turns_jobs_inconclusive(tmp_path):
    inst = _base(jobs=[{"kind": "ext", "left": "P1", "right": "P1", "n_max": 3}])
    assert cli.run(inst, tmp_path, cap_bytes=1) == cli.EXIT_SIZING
    body = json.loads((tmp_path / "job_000.json").read_text())
    assert body["status"] == "inconclusive-sizing" and body["estimates"]["bytes"] > 1


def test_run_writes_bundle(tmp_path):
    inst = cli.load_instance(INSTANCES / "simplicial.json")
    assert cli.run(inst, tmp_path) == cli.EXIT_OK
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["instance_sha256"] == cli.instance_hash(inst)
    assert [j["file"] for j in report["jobs"]] == [f"job_{i:03d}.json" for i in range(5)]
    homotopy = json.loads((tmp_path / "job_002.json").read_text())
    assert homotopy["result"]["groups"] == {"0": "Z", "1": "Z/2", "2": "0", "3": "Z/2"}
    assert (tmp_path / "timing.json").exists() and (tmp_path / "report.txt").exists()


def test_main_commands(tmp_path, capsys):
    assert cli.main(["schema"]) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["type"] == "object"
    assert cli.main(["estimate", str(INSTANCES / "empty.json")]) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["jobs"] == []
    assert cli.main(["run", str(INSTANCES / "excision_z4_z2_f2.json"), "--out", str(tmp_path)]) == cli.EXIT_UNMET
    assert "hypotheses-unmet" in capsys.readouterr().out
    bad = tmp_path / "bad.json"
    bad.write_text("[]", encoding="utf-8")
    assert cli.main(["run", str(bad), "--out", str(tmp_path / "o")]) == cli.EXIT_PARSE


def test_estimate_flags_large_bar_complex():
    inst = {
        "version": 1,
        "field": "GF(2)",
        "rings": {"F2": [2]},
        "categories": {"C": {"ring": "F2", "N": 2}},
        "functors": {"P2": {"op": "standard_projective", "cat": "C", "object": 2}},
        "jobs": [{"kind": "ext", "left": "P2", "right": "P2", "n_max": 4}],
    }
    fc = cli.estimate(inst)["jobs"][0]["forecast"]
    assert fc["over_cap"] and max(fc["bar_ranks"]) > fc["rank_cap"]


def test_cap_environment_variable(monkeypatch, tmp_path):
    from functorlab.category import enumeration_cap

    monkeypatch.setenv("FUNCTORLAB_CAP", "10")
    assert enumeration_cap() == 10
    inst = _base(categories={"B": {"ring": "Z2", "N": 3}}, functors={},
                 jobs=[{"kind": "check:em_vanishing", "A": [2], "n": 1, "T": 3}])
    assert cli.run(inst, tmp_path) == cli.EXIT_SIZING
