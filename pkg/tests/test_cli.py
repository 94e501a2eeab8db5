import json
import os
from pathlib import Path

import pytest

from divergent.harness import main

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# command -> extra flags; inputs live in data/<command>.json
RUNS = {
    "dominate": ["--horizon", "50"],
    "envelope": ["--horizon", "10"],
    "theorem2": [],
    "coverage": [],
    "probe-c": [],
    "adversary": ["--horizon", "64"],
    "theorem3": ["--depth", "25", "--log-form"],
    "remark": ["--hits", "20"],
    "wave": [],
    "demo-bump": ["--horizon", "128"],
}


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


@pytest.mark.parametrize("command", sorted(RUNS))
def test_golden(tmp_path, command):
    code, report = run(tmp_path, command, "--in", str(DATA / f"{command}.json"), *RUNS[command])
    assert code == 0
    assert all(c["passed"] for c in report["verification"])
    golden = GOLDEN / f"{command}.json"
    if os.environ.get("DIVERGENT_REGEN_GOLDEN"):
        golden.write_text(json.dumps(strip_timing(report), sort_keys=True, indent=2) + "\n")
    assert strip_timing(report) == json.loads(golden.read_text())


@pytest.mark.parametrize("command", sorted(RUNS))
def test_round_trip(tmp_path, command):
    code, report = run(tmp_path, command, "--in", str(DATA / f"{command}.json"), *RUNS[command])
    assert code == 0
    saved = tmp_path / "saved.json"
    saved.write_text(json.dumps(report))
    code, again = run(tmp_path, "verify", "--in", str(saved))
    assert code == 0
    assert again["outputs"]["verdicts_match"]
    assert again["verification"] == report["verification"]


def test_hand_checked_values(tmp_path):
    _, rep = run(tmp_path, "dominate", "--in", str(DATA / "dominate.json"), "--horizon", "6")
    # max of 2n, n^2 and [5,1,4,...] over members j <= n, plus one
    assert rep["outputs"]["dominator"]["prefix"] == [1, 3, 5, 10, 17, 26]
    _, rep = run(tmp_path, "theorem2", "--in", str(DATA / "theorem2.json"), "--horizon", "7")
    assert rep["outputs"]["terms"] == ["0/1", "1/1", "3/2", "2/1", "7/3", "8/3", "3/1"]
    _, rep = run(tmp_path, "coverage", "--in", str(DATA / "coverage.json"))
    assert [r["value"] for r in rep["outputs"]["values"]] == [1, 3, 5, 11, 21]


def test_inline_json_and_seed_echo(tmp_path):
    code, rep = run(tmp_path, "envelope", "--json", '{"function": {"kind": "prefix", "values": [2, 1, 3]}}',
                    "--horizon", "4", "--seed", "7")
    assert code == 0
    assert rep["outputs"]["envelope"] == [2, 2, 3, 3]
    assert rep["args"]["seed"] == 7


def test_exit_code_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"family": [\n')
    assert main(["adversary", "--in", str(bad)]) == 2
    assert "bad.json:2:1" in capsys.readouterr().err


def test_exit_code_schema(tmp_path, capsys):
    assert main(["theorem2", "--json", "{}"]) == 2
    assert "missing field 'g'" in capsys.readouterr().err
    assert main(["adversary", "--json", '{"family": [{"kind": "nope"}]}']) == 2
    assert "input.family[0]" in capsys.readouterr().err


def test_exit_code_capability(capsys):
    assert main(["coverage", "--json", '{"sequence": {"kind": "log", "x": "0/1"}, "indices": [1]}']) == 3
    assert "tail_gap_bound" in capsys.readouterr().err
    remark = {"open_set": {"stream": {"kind": "periodic", "cell": [{"lo": "0", "hi": "1/10"}], "period": "3"}},
              "sequence": {"kind": "arith", "step": "1"}}
    assert main(["remark", "--json", json.dumps(remark), "--hits", "2"]) == 3
    assert "gap_modulus" in capsys.readouterr().err


def test_exit_code_tampered_certificate(tmp_path):
    code, report = run(tmp_path, "adversary", "--in", str(DATA / "adversary.json"), "--horizon", "16")
    assert code == 0
    report["outputs"]["certificates"][0]["hits"] = [{"n": 1, "interval_index": 0, "term": "1/2"}]
    saved = tmp_path / "tampered.json"
    saved.write_text(json.dumps(report))
    code, again = run(tmp_path, "verify", "--in", str(saved))
    assert code == 4
    failed = [c["check"] for c in again["verification"] if not c["passed"]]
    assert failed == ["certificates"]


def test_exit_code_tampered_witness(tmp_path):
    code, report = run(tmp_path, "theorem3", "--in", str(DATA / "theorem3.json"), "--depth", "5")
    x = report["outputs"]["x"]
    p, q = map(int, x.split("/"))
    report["outputs"]["x"] = f"{p + 1}/{q}"
    saved = tmp_path / "tampered.json"
    saved.write_text(json.dumps(report))
    assert main(["verify", "--in", str(saved)]) == 4


def test_reports_are_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for out in (a, b):
        main(["adversary", "--in", str(DATA / "adversary.json"), "--horizon", "32", "--out", str(out)])
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    assert strip_timing(ja) == strip_timing(jb)
