import json
import subprocess
import sys

import pytest

from dfpcodesign.accel import CostTable
from dfpcodesign.cli import main


@pytest.fixture
def vec_file(tmp_path):
    path = tmp_path / "v.jsonl"
    assert main(["gen", "--format", "d64", "--count", "120", "--seed", "9", "--out", str(path)]) == 0
    return path


def test_gen_run_verify(tmp_path, vec_file, capsys):
    report = tmp_path / "r.csv"
    assert main(["run", "--vectors", str(vec_file), "--report", str(report)]) == 0
    lines = report.read_text().splitlines()
    assert [ln.split(",")[0] for ln in lines[1:]] == ["software", "method1", "dummy"]
    assert main(["verify", "--vectors", str(vec_file)]) == 0
    assert "0 mismatches" in capsys.readouterr().out


def test_run_json_and_costs(tmp_path, vec_file):
    costs = tmp_path / "c.json"
    costs.write_text(json.dumps({"sw.limb_mul": 100}))
    report = tmp_path / "r.json"
    assert main(["run", "--vectors", str(vec_file), "--modes", "software,method1",
                 "--costs", str(costs), "--reps", "2", "--report", str(report), "--json"]) == 0
    doc = json.loads(report.read_text())
    assert [r["mode"] for r in doc["rows"]] == ["software", "method1"]


def test_run_is_byte_identical(tmp_path, vec_file):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["run", "--vectors", str(vec_file), "--report", str(a)])
    main(["run", "--vectors", str(vec_file), "--report", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_gen_d128_categories(tmp_path):
    out = tmp_path / "q.jsonl"
    assert main(["gen", "--format", "d128", "--count", "4", "--seed", "1",
                 "--categories", "overflow,special", "--out", str(out)]) == 0
    cats = [json.loads(ln)["category"] for ln in out.read_text().splitlines()]
    assert cats == ["overflow", "special"] * 2


def test_verify_reports_mismatch(tmp_path, vec_file, capsys):
    lines = vec_file.read_text().splitlines()
    doc = json.loads(lines[3])
    doc["expected"] = "2238000000000001"
    lines[3] = json.dumps(doc)
    vec_file.write_text("\n".join(lines) + "\n")
    assert main(["verify", "--vectors", str(vec_file)]) == 1
    out = capsys.readouterr().out
    assert "mismatch: vector 3" in out and "1 mismatches" in out


def test_input_errors(tmp_path, capsys):
    assert main(["verify", "--vectors", str(tmp_path / "missing.jsonl")]) == 2
    assert main(["gen", "--format", "d32", "--out", str(tmp_path / "x")]) == 2
    assert main(["gen", "--count", "0", "--out", str(tmp_path / "x")]) == 2
    bad_costs = tmp_path / "c.json"
    bad_costs.write_text(json.dumps({"sw.unknown": 1}))
    vecs = tmp_path / "v.jsonl"
    main(["gen", "--count", "6", "--out", str(vecs)])
    assert main(["run", "--vectors", str(vecs), "--costs", str(bad_costs),
                 "--report", str(tmp_path / "r.csv")]) == 2


def test_rocc_encode_decode(capsys):
    assert main(["rocc", "encode", "funct7=DEC_ADD", "rs2=10", "rs1=11", "xd=1", "xs1=1", "xs2=1",
                 "rd=12"]) == 0
    assert capsys.readouterr().out.strip() == "0x08A5F617"
    assert main(["rocc", "encode", "funct7=0000101"]) == 0
    assert capsys.readouterr().out.strip() == "0x0A000017"
    assert main(["rocc", "decode", "0x08A5F617"]) == 0
    out = capsys.readouterr().out
    assert "DEC_ADD" in out and "rs1=11" in out and "rd=12" in out
    assert main(["rocc", "decode", "0x08A5F633"]) == 2
    assert main(["rocc", "encode", "rs1=99", "funct7=4"]) == 2
    assert main(["rocc", "encode", "bogus"]) == 2


def test_calibrate_and_costs(tmp_path, vec_file):
    out = tmp_path / "tuned.json"
    assert main(["calibrate", "--vectors", str(vec_file), "--target", "2.5", "--out", str(out)]) == 0
    tuned = CostTable.load(out)
    assert tuned.sw("limb_mul") != CostTable.default().sw("limb_mul")
    dflt = tmp_path / "default.json"
    assert main(["costs", "--out", str(dflt)]) == 0
    assert CostTable.load(dflt) == CostTable.default()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dfpcodesign", "rocc", "decode", "0x0005C017"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "WR" in out.stdout
