import json
from pathlib import Path

from qpmut.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), (json.loads(err) if err.strip() else None)


def test_mutate_quiver_reverses_a2(capsys):
    code, out, _ = run(capsys, "mutate-quiver", "--in", DATA / "a2.json", "--at", "1")
    assert code == 0
    assert [(a["src"], a["tgt"]) for a in out["arrows"]] == [(2, 1)]


def test_mutate_seed_pentagon(capsys):
    code, out, _ = run(capsys, "mutate-seed", "--in", DATA / "a2p.json", "--at", "1,2,1,2,1")
    assert code == 0 and out["cluster"] == ["x2", "x1"]


def test_mutate_rep_then_invariants(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, _, _ = run(capsys, "mutate-rep", "--qp", DATA / "tri.json", "--rep", DATA / "negsimple1.json",
                     "--at", "1,2", "--out", dest)
    assert code == 0
    code, out, _ = run(capsys, "invariants", "--rep", dest)
    assert out["dims"] == [1, 1, 0] and out["E"] == 0
    assert out["F"] == "u1*u2 + u1 + 1"


def test_invariants_of_negative_simple(capsys):
    code, out, _ = run(capsys, "invariants", "--qp", DATA / "a3.json", "--rep", DATA / "negsimple1.json")
    assert (out["g"], out["h"], out["E"], out["F"]) == ([1, 0, 0], [0, 0, 0], 0, "1")


def test_fpoly_and_cc(capsys, tmp_path):
    rep = tmp_path / "p.json"
    rep.write_text(json.dumps({"dims": [1, 1], "vdims": [0, 0], "maps": {"a": [["1"]]}}))
    code, out, _ = run(capsys, "fpoly", "--qp", DATA / "a2.json", "--rep", rep, "--primes", "3,5,7,11")
    assert out["F"] == "u1*u2 + u1 + 1"
    code, out, _ = run(capsys, "cc", "--qp", DATA / "a2.json", "--rep", rep, "--quiver", DATA / "a2p.json")
    assert code == 0 and out["cc"] == "(x1*x3*x4 + x2 + x3)/(x1*x2)"


def test_mutate_qp(capsys):
    code, out, _ = run(capsys, "mutate-qp", "--in", DATA / "tri.json", "--at", "2", "--trunc", "8")
    assert code == 0 and out["potential"] == [] and out["trunc"] == 8


def test_explore(capsys):
    code, out, _ = run(capsys, "explore", "--quiver", DATA / "a3p.json", "--depth", "10")
    assert code == 0 and out["clusters"] == 14 and out["closure"] is True
    assert all("F" in v and "g" in v for node in out["nodes"] for v in node["cluster"])


def test_verify_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "--scenario", "a2", "--depth", "5")
    assert code == 0 and out["ok"]


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2}')
    code, _, err = run(capsys, "mutate-quiver", "--in", bad, "--at", "1")
    assert code == 2 and err["error"] == "parse" and err["path"] == "/"
    bad.write_text("{not json")
    code, _, err = run(capsys, "mutate-quiver", "--in", bad)
    assert code == 2 and "offset" in err
    code, _, err = run(capsys, "mutate-seed", "--in", DATA / "a2p.json", "--at", "1,3")
    assert code == 2 and err["error"] == "mutation_domain" and "step 1" in err["message"]


def test_admissibility_error_names_step(capsys, tmp_path):
    qp = tmp_path / "tri0.json"
    doc = json.loads((DATA / "tri.json").read_text())
    doc["potential"] = []
    qp.write_text(json.dumps(doc))
    code, _, err = run(capsys, "mutate-qp", "--in", qp, "--at", "2,1")
    assert code == 2 and err["error"] == "admissibility" and err["step"] == 1


def test_resource_cap_exit_code(capsys, tmp_path):
    rep = tmp_path / "big.json"
    rep.write_text(json.dumps({"dims": [6, 5], "vdims": [0, 0], "maps": {"a": [["0"] * 5] * 6}}))
    code, _, err = run(capsys, "fpoly", "--qp", DATA / "a2.json", "--rep", rep)
    assert code == 4 and err["error"] == "resource_cap"


def test_config_file(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trunc": 2}))
    monkeypatch.setenv("QPMUT_CONFIG", str(cfg))
    code, _, err = run(capsys, "mutate-quiver", "--in", DATA / "a2.json")
    assert code == 2 and err["path"] == "/trunc"
    rep = tmp_path / "p.json"
    rep.write_text(json.dumps({"dims": [1, 1], "vdims": [0, 0], "maps": {"a": [["1"]]}}))
    cfg.write_text(json.dumps({"max_total_dim": 1}))
    code, _, err = run(capsys, "fpoly", "--qp", DATA / "a2.json", "--rep", rep)
    assert code == 4 and err["error"] == "resource_cap"
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, err = run(capsys, "mutate-quiver", "--in", DATA / "a2.json")
    assert code == 2 and "bogus" in err["message"]
