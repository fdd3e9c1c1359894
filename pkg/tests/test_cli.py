import json
import subprocess
import sys

import pytest

from trackgamma.cli import main
from trackgamma.fixtures import cyclic_group_category, table_fixtures


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nil2_verbs(capsys):
    code, out, _ = run(capsys, "nil2", "normalize", "x2 x1")
    assert code == 0 and json.loads(out)["normal_form"] == "x1 x2 [x1,x2]^-1"
    code, out, _ = run(capsys, "nil2", "mul", "x1", "x2^-1", "--rank", "2")
    assert code == 0 and json.loads(out)["product"] == "x1 x2^-1"
    code, out, _ = run(capsys, "nil2", "compose", "alpha:2", "xi:2")
    # (x1 x2)^2 = x1 x2 x1 x2 = x1^2 x2^2 [x1,x2]^-1
    assert code == 0 and json.loads(out)["images"] == ["x1^2 x2^2 [x1,x2]^-1"]


def test_compose_rank_mismatch_is_a_usage_error(capsys):
    code, _, err = run(capsys, "nil2", "compose", "xi:2", "alpha:2")
    assert code == 2 and "cannot compose" in err


def test_unknown_verb_prints_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    assert "usage:" in capsys.readouterr().err


def test_cohomology_group(capsys):
    code, out, _ = run(capsys, "cohomology", "group", "--fixture", "Z/2/Z2", "--degree", "3")
    assert code == 0 and json.loads(out)["group"] == "Z/2"


def test_coboundary_of_a_cochain_file(capsys, tmp_path):
    c = cyclic_group_category(2)
    sysdoc = {"category": c.to_json(), "constant": "Z/3"}
    (tmp_path / "sys.json").write_text(json.dumps(sysdoc))
    (tmp_path / "c.json").write_text(json.dumps({"degree": 1, "values": [[["e1"], [1]]]}))
    code, out, _ = run(capsys, "cohomology", "coboundary", "--system", str(tmp_path / "sys.json"),
                       "--cochain", str(tmp_path / "c.json"))
    assert code == 0
    doc = json.loads(out)
    # (dc)(e1, e1) = c(e1) - c(e0) + c(e1)
    assert doc["degree"] == 2 and doc["values"] == [[["e1", "e1"], [2]]]


def test_cochain_diagnostics_use_json_pointers(capsys, tmp_path):
    c = cyclic_group_category(2)
    (tmp_path / "sys.json").write_text(json.dumps({"category": c.to_json(), "constant": "Z/2"}))
    (tmp_path / "c.json").write_text(json.dumps({"degree": 1, "values": [[["e1"], [1]], [["e7"], [1]]]}))
    code, _, err = run(capsys, "cohomology", "coboundary", "--system", str(tmp_path / "sys.json"),
                       "--cochain", str(tmp_path / "c.json"))
    assert code == 2 and "/values/1" in err


def test_broken_composition_triple_exits_three(capsys, tmp_path):
    doc = cyclic_group_category(3).to_json()
    doc["compose"] = [[g, f, "e0" if (g, f) == ("e1", "e1") else h] for g, f, h in doc["compose"]]
    (tmp_path / "sys.json").write_text(json.dumps({"category": doc, "constant": "Z/2"}))
    code, out, err = run(capsys, "cohomology", "group", "--system", str(tmp_path / "sys.json"), "--degree", "1")
    assert code == 3
    assert "associativity" in err
    failed = [st for st in json.loads(out)["statements"] if st["status"] == "fail"]
    assert failed[0]["statement"] == "associativity"
    assert any("e1" in triple and len(triple) == 3 for triple in failed[0]["witnesses"])


def test_malformed_json_exits_two(capsys, tmp_path):
    (tmp_path / "bad.json").write_text("{not json")
    code, _, err = run(capsys, "extension", "class", str(tmp_path / "bad.json"))
    assert code == 2 and "line 1" in err


def test_missing_field_is_located(capsys, tmp_path):
    (tmp_path / "s.json").write_text(json.dumps({"category": {"objects": ["*"]}, "constant": "Z/2"}))
    code, _, err = run(capsys, "cohomology", "group", "--system", str(tmp_path / "s.json"), "--degree", "1")
    assert code == 2 and "/category" in err and "morphisms" in err


def test_split_descriptor(capsys, tmp_path):
    (tmp_path / "m.json").write_text(json.dumps({"kind": "split", "M": "Z/2", "max_rank": 2}))
    code, out, _ = run(capsys, "extension", "class", str(tmp_path / "m.json"))
    assert code == 0 and json.loads(out)["H3_class"] == "0"
    code, out, _ = run(capsys, "extension", "pseudosection", str(tmp_path / "m.json"))
    assert code == 0 and json.loads(out)["result"] == "pseudosection"


def test_nontrivial_pseudosection_reports_a_witness(capsys):
    code, out, _ = run(capsys, "extension", "pseudosection", "--fixture", "z2-sign")
    doc = json.loads(out)
    assert code == 1
    assert doc["result"] == "NoSolution" and doc["class"]["coords"] == [1]
    assert doc["witness_cocycle"]["values"]


def test_table_file_round_trip(capsys, tmp_path):
    ext = table_fixtures()["z3-twisted"]
    (tmp_path / "t.json").write_text(json.dumps(ext.to_json()))
    code, out, _ = run(capsys, "extension", "verify", str(tmp_path / "t.json"))
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "extension", "dualize", str(tmp_path / "t.json"))
    assert code == 0
    (tmp_path / "d.json").write_text(out)
    code, out, _ = run(capsys, "extension", "class", str(tmp_path / "d.json"))
    assert code == 0 and json.loads(out)["H3_class"] != "0"


def test_corrupted_table_fails_verification(capsys, tmp_path):
    doc = table_fixtures()["z2-trivial"].to_json()
    doc["vertical"][0][2] = doc["vertical"][1][2]
    (tmp_path / "t.json").write_text(json.dumps(doc))
    code, out, _ = run(capsys, "extension", "verify", str(tmp_path / "t.json"))
    assert code == 3 and not json.loads(out)["ok"]
    code, _, err = run(capsys, "extension", "class", str(tmp_path / "t.json"))
    assert code == 3 and "fails validation" in err


def test_gamma_verbs(capsys):
    code, out, _ = run(capsys, "gamma", "build", "--alpha", "alpha:2", "--structure", "perturbed")
    assert code == 0 and len(json.loads(out)["tracks"]) == 1
    code, out, _ = run(capsys, "gamma", "verify", "--max-rank", "2", "--length", "3", "--seed", "4")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["seed"] == 4
    code, out, _ = run(capsys, "gamma", "naturality", "--structure", "perturbed", "--max-rank", "2")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "gamma", "equivalence", "--samples", "5", "--M", "Z/2")
    assert code == 0 and json.loads(out)["ok"]


def test_abelian_theory_with_two_torsion_is_rejected(capsys):
    code, _, err = run(capsys, "gamma", "equivalence", "--theory", "nil1", "--M", "Z/4")
    assert code == 3 and "2-torsion" in err


def test_text_output(capsys):
    code, out, _ = run(capsys, "extension", "class", "--fixture", "z2-sign", "--text")
    assert code == 0 and out.splitlines()[0].split() == ["H3_class", "(1)", "in", "Z/2"]


def test_reports_are_deterministic():
    argv = [sys.executable, "-m", "trackgamma", "gamma", "verify", "--structure", "perturbed",
            "--max-rank", "2", "--length", "2", "--seed", "7"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["seed"] == 7
