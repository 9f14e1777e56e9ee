import json

from kdfseries.cli import fuzz_catalog, main
from kdfseries.identities import IdentityId


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _instance_doc(reading="corrected", r=2):
    return {
        "id": "EQ6",
        "spec": {"n": 1, "a": ["1/3"], "alpha": ["7/4"], "b": [["1/2"]], "beta": [["5/3"]]},
        "i": 1,
        "r": r,
        "reading": reading,
        "cap": 5,
    }


def _write(tmp_path, doc, name="doc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_verify_pass_exit_zero(tmp_path, capsys):
    path = _write(tmp_path, _instance_doc())
    code, out, _ = _run(capsys, "verify", path)
    assert code == 0
    assert "pass" in out


def test_verify_literal_fail_exit_one(tmp_path, capsys):
    path = _write(tmp_path, _instance_doc(reading="literal"))
    code, out, _ = _run(capsys, "verify", path, "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["report"]["status"] == "fail"
    assert "firstMismatch" in doc["report"]


def test_verify_reading_flag_overrides(tmp_path, capsys):
    path = _write(tmp_path, _instance_doc(reading="corrected"))
    code, _, _ = _run(capsys, "verify", path, "--reading", "literal")
    assert code == 1


def test_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("not json")
    code, _, err = _run(capsys, "verify", str(path))
    assert code == 2
    assert "input error" in err
    code, _, _ = _run(capsys, "verify", _write(tmp_path, {"id": "EQ6"}))
    assert code == 2


def test_expand_text_and_json(tmp_path, capsys):
    doc = {"spec": {"n": 1, "a": ["1", "1"], "alpha": ["2"], "b": [[]], "beta": [[]]},
           "cap": 3}
    path = _write(tmp_path, doc)
    code, out, _ = _run(capsys, "expand", path)
    assert code == 0
    assert out.splitlines()[0] == "1"
    code, out, _ = _run(capsys, "expand", path, "--format", "json")
    parsed = json.loads(out)
    assert parsed["terms"][0] == {"monomial": [0], "coeff": "1"}
    assert parsed["terms"][1] == {"monomial": [1], "coeff": "1/2"}
    assert parsed["convergence"]["slots"][0]["class"] == "unit-domain"


def test_expand_respects_binding(tmp_path, capsys):
    doc = {"spec": {"n": 2, "a": [], "alpha": [], "b": [[], []], "beta": [[], []]},
           "binding": [{"var": 0, "mult": 1}, {"var": 0, "mult": 1}],
           "cap": 2}
    code, out, _ = _run(capsys, "expand", _write(tmp_path, doc), "--format", "json")
    assert code == 0
    terms = json.loads(out)["terms"]
    assert terms == [{"monomial": [0], "coeff": "1"},
                     {"monomial": [1], "coeff": "2"},
                     {"monomial": [2], "coeff": "2"}]


def test_fuzz_deterministic_json(capsys):
    code1, out1, _ = _run(capsys, "fuzz", "--seed", "7", "--count", "3", "--format", "json")
    code2, out2, _ = _run(capsys, "fuzz", "--seed", "7", "--count", "3", "--format", "json")
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert len(doc["results"]) == len(list(IdentityId))
    assert all(row["pass"] == 3 for row in doc["results"])


def test_fuzz_single_id_literal_reports_failures(capsys):
    code, out, _ = _run(capsys, "fuzz", "--seed", "1", "--count", "6",
                        "--id", "EQ20", "--reading", "literal", "--format", "json")
    doc = json.loads(out)
    row = doc["results"][0]
    assert row["id"] == "EQ20"
    if row["fail"]:
        assert code == 1
        assert row["failures"][0]["report"]["status"] == "fail"


def test_conclusions_command(capsys):
    code, out, _ = _run(capsys, "conclusions", "--seed", "3", "--count", "3",
                        "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [row["id"] for row in doc["results"]] == ["EQ22", "EQ23", "EQ24", "EQ25"]
    assert all(row["pass"] == 3 for row in doc["results"])


def test_eval_command(tmp_path, capsys):
    doc = {"spec": {"n": 2, "a": [], "alpha": [], "b": [[], []], "beta": [[], []]},
           "point": [0.1, 0.2], "cap": 25}
    code, out, _ = _run(capsys, "eval", _write(tmp_path, doc), "--format", "json")
    assert code == 0
    parsed = json.loads(out)
    assert abs(parsed["value"] - 1.3498588075760032) < 1e-12
    assert parsed["domainOk"] is True


def test_list_command(capsys):
    code, out, _ = _run(capsys, "list", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["identities"]) == 17
    assert doc["conclusions"] == ["EQ22", "EQ23", "EQ24", "EQ25"]


def test_errata_command(capsys):
    code, out, _ = _run(capsys, "errata", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["entries"]) >= 9
    for entry in doc["entries"]:
        assert entry["demonstrated"]
        assert entry["corrected"]["status"] == "pass"
        assert entry["literal"]["status"] == "fail"


def test_fuzz_catalog_reusable():
    rows = fuzz_catalog(2, 2, ids=[IdentityId.EQ5])
    assert rows[0]["id"] == "EQ5" and rows[0]["pass"] == 2
