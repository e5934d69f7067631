import json

from haar.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_iso_json(capsys):
    code, out, _ = run(capsys, "iso", "--n", "8", "--set", "0,1,2,5", "--other", "0,1,5,6", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["isomorphic"] and payload["route"] == "exceptional"
    assert (payload["u"], payload["v"]) == (2, 1)
    assert payload["oracle_checked"] is False
    for key in ("a1", "b1", "a2", "b2"):
        assert key in payload


def test_iso_check_oracle(capsys):
    code, out, _ = run(capsys, "--json", "iso", "--n", "10", "--set", "0,1,3,4", "--other", "0,1,2,4", "--check-oracle")
    payload = json.loads(out)
    assert code == 0 and payload["isomorphic"] is False
    assert payload["oracle_checked"] and payload["oracle_agrees"]


def test_strict_negative_verdict(capsys):
    code, _, _ = run(capsys, "iso", "--n", "10", "--set", "0,1,3,4", "--other", "0,1,2,4", "--strict")
    assert code == 1
    code, _, _ = run(capsys, "bci", "--n", "8", "--set", "0,1,2,5", "--strict")
    assert code == 1
    code, _, _ = run(capsys, "bci", "--n", "10", "--set", "0,1,3,4", "--strict")
    assert code == 0


def test_usage_errors(capsys):
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "iso", "--n", "8", "--set", "0,1,2")[0] == 2
    code, _, err = run(capsys, "iso", "--n", "8", "--set", "0,2,4,6", "--other", "0,1,2,5")
    assert code == 2 and "disconnected" in err


def test_resource_exceeded(capsys):
    code, _, err = run(capsys, "bicyclic", "--n", "16", "--set", "0,1,8,9", "--max-group-order", "10")
    assert code == 3 and "exceeds" in err


def test_aut_and_bicyclic(capsys):
    code, out, _ = run(capsys, "--json", "aut", "--set", "10:0,1,3,4", "--emit-adjacency")
    payload = json.loads(out)
    assert code == 0 and payload["order"] == 80 and payload["edge_transitive"]
    assert len(payload["graph"]["edges"]) == 40
    code, out, _ = run(capsys, "--json", "bicyclic", "--n", "8", "--set", "0,1,2,5")
    payload = json.loads(out)
    assert payload["count"] == 2 and payload["classes"] == 2 and len(payload["base"]) == 2


def test_canon_and_aff_eq(capsys):
    code, out, _ = run(capsys, "--json", "canon", "--n", "10", "--set", "5,6,8,9")
    assert json.loads(out)["canonical"]["elems"] == [0, 1, 3, 4]
    code, out, _ = run(capsys, "--json", "aff-eq", "--n", "12", "--set", "0,3,1,7", "--other", "0,1,7,9")
    assert json.loads(out)["witness"] == {"a": 7, "b": 0}


def test_ci(capsys):
    code, out, _ = run(capsys, "--json", "ci", "--n", "9", "--set", "1,8,3", "--method", "both")
    assert code == 0 and json.loads(out)["ci"] is True


def test_census_to_file(capsys, tmp_path):
    out_file = tmp_path / "census.jsonl"
    code, out, _ = run(capsys, "census", "--n", "8..16", "--k", "4", "--out", str(out_file))
    assert code == 0
    lines = [json.loads(x) for x in out_file.read_text().splitlines()]
    summaries = [r for r in lines if r.get("summary")]
    assert [s["modulus"] for s in summaries] == list(range(8, 17))
    assert {s["modulus"] for s in summaries if s["has_non_bci"]} == {8, 16}
    assert "non-BCI" in out


def test_census_to_stdout(capsys):
    code, out, _ = run(capsys, "census", "--n", "8", "--k", "4")
    recs = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and recs[-1]["summary"] and recs[-1]["modulus"] == 8


def test_verify_lemmas(capsys):
    code, out, _ = run(capsys, "verify-lemmas", "--n-max", "12")
    assert code == 0 and "FAIL" not in out and "PASS" in out
