import orjson
import pytest

from wacert.certificates import load
from wacert.config import Config
from wacert.main import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main

EXAMPLE_PARAMS = "17,137,5,-31"


def test_hilbert_prints_the_symbol(capsys):
    assert main(["hilbert", "--field", "1", "17", "5", "5"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "-1"
    assert main(["hilbert", "-1", "-1", "inf"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "-1"


def test_hilbert_over_gaussian_integers(capsys):
    assert main(["hilbert", "--field=-1", "-1", "2+i", "2+i"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1"


def test_hilbert_document_with_out(tmp_path):
    out = tmp_path / "h.json"
    assert main(["hilbert", "2", "5", "5", "--out", str(out)]) == EXIT_OK
    doc = load(out)
    assert doc["kind"] == "hilbert"
    assert doc["symbol"] == -1


def test_verify_table_rows(tmp_path):
    out = tmp_path / "row.json"
    assert main(["verify-table", "--row", "4", "--out", str(out)]) == EXIT_OK
    assert load(out)["rows"][0]["passed"] is True
    assert main(["verify-table", "--row", "5", "--out", str(out)]) == EXIT_CHECK_FAILED
    assert main(["verify-table", "--row", "9"]) == EXIT_USAGE


def test_construct_then_recheck(tmp_path):
    cert = tmp_path / "cert.json"
    assert main(["construct", "--params", EXAMPLE_PARAMS, "--precision", "6", "--out", str(cert)]) == EXIT_OK
    assert load(cert)["params"]["D"] == "180"
    report = tmp_path / "recheck.json"
    assert main(["recheck", "--cert", str(cert), "--out", str(report)]) == EXIT_OK
    assert load(report)["problems"] == []


def test_failed_condition_writes_error_document(tmp_path):
    out = tmp_path / "fail.json"
    assert main(["construct", "--params", "17,139,5,-31", "--out", str(out)]) == EXIT_CHECK_FAILED
    doc = load(out)
    assert doc["ok"] is False
    assert doc["stage"] == "condition_2"
    assert doc["report"]["condition_2"]["passed"] is False


def test_scan_on_stdout(capsys):
    assert main(["scan", "--field=-5", "--delta", "13", "--c=-13", "--nmax", "12"]) == EXIT_OK
    doc = orjson.loads(capsys.readouterr().out)
    assert [h["n"] for h in doc["hits"]] == [6, 12]


def test_scan_fixed_divisor(capsys):
    assert main(["scan", "--delta", "8", "--c=-2", "--nmax", "5"]) == EXIT_CHECK_FAILED
    doc = orjson.loads(capsys.readouterr().out)
    assert doc["stage"] == "scan"


def test_brauer_eval(tmp_path):
    out = tmp_path / "inv.json"
    assert main(["brauer-eval", "--params", EXAMPLE_PARAMS, "--x", "5", "--out", str(out)]) == EXIT_OK
    assert load(out)["invariant"] == "1/2"
    assert main(["brauer-eval", "--params", EXAMPLE_PARAMS, "--pole", "2", "--out", str(out)]) == EXIT_OK
    assert load(out)["invariant"] == "0"
    assert main(["brauer-eval", "--params", EXAMPLE_PARAMS]) == EXIT_USAGE


def test_perturbed_pencil_fails(tmp_path):
    out = tmp_path / "etale.json"
    assert main(["etale-check", "--perturbed", "--out", str(out)]) == EXIT_CHECK_FAILED
    assert load(out)["ok"] is False


def test_bad_input():
    assert main(["solvable", "--params", "17,137,5"]) == EXIT_USAGE
    assert main(["hilbert", "abc", "5", "5"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as excinfo:
        main(["no-such-command"])
    assert excinfo.value.code == 2


def test_invalid_configuration(monkeypatch):
    monkeypatch.setattr(Config, "HENSEL_PRECISION", 0)
    assert main(["verify-table", "--row", "1"]) == EXIT_USAGE


def test_field_defaults_to_rationals(tmp_path):
    out = tmp_path / "solvable.json"
    assert main(["solvable", "--params", EXAMPLE_PARAMS, "--precision", "4", "--out", str(out)]) == EXIT_OK
    doc = load(out)
    assert doc["field"] == {"delta0": 1}
    assert doc["places"][0]["place"] == "real:0"


def test_verify_example_exits_cleanly(tmp_path):
    out = tmp_path / "example.json"
    assert main(["verify-example", "--out", str(out)]) == EXIT_OK
    doc = load(out)
    assert doc["ok"] is True
    assert doc["golden"] == {"matches": True, "mismatches": []}


def test_construct_search_is_deterministic(tmp_path):
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert main(["construct", "--precision", "4", "--out", str(first)]) == EXIT_OK
    assert main(["construct", "--precision", "4", "--workers", "1", "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    params = load(first)["params"]
    assert [params[k] for k in "abce"] == ["17", "103", "-3", "-5"]


def test_exit_codes(tmp_path):
    out = tmp_path / "doc.json"
    # 17 is a square mod 137: the variant algebra splits
    assert main(["variant", "--a", "17", "--b", "137", "--out", str(out)]) == EXIT_CHECK_FAILED
    assert load(out)["ok"] is False
    assert main(["solvable", "--params", "17,137,5,1/2"]) == EXIT_USAGE
    assert main(["construct", "--params", "17,135,5,-31"]) == EXIT_CHECK_FAILED


def test_recheck_rejects_other_documents(tmp_path):
    doc = tmp_path / "h.json"
    assert main(["hilbert", "2", "5", "5", "--out", str(doc)]) == EXIT_OK
    assert main(["recheck", "--cert", str(doc)]) == EXIT_USAGE
