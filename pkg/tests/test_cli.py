import json

import pytest

from cli import EXIT_ERROR, EXIT_OK, EXIT_REFUTED, run


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    monkeypatch.setenv("FINDOC_CONFIG", str(tmp_path / "config.ini"))


def test_catalog_list(capsys):
    assert run(["catalog", "--list"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PS-2-0" in out and "SIER" in out


def test_catalog_emit_explicit(capsys):
    assert run(["catalog", "--emit", "PS-1-0", "--explicit"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert set(data) >= {"base", "fibers", "reindex", "meta"}


def test_classify_json_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code_a = run(["classify", "PS-1-0", "--json", str(a)])
    code_b = run(["classify", "PS-1-0", "--json", str(b)])
    assert code_a == code_b
    assert code_a in (EXIT_OK, EXIT_REFUTED)
    assert a.read_bytes() == b.read_bytes()


def test_unknown_flag_is_a_usage_error():
    assert run(["classify", "PS-1-0", "--flags", "valid,wobbly"]) == EXIT_ERROR


def test_theorems_on_the_trivial_doctrine(tmp_path):
    out = tmp_path / "thm.json"
    assert run(["theorem", "TRIV", "--all", "--json", str(out)]) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["instance"]["name"] == "TRIV"
    assert all(r["conclusion"]["kind"] != "refuted" for r in report["theorems"])


def test_bad_instance_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json", encoding="utf-8")
    assert run(["validate", str(bad)]) == EXIT_ERROR
    assert run(["validate", "no-such-instance"]) == EXIT_ERROR


def test_argparse_errors_map_to_usage():
    assert run([]) == EXIT_ERROR
    assert run(["theorem", "TRIV"]) == EXIT_ERROR
    assert run(["--help"]) == EXIT_OK


def test_recheck_reproduces_a_refutation(tmp_path, capsys):
    report = tmp_path / "sl3.json"
    assert run(["classify", "SL-3chain", "--flags", "ac", "--json", str(report)]) == EXIT_REFUTED
    capsys.readouterr()
    assert run(["validate", "SL-3chain", "--recheck", str(report)]) == EXIT_OK
    assert "reproduced" in capsys.readouterr().out


def test_recheck_flags_a_stale_counterexample(tmp_path):
    report = tmp_path / "stale.json"
    report.write_text(json.dumps({"classification": [
        {"check": "valid", "kind": "refuted",
         "payload": {"law": "monotone", "arrow": "2>1:0,0", "pair": ["{}", "{0}"]}}]}),
        encoding="utf-8")
    assert run(["validate", "PS-2-0", "--recheck", str(report)]) == EXIT_REFUTED


def test_derive_dual_flips_the_reference(capsys):
    assert run(["derive", "PS-1-0", "--what", "dual"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["meta"]["window"]["dual"] is True


def test_derive_graph(capsys):
    assert run(["derive", "PS-2-0", "--what", "graph", "--arrow", "2>2:0,1"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"2>2:0,1": "{0,3}"}


def test_search_finds_a_doctrine(capsys):
    code = run(["search", "--filter", "valid & full_comp", "--max-base", "1",
                "--max-fiber", "2", "--limit", "1"])
    assert code == EXIT_OK
    assert "fibers" in json.loads(capsys.readouterr().out)
