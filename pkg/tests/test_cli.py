import json

import pytest

from torelli_lab.cli import run

THETA_FG = "fatgraph 6\niota: 3 4 5 0 1 2\nsigma: 1 2 0 4 5 3\n"


@pytest.fixture
def theta_file(tmp_path):
    path = tmp_path / "theta.fg"
    path.write_text(THETA_FG)
    return str(path)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_identity_corpus(capsys):
    assert run(["identity-corpus", "--points", "5"]) == 0
    payload = _json(capsys)
    assert payload["ok"] is True
    assert len(payload["identities"]) == 9


def test_identity_corpus_pretty(capsys):
    assert run(["--pretty", "identity-corpus", "--points", "2"]) == 0
    out = capsys.readouterr().out
    assert "[ok]" in out


def test_validate(theta_file, capsys):
    assert run(["validate", theta_file]) == 0
    payload = _json(capsys)
    assert payload["genus"] == 1
    assert payload["trivalent"] is True
    assert payload["spine"] is True


def test_validate_malformed(tmp_path, capsys):
    path = tmp_path / "bad.fg"
    path.write_text("fatgraph 6\niota: 3 4 5\n")
    assert run(["validate", str(path)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: ParseError:")
    assert len(err.strip().splitlines()) == 1


def test_missing_file(capsys):
    assert run(["validate", "/nonexistent/theta.fg"]) == 2
    assert "InputError" in capsys.readouterr().err


def test_taut_mark_text(theta_file, capsys):
    assert run(["taut-mark", theta_file, "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("fatgraph 6\n")
    assert out.count("hmark") == 3


def test_taut_mark_pi(theta_file, capsys):
    assert run(["taut-mark", theta_file, "--pi"]) == 0
    payload = _json(capsys)
    assert len(payload["pimark"]) == 6
    assert len(payload["relator"].split()) == 4


def test_j_path(theta_file, tmp_path, capsys):
    script = tmp_path / "flip.mv"
    script.write_text("move 0\nmove 0\n")
    assert run(["j-path", theta_file, str(script)]) == 0
    payload = _json(capsys)
    assert payload["dim"] == 2
    assert payload["j"] == {}


def test_verify_cells(theta_file, capsys):
    assert run(["verify-cells", theta_file, "--radius", "2"]) == 0
    assert _json(capsys)["ok"] is True


def test_census_level2_euler(capsys):
    assert run(["census", "--g", "1", "--levelN", "2", "--euler"]) == 0
    payload = _json(capsys)
    assert payload["counts"] == {"0": 2, "1": 3}
    assert payload["euler"] == {"value": "-1/2", "expected": "-1/2", "match": True}


def test_census_text_output(tmp_path, capsys):
    output = tmp_path / "torus.census"
    assert run(["census", "--g", "1", "--output", str(output), "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("census g=1 type=unmarked")
    assert output.read_text() == out


def test_global_flags_after_subcommand(theta_file, capsys):
    assert run(["validate", theta_file, "--pretty"]) == 0
    assert "genus 1" in capsys.readouterr().out


def test_bad_jobs(theta_file, capsys):
    assert run(["validate", theta_file, "--jobs", "0"]) == 2
    assert capsys.readouterr().err.startswith("error: InputError:")


def test_unknown_command(capsys):
    assert run(["frobnicate"]) == 2
