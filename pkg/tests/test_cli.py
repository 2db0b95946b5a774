import json
import shutil
from importlib import resources

import pytest

from smtop.cli import main

DATA = resources.files("smtop.data")
COIN = str(DATA / "coin.space")
DICE = str(DATA / "dice.space")
RAMP = str(DATA / "ramp10.space")
ECART = str(DATA / "example3.ecart")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", COIN)
    assert code == 0
    assert "2 points" in out


def test_validate_exit_codes(capsys, tmp_path):
    p = tmp_path / "broken.space"
    p.write_text("{oops")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2 and "error" in err

    p = tmp_path / "schema.space"
    p.write_text(json.dumps({"points": ["a"]}))
    assert run(capsys, "validate", str(p))[0] == 3

    p = tmp_path / "invalid.space"
    p.write_text(json.dumps({"points": ["a", "b"], "entries": []}))
    assert run(capsys, "validate", str(p))[0] == 4

    p = tmp_path / "div.space"
    p.write_text(json.dumps({"points": ["a", "b"], "entries": [
        {"p": "a", "q": "b", "fn": {"kind": "step", "a": "1/0"}}]}))
    assert run(capsys, "validate", str(p))[0] == 2


def test_sphere_text_and_json(capsys):
    code, out, _ = run(capsys, "sphere", COIN, "0", "1/2", "1/2")
    assert code == 0 and out.strip() == "{0}"
    code, out, _ = run(capsys, "sphere", COIN, "0", "2", "1/2", "--json")
    assert code == 0
    assert json.loads(out)["sphere"] == ["0", "1"]


def test_entourage(capsys):
    code, out, _ = run(capsys, "entourage", DICE, "3/2", "1/2", "--json")
    payload = json.loads(out)
    assert payload["size"] == 16


def test_ecart_sphere(capsys):
    code, out, _ = run(capsys, "ecart-sphere", ECART, "1", "2")
    assert code == 0
    assert "S \\ {2, 3}" in out
    assert "window(10): {1, 4, 5, 6, 7, 8, 9, 10}" in out


def test_ecart_sphere_window_env(capsys, monkeypatch):
    monkeypatch.setenv("SMTOP_WINDOW", "5")
    _, out, _ = run(capsys, "ecart-sphere", ECART, "1", "2")
    assert "window(5): {1, 4, 5}" in out
    monkeypatch.setenv("SMTOP_WINDOW", "banana")
    code, _, err = run(capsys, "ecart-sphere", ECART, "1", "2")
    assert code == 3


def test_r_sphere(capsys):
    code, out, _ = run(capsys, "r-sphere", RAMP, "1", "2", "1/4")
    assert code == 0 and out.strip() == "{1}"


def test_family_at_point(capsys):
    code, out, _ = run(capsys, "family", COIN, "--at", "0")
    assert code == 0
    assert out.splitlines() == ["{0}", "{0, 1}"]


def test_family_r_kind(capsys):
    code, out, _ = run(capsys, "family", DICE, "--kind", "r", "--at", "1")
    assert code == 0
    assert out.splitlines()[0] == "{1}"
    assert "{1, 2, 3, 4, 5}" in out
    assert "{1, 2, 3, 4, 5, 6}" not in out


def test_family_system_pipes_into_classify(capsys, tmp_path):
    code, out, _ = run(capsys, "family", COIN, "--json")
    assert code == 0
    path = tmp_path / "coin.system"
    path.write_text(out)
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0
    assert "verdict: Top" in out


def test_family_ecart(capsys):
    code, out, _ = run(capsys, "family", ECART, "--at", "3", "--bound", "10")
    assert code == 0
    assert out.splitlines() == ["{3}", "S \\ {2}", "S"]


def test_classify_space_and_ecart_directly(capsys):
    code, out, _ = run(capsys, "classify", DICE)
    assert code == 0 and "verdict: Top" in out
    code, out, _ = run(capsys, "classify", ECART, "--bound", "10", "--json")
    payload = json.loads(out)
    assert payload["verdict"] == "Top" and payload["window_relative"]


def test_closure_interior_symmetric(capsys):
    code, out, _ = run(capsys, "closure", COIN, "0")
    assert code == 0 and out.strip() == "{0}"
    code, out, _ = run(capsys, "interior", COIN, "0", "1")
    assert code == 0 and out.strip() == "{0, 1}"
    code, out, _ = run(capsys, "symmetric", COIN)
    assert code == 0 and "PASS" in out


def test_symmetric_failure_exit(capsys, tmp_path):
    doc = {"points": ["a", "b"], "families": [[["a", "b"]], [["b"]]]}
    path = tmp_path / "asym.system"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "symmetric", str(path))
    assert code == 1 and "FAIL" in out


def test_product_emits(capsys, tmp_path):
    code, out, _ = run(capsys, "product", COIN, COIN, "--emit", "space")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["points"]) == 4
    path = tmp_path / "prod.space"
    path.write_text(out)
    code, out, _ = run(capsys, "sphere", str(path), "0,0", "1/2", "1/2")
    assert code == 0 and out.strip() == "{(0,0)}"

    code, out, _ = run(capsys, "product", COIN, COIN, "--emit", "classification")
    assert code == 0 and "verdict: Top" in out


def test_verify_sm_and_menger(capsys):
    assert run(capsys, "verify", "sm", COIN)[0] == 0
    assert run(capsys, "verify", "menger", DICE, "--tnorm", "min")[0] == 0
    assert run(capsys, "verify", "product", COIN, DICE)[0] == 0


def test_verify_menger_failure(capsys, tmp_path):
    doc = {"points": ["p", "q", "r"], "entries": [
        {"p": "p", "q": "q", "fn": {"kind": "step", "a": 1}},
        {"p": "q", "q": "r", "fn": {"kind": "step", "a": 1}},
        {"p": "p", "q": "r", "fn": {"kind": "step", "a": 10}}]}
    path = tmp_path / "bad.space"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "menger", str(path))
    assert code == 1 and "FAIL" in out


def test_verify_theorems_small(capsys):
    code, out, _ = run(capsys, "verify", "theorems", "--trials", "5", "--seed", "1")
    assert code == 0
    assert "box-preserves-Top: PASS" in out
    assert "sphere-box-identity: PASS" in out


def test_verify_missing_args(capsys):
    assert run(capsys, "verify", "sm")[0] == 3
    assert run(capsys, "verify", "product", COIN)[0] == 3


def test_paper_examples_all_groups(capsys):
    code, out, _ = run(capsys, "paper-examples")
    assert code == 0
    assert out.count("PASS") >= 4
    assert "FAIL" not in out


def test_paper_examples_single_group(capsys):
    code, out, _ = run(capsys, "paper-examples", "--group", "ex3")
    assert code == 0
    assert "example-3" in out and "example-1" not in out
    assert run(capsys, "paper-examples", "--group", "nope")[0] == 3


def test_paper_examples_tampered_fixture(capsys, tmp_path):
    for name in ("coin.space", "dice.space", "ramp10.space", "example3.ecart"):
        shutil.copy(str(DATA / name), tmp_path / name)
    doc = json.loads((tmp_path / "coin.space").read_text())
    doc["entries"][0]["fn"]["a"] = "2"
    (tmp_path / "coin.space").write_text(json.dumps(doc))
    code, out, _ = run(capsys, "paper-examples", "--fixtures", str(tmp_path))
    assert code == 1
    assert "FAIL" in out
    assert "expected" in out  # the diff names the expected sphere


def test_cli_deterministic(capsys):
    a = run(capsys, "verify", "theorems", "--trials", "5", "--seed", "2")
    b = run(capsys, "verify", "theorems", "--trials", "5", "--seed", "2")
    assert a == b
    a = run(capsys, "family", DICE, "--json")
    b = run(capsys, "family", DICE, "--json")
    assert a == b
