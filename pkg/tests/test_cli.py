import json

import pytest

from vfsplit.cli import main

from conftest import CORPUS


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_validate_ok(capsys):
    code, out = run(capsys, "validate", CORPUS / "f2.json", "--seed", 3)
    assert code == 0 and "200/200" in out.out


@pytest.mark.parametrize("name,expected", [("z", "2"), ("finite", "0"), ("modular", "infinite")])
def test_ends(capsys, name, expected):
    code, out = run(capsys, "ends", CORPUS / f"{name}.json")
    assert code == 0 and out.out.strip() == expected


def test_locally_infinite_tree_ball_is_an_input_error(capsys):
    code, out = run(capsys, "tree-ball", CORPUS / "f2.json", "--splitting", "T1")
    assert code == 1 and "error" in out.err


def test_out_of_regime_core_is_unknown(capsys, tmp_path):
    d = json.loads((CORPUS / "triple.json").read_text())
    b = {"vertices": [{"name": "X", "group": ["X[1]", "Y[1]"]},
                      {"name": "Z", "group": ["Z[1]"]}],
         "edges": [{"name": "g", "source": "X", "target": "Z", "group": [], "stable": "1"}]}
    d["splittings"]["XY_Z"] = b
    p = tmp_path / "s.json"
    p.write_text(json.dumps(d))
    code, out = run(capsys, "core", p, "--pair", "T", "XY_Z")
    assert code == 2 and "unknown" in out.err


def test_core_artifacts_are_deterministic(capsys, tmp_path):
    for d in ("a", "b"):
        code, _ = run(capsys, "core", CORPUS / "f2.json", "--pair", "T1", "T2",
                      "--out", tmp_path / d)
        assert code == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert {"core.json", "core.dot", "leaves1.dot", "core-check.json"} <= set(names)
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()


def test_verify_and_tamper(capsys, tmp_path):
    code, _ = run(capsys, "blowup", CORPUS / "f3.json", "--inf", "Tinf", "--fin", "Tf",
                  "--out", tmp_path)
    assert code == 0
    cert = tmp_path / "blowup.json"
    code, _ = run(capsys, "verify", CORPUS / "f3.json", cert)
    assert code == 0
    d = json.loads(cert.read_text())
    d["case"] = "cleave" if d["case"] != "cleave" else "finite"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(d))
    code, _ = run(capsys, "verify", CORPUS / "f3.json", bad)
    assert code == 1


def test_shave_then_replay(capsys, tmp_path):
    trace = tmp_path / "trace.json"
    code, _ = run(capsys, "shave", CORPUS / "f2.json", "--pair", "T1", "T2", "--trace", trace)
    assert code == 0
    code, out = run(capsys, "replay", CORPUS / "f2.json", "--trace", trace)
    assert code == 0 and "identical" in out.out


def test_one_ended_doubles(capsys):
    code, out = run(capsys, "one-ended", CORPUS / "f2.json", "--graph", "double_a")
    assert code == 0 and "many-ended" in out.out
    code, out = run(capsys, "one-ended", CORPUS / "f2.json", "--graph", "double_a2b2")
    assert code == 0 and out.out.startswith("one-ended")


def test_missing_session_file(capsys, tmp_path):
    code, out = run(capsys, "validate", tmp_path / "nope.json")
    assert code == 1


def test_replay_rejects_non_trace(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("[1]")
    code, _ = run(capsys, "replay", CORPUS / "f2.json", p)
    assert code == 1
