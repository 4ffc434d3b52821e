import io
import json

import pytest

from kannanlab import make_paper_example
from kannanlab.cli import main
from kannanlab.formats import parse_document, to_space


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def emitted(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["example", "--n", "4", "--M", "10", "--emit"])
    assert code == 0
    return out


def test_example_round_trip(emitted):
    space, f = to_space(parse_document(emitted))
    assert (space, f) == make_paper_example(4, 10)


def test_classify_pipeline_member(capsys, monkeypatch, emitted):
    code, out, err = run(capsys, monkeypatch, ["classify", "--class", "npk", "--n", "4"], emitted)
    doc = json.loads(out)
    assert code == 0
    assert doc["min_coefficient"] == "5/12" and doc["member"] is True
    assert "5/12" in err


def test_classify_pipeline_non_member(capsys, monkeypatch, emitted):
    code, out, err = run(capsys, monkeypatch, ["classify", "-", "--class", "npk", "--n", "3"], emitted)
    doc = json.loads(out)
    assert code == 1 and doc["member"] is False
    assert doc["witness"] == ["x1", "x2", "x3"]


def test_classify_quiet_and_approx(capsys, monkeypatch, emitted):
    code, out, _ = run(capsys, monkeypatch, ["classify", "--class", "tpd", "--n", "4", "-q"], emitted)
    assert (code, out.strip()) == (0, "5/33 member")
    code, out, _ = run(capsys, monkeypatch,
                       ["classify", "--class", "kannan", "--approx"], emitted)
    assert code == 1 and json.loads(out)["min_coefficient_approx"] == 1.0


def test_validate(capsys, monkeypatch, tmp_path, emitted):
    good = tmp_path / "good.json"
    good.write_text(emitted)
    assert run(capsys, monkeypatch, ["validate", str(good)])[0] == 0
    bad = tmp_path / "bad.csv"
    bad.write_text(",a,b,c\na,0,5,1\nb,5,0,1\nc,1,1,0\n")
    code, out, err = run(capsys, monkeypatch, ["validate", str(bad)])
    assert code == 2
    doc = json.loads(out)
    assert {"axiom": "triangle", "witness": ["a", "c", "b"]} in doc["violations"]
    assert "triangle" in err


def test_csv_import_classify(capsys, monkeypatch, tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(",p,q\np,0,2\nq,2,0\n")
    code, out, _ = run(capsys, monkeypatch, ["validate", str(path)])
    assert code == 0 and json.loads(out)["valid"]


def test_iterate_and_certify(capsys, monkeypatch, tmp_path, emitted):
    path = tmp_path / "e.json"
    path.write_text(emitted)
    code, out, err = run(capsys, monkeypatch, ["iterate", str(path), "--start", "x4"])
    assert code == 0
    assert out.splitlines() == ["step,point,gap", "0,x4,10", "1,x1,1", "2,x2,1", "3,x3,0", "4,x3,"]
    code, _, err = run(capsys, monkeypatch, ["iterate", str(path), "--start", "x4", "--certify",
                                             "--n", "4", "--lambda", "5/12"])
    assert code == 0
    cert = json.loads(err.splitlines()[-1])
    assert cert["rho"] == "15/31" and cert["holds"]


def test_verify_and_replay(capsys, monkeypatch, tmp_path, emitted):
    path = tmp_path / "e.json"
    path.write_text(emitted)
    code, out, _ = run(capsys, monkeypatch, ["verify", str(path), "--n", "4"])
    assert code == 0 and json.loads(out)["holds"]
    cfg = '{"seed": 5, "size": 5, "scheme": "closure", "map_scheme": "fixed_point_biased"}'
    code, out, _ = run(capsys, monkeypatch, ["verify", "--replay", cfg, "--n", "3"])
    assert code == 0 and json.loads(out)["n"] == 3


def test_search_modes(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["search", "--mode", "separation", "--n", "4",
                                             "--trials", "5", "--seed", "1"])
    found = json.loads(out)
    assert code == 0 and found[0]["upper"]["member"] and not found[0]["lower"]["member"]
    args = ["search", "--mode", "campaign", "--n", "2..4", "--trials", "50",
            "--seed", "9", "--sizes", "3..5"]
    code, first, _ = run(capsys, monkeypatch, args)
    code2, second, _ = run(capsys, monkeypatch, args)
    assert code == code2 == 0 and first == second
    assert json.loads(first)["failures"] == []


MALFORMED = {
    "non_square.json": '{"points": ["a", "b"], "dist": [["0", "1"], ["1", "0", "2"]], "map": [["a", "a"], ["b", "a"]]}',
    "bad_json.json": '{"points": ["a", "b"], "dist": [[0, 1], [1, 0]',
    "bad_rational.json": '{"dist": [["0", "one"], ["one", "0"]], "map": [["x1", "x1"], ["x2", "x1"]]}',
    "float.json": '{"dist": [[0, 0.5], [0.5, 0]], "map": [["x1", "x1"], ["x2", "x1"]]}',
    "unknown_label.json": '{"dist": [[0, 1], [1, 0]], "map": [["x1", "x9"], ["x2", "x1"]]}',
    "missing_map.json": '{"dist": [[0, 1], [1, 0]]}',
    "non_metric.json": '{"dist": [[0, 5, 1], [5, 0, 1], [1, 1, 0]], "map": [["x1", "x1"], ["x2", "x1"], ["x3", "x1"]]}',
    "ragged.csv": ",a,b\na,0,1\n",
    "no_dist.json": '{"points": ["a"]}',
}


@pytest.mark.parametrize("name", sorted(MALFORMED))
def test_malformed_inputs_exit_2(capsys, monkeypatch, tmp_path, name):
    path = tmp_path / name
    path.write_text(MALFORMED[name])
    code, out, _ = run(capsys, monkeypatch, ["classify", str(path), "--class", "npk", "--n", "2"])
    assert code == 2
    assert "error" in json.loads(out)


def test_missing_file_and_label(capsys, monkeypatch, tmp_path, emitted):
    assert run(capsys, monkeypatch, ["verify", str(tmp_path / "nope.json"), "--n", "2"])[0] == 2
    path = tmp_path / "e.json"
    path.write_text(emitted)
    assert run(capsys, monkeypatch, ["iterate", str(path), "--start", "zz"])[0] == 2
    assert run(capsys, monkeypatch, ["classify", str(path), "--class", "npk"])[0] == 2
    assert run(capsys, monkeypatch, ["classify", str(path), "--class", "npk", "--n", "9"])[0] == 2
    assert run(capsys, monkeypatch, ["example", "--n", "2", "--M", "3"])[0] == 2


@pytest.mark.parametrize("argv", [["frobnicate"], ["classify", "--class", "banach"],
                                  ["example", "--n", "4", "--M", "x"], ["search", "--bogus"]])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err
