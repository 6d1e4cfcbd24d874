import json
import re
import subprocess
import sys

import pytest

from monochromatic import cli
from monochromatic.cli import DocumentError, dump_document, load_document, main
from monochromatic.theorems import Verdict


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def b5(tmp_path, capsys):
    path = tmp_path / "b5.json"
    assert run(["generate", "boroczky", "--k", "5", "-o", str(path)], capsys)[0] == 0
    return path


# -- generate ---------------------------------------------------------------

def test_generate_boroczky(b5):
    doc = json.loads(b5.read_text())
    assert doc["field"]["conductor"] == 20
    assert len(doc["points"]) == 10 and doc["projective"]
    assert doc["meta"] == {"family": "boroczky", "params": {"k": 5}, "seed": None}


def test_generate_ellipse(tmp_path, capsys):
    path = tmp_path / "e9.json"
    assert run(["generate", "ellipse", "--m", "9", "-o", str(path)], capsys)[0] == 0
    doc = json.loads(path.read_text())
    assert doc["field"]["conductor"] == 72 and len(doc["points"]) == 18


def test_generate_group(capsys):
    code, out, _ = run(["generate", "group", "--family", "conic_coset", "--k", "5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["modulus"] == 120 and 5 in doc["blue"] and 119 in doc["red"]
    assert doc["targets"] == {"line": 0, "circle": None, "conic": 0}


def test_generate_bad_params(capsys):
    code, _, err = run(["generate", "boroczky", "--k", "2"], capsys)
    assert code == 2 and "error" in err
    with pytest.raises(SystemExit) as exc:
        main(["generate", "nonesuch"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["boroczky", "--k", "6"], ["near_pencil", "--n", "7"], ["triangle_medial"],
    ["pentagon_ten"], ["two_circles", "--n-b", "3", "--n-r", "4"], ["concentric", "--m", "3"],
    ["random", "--n", "8", "--seed", "3"], ["group", "--family", "cubic_coset", "--n", "12"],
    ["group", "--family", "circular_cubic", "--m", "5"], ["perturbed_circle", "--seed", "1"],
])
def test_document_roundtrip_byte_identical(argv, capsys):
    code, out, _ = run(["generate", *argv], capsys)
    assert code == 0
    assert dump_document(load_document(out)) == out
    assert run(["generate", *argv], capsys)[1] == out


# -- analyze ----------------------------------------------------------------

def test_analyze_boroczky(b5, capsys):
    code, out, _ = run(["analyze", str(b5), "--p", "1/2"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["mono"]["line"] == "1"
    assert rep["expectation"] == {"p": "1/2", "value": "81/16"}
    assert rep["stats"]["t_total"] == {"2": "5", "3": "10", "5": "1"}
    assert all(v["passed"] for v in rep["verdicts"])


def test_analyze_is_pure(b5, capsys):
    first = run(["analyze", str(b5)], capsys)[1]
    assert run(["analyze", str(b5)], capsys)[1] == first


def test_analyze_near_pencil_and_ellipse(tmp_path, capsys):
    np_path, e_path = tmp_path / "np.json", tmp_path / "e9.json"
    run(["generate", "near_pencil", "--n", "10", "-o", str(np_path)], capsys)
    run(["generate", "ellipse", "--m", "9", "-o", str(e_path)], capsys)
    rep = json.loads(run(["analyze", str(np_path)], capsys)[1])
    assert rep["expectation"]["value"] == "1153/256"
    assert rep["bounds"]["melchior_lhs"] == "3"
    rep = json.loads(run(["analyze", str(e_path)], capsys)[1])
    assert rep["mono"]["circle"] == "0"


def test_analyze_numbers_are_strings(b5, capsys):
    rep = json.loads(run(["analyze", str(b5), "--k", "5"], capsys)[1])

    def walk(v):
        if isinstance(v, dict):
            for x in v.values():
                walk(x)
        elif isinstance(v, list):
            for x in v:
                walk(x)
        else:
            assert v is None or isinstance(v, (str, bool))
    walk(rep)


def test_analyze_group_and_certified(tmp_path, capsys):
    g, pc = tmp_path / "g.json", tmp_path / "pc.json"
    run(["generate", "group", "--family", "cubic_coset", "--n", "12", "-o", str(g)], capsys)
    rep = json.loads(run(["analyze", str(g)], capsys)[1])
    assert rep["mono"]["line"] == "7" and rep["bounds"]["lemma1_exact"] == "7"
    run(["generate", "perturbed_circle", "-o", str(pc)], capsys)
    rep = json.loads(run(["analyze", str(pc)], capsys)[1])
    assert rep["mono"]["circle"] == "0"


def test_analyze_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["analyze", str(bad)], capsys)[0] == 2
    bad.write_text(json.dumps({"field": {"conductor": 4}, "projective": False, "meta": {},
                               "points": [{"coords": [{"m": 4, "c": ["0", "1"]}, "0", "1"],
                                           "color": "blue"}]}))
    assert run(["analyze", str(bad)], capsys)[0] == 2
    with pytest.raises(DocumentError):
        load_document("[]")
    assert run(["analyze", str(tmp_path / "missing.json")], capsys)[0] == 2


# -- verify -----------------------------------------------------------------

def test_verify_milicevic(capsys):
    code, out, _ = run(["verify", "milicevic"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["failures"] == 0
    assert rep["verdicts"][0]["name"] == "milicevic5" and rep["verdicts"][0]["passed"]


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2


def test_verify_reports_failure(monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_suite", lambda name: [Verdict("x", True, False, None, "broken")])
    code, out, err = run(["verify", "mr"], capsys)
    assert code == 1 and "FAIL x" in err
    monkeypatch.setattr(cli, "run_suite", lambda name: [Verdict("x", False, None)])
    assert run(["verify", "mr"], capsys)[0] == 0


# -- render -----------------------------------------------------------------

def test_render_boroczky(b5, tmp_path, capsys):
    out = tmp_path / "b5.svg"
    assert run(["render", str(b5), "-o", str(out)], capsys)[0] == 0
    svg = out.read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count('r="5"') == 10
    assert svg.count('fill="#1f5fbf"') == 5 and svg.count('fill="#c8322d"') == 5
    # 5 tangent pairs, 10 chords and the line at infinity
    assert svg.count("<line ") == 16
    again = tmp_path / "again.svg"
    run(["render", str(b5), "-o", str(again)], capsys)
    assert again.read_text() == svg


def test_render_margin_and_digits(b5, capsys):
    code, svg, _ = run(["render", str(b5), "--chart", "margin", "--digits", "2"], capsys)
    assert code == 0 and "stroke-dasharray" in svg
    numbers = re.findall(r'(?:cx|cy|x1|y1)="([-0-9.]+)"', svg)
    assert numbers and all(re.fullmatch(r"-?\d+\.\d{2}", v) for v in numbers)


def test_render_pentagon_with_circles(tmp_path, capsys):
    doc = tmp_path / "p.json"
    run(["generate", "pentagon_ten", "-o", str(doc)], capsys)
    code, svg, _ = run(["render", str(doc), "--chart", "margin", "--circles"], capsys)
    assert code == 0 and svg.count('r="5"') == 10


def test_render_group_is_unpaintable(tmp_path, capsys):
    doc = tmp_path / "g.json"
    run(["generate", "group", "--family", "conic_coset", "--k", "5", "-o", str(doc)], capsys)
    code, _, err = run(["render", str(doc)], capsys)
    assert code == 2 and "drawn" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "monochromatic", "generate", "near_pencil", "--n", "4"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["meta"]["family"] == "near_pencil"
