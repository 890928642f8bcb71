import json

from entatlas.cli import main
from entatlas.invariants import inv_L
from entatlas.qstate import decode_form


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_form(capsys):
    code, out, _ = run(capsys, "classify", "--form", "59520")
    assert code == 0
    doc = json.loads(out)
    assert doc["label"] == 59520
    assert doc["variety"] == "Tau(P1xP1xP1xP1)"
    assert doc["stratum"] == "Gr_5"
    assert doc["invariants"] == {"B": "0", "L": "0", "M": "0", "Dxy": "0", "Delta": "0", "Z": "0"}


def test_classify_outside_secant_fails_exit_2(capsys):
    n = next(n for n in range(1, 65536) if inv_L(decode_form(n)) != 0)
    code, _, err = run(capsys, "classify", "--form", str(n))
    assert code == 2
    assert "FAIL" in err


def test_classify_zero_state_input_error(capsys):
    code, _, err = run(capsys, "classify", "--form", "0")
    assert code == 1
    assert "zero state" in err


def test_classify_extended(capsys):
    code, out, _ = run(capsys, "classify", "--form", "6014", "--extended")
    assert code == 0
    assert json.loads(out)["label"] == 6014
    code, out, _ = run(capsys, "classify", "--form", "6014")
    assert json.loads(out)["label"] == 65257


def test_classify_stdin_and_file(tmp_path, capsys, monkeypatch):
    path = tmp_path / "state.json"
    path.write_text(decode_form(65534).to_json())
    code, out, _ = run(capsys, "classify", "--in", str(path))
    assert code == 0 and json.loads(out)["label"] == 65534

    import io

    monkeypatch.setattr("sys.stdin", io.StringIO('{"form": 65534}'))
    code, out, _ = run(capsys, "classify")
    assert code == 0 and json.loads(out)["label"] == 65534


def test_classify_float_mode(capsys):
    code, out, _ = run(capsys, "classify", "--form", "59520", "--mode", "float")
    assert code == 0
    doc = json.loads(out)
    assert doc["label"] == 59520 and doc["mode"] == "float" and "confidence" in doc


def test_classify_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    code, _, err = run(capsys, "classify", "--in", str(path))
    assert code == 1


def test_invariants_ghz_style(capsys):
    code, out, _ = run(capsys, "invariants", "--form", "65534")
    assert code == 0
    doc = json.loads(out)
    assert doc["B"] != "0" and doc["L"] == "0" and doc["M"] == "0"
    assert doc["S"] == "1/12"


def test_eval_command(capsys):
    code, out, _ = run(capsys, "eval", "--covariant", "L_6000", "--form", "65218")
    assert code == 0
    doc = json.loads(out)
    assert doc["is_zero"] is False and doc["multidegree"] == [6, 0, 0, 0]
    code, _, err = run(capsys, "eval", "--covariant", "Q_9999", "--form", "3")
    assert code == 1
    code, _, err = run(capsys, "eval", "--covariant", "B_1111", "--form", "3")
    assert code == 1


def test_verify_command(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--out", str(tmp_path))
    assert code == 0
    assert out.strip().endswith("(92 checks)")
    assert (tmp_path / "verify_report.txt").exists()


def test_atlas_and_graph_wiring(capsys, tmp_path, monkeypatch):
    # patch the heavy discovery with a miniature form set; the real numbers
    # are covered by the acceptance suite
    import entatlas.cli as cli

    def tiny_discovery(which, args):
        from entatlas.atlas import discover_classes

        forms = [0, 1, 59520, 65534]
        return forms, discover_classes(forms, processes=1)

    monkeypatch.setattr(cli, "_discovery", tiny_discovery)
    code, out, _ = run(capsys, "atlas", "nullcone", "--out", str(tmp_path))
    assert code == 0
    assert "4 forms, 4 classes" in out
    classes = json.loads((tmp_path / "nullcone_classes.json").read_text())
    assert classes["class_count"] == 4
    assert (tmp_path / "nullcone_graph.dot").exists()

    out_file = tmp_path / "g.dot"
    code, _, _ = run(capsys, "graph", "nullcone", "--dot", "--out", str(out_file))
    assert code == 0
    assert out_file.read_text().startswith("digraph")

    code, out, _ = run(capsys, "graph", "nullcone")
    assert code == 0
    doc = json.loads(out)
    assert {"nodes", "edges"} <= set(doc)
