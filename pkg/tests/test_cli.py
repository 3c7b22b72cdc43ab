"""The command line front end: file parsing, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from entwine.cli import (
    main,
    parse_structure_document,
    payload_to_structure_document,
)
from entwine.corpus import builtin
from entwine.exactlin import Field, ParseError, QQ

F2 = Field("Fp", 2)
F3 = Field("Fp", 3)


def export(tmp_path, name, field, fname=None):
    entry = builtin(name, field)
    doc = payload_to_structure_document(field, entry.payload)
    p = tmp_path / ((fname or name) + ".json")
    p.write_text(json.dumps(doc))
    return p


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- validate -----------------------------------------------------------------

@pytest.mark.parametrize("name,field", [
    ("kC2", F2), ("GL3", QQ), ("sweedler", F3), ("doihopf-kC2", F2),
    ("doihopf-kC2-datum", F3), ("fact-doihopf-kC2", F2), ("ext-k-M2", QQ),
    ("flip-k-arrow", F3),
])
def test_validate_corpus_exports_pass(tmp_path, capsys, name, field):
    p = export(tmp_path, name, field)
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 0
    assert "ok: True" in out


def test_validate_broken_counit(tmp_path, capsys):
    p = export(tmp_path, "GL2", F2)
    doc = json.loads(p.read_text())
    doc["coalgebra"]["counit"][0] = "0"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", str(p), "--format", "json")
    assert code == 1
    rep = json.loads(out)
    assert not rep["ok"]
    assert any("counit" in v["law"] for v in rep["violations"])


def test_validate_malformed_scalar(tmp_path, capsys):
    p = export(tmp_path, "kC2", QQ)
    doc = json.loads(p.read_text())
    doc["algebra"]["unit"][0] = "1/0"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2
    assert "algebra.unit[0]" in err


@pytest.mark.parametrize("mangle,needle", [
    (lambda d: d.pop("field"), "field"),
    (lambda d: d.update(algebra={"mult": [], "unit": []}), "exactly one"),
    (lambda d: d.update(extra=1), "unknown keys"),
    (lambda d: d["coalgebra"].pop("counit"), "coalgebra"),
])
def test_validate_structural_errors(tmp_path, capsys, mangle, needle):
    p = export(tmp_path, "DN", F2)
    doc = json.loads(p.read_text())
    mangle(doc)
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2
    assert needle in err


def test_validate_not_json(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{nope")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2
    assert "JSON" in err


def test_validate_missing_file(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/x.json")
    assert code == 2


def test_ragged_matrix_rejected(tmp_path, capsys):
    p = export(tmp_path, "ext-k-kC2", F2)
    doc = json.loads(p.read_text())
    doc["ring_extension"]["embedding"] = [["1"], ["0", "0"]]
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2


# -- analyze ------------------------------------------------------------------

def test_analyze_gsep_doihopf_f2_is_no(tmp_path, capsys):
    p = export(tmp_path, "doihopf-kC2", F2)
    code, out, _ = run(capsys, "analyze", str(p), "--question", "G-sep",
                       "--format", "json")
    assert code == 1
    rep = json.loads(out)
    assert rep["status"] == "no"
    assert rep["definitive"] is True
    assert rep["reason"]


def test_analyze_frobenius_not_separable_headline(tmp_path, capsys):
    p = export(tmp_path, "flip-k-DN", QQ)
    code, out, _ = run(capsys, "analyze", str(p), "--question", "FG-frob",
                       "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "yes"
    assert set(rep["witness"]) >= {"theta", "z"}
    assert rep["residual_checks"] == {"frobenius-system": "0"}
    code, out, _ = run(capsys, "analyze", str(p), "--question", "F-sep",
                       "--format", "json")
    assert code == 1
    assert json.loads(out)["status"] == "no"


def test_analyze_ext_frobenius_m2(tmp_path, capsys):
    p = export(tmp_path, "ext-k-M2", F3)
    code, out, _ = run(capsys, "analyze", str(p), "--question", "ext-frob",
                       "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "yes"
    assert rep["residual_checks"] == {"frobenius-system": "0"}
    assert set(rep["witness"]) >= {"nu", "e"}


def test_analyze_question_payload_mismatch(tmp_path, capsys):
    p = export(tmp_path, "ext-k-M2", F3)
    code, _, err = run(capsys, "analyze", str(p), "--question", "FG-frob")
    assert code == 2
    assert "usage error" in err


def test_analyze_smash_reports(tmp_path, capsys):
    p = export(tmp_path, "fact-doihopf-kC2", F2)
    code, out, _ = run(capsys, "analyze", str(p), "--question", "smash-over-A",
                       "--format", "json")
    assert code == 1  # split fails over F2
    rep = json.loads(out)
    got = {k: v["status"] for k, v in rep["verdicts"].items()}
    assert got == {"split": "no", "separable": "yes", "frobenius": "yes"}
    code, out, _ = run(capsys, "analyze", str(p), "--question", "smash-over-B",
                       "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert all(v["status"] == "yes" for v in rep["verdicts"].values())


def test_analyze_cross_check(tmp_path, capsys):
    p = export(tmp_path, "flip-k-DN", F2)
    code, out, _ = run(capsys, "analyze", str(p), "--question", "cross-check",
                       "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["agree"] is True
    assert rep["entwined"]["status"] == "yes"
    assert rep["extension"]["status"] == "yes"


def test_analyze_doi_hopf_payload_accepted(tmp_path, capsys):
    p = export(tmp_path, "doihopf-kC2-datum", F3)
    code, out, _ = run(capsys, "analyze", str(p), "--question", "FG-frob",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["status"] == "yes"


def test_analyze_unknown_exit_code(tmp_path, capsys):
    p = export(tmp_path, "flip-k-GL2", QQ)
    code, out, _ = run(capsys, "analyze", str(p), "--question", "FG-frob",
                       "--format", "json", "--trials", "0",
                       "--enum-budget", "0")
    assert code == 3
    assert json.loads(out)["status"] == "unknown"


def test_analyze_invalid_structure(tmp_path, capsys):
    p = export(tmp_path, "kC2", F2)
    doc = json.loads(p.read_text())
    doc["algebra"]["mult"][0][0][1] = "1"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "analyze", str(p), "--question", "ext-split",
                       "--format", "json")
    assert code == 1
    assert json.loads(out)["ok"] is False


def test_analyze_byte_deterministic(tmp_path, capsys):
    p = export(tmp_path, "doihopf-kC2", F3)
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "analyze", str(p), "--question", "FG-frob",
                           "--format", "json", "--seed", "5")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["seed"] == 5


# -- corpus -------------------------------------------------------------------

def test_corpus_list(capsys):
    code, out, _ = run(capsys, "corpus", "list", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["count"] >= 12
    names = [e["name"] for e in rep["entries"]]
    assert "doihopf-kC2" in names and "sweedler" in names


def test_corpus_export_validates(tmp_path, capsys):
    code, out, _ = run(capsys, "corpus", "export", "--name", "doihopf-kC2",
                       "--field", "F2")
    assert code == 0
    p = tmp_path / "dh.json"
    p.write_text(out)
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 0


def test_corpus_export_unknown(capsys):
    code, _, err = run(capsys, "corpus", "export", "--name", "nosuch")
    assert code == 2


def test_corpus_export_bad_field(capsys):
    code, _, err = run(capsys, "corpus", "export", "--name", "kC2",
                       "--field", "F")
    assert code == 2
    assert "--field" in err


def test_corpus_run_clean_and_deterministic(capsys, monkeypatch):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "corpus", "run", "--format", "json")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert rep["ok"] and rep["failed"] == 0 and rep["checks"] > 50
    monkeypatch.setenv("ENTWINE_NO_PARALLEL", "1")
    code, serial, _ = run(capsys, "corpus", "run", "--format", "json")
    assert code == 0
    assert serial == outs[0]


def test_corpus_run_injected_mutation_fails(capsys):
    code, out, _ = run(capsys, "corpus", "run", "--inject-mutation", "kC2")
    assert code == 1
    assert "FAIL" in out


def test_corpus_run_unknown_mutation_target(capsys):
    code, _, err = run(capsys, "corpus", "run", "--inject-mutation", "zzz")
    assert code == 2


# -- round trips through the file format ---------------------------------------

@pytest.mark.parametrize("field", [QQ, F2, F3])
def test_document_round_trip_every_entry(field):
    from entwine.corpus import all_entries

    for entry in all_entries(field):
        doc = json.loads(json.dumps(
            payload_to_structure_document(field, entry.payload)))
        f2, kind, payload = parse_structure_document(doc)
        assert f2 == field
        assert payload == entry.payload, entry.name


def test_rational_scalars_round_trip():
    doc = {"field": {"kind": "Q"},
           "algebra": {"mult": [[["3/2"]]], "unit": ["2/3"]}}
    field, kind, a = parse_structure_document(doc)
    assert kind == "algebra"
    assert a.mult[0][0][0] == QQ.parse("3/2")
    assert a.unit[0] == QQ.parse("2/3")


def test_console_script_installed():
    out = subprocess.run([sys.executable, "-m", "entwine.cli", "corpus", "list"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "doihopf-kC2" in out.stdout
