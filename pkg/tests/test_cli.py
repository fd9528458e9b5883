import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from conftest import PROGRAMS
from holwfs.cli import CliConfig, main

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def schema(name):
    return json.loads((SCHEMAS / name).read_text())


def test_check(capsys):
    code, out, _ = run(capsys, "check", str(PROGRAMS / "subset.hol"))
    assert code == 0 and out.startswith("ok")


def test_check_function_symbol(tmp_path, capsys):
    f = tmp_path / "f.hol"
    f.write_text("f : i->i. p : i->o. p <- \\X. X = f a.")
    code, _, err = run(capsys, "check", str(f))
    assert code == 1 and "E004" in err


def test_unreadable_path(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/x.hol")
    assert code == 2


def test_syntax_error_exit(tmp_path, capsys):
    f = tmp_path / "bad.hol"
    f.write_text("p : o.\np <- .")
    code, _, err = run(capsys, "model", str(f))
    assert code == 1 and ":2:" in err


def test_model_text(capsys):
    code, out, _ = run(capsys, "model", str(PROGRAMS / "apply_not.hol"))
    assert code == 0
    assert "  w false = true\n  w undef = undef\n  w true = false\n" in out
    code, out, _ = run(capsys, "model", str(PROGRAMS / "double_negation.hol"))
    assert out == "universe: c0\np : o = false\n"


def test_model_empty_program(tmp_path, capsys):
    f = tmp_path / "empty.hol"
    f.write_text("")
    code, out, _ = run(capsys, "model", str(f))
    assert code == 0 and out == "universe: c0\n"
    code, out, _ = run(capsys, "model", "--format", "json", str(f))
    assert json.loads(out)["predicates"] == {}


def test_model_json_validates(capsys):
    code, out, _ = run(capsys, "model", "--format", "json", "--trace", str(PROGRAMS / "apply_not.hol"))
    doc = json.loads(out)
    jsonschema.validate(doc, schema("model.schema.json"))
    assert doc["predicates"]["w"]["table"] == {"false": "true", "undef": "undef", "true": "false"}
    assert doc["stats"]["revisions"] == 2
    assert len(doc["trace"]) == 2


def test_model_output_is_byte_identical():
    cmd = [sys.executable, "-m", "holwfs", "model", "--format", "json", "--trace", str(PROGRAMS / "apply_not.hol")]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b


def test_query(capsys):
    path = str(PROGRAMS / "recursive_apply.hol")
    code, out, _ = run(capsys, "query", path, "(s p)", "s q", "true")
    assert code == 0 and out == "false\nfalse\ntrue\n"
    code, _, err = run(capsys, "query", path, "p")
    assert code == 1 and "'p'" in err


def test_query_from_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("(s p)\n\ntrue\n"))
    code, out, _ = run(capsys, "query", str(PROGRAMS / "recursive_apply.hol"))
    assert out == "false\ntrue\n"


def test_kk_and_stable(capsys):
    code, out, _ = run(capsys, "kk", str(PROGRAMS / "double_negation.hol"))
    assert out == "universe: c0\np : o = undef\n"
    code, out, _ = run(capsys, "stable", "--format", "json", str(PROGRAMS / "even_loop.hol"))
    models = json.loads(out)["models"]
    assert len(models) == 3
    for m in models:
        jsonschema.validate({"universe": ["c0"], "predicates": m}, schema("model.schema.json"))


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--format", "json", str(PROGRAMS / "even_loop.hol"))
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, schema("compare.schema.json"))
    assert report == {"atoms": 2, "mismatches": []}
    code, out, _ = run(capsys, "compare", "--random", "200", "--seed", "7", "--format", "json")
    assert code == 0
    jsonschema.validate(json.loads(out), schema("compare.schema.json"))
    code, _, err = run(capsys, "compare", str(PROGRAMS / "double_negation.hol"))
    assert code == 1 and "NotNormalForm" in err
    code, _, err = run(capsys, "compare", str(PROGRAMS / "apply_not.hol"))
    assert code == 1 and "NotPropositional" in err


def test_domain(capsys):
    code, out, _ = run(capsys, "domain", "o->o")
    assert out.splitlines()[0] == "# domain o->o flavor=three count=11"
    code, out, _ = run(capsys, "domain", "i->o", "--individuals", "2", "--format", "json")
    assert json.loads(out)["count"] == 9


def test_capacity_exit(capsys):
    code, _, err = run(capsys, "domain", "(o->o)->o->o", "--max-domain", "1000")
    assert code == 3 and "(o->o)->o->o" in err and "285311670611" in err
    code, _, err = run(capsys, "stable", "--max-domain", "40", str(PROGRAMS / "apply_not.hol"))
    assert code == 3


def test_config_validation():
    with pytest.raises(ValueError):
        CliConfig("model", max_domain=2)
    with pytest.raises(ValueError):
        CliConfig("model", format="xml")
