import io
import json

import pytest

from locfit.cli import climain
from locfit.cli.climain import CliMain, buildParser, runCommand
from locfit.models import theorems
from locfit.models.lattice import InvariantViolation
from locfit.models.settings import locfitSettings


def run(*argv):
    out = io.StringIO()
    code = runCommand(buildParser().parse_args(list(argv)), stdout=out)
    return code, out.getvalue()


def lines(text):
    return [json.loads(line) for line in text.splitlines()]


def test_validate_frame(b4):
    code, out = run("validate", "--named", "b4")
    assert code == 0
    record = json.loads(out)
    assert record["frame"] == "b4"
    assert record["is_distributive_frame"] is True
    assert record["witness"] is None


def test_validate_non_frame(capsys):
    code, out = run("validate", "--named", "m3")
    assert code == 2
    assert json.loads(out)["witness"]["b"] in ("a", "b", "c")
    assert "not a frame" in capsys.readouterr().err


def test_validate_frame_file(tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(json.dumps({"elements": ["0", "m", "1"], "leq": [["0", "m"], ["m", "1"]]}))
    code, out = run("validate", "--frame", str(path))
    assert code == 0
    assert json.loads(out)["frame"] == "chain"


@pytest.mark.parametrize("content", ["{", '{"elements": ["0"], "leq": [["0", "9"]]}', "[1]"])
def test_malformed_frame_file(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _ = run("validate", "--frame", str(path))
    assert code == 2


def test_missing_file(tmp_path):
    code, _ = run("report", "--frame", str(tmp_path / "nope.json"))
    assert code == 2


def test_report():
    code, out = run("report", "--named", "three")
    assert code == 0
    record = json.loads(out)
    assert record["primes"] == ["0", "m"]
    assert record["filters"] == 3
    assert record["sublocales"] == 4
    assert record["fit"] is False
    assert record["subfitness"]["first_order"] is False


def test_cap_override_is_run_scoped():
    code, _ = run("report", "--named", "b4", "--sublocale-cap", "2")
    assert code == 2
    assert locfitSettings.overrides == {}
    assert locfitSettings.sublocaleCap == 16


def test_filters_and_sublocales():
    code, out = run("filters", "--named", "b4")
    assert code == 0
    assert len(json.loads(out)["filters"]) == 4
    code, out = run("sublocales", "--named", "b4")
    assert code == 0
    assert json.loads(out)["fit"] is True


def test_table_format():
    code, out = run("report", "--named", "two", "--format", "table")
    assert code == 0
    assert any(line.startswith("frame ") and line.endswith("two") for line in out.splitlines())


def test_dot():
    code, out = run("dot", "--named", "b4")
    assert code == 0
    assert out.startswith('digraph "b4" {')
    assert out.count("->") == 4
    code, out = run("sublocales", "--named", "three", "--format", "dot")
    assert code == 0 and out.startswith("digraph")


def test_dot_is_refused_where_meaningless():
    code, _ = run("validate", "--named", "b4", "--format", "dot")
    assert code == 2


def test_gc_random_is_reproducible():
    first = run("gc", "--random", "6", "5", "0.4", "--seed", "1")
    assert first == run("gc", "--random", "6", "5", "0.4", "--seed", "1")
    code, out = first
    record = json.loads(out)
    assert code == 0
    assert record["size"] == len(record["concepts"])
    assert record["polarity_laws"] and record["opposite"]


@pytest.mark.parametrize("values", [["3", "3", "1.5"], ["0", "3", "0.5"], ["3", "x", "0.5"]])
def test_gc_random_rejects(values):
    code, _ = run("gc", "--random", *values)
    assert code == 2


def test_gc_context(tmp_path):
    path = tmp_path / "ctx.json"
    path.write_text(json.dumps({"objects": ["g", "h"], "attributes": ["m", "n"],
                                "incidence": [[0, 0], [1, 1]]}))
    code, out = run("gc", "--context", str(path))
    assert code == 0
    record = json.loads(out)
    assert record["context"] == "ctx"
    assert record["size"] == 4
    assert record["concepts"][0] == {"extent": [], "intent": ["m", "n"]}


def test_gc_context_out_of_range(tmp_path):
    path = tmp_path / "ctx.json"
    path.write_text(json.dumps({"objects": ["g"], "attributes": ["m"], "incidence": [[0, 3]]}))
    code, _ = run("gc", "--context", str(path))
    assert code == 2


def test_catalog():
    code, out = run("catalog", "topologies:2")
    assert code == 0
    assert [r["frame"] for r in lines(out)] == ["topologies-1-01", "topologies-2-02", "topologies-2-04"]
    code, out = run("catalog", "topologies:2", "--all")
    assert len(lines(out)) == 5


def test_bad_catalog_spec():
    assert run("catalog", "lattices:3")[0] == 2
    assert run("verify", "--catalog", "chain:x")[0] == 2


def test_extend():
    code, out = run("extend", "--named", "b4", "--class", "cl")
    assert code == 0
    record = json.loads(out)
    assert record["class"] == "cl"
    assert record["size"] == 4
    assert all(check["passed"] for check in record["checks"])


def test_verify_stream_is_stable():
    argv = ("verify", "--catalog", "topologies:2", "--suite", "lem-heyting", "thm-se-iso")
    code, out = run(*argv)
    assert code == 0
    assert (code, out) == run(*argv)
    records = lines(out)
    assert len(records) == 3 * 2 + 1
    assert records[-1]["summary"]["failures"] == 0
    assert records[-1]["summary"]["frames"] == 3


def test_verify_mutation_fails():
    code, out = run("verify", "--named", "b4", "--suite", "thm-se-iso", "--mutation", "flip-relation")
    assert code == 1
    record = lines(out)[0]
    assert record["passed"] is False
    assert record["witness"]["defect"] == "order"


def test_verify_unknown_theorem():
    assert run("verify", "--named", "b4", "--suite", "thm-nope")[0] == 2


def test_verify_checker_value_error_is_a_failure(monkeypatch):
    def broken(frame):
        raise ValueError("bad table")

    monkeypatch.setattr(theorems, "allFilters", broken)
    code, out = run("verify", "--named", "b4", "--suite", "lem-heyting", "--workers", "1")
    assert code == 1
    record = lines(out)[0]
    assert record["passed"] is False
    assert record["witness"] == {"error": "ValueError: bad table"}


def test_invariant_violation_exits_1(monkeypatch, capsys):
    def violated(frame):
        raise InvariantViolation("tables disagree", {"a": "0"})

    monkeypatch.setattr(climain, "allFilters", violated)
    assert run("filters", "--named", "b4")[0] == 1
    assert "tables disagree" in capsys.readouterr().err


def test_verify_table():
    code, out = run("verify", "--named", "b4", "--suite", "lem-heyting", "--format", "table")
    assert code == 0
    assert out.splitlines()[-1] == "1 frames, 0 skipped, 0 failures"


def test_verify_to_file(tmp_path, capsys):
    path = tmp_path / "out.jsonl"
    code, out = run("verify", "--named", "three", "--suite", "lem-heyting", "--output", str(path))
    assert code == 0
    assert out == ""
    assert len(lines(path.read_text())) == 2
    assert "1 frames" in capsys.readouterr().out


def test_settings_show():
    code, out = run("settings", "--show")
    assert code == 0
    assert json.loads(out)["sublocaleCap"] == 16


def test_parse_errors():
    assert CliMain(["frobnicate"]) == 2
    assert CliMain(["--version"]) == 0
