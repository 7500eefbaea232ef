import io
import json

import pytest

from locfit.models.formats import (
    FormatError, contextFromJson, dumpJson, frameFromJson, hasseDot, jsonLine, loadJson,
    topologyFromJson,
)
from locfit.models.lattice import NotALatticeError

THREE = {"elements": ["0", "m", "1"], "leq": [["0", "m"], ["m", "1"]]}


def test_frameFromJson(three):
    L = frameFromJson(THREE, name="three")
    assert L.name == "three"
    assert L.isIsomorphic(three)
    assert L.toJson() == THREE


def test_frameFromJson_file(tmp_path):
    path = tmp_path / "frame.json"
    path.write_text(json.dumps(THREE))
    assert frameFromJson(path).n == 3


@pytest.mark.parametrize("data, field", [
    ({"elements": ["0", "0"], "leq": []}, "elements"),
    ({"elements": "01", "leq": []}, "elements"),
    ({"elements": ["0", "1"], "leq": [["0"]]}, "leq"),
    ({"elements": ["0", "1"], "leq": [["0", "2"]]}, "leq"),
])
def test_frameFromJson_rejects(data, field):
    with pytest.raises(FormatError) as info:
        frameFromJson(data)
    assert info.value.field == field


def test_frameFromJson_not_a_lattice():
    with pytest.raises(NotALatticeError):
        frameFromJson({"elements": ["0", "a", "b"], "leq": [["0", "a"], ["0", "b"]]})


def test_loadJson_errors(tmp_path):
    with pytest.raises(FormatError):
        loadJson(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FormatError):
        loadJson(bad)
    listed = tmp_path / "list.json"
    listed.write_text("[]")
    with pytest.raises(FormatError) as info:
        loadJson(listed)
    assert info.value.field == "root"


def test_topologyFromJson(three):
    L = topologyFromJson({"points": ["x", "y"], "opens": [[], ["x"], ["x", "y"]]})
    assert L.isIsomorphic(three)
    assert L.labels == ("{}", "{x}", "{x,y}")


def test_topologyFromJson_checks_axioms():
    with pytest.raises(FormatError) as info:
        topologyFromJson({"points": ["x", "y"], "opens": [["x"], ["y"], ["x", "y"]]})
    assert info.value.field == "opens"
    with pytest.raises(FormatError):
        topologyFromJson({"points": ["x"], "opens": [[], ["z"]]})


def test_contextFromJson():
    P = contextFromJson({"objects": ["g", "h"], "attributes": ["m"], "incidence": [[0, 0]]})
    assert P.nx == 2 and P.ny == 1
    assert P.related(0, 0) and not P.related(1, 0)
    with pytest.raises(FormatError):
        contextFromJson({"objects": ["g"], "attributes": ["m"], "incidence": [[0, 3]]})


def test_dumpJson_is_stable():
    assert dumpJson({"b": [1, 2], "a": {"d": 1, "c": None}}) == '{"a":{"c":null,"d":1},"b":[1,2]}'
    out = io.StringIO()
    jsonLine({"z": 1, "a": 2}, out)
    assert out.getvalue() == '{"a":2,"z":1}\n'


def test_hasseDot(three):
    dot = hasseDot(three)
    assert dot.startswith('digraph "three" {')
    assert "rankdir=BT;" in dot
    assert "n0 -> n1;" in dot and "n1 -> n2;" in dot
    assert "n0 -> n2;" not in dot
    assert dot.count("rank = same;") == 3


def test_hasseDot_colors_classes(b4):
    dot = hasseDot(b4, title="Sl", classes={0: ["closed", "fitted"], 3: ["spatial"]})
    assert 'digraph "Sl"' in dot
    assert "fillcolor=lightpink" in dot
    assert "fillcolor=khaki" in dot
    assert 'tooltip="closed fitted"' in dot
