"""Flat-file formats: frame, topology and context JSON, deterministic dumps, DOT.

Frame JSON:    {"elements": ["0","m","1"], "leq": [["0","m"],["m","1"]]}
Topology JSON: {"points": ["x","y"], "opens": [[],["x"],["x","y"]]}
Context JSON:  {"objects": [...], "attributes": [...], "incidence": [[0,1],...]}
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence, TextIO, Union

from locfit.util import bitset as bs
from locfit.models.lattice import FiniteLattice, LocfitError, buildLattice
from locfit.models.catalog import topologyDefect, topologyLattice
from locfit.models.polarity import Polarity

logger = logging.getLogger(__name__)

__all__ = [
    "FormatError", "loadJson", "frameFromJson", "topologyFromJson",
    "contextFromJson", "dumpJson", "jsonLine", "hasseDot",
]

Source = Union[str, Path, Mapping[str, Any]]

# Fill colors of the DOT export, in legend order.
CLASS_COLORS = {
    "open": "lightblue",
    "closed": "lightpink",
    "fitted": "palegreen",
    "spatial": "khaki",
}


class FormatError(LocfitError):
    """Malformed or inconsistent input; field names the offending key."""

    def __init__(self, message: str, field: str = "") -> None:
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


def loadJson(source: Source) -> Dict[str, Any]:
    if isinstance(source, Mapping):
        return dict(source)
    path = Path(source)
    try:
        with path.open() as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise FormatError(f"file not found: {path}", "path") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON in {path}: {e.msg}", "path") from None
    if not isinstance(data, dict):
        raise FormatError("a JSON object is expected", "root")
    return data


def _stringList(data: Mapping[str, Any], key: str) -> list:
    value = data.get(key)
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise FormatError("a list of strings is expected", key)
    if len(set(value)) != len(value):
        raise FormatError("duplicate entries", key)
    return value


def frameFromJson(source: Source, name: str = "") -> FiniteLattice:
    """Build a lattice from Frame JSON.

    Raises:
        FormatError: on malformed input.
        NotAPosetError, NotALatticeError: on an invalid order.
    """
    data = loadJson(source)
    elements = _stringList(data, "elements")
    pairs = data.get("leq", [])
    if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 for p in pairs):
        raise FormatError("a list of [a, b] pairs is expected", "leq")
    known = set(elements)
    for a, b in pairs:
        if a not in known or b not in known:
            raise FormatError(f"undeclared element in [{a}, {b}]", "leq")
    return buildLattice(elements, [tuple(p) for p in pairs], name=name or data.get("name", ""))


def topologyFromJson(source: Source, name: str = "") -> FiniteLattice:
    """Build the open-set lattice of a topology, checking the topology axioms."""
    data = loadJson(source)
    points = _stringList(data, "points")
    index = {p: i for i, p in enumerate(points)}
    opens = data.get("opens")
    if not isinstance(opens, list):
        raise FormatError("a list of point lists is expected", "opens")
    masks = []
    for member in opens:
        if not isinstance(member, list) or any(p not in index for p in member):
            raise FormatError(f"unknown point in {member}", "opens")
        masks.append(bs.fromIndices(index[p] for p in member))
    defect = topologyDefect(len(points), masks)
    if defect is not None:
        raise FormatError(defect, "opens")
    return topologyLattice(points, masks, name=name or data.get("name", ""))


def contextFromJson(source: Source) -> Polarity:
    data = loadJson(source)
    objects = _stringList(data, "objects")
    attributes = _stringList(data, "attributes")
    incidence = data.get("incidence", [])
    if not isinstance(incidence, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(i, int) for i in p)
            for p in incidence):
        raise FormatError("a list of [object, attribute] index pairs is expected", "incidence")
    try:
        return Polarity.fromPairs(objects, attributes, [tuple(p) for p in incidence])
    except ValueError as e:
        raise FormatError(str(e), "incidence") from None


def dumpJson(obj: Any) -> str:
    """Byte-stable JSON: sorted keys and compact separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def jsonLine(obj: Any, out: TextIO) -> None:
    out.write(dumpJson(obj) + "\n")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def hasseDot(
        lattice: FiniteLattice,
        title: str = "",
        classes: Optional[Mapping[int, Sequence[str]]] = None,
) -> str:
    """DOT source of the Hasse diagram, bottom up, one rank per layer.

    Args:
        lattice: the lattice to draw.
        title: the graph name, the lattice name by default.
        classes: optional class names per element; the first class with a
            known color fills the node.
    """
    lines = []
    write = lines.append
    write(f"digraph {_quote(title or lattice.name or 'lattice')} {{")
    write("\trankdir=BT;")
    write("\tnode [shape=box];")
    ranks = lattice.ranks()
    for rank in sorted(set(ranks)):
        write("\t{")
        write("\t\trank = same;")
        for i in range(lattice.n):
            if ranks[i] != rank:
                continue
            attrs = [f"label={_quote(lattice.labels[i])}"]
            tags = list(classes.get(i, ())) if classes else []
            color = next((CLASS_COLORS[t] for t in tags if t in CLASS_COLORS), None)
            if color:
                attrs += ["style=filled", f"fillcolor={color}"]
            if tags:
                attrs.append(f"tooltip={_quote(' '.join(tags))}")
            write(f"\t\tn{i} [{', '.join(attrs)}];")
        write("\t}")
    for a, b in lattice.coverPairs():
        write(f"\tn{a} -> n{b};")
    write("}")
    return "\n".join(lines) + "\n"
