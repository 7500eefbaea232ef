"""Deterministic catalogs of small frames.

Four families are available: powersets 2^k, chains, downset lattices of all
posets (up to isomorphism these are exactly the finite distributive lattices)
and open-set lattices of all topologies on a few points. A catalog stream is
de-duplicated up to lattice isomorphism: candidates are bucketed by a
canonical hash and collisions are resolved by an explicit isomorphism search.
"""
import logging
from enum import Enum
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from locfit.util import bitset as bs
from locfit.models.lattice import (
    BoundTooLargeError, FiniteLattice, buildLattice,
)
from locfit.models.settings import locfitSettings

logger = logging.getLogger(__name__)

__all__ = [
    "CatalogKind", "CatalogPart", "twoFrame", "threeChain", "booleanDiamond",
    "diamondM3", "pentagonN5", "chain", "powerset", "posets", "downsetLattice",
    "topologies", "topologyLattice", "topologyDefect", "catalog",
    "parseCatalogSpec", "iterCatalog", "defaultCatalog", "DEFAULT_CATALOG",
]

# Number of topologies on k labelled points and of posets on k unlabelled
# elements, used to estimate a request before enumerating it.
_LABELLED_TOPOLOGIES = (1, 1, 4, 29, 355, 6942, 209527)
_UNLABELLED_POSETS = (1, 1, 2, 5, 16, 63, 318, 2045)

Poset = Tuple[int, ...]  # downMask per element, reflexive


class CatalogKind(Enum):
    POWERSET = "powerset"
    CHAIN = "chain"
    DOWNSETS = "downsets"
    TOPOLOGIES = "topologies"

    @classmethod
    def parse(cls, text: str) -> "CatalogKind":
        aliases = {
            "downsets-of-all-posets": cls.DOWNSETS,
            "opens-of-all-topologies": cls.TOPOLOGIES,
            "chains": cls.CHAIN,
            "powersets": cls.POWERSET,
        }
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"Unknown catalog kind {text!r}") from None


class CatalogPart(NamedTuple):
    kind: CatalogKind
    bound: int


DEFAULT_CATALOG = "topologies:3,downsets:4,chain:6,powerset:3"


def _setLabel(mask: int, names: Sequence[str]) -> str:
    return "{" + ",".join(names[i] for i in bs.iterBits(mask)) + "}"


def twoFrame() -> FiniteLattice:
    return buildLattice(["0", "1"], [("0", "1")], name="two")


def threeChain() -> FiniteLattice:
    return buildLattice(["0", "m", "1"], [("0", "m"), ("m", "1")], name="three")


def booleanDiamond() -> FiniteLattice:
    return buildLattice(
        ["0", "a", "b", "1"],
        [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        name="b4",
    )


def diamondM3() -> FiniteLattice:
    atoms = ["a", "b", "c"]
    pairs = [("0", x) for x in atoms] + [(x, "1") for x in atoms]
    return buildLattice(["0"] + atoms + ["1"], pairs, name="m3")


def pentagonN5() -> FiniteLattice:
    pairs = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]
    return buildLattice(["0", "a", "b", "c", "1"], pairs, name="n5")


NAMED_FRAMES = {
    "two": twoFrame,
    "three": threeChain,
    "b4": booleanDiamond,
    "m3": diamondM3,
    "n5": pentagonN5,
}


def chain(k: int) -> FiniteLattice:
    """The chain 0 < 1 < ... < k (k + 1 elements)."""
    labels = [str(i) for i in range(k + 1)]
    return buildLattice(labels, zip(labels, labels[1:]), name=f"chain-{k}")


def powerset(k: int) -> FiniteLattice:
    names = [f"p{i + 1}" for i in range(k)]
    masks = list(range(1 << k))
    labels = [_setLabel(m, names) for m in masks]
    return FiniteLattice.fromFamily(masks, labels, name=f"powerset-{k}")


def _posetGraph(poset: Poset) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(poset)))
    graph.add_edges_from(
        (i, j) for j, down in enumerate(poset) for i in bs.iterBits(down) if i != j
    )
    return nx.transitive_reduction(graph) if len(poset) else graph


def posets(k: int) -> List[Poset]:
    """Every poset on k elements, up to isomorphism, in a fixed order.

    Posets on k elements are grown from those on k - 1 elements by adding a
    new maximal element above a down-closed subset.
    """
    layer: List[Poset] = [tuple()]
    for size in range(k):
        grown: List[Poset] = []
        graphs: Dict[str, List[nx.DiGraph]] = {}
        for poset in layer:
            for down in bs.iterSubsets(bs.fullMask(size)):
                if any(poset[i] & ~down for i in bs.iterBits(down)):
                    continue
                candidate = poset + (down | (1 << size),)
                graph = _posetGraph(candidate)
                key = nx.weisfeiler_lehman_graph_hash(graph, iterations=3)
                bucket = graphs.setdefault(key, [])
                if any(nx.is_isomorphic(graph, other) for other in bucket):
                    continue
                bucket.append(graph)
                grown.append(candidate)
        layer = grown
    return layer


def downsetLattice(poset: Poset, name: str = "") -> FiniteLattice:
    k = len(poset)
    names = [f"p{i + 1}" for i in range(k)]
    masks = [
        m for m in range(1 << k)
        if all(poset[i] & ~m == 0 for i in bs.iterBits(m))
    ]
    labels = [_setLabel(m, names) for m in masks]
    return FiniteLattice.fromFamily(masks, labels, name=name)


def topologyDefect(k: int, opens: Sequence[int]) -> Optional[str]:
    """Why a family of point subsets is not a topology, None if it is one."""
    family = set(opens)
    if 0 not in family:
        return "missing empty set"
    if bs.fullMask(k) not in family:
        return "missing full set"
    for a, b in combinations(sorted(family), 2):
        if a | b not in family:
            return "not closed under union"
        if a & b not in family:
            return "not closed under intersection"
    return None


def topologyLattice(points: Sequence[str], opens: Sequence[int], name: str = "") -> FiniteLattice:
    masks = sorted(set(opens))
    labels = [_setLabel(m, points) for m in masks]
    return FiniteLattice.fromFamily(masks, labels, name=name)


def topologies(k: int) -> Iterator[FiniteLattice]:
    """Open-set lattices of every topology on k labelled points."""
    points = [f"x{i + 1}" for i in range(k)]
    full = bs.fullMask(k)
    middle = [m for m in range(1, full)]
    count = 0
    for choice in bs.iterSubsets(bs.fullMask(len(middle))):
        opens = [0] + [middle[i] for i in bs.iterBits(choice)] + [full]
        if topologyDefect(k, opens) is None:
            count += 1
            yield topologyLattice(points, opens, name=f"topologies-{k}-{count:02d}")


def _estimate(part: CatalogPart) -> int:
    bound = part.bound
    if part.kind in (CatalogKind.POWERSET, CatalogKind.CHAIN):
        return bound
    table = _LABELLED_TOPOLOGIES if part.kind is CatalogKind.TOPOLOGIES else _UNLABELLED_POSETS
    if bound >= len(table):
        return float("inf")
    return sum(table[1:bound + 1])


def _generate(part: CatalogPart) -> Iterator[FiniteLattice]:
    kind, bound = part
    if kind is CatalogKind.POWERSET:
        for k in range(1, bound + 1):
            yield powerset(k)
    elif kind is CatalogKind.CHAIN:
        for k in range(1, bound + 1):
            yield chain(k)
    elif kind is CatalogKind.DOWNSETS:
        for k in range(1, bound + 1):
            for i, poset in enumerate(posets(k), start=1):
                yield downsetLattice(poset, name=f"downsets-{k}-{i:02d}")
    else:
        for k in range(1, bound + 1):
            yield from topologies(k)


class _IsoFilter:
    """Remembers the lattices seen so far, up to isomorphism."""

    def __init__(self) -> None:
        self._buckets: Dict[str, List[FiniteLattice]] = {}

    def isNew(self, lattice: FiniteLattice) -> bool:
        bucket = self._buckets.setdefault(lattice.canonicalKey(), [])
        if any(lattice.isIsomorphic(other) for other in bucket):
            return False
        bucket.append(lattice)
        return True


def catalog(kind: CatalogKind, sizeBound: int, unique: bool = True) -> Iterator[FiniteLattice]:
    """Yield the frames of one catalog family in a fixed order.

    Args:
        kind: the catalog family.
        sizeBound: largest k (power, chain length, poset size or point count).
        unique: drop frames isomorphic to an earlier one.

    Raises:
        BoundTooLargeError: if the estimated output exceeds catalogCap.
    """
    yield from iterCatalog([CatalogPart(kind, sizeBound)], unique=unique)


def parseCatalogSpec(spec: str) -> List[CatalogPart]:
    """Parse 'kind:bound,kind:bound'; 'default' stands for DEFAULT_CATALOG.

    Raises:
        ValueError: on an unknown kind or a malformed bound.
    """
    spec = spec.strip()
    if spec == "default":
        spec = DEFAULT_CATALOG
    parts = []
    for item in filter(None, (s.strip() for s in spec.split(","))):
        kind, sep, bound = item.partition(":")
        if not sep or not bound.isdigit() or int(bound) < 1:
            raise ValueError(f"Malformed catalog item {item!r}, expected kind:bound")
        parts.append(CatalogPart(CatalogKind.parse(kind), int(bound)))
    return parts


def iterCatalog(parts: Iterable[CatalogPart], unique: bool = True) -> Iterator[FiniteLattice]:
    parts = list(parts)
    cap = locfitSettings.catalogCap
    for part in parts:
        estimate = _estimate(part)
        if estimate > cap:
            raise BoundTooLargeError(
                f"{part.kind.value}:{part.bound} would enumerate about {estimate} frames (cap {cap})"
            )
    seen = _IsoFilter()
    for part in parts:
        for lattice in _generate(part):
            if not unique or seen.isNew(lattice):
                yield lattice


def defaultCatalog() -> List[FiniteLattice]:
    return list(iterCatalog(parseCatalogSpec(DEFAULT_CATALOG)))

