"""Finite lattices and frames.

A FiniteLattice stores its order as a read-only boolean matrix and its binary
operations as integer tables. Elements are the indices 0..n-1; subsets of
elements are int bitsets (see locfit.util.bitset). A finite lattice is a frame
exactly when it is distributive, and then the Heyting arrow is precomputed
into a table on first use.
"""
import logging
from functools import cached_property
from typing import (
    Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence,
    Tuple,
)
from dataclasses import dataclass

import networkx as nx
import numpy as np

from locfit.util import bitset as bs
from locfit.models.settings import locfitSettings

logger = logging.getLogger(__name__)

__all__ = [
    "ElementId", "LocfitError", "InvariantViolation", "NotAPosetError",
    "NotALatticeError", "NotAFrameError", "BoundTooLargeError",
    "FrameLawWitness", "FrameCheckReport", "FiniteLattice", "buildLattice",
    "isFrame", "heyting", "pseudocomplement", "primes", "coheytingDifference",
    "heytingLawWitness", "checkClosureOperator", "checkInteriorOperator",
]

ElementId = int


class LocfitError(Exception):
    """Base class of every locfit domain error."""

    pass


class InvariantViolation(LocfitError):
    """An internal cross-check disagreed; witness names the culprits."""

    def __init__(self, message: str, witness: Optional[dict] = None) -> None:
        super().__init__(message)
        self.witness = witness or {}


class NotAPosetError(LocfitError):
    def __init__(self, pair: Tuple[str, str]) -> None:
        super().__init__(f"Antisymmetry violated by {pair[0]} and {pair[1]}")
        self.pair = pair


class NotALatticeError(LocfitError):
    def __init__(self, pair: Tuple[str, str], kind: str) -> None:
        super().__init__(f"No unique {kind} for {pair[0]} and {pair[1]}")
        self.pair = pair
        self.kind = kind


class NotAFrameError(LocfitError):
    def __init__(self, report: "FrameCheckReport", lattice: "FiniteLattice") -> None:
        super().__init__(f"{lattice.name or 'lattice'} is not a frame")
        self.report = report
        self.lattice = lattice


class BoundTooLargeError(LocfitError):
    pass


class FrameLawWitness(NamedTuple):
    """A subset A and an element b with (join A) meet b != join(a meet b)."""

    subset: Tuple[ElementId, ...]
    b: ElementId
    lhs: ElementId
    rhs: ElementId


@dataclass(frozen=True)
class FrameCheckReport:
    isLattice: bool
    isDistributiveFrame: bool
    witness: Optional[FrameLawWitness] = None
    method: str = "exhaustive"

    def toJson(self, lattice: "FiniteLattice") -> dict:
        data = {
            "is_lattice": self.isLattice,
            "is_distributive_frame": self.isDistributiveFrame,
            "method": self.method,
            "witness": None,
        }
        if self.witness is not None:
            data["witness"] = {
                "subset": [lattice.labels[a] for a in self.witness.subset],
                "b": lattice.labels[self.witness.b],
                "lhs": lattice.labels[self.witness.lhs],
                "rhs": lattice.labels[self.witness.rhs],
            }
        return data


class FiniteLattice:
    """An immutable finite lattice.

    Args:
        labels: one display label per element, unique.
        leq: a partial order as an n x n boolean matrix, leq[i, j] iff i <= j.
        name: an optional identifier (catalog frame id).

    Raises:
        NotALatticeError: if some pair has no glb or lub.
    """

    def __init__(self, labels: Sequence[str], leq: np.ndarray, name: str = "") -> None:
        n = len(labels)
        if n == 0:
            raise NotALatticeError(("", ""), "bound")
        if len(set(labels)) != n:
            raise ValueError(f"Duplicate element labels in {list(labels)}")
        self.labels: Tuple[str, ...] = tuple(str(label) for label in labels)
        self.name = name
        self.n = n

        self.leq = np.array(leq, dtype=bool)
        self.leq.setflags(write=False)

        self.downMask: Tuple[int, ...] = tuple(
            bs.fromIndices(np.flatnonzero(self.leq[:, i])) for i in range(n)
        )
        self.upMask: Tuple[int, ...] = tuple(
            bs.fromIndices(np.flatnonzero(self.leq[i, :])) for i in range(n)
        )
        self.full = bs.fullMask(n)

        byDown = {mask: i for i, mask in enumerate(self.downMask)}
        byUp = {mask: i for i, mask in enumerate(self.upMask)}
        meetTable = np.zeros((n, n), dtype=np.int64)
        joinTable = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                glb = byDown.get(self.downMask[i] & self.downMask[j])
                if glb is None:
                    raise NotALatticeError((self.labels[i], self.labels[j]), "meet")
                lub = byUp.get(self.upMask[i] & self.upMask[j])
                if lub is None:
                    raise NotALatticeError((self.labels[i], self.labels[j]), "join")
                meetTable[i, j] = meetTable[j, i] = glb
                joinTable[i, j] = joinTable[j, i] = lub
        meetTable.setflags(write=False)
        joinTable.setflags(write=False)
        self.meetTable = meetTable
        self.joinTable = joinTable

        self.bottom: ElementId = byUp[self.full]
        self.top: ElementId = byDown[self.full]
        self._index: Dict[str, int] = {label: i for i, label in enumerate(self.labels)}

    @classmethod
    def fromFamily(
            cls,
            masks: Sequence[int],
            labels: Optional[Sequence[str]] = None,
            name: str = "",
    ) -> "FiniteLattice":
        """The lattice of a family of subsets ordered by inclusion."""
        k = len(masks)
        leq = np.zeros((k, k), dtype=bool)
        for i, a in enumerate(masks):
            for j, b in enumerate(masks):
                leq[i, j] = a & ~b == 0
        if labels is None:
            labels = [str(i) for i in range(k)]
        return cls(labels, leq, name=name)

    def __repr__(self) -> str:
        return f"FiniteLattice({self.name or '?'}, n={self.n})"

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.leq, other.leq)

    def __hash__(self) -> int:
        return hash((self.labels, self.leq.tobytes()))

    def __getstate__(self) -> dict:
        # cached networkx graphs are rebuilt on demand in the receiving process
        state = dict(self.__dict__)
        state.pop("hasseGraph", None)
        return state

    def indexOf(self, label: str) -> ElementId:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"Unknown element {label!r}") from None

    def label(self, a: ElementId) -> str:
        return self.labels[a]

    def labelsOf(self, mask: int) -> List[str]:
        return [self.labels[i] for i in bs.iterBits(mask)]

    def isLeq(self, a: ElementId, b: ElementId) -> bool:
        return bool(self.leq[a, b])

    def meet(self, a: ElementId, b: ElementId) -> ElementId:
        return int(self.meetTable[a, b])

    def join(self, a: ElementId, b: ElementId) -> ElementId:
        return int(self.joinTable[a, b])

    def meetOf(self, mask: int) -> ElementId:
        result = self.top
        for i in bs.iterBits(mask):
            result = int(self.meetTable[result, i])
        return result

    def joinOf(self, mask: int) -> ElementId:
        result = self.bottom
        for i in bs.iterBits(mask):
            result = int(self.joinTable[result, i])
        return result

    def upSet(self, a: ElementId) -> int:
        return self.upMask[a]

    def downSet(self, a: ElementId) -> int:
        return self.downMask[a]

    def isUpClosed(self, mask: int) -> bool:
        return all(self.upMask[i] & ~mask == 0 for i in bs.iterBits(mask))

    def isDownClosed(self, mask: int) -> bool:
        return all(self.downMask[i] & ~mask == 0 for i in bs.iterBits(mask))

    def dual(self) -> "FiniteLattice":
        name = self.name[:-3] if self.name.endswith("^op") else f"{self.name}^op"
        return FiniteLattice(self.labels, self.leq.T, name=name)

    @cached_property
    def subsetJoins(self) -> np.ndarray:
        """subsetJoins[mask] is the join of the subset mask (n <= 20)."""
        return _subsetFold(self.joinTable, np.arange(self.n), self.bottom)

    @cached_property
    def subsetMeets(self) -> np.ndarray:
        return _subsetFold(self.meetTable, np.arange(self.n), self.top)

    @cached_property
    def frameReport(self) -> FrameCheckReport:
        return isFrame(self)

    @cached_property
    def arrowTable(self) -> np.ndarray:
        report = self.frameReport
        if not report.isDistributiveFrame:
            raise NotAFrameError(report, self)
        return _heytingTable(self)

    @cached_property
    def openMasks(self) -> Tuple[int, ...]:
        """openMasks[a] is the open sublocale {a -> b | b in L}."""
        arrow = self.arrowTable
        return tuple(bs.fromIndices(int(c) for c in arrow[a]) for a in range(self.n))

    @cached_property
    def hasseGraph(self) -> nx.DiGraph:
        strict = nx.DiGraph()
        strict.add_nodes_from(range(self.n))
        strict.add_edges_from(
            (i, j) for i in range(self.n) for j in range(self.n)
            if i != j and self.leq[i, j]
        )
        hasse = nx.transitive_reduction(strict)
        hasse.add_nodes_from(range(self.n))
        ranks = self.ranks()
        for node in hasse.nodes:
            hasse.nodes[node]["rank"] = str(ranks[node])
        return hasse

    def coverPairs(self) -> List[Tuple[ElementId, ElementId]]:
        """Covering pairs (a, b), a covered by b, in ascending order."""
        return sorted(self.hasseGraph.edges())

    def ranks(self) -> Tuple[int, ...]:
        """Length of the longest chain from the bottom to each element."""
        order = sorted(range(self.n), key=lambda i: bs.popcount(self.downMask[i]))
        rank = [0] * self.n
        for j in order:
            below = [i for i in bs.iterBits(self.downMask[j]) if i != j]
            rank[j] = 1 + max((rank[i] for i in below), default=-1)
        return tuple(rank)

    def canonicalKey(self) -> str:
        """An isomorphism invariant: equal for isomorphic lattices."""
        return f"{self.n}:" + nx.weisfeiler_lehman_graph_hash(
            self.hasseGraph, node_attr="rank", iterations=3
        )

    def isomorphisms(self, other: "FiniteLattice") -> Iterator[Dict[int, int]]:
        if self.n != other.n:
            return
        matcher = nx.algorithms.isomorphism.DiGraphMatcher(
            self.hasseGraph,
            other.hasseGraph,
            node_match=lambda x, y: x["rank"] == y["rank"],
        )
        yield from matcher.isomorphisms_iter()

    def findIsomorphism(self, other: "FiniteLattice") -> Optional[Dict[int, int]]:
        return next(self.isomorphisms(other), None)

    def isIsomorphic(self, other: "FiniteLattice") -> bool:
        return self.findIsomorphism(other) is not None

    def toJson(self) -> dict:
        return {
            "elements": list(self.labels),
            "leq": [[self.labels[a], self.labels[b]] for a, b in self.coverPairs()],
        }


def _subsetFold(table: np.ndarray, images: np.ndarray, unit: int) -> np.ndarray:
    """Fold a binary table over every subset of len(images) indices."""
    k = len(images)
    if k > 20:
        raise BoundTooLargeError(f"Subset table of 2^{k} entries refused")
    folded = np.full(1 << k, unit, dtype=np.int64)
    for i in range(k):
        lo, hi = 1 << i, 1 << (i + 1)
        folded[lo:hi] = table[folded[0:lo], images[i]]
    return folded


def _heytingTable(L: FiniteLattice) -> np.ndarray:
    n = L.n
    leqInt = L.leq.astype(np.int64)
    arrow = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        # cond[c, b]: a meet c <= b
        cond = L.leq[L.meetTable[a], :]
        counts = cond.T.astype(np.int64) @ leqInt
        sizes = cond.sum(axis=0)
        greatest = cond.T & (counts == sizes[:, None])
        arrow[a] = greatest.argmax(axis=1)
    arrow.setflags(write=False)
    return arrow


def buildLattice(
        elements: Sequence[str],
        leqPairs: Iterable[Tuple[str, str]],
        name: str = "",
) -> FiniteLattice:
    """Build the lattice whose order is the reflexive-transitive closure of leqPairs.

    Args:
        elements: element labels, in index order.
        leqPairs: pairs (a, b) meaning a <= b, by label.
        name: an optional identifier.

    Returns:
        The lattice with complete meet and join tables.

    Raises:
        NotAPosetError: if the closure is not antisymmetric.
        NotALatticeError: if a glb or a lub is missing, naming the first pair.
        KeyError: if a pair uses an undeclared element.
    """
    index = {label: i for i, label in enumerate(elements)}
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(elements)))
    for a, b in leqPairs:
        if a not in index or b not in index:
            raise KeyError(f"Undeclared element in pair ({a}, {b})")
        graph.add_edge(index[a], index[b])
    closure = nx.transitive_closure(graph, reflexive=True)
    n = len(elements)
    leq = np.zeros((n, n), dtype=bool)
    for i, j in closure.edges():
        leq[i, j] = True
    np.fill_diagonal(leq, True)
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i, j] and leq[j, i]:
                raise NotAPosetError((elements[i], elements[j]))
    return FiniteLattice(elements, leq, name=name)


def _frameLawFails(L: FiniteLattice, subset: int, b: ElementId) -> Optional[FrameLawWitness]:
    lhs = L.meet(L.joinOf(subset), b)
    rhs = L.bottom
    for a in bs.iterBits(subset):
        rhs = L.join(rhs, L.meet(a, b))
    if lhs != rhs:
        return FrameLawWitness(bs.toIndices(subset), b, lhs, rhs)
    return None


def _shrinkFrameWitness(L: FiniteLattice, subset: int, b: ElementId) -> FrameLawWitness:
    for i in bs.toIndices(subset):
        smaller = subset & ~(1 << i)
        if _frameLawFails(L, smaller, b) is not None:
            subset = smaller
    return _frameLawFails(L, subset, b)


def isFrame(L: FiniteLattice, threshold: Optional[int] = None) -> FrameCheckReport:
    """Check the frame distributivity law (join A) meet b = join{a meet b | a in A}.

    Up to threshold elements every subset A and element b is tried; above it
    the equivalent binary distributivity law is checked. A failing witness is
    shrunk greedily while the law still fails on it.
    """
    if threshold is None:
        threshold = locfitSettings.frameLawThreshold
    if L.n <= threshold:
        joins = L.subsetJoins
        for b in range(L.n):
            lhs = L.meetTable[joins, b]
            rhs = _subsetFold(L.joinTable, L.meetTable[:, b], L.bottom)
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                witness = _shrinkFrameWitness(L, int(bad[0]), b)
                logger.debug(f"{L.name}: frame law fails at {witness}")
                return FrameCheckReport(True, False, witness, "exhaustive")
        return FrameCheckReport(True, True, None, "exhaustive")

    for a in range(L.n):
        row = L.meetTable[a]
        lhs = row[L.joinTable]
        rhs = L.joinTable[row[:, None], row[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            b, c = (int(x) for x in bad[0])
            witness = _frameLawFails(L, (1 << b) | (1 << c), a)
            return FrameCheckReport(True, False, witness, "binary")
    return FrameCheckReport(True, True, None, "binary")


def heyting(L: FiniteLattice, a: ElementId, b: ElementId) -> ElementId:
    """a -> b, the largest c with a meet c <= b.

    Raises:
        NotAFrameError: if L is not a frame.
    """
    return int(L.arrowTable[a, b])


def pseudocomplement(L: FiniteLattice, a: ElementId) -> ElementId:
    return heyting(L, a, L.bottom)


def primes(L: FiniteLattice) -> Tuple[ElementId, ...]:
    """Prime elements p != 1: x meet y <= p implies x <= p or y <= p."""
    if not L.frameReport.isDistributiveFrame:
        raise NotAFrameError(L.frameReport, L)
    result = []
    for p in range(L.n):
        if p == L.top:
            continue
        below = L.leq[:, p]
        meetBelow = L.leq[L.meetTable, p]
        if not np.any(meetBelow & ~below[:, None] & ~below[None, :]):
            result.append(p)
    return tuple(result)


def coheytingDifference(L: FiniteLattice, y: ElementId, x: ElementId) -> ElementId:
    """y minus x, the least c with y <= x join c.

    Raises:
        InvariantViolation: if no least such c exists (L not distributive).
    """
    candidates = bs.fromIndices(
        c for c in range(L.n) if L.leq[y, L.joinTable[x, c]]
    )
    least = L.meetOf(candidates)
    if not candidates >> least & 1:
        raise InvariantViolation(
            f"No least c with {L.labels[y]} <= {L.labels[x]} v c",
            {"y": L.labels[y], "x": L.labels[x]},
        )
    return least


def heytingLawWitness(L: FiniteLattice) -> Optional[dict]:
    """First failure of the Heyting adjunction or its two companion laws.

    Checks a meet c <= b iff c <= a -> b, a -> b = 1 iff a <= b, and
    x -> y = y iff every z > y has z meet x not below y.
    """
    arrow = L.arrowTable
    lab = L.labels
    for a in range(L.n):
        for b in range(L.n):
            ab = int(arrow[a, b])
            for c in range(L.n):
                if bool(L.leq[L.meetTable[a, c], b]) != bool(L.leq[c, ab]):
                    return {"law": "adjunction", "a": lab[a], "b": lab[b], "c": lab[c]}
            if (ab == L.top) != bool(L.leq[a, b]):
                return {"law": "arrow-top", "a": lab[a], "b": lab[b]}
    for x in range(L.n):
        for y in range(L.n):
            fixed = int(arrow[x, y]) == y
            above = (z for z in bs.iterBits(L.upMask[y]) if z != y)
            escapes = all(not L.leq[L.meetTable[z, x], y] for z in above)
            if fixed != escapes:
                return {"law": "arrow-fixed", "x": lab[x], "y": lab[y]}
    return None


def checkClosureOperator(
        domain: Sequence[int],
        op: Callable[[int], int],
        leq: Callable[[int, int], bool],
        interior: bool = False,
) -> Optional[dict]:
    """First pointwise failure of the closure (or interior) operator laws.

    The domain is a finite list of values; op must map it into itself.
    Laws: inflationary (deflationary for an interior), idempotent, monotone.
    """
    images = {u: op(u) for u in domain}
    for u in domain:
        v = images[u]
        if v not in images:
            return {"law": "range", "u": u}
        below = leq(v, u) if interior else leq(u, v)
        if not below:
            return {"law": "deflationary" if interior else "inflationary", "u": u}
        if images[v] != v:
            return {"law": "idempotent", "u": u}
    for u in domain:
        for w in domain:
            if leq(u, w) and not leq(images[u], images[w]):
                return {"law": "monotone", "u": u, "v": w}
    return None


def checkInteriorOperator(
        domain: Sequence[int],
        op: Callable[[int], int],
        leq: Callable[[int, int], bool],
) -> Optional[dict]:
    return checkClosureOperator(domain, op, leq, interior=True)
