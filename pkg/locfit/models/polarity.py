"""Polarities and their Galois-closed families.

A polarity (X, Y, Z) induces the antitone pair p: subsets of X -> subsets of Y
and q: subsets of Y -> subsets of X. The fixpoints of q o p form a complete
lattice GC(X, Y, Z) whose meets are intersections and whose joins are
qp(union). Closed sets are enumerated by next-closure in ascending bitset
order, and cross-checked against brute-force fixpoint filtering on small
carriers.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from locfit.util import bitset as bs
from locfit.models.lattice import (
    ElementId, FiniteLattice, InvariantViolation, LocfitError, checkClosureOperator,
)
from locfit.models.settings import locfitSettings

logger = logging.getLogger(__name__)

__all__ = [
    "CarrierTooLargeError", "PropertyFailedError", "Polarity",
    "GaloisClosedFamily", "polarP", "polarQ", "galoisClosed", "xe", "ye",
    "UniversalPropertyReport", "checkUniversalProperties",
    "countCommutingIsomorphisms", "OppositeReport", "oppositeFamily",
    "LemmaItem", "PosetLemmaReport", "posetLemmaSuite",
    "semilatticeEmbeddingLemma", "ClIntReport", "clIntInside",
    "joinClosure", "meetClosure", "inducedLattice", "randomPolarity", "polarityLawWitness",
    "joinFormulaWitness",
]


class CarrierTooLargeError(LocfitError):
    pass


class PropertyFailedError(LocfitError):
    def __init__(self, message: str, witness: dict) -> None:
        super().__init__(message)
        self.witness = witness


def _isPartialOrder(up: Sequence[int]) -> bool:
    n = len(up)
    for i in range(n):
        if not up[i] >> i & 1:
            return False
        for j in bs.iterBits(up[i]):
            if j != i and up[j] >> i & 1:
                return False
            if up[j] & ~up[i]:
                return False
    return True


@dataclass(frozen=True)
class Polarity:
    """Two finite carriers and an incidence relation.

    Attributes:
        xLabels, yLabels: display labels of the carriers.
        rows: rows[x] is the Y-bitset of the y with x Z y.
        xUp, yUp: optional partial orders, xUp[i] being the bitset of the
            elements above i.
    """

    xLabels: Tuple[str, ...]
    yLabels: Tuple[str, ...]
    rows: Tuple[int, ...]
    xUp: Optional[Tuple[int, ...]] = None
    yUp: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if len(self.rows) != len(self.xLabels):
            raise ValueError("One incidence row per X element expected")
        if any(row & ~self.yFull for row in self.rows):
            raise ValueError("Incidence refers to an unknown Y element")
        for up, labels, side in ((self.xUp, self.xLabels, "X"), (self.yUp, self.yLabels, "Y")):
            if up is not None and (len(up) != len(labels) or not _isPartialOrder(up)):
                raise ValueError(f"The order on {side} is not a partial order")

    @property
    def nx(self) -> int:
        return len(self.xLabels)

    @property
    def ny(self) -> int:
        return len(self.yLabels)

    @property
    def xFull(self) -> int:
        return bs.fullMask(self.nx)

    @property
    def yFull(self) -> int:
        return bs.fullMask(self.ny)

    @cached_property
    def cols(self) -> Tuple[int, ...]:
        """cols[y] is the X-bitset of the x with x Z y."""
        return tuple(
            bs.fromIndices(x for x in range(self.nx) if self.rows[x] >> y & 1)
            for y in range(self.ny)
        )

    def related(self, x: int, y: int) -> bool:
        return bool(self.rows[x] >> y & 1)

    @classmethod
    def fromPairs(
            cls,
            xLabels: Sequence[str],
            yLabels: Sequence[str],
            pairs: Iterable[Tuple[int, int]],
    ) -> "Polarity":
        rows = [0] * len(xLabels)
        for x, y in pairs:
            if not (0 <= x < len(xLabels) and 0 <= y < len(yLabels)):
                raise ValueError(f"Incidence pair ({x}, {y}) out of range")
            rows[x] |= 1 << y
        return cls(tuple(xLabels), tuple(yLabels), tuple(rows))

    @classmethod
    def fromRelation(
            cls,
            xLabels: Sequence[str],
            yLabels: Sequence[str],
            related: Callable[[int, int], bool],
            xUp: Optional[Sequence[int]] = None,
            yUp: Optional[Sequence[int]] = None,
    ) -> "Polarity":
        rows = tuple(
            bs.fromIndices(y for y in range(len(yLabels)) if related(x, y))
            for x in range(len(xLabels))
        )
        return cls(
            tuple(xLabels), tuple(yLabels), rows,
            tuple(xUp) if xUp is not None else None,
            tuple(yUp) if yUp is not None else None,
        )

    @classmethod
    def fromOrder(
            cls,
            C: FiniteLattice,
            xSub: Sequence[ElementId],
            ySub: Sequence[ElementId],
    ) -> "Polarity":
        """The polarity (xSub, ySub, <=) with the orders induced by C."""
        return cls.fromRelation(
            [C.labels[x] for x in xSub],
            [C.labels[y] for y in ySub],
            lambda i, j: C.isLeq(xSub[i], ySub[j]),
            _inducedUp(C, xSub),
            _inducedUp(C, ySub),
        )

    def transpose(self) -> "Polarity":
        """The polarity (Y, X, Z^op)."""
        return Polarity(self.yLabels, self.xLabels, self.cols, self.yUp, self.xUp)

    def withOrders(self, xUp: Sequence[int], yUp: Sequence[int]) -> "Polarity":
        return Polarity(self.xLabels, self.yLabels, self.rows, tuple(xUp), tuple(yUp))


def _inducedUp(C: FiniteLattice, sub: Sequence[ElementId]) -> Tuple[int, ...]:
    return tuple(
        bs.fromIndices(j for j, b in enumerate(sub) if C.isLeq(a, b)) for a in sub
    )


def polarP(P: Polarity, M: int) -> int:
    """p(M) = {y | x Z y for all x in M}."""
    result = P.yFull
    for x in bs.iterBits(M):
        result &= P.rows[x]
    return result


def polarQ(P: Polarity, N: int) -> int:
    """q(N) = {x | x Z y for all y in N}."""
    cols = P.cols
    result = P.xFull
    for y in bs.iterBits(N):
        result &= cols[y]
    return result


def _closeX(P: Polarity, M: int) -> int:
    return polarQ(P, polarP(P, M))


def _nextClosures(P: Polarity) -> List[int]:
    """All fixpoints of q o p in ascending integer order.

    Higher indices are the more significant bits, so the lectic successor of
    A is found by trying the lowest missing index first.
    """
    full = P.xFull
    current = _closeX(P, 0)
    found = [current]
    while current != full:
        for i in range(P.nx):
            if current >> i & 1:
                continue
            higher = ~((1 << (i + 1)) - 1)
            candidate = _closeX(P, (current & higher) | (1 << i))
            if candidate & higher & ~(1 << i) == current & higher:
                current = candidate
                break
        else:  # pragma: no cover - the full carrier is always closed
            break
        found.append(current)
    return found


class GaloisClosedFamily:
    """The complete lattice GC(P) of the fixpoints of q o p.

    Attributes:
        polarity: the source polarity.
        closedSets: the closed X-subsets in ascending bitset order.
        lattice: the closed sets ordered by inclusion.
    """

    def __init__(self, polarity: Polarity, closedSets: Sequence[int], name: str = "") -> None:
        self.polarity = polarity
        self.closedSets: Tuple[int, ...] = tuple(closedSets)
        self._index: Dict[int, int] = {m: i for i, m in enumerate(self.closedSets)}
        labels = [
            "{" + ",".join(polarity.xLabels[x] for x in bs.iterBits(m)) + "}"
            for m in self.closedSets
        ]
        self.lattice = FiniteLattice.fromFamily(self.closedSets, labels, name=name)

    def __len__(self) -> int:
        return len(self.closedSets)

    def indexOf(self, closed: int) -> int:
        try:
            return self._index[closed]
        except KeyError:
            raise InvariantViolation("Not a Galois-closed set", {"set": closed}) from None

    def contains(self, subset: int) -> bool:
        return subset in self._index

    def joinOf(self, indices: Iterable[int]) -> int:
        """Index of qp(union) of the given closed sets."""
        union = 0
        for i in indices:
            union |= self.closedSets[i]
        return self._index[_closeX(self.polarity, union)]

    def meetOf(self, indices: Iterable[int]) -> int:
        meet = self.polarity.xFull
        for i in indices:
            meet &= self.closedSets[i]
        return self._index[meet]

    @cached_property
    def xeIndex(self) -> Tuple[int, ...]:
        return tuple(self._index[xe(self.polarity, x)] for x in range(self.polarity.nx))

    @cached_property
    def yeIndex(self) -> Tuple[int, ...]:
        return tuple(self._index[ye(self.polarity, y)] for y in range(self.polarity.ny))


def galoisClosed(
        P: Polarity,
        carrierCap: Optional[int] = None,
        oracleCap: Optional[int] = None,
        name: str = "",
) -> GaloisClosedFamily:
    """Enumerate GC(P) by next-closure.

    Raises:
        CarrierTooLargeError: if |X| exceeds carrierCap.
        InvariantViolation: if the brute-force oracle disagrees.
    """
    if carrierCap is None:
        carrierCap = locfitSettings.gcCarrierCap
    if oracleCap is None:
        oracleCap = locfitSettings.gcBruteForceCap
    if P.nx > carrierCap:
        raise CarrierTooLargeError(f"Carrier of {P.nx} elements exceeds the cap of {carrierCap}")
    closed = _nextClosures(P)
    if P.nx <= oracleCap:
        brute = [m for m in range(1 << P.nx) if _closeX(P, m) == m]
        if brute != closed:
            missing = sorted(set(brute) ^ set(closed))
            raise InvariantViolation(
                "Next-closure disagrees with brute-force fixpoints", {"sets": missing[:4]}
            )
    logger.debug(f"GC of {P.nx}x{P.ny} polarity has {len(closed)} closed sets")
    return GaloisClosedFamily(P, closed, name=name)


def xe(P: Polarity, x: int) -> int:
    return _closeX(P, 1 << x)


def ye(P: Polarity, y: int) -> int:
    return polarQ(P, 1 << y)


def polarityLawWitness(P: Polarity, cap: int = 256) -> Optional[dict]:
    """First failure of the p -| q adjunction or the closure laws of qp and pq."""
    xs = list(bs.iterSubsetsCapped(P.xFull, cap))
    ys = list(bs.iterSubsetsCapped(P.yFull, cap))
    for M in xs:
        pM = polarP(P, M)
        for N in ys:
            if (N & ~pM == 0) != (M & ~polarQ(P, N) == 0):
                return {"law": "adjunction", "M": M, "N": N}
    subset = lambda a, b: a & ~b == 0  # noqa: E731
    witness = checkClosureOperator(sorted(set(xs) | {_closeX(P, m) for m in xs}),
                                   lambda m: _closeX(P, m), subset)
    if witness is None:
        witness = checkClosureOperator(
            sorted(set(ys) | {polarP(P, polarQ(P, n)) for n in ys}),
            lambda n: polarP(P, polarQ(P, n)), subset,
        )
    return witness


def joinFormulaWitness(gc: GaloisClosedFamily, cap: Optional[int] = None) -> Optional[dict]:
    """Compare qp(union) with the least closed upper bound found by scan."""
    if cap is None:
        cap = locfitSettings.subsetScanCap
    sets = gc.closedSets
    for family in bs.iterSubsetsCapped(bs.fullMask(len(sets)), cap):
        union = 0
        for i in bs.iterBits(family):
            union |= sets[i]
        uppers = [j for j, s in enumerate(sets) if union & ~s == 0]
        least = [j for j in uppers if all(sets[j] & ~sets[k] == 0 for k in uppers)]
        if len(least) != 1 or least[0] != gc.joinOf(bs.iterBits(family)):
            return {"family": list(bs.iterBits(family))}
    return None


@dataclass
class UniversalPropertyReport:
    passed: bool
    item: Optional[str] = None
    witness: Optional[dict] = None
    iota: Optional[Tuple[int, ...]] = None
    commutingIsomorphisms: Optional[int] = None

    def raiseOnFailure(self) -> None:
        if not self.passed:
            raise PropertyFailedError(f"Universal property {self.item} fails", self.witness or {})


def checkUniversalProperties(
        P: Polarity,
        C: FiniteLattice,
        xeMap: Sequence[ElementId],
        yeMap: Sequence[ElementId],
        gc: Optional[GaloisClosedFamily] = None,
        checkUniqueness: bool = False,
) -> UniversalPropertyReport:
    """Check that (C, xeMap, yeMap) satisfies the universal properties of GC(P).

    Item 1: every u in C is the join of the xeMap(x) below it and the meet of
    the yeMap(y) above it. Item 2: xeMap(x) <= yeMap(y) iff x Z y. When both
    hold, iota(u) = join{xe(x) | xeMap(x) <= u} must be a lattice isomorphism
    C -> GC(P) commuting with the maps.
    """
    lab = C.labels
    for u in range(C.n):
        below = bs.fromIndices(xeMap[x] for x in range(P.nx) if C.isLeq(xeMap[x], u))
        if C.joinOf(below) != u:
            return UniversalPropertyReport(False, "1-join", {"u": lab[u]})
        above = bs.fromIndices(yeMap[y] for y in range(P.ny) if C.isLeq(u, yeMap[y]))
        if C.meetOf(above) != u:
            return UniversalPropertyReport(False, "1-meet", {"u": lab[u]})
    for x in range(P.nx):
        for y in range(P.ny):
            if C.isLeq(xeMap[x], yeMap[y]) != P.related(x, y):
                return UniversalPropertyReport(
                    False, "2", {"x": P.xLabels[x], "y": P.yLabels[y]}
                )

    if gc is None:
        gc = galoisClosed(P)
    iota = tuple(
        gc.joinOf(gc.xeIndex[x] for x in range(P.nx) if C.isLeq(xeMap[x], u))
        for u in range(C.n)
    )
    if len(set(iota)) != C.n or C.n != len(gc):
        return UniversalPropertyReport(False, "3-bijective", {"size": C.n, "gc": len(gc)})
    target = gc.lattice
    for u in range(C.n):
        for v in range(C.n):
            if C.isLeq(u, v) != target.isLeq(iota[u], iota[v]):
                return UniversalPropertyReport(False, "3-order", {"u": lab[u], "v": lab[v]})
    for x in range(P.nx):
        if iota[xeMap[x]] != gc.xeIndex[x]:
            return UniversalPropertyReport(False, "3-commute-x", {"x": P.xLabels[x]})
    for y in range(P.ny):
        if iota[yeMap[y]] != gc.yeIndex[y]:
            return UniversalPropertyReport(False, "3-commute-y", {"y": P.yLabels[y]})

    count = None
    if checkUniqueness and C.n <= locfitSettings.gcBruteForceCap:
        count = countCommutingIsomorphisms(C, gc, xeMap, yeMap)
        if count != 1:
            return UniversalPropertyReport(False, "3-unique", {"count": count}, iota, count)
    return UniversalPropertyReport(True, None, None, iota, count)


def countCommutingIsomorphisms(
        C: FiniteLattice,
        gc: GaloisClosedFamily,
        xeMap: Sequence[ElementId],
        yeMap: Sequence[ElementId],
) -> int:
    P = gc.polarity
    count = 0
    for iso in C.isomorphisms(gc.lattice):
        if all(iso[xeMap[x]] == gc.xeIndex[x] for x in range(P.nx)) and all(
                iso[yeMap[y]] == gc.yeIndex[y] for y in range(P.ny)):
            count += 1
    return count


@dataclass
class OppositeReport:
    passed: bool
    mapping: Tuple[int, ...] = ()
    witness: Optional[dict] = None


def oppositeFamily(P: Polarity, gc: Optional[GaloisClosedFamily] = None) -> OppositeReport:
    """Exhibit the anti-isomorphism GC(X, Y, Z) -> GC(Y, X, Z^op), M -> p(M)."""
    if gc is None:
        gc = galoisClosed(P)
    gcT = galoisClosed(P.transpose())
    if len(gc) != len(gcT):
        return OppositeReport(False, (), {"sizes": [len(gc), len(gcT)]})
    mapping = []
    for M in gc.closedSets:
        image = polarP(P, M)
        if not gcT.contains(image):
            return OppositeReport(False, (), {"set": M})
        mapping.append(gcT.indexOf(image))
    if len(set(mapping)) != len(mapping):
        return OppositeReport(False, tuple(mapping), {"reason": "not injective"})
    for i, a in enumerate(gc.closedSets):
        for j, b in enumerate(gc.closedSets):
            if (a & ~b == 0) != gcT.lattice.isLeq(mapping[j], mapping[i]):
                return OppositeReport(False, tuple(mapping), {"pair": [i, j]})
    return OppositeReport(True, tuple(mapping))


@dataclass(frozen=True)
class LemmaItem:
    name: str
    left: bool
    right: bool

    @property
    def agrees(self) -> bool:
        return self.left == self.right


@dataclass
class PosetLemmaReport:
    items: List[LemmaItem] = field(default_factory=list)
    witness: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.witness is None and all(item.agrees for item in self.items)

    def item(self, name: str) -> LemmaItem:
        return next(i for i in self.items if i.name == name)


def _supremum(up: Sequence[int], subset: int, n: int) -> Optional[int]:
    uppers = bs.fullMask(n)
    for a in bs.iterBits(subset):
        uppers &= up[a]
    least = [u for u in bs.iterBits(uppers) if uppers & ~up[u] == 0]
    return least[0] if least else None


def _infimum(up: Sequence[int], subset: int, n: int) -> Optional[int]:
    down = [bs.fromIndices(i for i in range(n) if up[i] >> j & 1) for j in range(n)]
    return _supremum(down, subset, n)


def posetLemmaSuite(P: Polarity, cap: Optional[int] = None) -> PosetLemmaReport:
    """Check the eight xe/ye order lemmas and the four preservation lemmas.

    Left sides are computed in GC(P), right sides by scanning the relation.
    Requires P.xUp and P.yUp.
    """
    if P.xUp is None or P.yUp is None:
        raise ValueError("posetLemmaSuite needs orders on both carriers")
    if cap is None:
        cap = locfitSettings.subsetScanCap
    gc = galoisClosed(P)
    L = gc.lattice
    xi, yi = gc.xeIndex, gc.yeIndex
    rows, cols = P.rows, P.cols
    X, Y = range(P.nx), range(P.ny)
    xLeq = lambda a, b: bool(P.xUp[a] >> b & 1)  # noqa: E731
    yLeq = lambda a, b: bool(P.yUp[a] >> b & 1)  # noqa: E731
    report = PosetLemmaReport()
    add = lambda name, left, right: report.items.append(LemmaItem(name, bool(left), bool(right)))  # noqa: E731

    add("xe-order",
        all(L.isLeq(xi[a], xi[b]) == (rows[b] & ~rows[a] == 0) for a in X for b in X), True)
    xMonotone = all(L.isLeq(xi[a], xi[b]) for a in X for b in X if xLeq(a, b))
    add("xe-monotone", xMonotone,
        all(rows[b] & ~rows[a] == 0 for a in X for b in X if xLeq(a, b)))
    add("xe-injective", len(set(xi)) == P.nx,
        all(rows[a] != rows[b] for a in X for b in X if a != b))
    xReflecting = all(xLeq(a, b) for a in X for b in X if L.isLeq(xi[a], xi[b]))
    add("xe-reflecting", xReflecting,
        all(xLeq(a, b) for a in X for b in X if rows[b] & ~rows[a] == 0))

    add("ye-order",
        all(L.isLeq(yi[a], yi[b]) == (cols[a] & ~cols[b] == 0) for a in Y for b in Y), True)
    yMonotone = all(L.isLeq(yi[a], yi[b]) for a in Y for b in Y if yLeq(a, b))
    add("ye-monotone", yMonotone,
        all(cols[a] & ~cols[b] == 0 for a in Y for b in Y if yLeq(a, b)))
    add("ye-injective", len(set(yi)) == P.ny,
        all(cols[a] != cols[b] for a in Y for b in Y if a != b))
    yReflecting = all(yLeq(a, b) for a in Y for b in Y if L.isLeq(yi[a], yi[b]))
    add("ye-reflecting", yReflecting,
        all(yLeq(a, b) for a in Y for b in Y if cols[a] & ~cols[b] == 0))

    for subset in bs.iterSubsetsCapped(P.xFull, cap):
        members = list(bs.iterBits(subset))
        image = [xi[a] for a in members]
        s = _supremum(P.xUp, subset, P.nx)
        if s is not None:
            joined = gc.joinOf(image)
            common = polarP(P, subset)
            condition = common & ~rows[s] == 0
            if L.isLeq(xi[s], joined) != condition:
                report.witness = {"lemma": "xe-join", "subset": members}
                break
            if xMonotone and (xi[s] == joined) != condition:
                report.witness = {"lemma": "xe-join-monotone", "subset": members}
                break
        m = _infimum(P.xUp, subset, P.nx)
        if m is not None and xMonotone and xReflecting and xi[m] != gc.meetOf(image):
            report.witness = {"lemma": "xe-meet", "subset": members}
            break

    for subset in bs.iterSubsetsCapped(P.yFull, cap):
        if report.witness is not None:
            break
        members = list(bs.iterBits(subset))
        image = [yi[b] for b in members]
        m = _infimum(P.yUp, subset, P.ny)
        if m is not None:
            common = polarQ(P, subset)
            condition = common & ~cols[m] == 0
            met = gc.meetOf(image)
            if L.isLeq(met, yi[m]) != condition:
                report.witness = {"lemma": "ye-meet", "subset": members}
                break
            if yMonotone and (yi[m] == met) != condition:
                report.witness = {"lemma": "ye-meet-monotone", "subset": members}
                break
        s = _supremum(P.yUp, subset, P.ny)
        if s is not None and yMonotone and yReflecting and yi[s] != gc.joinOf(image):
            report.witness = {"lemma": "ye-join", "subset": members}
            break
    return report


def semilatticeEmbeddingLemma(
        src: FiniteLattice,
        dst: FiniteLattice,
        f: Sequence[ElementId],
) -> Optional[bool]:
    """Whether f is order-reflecting, when f is an injective join-homomorphism.

    Returns None when f is not an injective join-preserving map, so that the
    lemma does not apply.
    """
    injective = len(set(f)) == src.n
    preserves = all(
        f[src.join(a, b)] == dst.join(f[a], f[b]) for a in range(src.n) for b in range(src.n)
    )
    if not (injective and preserves):
        return None
    return all(
        src.isLeq(a, b) for a in range(src.n) for b in range(src.n) if dst.isLeq(f[a], f[b])
    )


def joinClosure(C: FiniteLattice, subset: int) -> int:
    """J(S): S closed under all joins, the empty join included."""
    closed = subset | (1 << C.bottom)
    frontier = closed
    while frontier:
        added = 0
        for a in bs.iterBits(closed):
            for b in bs.iterBits(frontier):
                added |= 1 << C.join(a, b)
        frontier = added & ~closed
        closed |= added
    return closed


def meetClosure(C: FiniteLattice, subset: int) -> int:
    """M(S): S closed under all meets, the empty meet included."""
    closed = subset | (1 << C.top)
    frontier = closed
    while frontier:
        added = 0
        for a in bs.iterBits(closed):
            for b in bs.iterBits(frontier):
                added |= 1 << C.meet(a, b)
        frontier = added & ~closed
        closed |= added
    return closed


@dataclass
class ClIntReport:
    passed: bool
    interiorImage: Tuple[ElementId, ...]
    closureImage: Tuple[ElementId, ...]
    gcSize: int
    witness: Optional[dict] = None

    def interiorLattice(self, C: FiniteLattice) -> FiniteLattice:
        return inducedLattice(C, self.interiorImage)

    def closureLattice(self, C: FiniteLattice) -> FiniteLattice:
        return inducedLattice(C, self.closureImage)


def inducedLattice(C: FiniteLattice, elements: Sequence[ElementId], name: str = "") -> FiniteLattice:
    """The subposet of C on elements, which must itself be a lattice."""
    idx = np.array(elements, dtype=np.int64)
    return FiniteLattice([C.labels[e] for e in elements], C.leq[np.ix_(idx, idx)], name=name)


def clIntInside(
        C: FiniteLattice,
        xSub: Sequence[ElementId],
        ySub: Sequence[ElementId],
        carrierCap: Optional[int] = None,
) -> ClIntReport:
    """Compute int_X[M(Y)] and cl_Y[J(X)] and match both with GC(X, Y, <=).

    cl_Y(c) is the meet of the members of Y above c, int_X(c) the join of the
    members of X below c. cl_Y restricted to int_X[M(Y)] must be a bijection
    onto cl_Y[J(X)] with inverse int_X, and M -> join(M) must map GC(X, Y, <=)
    isomorphically onto int_X[M(Y)].
    """
    xMask, yMask = bs.fromIndices(xSub), bs.fromIndices(ySub)

    def clY(c: int) -> int:
        return C.meetOf(yMask & C.upMask[c])

    def intX(c: int) -> int:
        return C.joinOf(xMask & C.downMask[c])

    interior = tuple(sorted({intX(m) for m in bs.iterBits(meetClosure(C, yMask))}))
    closure = tuple(sorted({clY(j) for j in bs.iterBits(joinClosure(C, xMask))}))
    xList, yList = list(xSub), list(ySub)
    gc = galoisClosed(Polarity.fromOrder(C, xList, yList), carrierCap=carrierCap)
    report = ClIntReport(True, interior, closure, len(gc))

    forward = {a: clY(a) for a in interior}
    if sorted(set(forward.values())) != list(closure) or len(closure) != len(interior):
        report.passed, report.witness = False, {"map": "cl", "sizes": [len(interior), len(closure)]}
        return report
    for a, b in forward.items():
        if intX(b) != a:
            report.passed, report.witness = False, {"map": "int", "element": C.labels[b]}
            return report

    alpha = [C.joinOf(bs.fromIndices(xList[i] for i in bs.iterBits(M))) for M in gc.closedSets]
    if sorted(alpha) != list(interior) or len(set(alpha)) != len(alpha):
        report.passed, report.witness = False, {"map": "gc", "sizes": [len(gc), len(interior)]}
        return report
    for i, a in enumerate(gc.closedSets):
        for j, b in enumerate(gc.closedSets):
            if (a & ~b == 0) != C.isLeq(alpha[i], alpha[j]):
                report.passed, report.witness = False, {"map": "gc-order", "pair": [i, j]}
                return report
    return report


def randomPolarity(nx: int, ny: int, density: float, seed: int) -> Polarity:
    """A seeded random context with the given incidence density."""
    rng = np.random.default_rng(seed)
    matrix = rng.random((nx, ny)) < density
    return Polarity.fromRelation(
        [f"g{i}" for i in range(nx)],
        [f"m{j}" for j in range(ny)],
        lambda i, j: bool(matrix[i, j]),
    )
