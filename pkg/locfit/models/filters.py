"""The coframe of filters of a finite frame.

Filters are ordered by reverse inclusion: F <= G (written F [= G) iff G is a
subset of F. Joins are intersections, the top is {1} and the bottom is the
improper filter L, also called Emp. On a finite frame every filter is
principal, which allFilters asserts rather than assumes: filters are
enumerated by growing generated filters from {1}, and on small frames
cross-checked against a raw scan of every subset.

Filter classes are int bitsets over filter indices.
"""
import logging
from dataclasses import dataclass, fields
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from locfit.util import bitset as bs
from locfit.models.lattice import (
    BoundTooLargeError, ElementId, FiniteLattice, InvariantViolation,
    NotAFrameError, coheytingDifference, isFrame,
)
from locfit.models.sublocales import sublocaleDefect
from locfit.models.settings import locfitSettings

logger = logging.getLogger(__name__)

__all__ = [
    "Filter", "FilterLattice", "FilterClassTag", "SclReport",
    "SubfitnessReport", "CLASS_NAMES", "allFilters", "difference",
    "supplement", "closedFilter", "openFilter", "locallyClosedFilter",
    "classify", "filterClasses", "intClosure", "regularFilters",
    "sclCondition", "subfitnessSuite", "booleanization",
    "completelyJoinPrime", "exFormula", "isExactMeet",
    "isStronglyExactMeet", "coheytingLawWitness", "filterLawWitness",
]

FilterClass = int

# Class names in report order, matching the FilterClassTag fields.
CLASS_NAMES = ("cp", "so", "ex", "se", "cl", "lcl", "r", "principal")


@dataclass(frozen=True)
class Filter:
    members: int
    generator: ElementId

    def __contains__(self, a: ElementId) -> bool:
        return bool(self.members >> a & 1)

    def __len__(self) -> int:
        return bs.popcount(self.members)


def _memberArray(n: int, mask: int) -> np.ndarray:
    return np.array([bool(mask >> i & 1) for i in range(n)], dtype=bool)


class FilterLattice:
    """All filters of a finite frame with their coframe structure.

    Attributes:
        frame: the underlying frame L.
        filters: the filters in ascending generator order.
        lattice: the filters ordered by reverse inclusion.
        top: index of {1}.
        bottom: index of the improper filter L.
    """

    def __init__(self, frame: FiniteLattice, filters: Sequence[Filter]) -> None:
        self.frame = frame
        self.filters: Tuple[Filter, ...] = tuple(filters)
        self._byMembers: Dict[int, int] = {f.members: i for i, f in enumerate(self.filters)}
        self._byGenerator: Dict[int, int] = {f.generator: i for i, f in enumerate(self.filters)}
        k = len(self.filters)
        leq = np.zeros((k, k), dtype=bool)
        for i, f in enumerate(self.filters):
            for j, g in enumerate(self.filters):
                leq[i, j] = g.members & ~f.members == 0
        labels = [f"↑{frame.labels[f.generator]}" for f in self.filters]
        self.lattice = FiniteLattice(labels, leq, name=f"Filt({frame.name})")
        self.top = self._byMembers[1 << frame.top]
        self.bottom = self._byMembers[frame.full]

    def __len__(self) -> int:
        return len(self.filters)

    def __iter__(self) -> Iterator[Filter]:
        return iter(self.filters)

    @property
    def full(self) -> FilterClass:
        return bs.fullMask(len(self.filters))

    def indexOf(self, members: int) -> int:
        try:
            return self._byMembers[members]
        except KeyError:
            raise InvariantViolation(
                "Not a filter", {"set": self.frame.labelsOf(members)}
            ) from None

    def principal(self, a: ElementId) -> int:
        return self._byGenerator[a]

    def members(self, i: int) -> int:
        return self.filters[i].members

    def label(self, i: int) -> str:
        return self.lattice.labels[i]

    def labelsOf(self, classMask: FilterClass) -> List[str]:
        return [self.label(i) for i in bs.iterBits(classMask)]

    def isBelow(self, i: int, j: int) -> bool:
        """F_i [= F_j, that is F_j is a subset of F_i."""
        return self.lattice.isLeq(i, j)

    def intersection(self, i: int, j: int) -> int:
        return self.lattice.join(i, j)

    def meetSet(self, i: int, j: int) -> int:
        """The set {f meet g | f in F_i, g in F_j}."""
        L = self.frame
        fi = np.array(bs.toIndices(self.members(i)))
        gi = np.array(bs.toIndices(self.members(j)))
        return bs.fromIndices(np.unique(L.meetTable[np.ix_(fi, gi)]))

    @cached_property
    def dualLattice(self) -> FiniteLattice:
        return self.lattice.dual()

    @cached_property
    def directedSubsets(self) -> Tuple[Tuple[int, ElementId], ...]:
        """Non-empty directed subsets of L with their joins."""
        L = self.frame
        result = []
        for A in bs.iterSubsetsCapped(L.full, locfitSettings.subsetScanCap):
            if A and all(
                    L.upMask[a] & L.upMask[b] & A for a in bs.iterBits(A) for b in bs.iterBits(A)):
                result.append((A, L.joinOf(A)))
        return tuple(result)

    @cached_property
    def closedSet(self) -> FilterClass:
        return bs.fromIndices(closedFilter(self, a) for a in range(self.frame.n))

    @cached_property
    def locallyClosedSet(self) -> FilterClass:
        n = self.frame.n
        return bs.fromIndices(
            locallyClosedFilter(self, x, y) for x in range(n) for y in range(n)
        )

    @cached_property
    def regularSet(self) -> FilterClass:
        return bs.fromIndices(supplement(self, i) for i in range(len(self)))

    @cached_property
    def tags(self) -> Tuple["FilterClassTag", ...]:
        return tuple(classify(self, i) for i in range(len(self)))

    def __repr__(self) -> str:
        return f"FilterLattice({self.frame.name or '?'}, {len(self)} filters)"


def _isFilterMask(L: FiniteLattice, mask: int) -> bool:
    if not mask or not L.isUpClosed(mask):
        return False
    members = bs.toIndices(mask)
    return all(mask >> L.meet(a, b) & 1 for a in members for b in members)


def _generatedFilter(L: FiniteLattice, mask: int) -> int:
    closed = mask
    while True:
        grown = closed
        members = bs.toIndices(closed)
        for a in members:
            grown |= L.upMask[a]
            for b in members:
                grown |= 1 << L.meet(a, b)
        if grown == closed:
            return closed
        closed = grown


def allFilters(
        L: FiniteLattice,
        cap: Optional[int] = None,
        oracleCap: Optional[int] = None,
) -> FilterLattice:
    """Enumerate Filt(L) and build its coframe structure.

    Args:
        L: a finite frame.
        cap: largest frame accepted, filterCap by default.
        oracleCap: largest frame cross-checked against a raw subset scan,
            sublocaleOracleCap by default.

    Raises:
        NotAFrameError: if L is not a frame.
        BoundTooLargeError: if L exceeds the cap.
        InvariantViolation: if a filter is not principal, if the set
            formulas for meets and joins disagree with the order, or if the
            dual of Filt(L) fails the frame law.
    """
    if cap is None:
        cap = locfitSettings.filterCap
    if oracleCap is None:
        oracleCap = locfitSettings.sublocaleOracleCap
    if not L.frameReport.isDistributiveFrame:
        raise NotAFrameError(L.frameReport, L)
    if L.n > cap:
        raise BoundTooLargeError(f"{L.name or 'frame'} has {L.n} elements, filter cap is {cap}")

    start = _generatedFilter(L, 1 << L.top)
    found = {start}
    pending = [start]
    while pending:
        F = pending.pop()
        for a in bs.iterBits(L.full & ~F):
            G = _generatedFilter(L, F | (1 << a))
            if G not in found:
                found.add(G)
                pending.append(G)

    if L.n <= oracleCap:
        raw = {m for m in range(1, 1 << L.n) if _isFilterMask(L, m)}
        if raw != found:
            raise InvariantViolation(
                "Filter enumeration disagrees with the subset scan",
                {"sets": [L.labelsOf(m) for m in sorted(raw ^ found)][:4]},
            )

    filters = []
    for members in found:
        generator = L.meetOf(members)
        if L.upMask[generator] != members:
            raise InvariantViolation("Non-principal filter", {"filter": L.labelsOf(members)})
        filters.append(Filter(members, generator))
    filters.sort(key=lambda f: f.generator)
    FL = FilterLattice(L, filters)

    for i in range(len(FL)):
        for j in range(i, len(FL)):
            inter = FL.members(i) & FL.members(j)
            if FL._byMembers.get(inter) != FL.lattice.join(i, j):
                raise InvariantViolation(
                    "Filter join is not the intersection", {"pair": [FL.label(i), FL.label(j)]}
                )
            if FL.meetSet(i, j) != FL.members(FL.lattice.meet(i, j)):
                raise InvariantViolation(
                    "Filter meet is not the set of pairwise meets",
                    {"pair": [FL.label(i), FL.label(j)]},
                )
    report = isFrame(FL.dualLattice)
    if not report.isDistributiveFrame:
        raise InvariantViolation("Filt(L) is not a coframe", report.toJson(FL.dualLattice))
    logger.debug(f"{L.name}: {len(FL)} filters")
    return FL


def difference(FL: FilterLattice, h: int, g: int) -> int:
    """H \\ G = {a | b join a in H for every b in G}."""
    L = FL.frame
    inH = _memberArray(L.n, FL.members(h))
    gIdx = np.array(bs.toIndices(FL.members(g)))
    inside = inH[L.joinTable[gIdx, :]].all(axis=0)
    return FL.indexOf(bs.fromIndices(np.flatnonzero(inside)))


def supplement(FL: FilterLattice, f: int) -> int:
    """F# = {1} \\ F."""
    return difference(FL, FL.top, f)


def closedFilter(FL: FilterLattice, a: ElementId) -> int:
    """cf(a) = {x | x join a = 1}."""
    L = FL.frame
    return FL.indexOf(bs.fromIndices(np.flatnonzero(L.joinTable[a] == L.top)))


def openFilter(FL: FilterLattice, a: ElementId) -> int:
    """of(a), the principal filter of a."""
    return FL.principal(a)


def locallyClosedFilter(FL: FilterLattice, x: ElementId, y: ElementId) -> int:
    """The filter {a | y <= a join x}, cross-checked against up(y) \\ up(x)."""
    L = FL.frame
    members = bs.fromIndices(np.flatnonzero(L.leq[y, L.joinTable[:, x]]))
    index = FL.indexOf(members)
    if index != difference(FL, FL.principal(y), FL.principal(x)):
        raise InvariantViolation(
            "Locally closed filter differs from the difference of principal filters",
            {"x": L.labels[x], "y": L.labels[y]},
        )
    return index


def isExactMeet(L: FiniteLattice, M: int) -> bool:
    """(meet M) join b = meet{a join b | a in M} for every b."""
    lhs = L.joinTable[L.meetOf(M)]
    rhs = np.full(L.n, L.top, dtype=np.int64)
    for a in bs.iterBits(M):
        rhs = L.meetTable[rhs, L.joinTable[a]]
    return bool(np.array_equal(lhs, rhs))


def isStronglyExactMeet(L: FiniteLattice, M: int) -> bool:
    """The open sublocales of M intersect to the open sublocale of meet M."""
    opens = L.openMasks
    inter = L.full
    for a in bs.iterBits(M):
        inter &= opens[a]
    return inter == opens[L.meetOf(M)]


def exFormula(FL: FilterLattice, f: int) -> int:
    """{a | for all x, y: (y <= g join x for every g in F) implies y <= a join x}."""
    L = FL.frame
    fIdx = np.array(bs.toIndices(FL.members(f)))
    good = np.ones(L.n, dtype=bool)
    for x in range(L.n):
        cond = L.leq[:, L.joinTable[fIdx, x]].all(axis=1)
        below = L.leq[:, L.joinTable[:, x]]  # [y, a]: y <= a join x
        good &= ~np.any(cond[:, None] & ~below, axis=0)
    return bs.fromIndices(np.flatnonzero(good))


def _completelyPrime(FL: FilterLattice, F: int) -> bool:
    L = FL.frame
    inF = _memberArray(L.n, F)
    subsets = np.arange(1 << L.n, dtype=np.int64)
    hits = (subsets & F) != 0
    return not bool(np.any(inF[L.subsetJoins] & ~hits))


def _scottOpen(FL: FilterLattice, F: int) -> bool:
    return all(A & F for A, top in FL.directedSubsets if F >> top & 1)


def _closedUnder(FL: FilterLattice, F: int, isSpecial) -> bool:
    L = FL.frame
    for M in bs.iterSubsetsCapped(F, locfitSettings.subsetScanCap):
        if not F >> L.meetOf(M) & 1 and isSpecial(L, M):
            return False
    return True


def _seLemma(FL: FilterLattice, F: int) -> bool:
    L = FL.frame
    opens = L.openMasks
    inter = L.full
    for a in bs.iterBits(F):
        inter &= opens[a]
    return all(F >> b & 1 for b in range(L.n) if inter & ~opens[b] == 0)


@dataclass(frozen=True)
class FilterClassTag:
    completelyPrime: bool
    scottOpen: bool
    exact: bool
    stronglyExact: bool
    closed: bool
    locallyClosed: bool
    regular: bool
    principal: bool

    def names(self) -> List[str]:
        flags = [getattr(self, f.name) for f in fields(self)]
        return [name for name, flag in zip(CLASS_NAMES, flags) if flag]


def classify(FL: FilterLattice, f: int) -> FilterClassTag:
    """Evaluate every class definition on the filter of index f.

    Strong exactness is cross-checked against its characterization by open
    sublocales, and exactness against the (ex) formula.

    Raises:
        InvariantViolation: if a cross-check disagrees.
    """
    L = FL.frame
    F = FL.members(f)
    exact = _closedUnder(FL, F, isExactMeet)
    stronglyExact = _closedUnder(FL, F, isStronglyExactMeet)
    if stronglyExact != _seLemma(FL, F):
        raise InvariantViolation("Strong exactness disagrees with its lemma", {"filter": FL.label(f)})
    if exact != (exFormula(FL, f) == F):
        raise InvariantViolation("Exactness disagrees with the (ex) formula", {"filter": FL.label(f)})
    return FilterClassTag(
        completelyPrime=_completelyPrime(FL, F),
        scottOpen=_scottOpen(FL, F),
        exact=exact,
        stronglyExact=stronglyExact,
        closed=bool(FL.closedSet >> f & 1),
        locallyClosed=bool(FL.locallyClosedSet >> f & 1),
        regular=bool(FL.regularSet >> f & 1),
        principal=L.upMask[L.meetOf(F)] == F,
    )


def filterClasses(FL: FilterLattice) -> Dict[str, FilterClass]:
    """Each class name of CLASS_NAMES mapped to its member filters."""
    classes = {name: 0 for name in CLASS_NAMES}
    for i, tag in enumerate(FL.tags):
        for name in tag.names():
            classes[name] |= 1 << i
    return classes


def intClosure(FL: FilterLattice, classMask: FilterClass) -> FilterClass:
    """Int(class): all intersections of class members.

    The empty intersection is the improper filter L, so Int of the empty
    class is {L}.

    Raises:
        InvariantViolation: if the class is Ex or SE and not closed under
            intersections.
    """
    closed = classMask | (1 << FL.bottom)
    frontier = closed
    while frontier:
        added = 0
        for i in bs.iterBits(closed):
            for j in bs.iterBits(frontier):
                added |= 1 << FL.intersection(i, j)
        frontier = added & ~closed
        closed |= added
    classes = filterClasses(FL)
    for name in ("ex", "se"):
        if classMask == classes[name] and closed != classMask:
            raise InvariantViolation(
                f"Int({name}) differs from {name}", {"extra": FL.labelsOf(closed & ~classMask)}
            )
    return closed


def booleanization(C: FiniteLattice) -> int:
    """Elements 1 \\ a of a finite coframe, as an element bitset."""
    return bs.fromIndices(coheytingDifference(C, C.top, a) for a in range(C.n))


def regularFilters(FL: FilterLattice) -> FilterClass:
    """R(L), computed as supplements and as Int(Cl) with equality asserted.

    Raises:
        InvariantViolation: if the two computations or the Booleanization of
            Filt(L) disagree.
    """
    supplements = FL.regularSet
    viaClosed = intClosure(FL, FL.closedSet)
    if supplements != viaClosed:
        raise InvariantViolation(
            "Regular filters differ from intersections of closed filters",
            {"supplements": FL.labelsOf(supplements), "intClosed": FL.labelsOf(viaClosed)},
        )
    if booleanization(FL.lattice) != supplements:
        raise InvariantViolation("Regular filters differ from the Booleanization of Filt(L)")
    return supplements


@dataclass(frozen=True)
class SclReport:
    holds: bool
    subcolocale: bool
    witness: Optional[dict] = None
    subcolocaleWitness: Optional[dict] = None


def sclCondition(FL: FilterLattice, classMask: FilterClass) -> SclReport:
    """Check F \\ up(a) = {x | x join a in F} in the class for F in it and a in L.

    The improper filter L, the empty intersection, is always admitted. Int of
    the class is then tested as a subcolocale of Filt(L).
    """
    L = FL.frame
    witness = None
    for f in bs.iterBits(classMask):
        F = FL.members(f)
        for a in range(L.n):
            formula = bs.fromIndices(x for x in range(L.n) if F >> L.join(x, a) & 1)
            d = difference(FL, f, FL.principal(a))
            if FL.members(d) != formula:
                raise InvariantViolation(
                    "Difference by a principal filter disagrees with its formula",
                    {"filter": FL.label(f), "a": L.labels[a]},
                )
            if d != FL.bottom and not classMask >> d & 1:
                witness = {"filter": FL.label(f), "a": L.labels[a], "difference": FL.label(d)}
                break
        if witness:
            break
    closure = intClosure(FL, classMask)
    defect = sublocaleDefect(FL.dualLattice, closure)
    return SclReport(witness is None, defect is None, witness, defect)


@dataclass(frozen=True)
class SubfitnessReport:
    """The five subfitness characterizations and the two Boolean tests."""

    firstOrder: bool
    principalRegular: bool
    exactRegular: bool
    openJoinOfClosed: bool
    closedSupplementOpen: bool
    boolean: bool
    complemented: bool
    witness: Optional[dict] = None

    @property
    def agrees(self) -> bool:
        five = {self.firstOrder, self.principalRegular, self.exactRegular,
                self.openJoinOfClosed, self.closedSupplementOpen}
        return len(five) == 1 and self.boolean == self.complemented

    @property
    def subfit(self) -> bool:
        return self.firstOrder

    def toJson(self) -> dict:
        return {
            "first_order": self.firstOrder,
            "principal_regular": self.principalRegular,
            "exact_regular": self.exactRegular,
            "open_join_of_closed": self.openJoinOfClosed,
            "closed_supplement_open": self.closedSupplementOpen,
            "boolean": self.boolean,
            "complemented": self.complemented,
            "agrees": self.agrees,
            "witness": self.witness,
        }


def subfitnessSuite(FL: FilterLattice) -> SubfitnessReport:
    """Evaluate the subfitness characterizations independently of each other."""
    L = FL.frame
    n = L.n
    witness = None
    for a in range(n):
        for b in range(n):
            if L.isLeq(a, b):
                continue
            if all(L.join(b, c) == L.top for c in range(n) if L.join(a, c) == L.top):
                witness = {"a": L.labels[a], "b": L.labels[b]}
                break
        if witness:
            break

    regular = regularFilters(FL)
    principals = bs.fromIndices(FL.principal(a) for a in range(n))
    exact = filterClasses(FL)["ex"]

    openJoin = True
    closedSupp = True
    boolean = True
    for a in range(n):
        of, cf = openFilter(FL, a), closedFilter(FL, a)
        below = bs.fromIndices(
            closedFilter(FL, x) for x in range(n) if FL.isBelow(closedFilter(FL, x), of)
        )
        if FL.lattice.joinOf(below) != of:
            openJoin = False
        if supplement(FL, cf) != of:
            closedSupp = False
        if FL.lattice.meet(of, cf) != FL.bottom:
            boolean = False
    complemented = all(
        any(L.meet(a, c) == L.bottom and L.join(a, c) == L.top for c in range(n))
        for a in range(n)
    )
    return SubfitnessReport(
        firstOrder=witness is None,
        principalRegular=principals & ~regular == 0,
        exactRegular=exact == regular,
        openJoinOfClosed=openJoin,
        closedSupplementOpen=closedSupp,
        boolean=boolean,
        complemented=complemented,
        witness=witness,
    )


def completelyJoinPrime(FL: FilterLattice, f: int) -> bool:
    """F [= join A implies F [= G for some G in A, for all families A."""
    C = FL.lattice
    for family in bs.iterSubsetsCapped(FL.full, locfitSettings.subsetScanCap):
        if C.isLeq(f, C.joinOf(family)) and not any(C.isLeq(f, g) for g in bs.iterBits(family)):
            return False
    return True


def coheytingLawWitness(FL: FilterLattice) -> Optional[dict]:
    """First failure of H \\ G [= F iff H [= F join G."""
    C = FL.lattice
    for h in range(len(FL)):
        for g in range(len(FL)):
            d = difference(FL, h, g)
            for f in range(len(FL)):
                if C.isLeq(d, f) != C.isLeq(h, C.join(f, g)):
                    return {"H": FL.label(h), "G": FL.label(g), "F": FL.label(f)}
    return None


def filterLawWitness(FL: FilterLattice) -> Optional[dict]:
    """First failure among the structural laws of Filt(L).

    Covers the coHeyting adjunction, of(a)# = cf(a), of(a) join cf(a) = {1},
    the inclusions Cl <= LCl <= Ex and R <= Ex, and Ex = Int(LCl).
    """
    witness = coheytingLawWitness(FL)
    if witness:
        return {"law": "coheyting", **witness}
    L = FL.frame
    for a in range(L.n):
        of, cf = openFilter(FL, a), closedFilter(FL, a)
        if supplement(FL, of) != cf:
            return {"law": "open-supplement", "a": L.labels[a]}
        if FL.intersection(of, cf) != FL.top:
            return {"law": "open-closed-join", "a": L.labels[a]}
    classes = filterClasses(FL)
    for small, big in (("cl", "lcl"), ("lcl", "ex"), ("r", "ex")):
        extra = classes[small] & ~classes[big]
        if extra:
            return {"law": f"{small}-in-{big}", "filters": FL.labelsOf(extra)}
    if intClosure(FL, classes["lcl"]) != classes["ex"]:
        return {"law": "ex-joins-of-lcl"}
    return None
