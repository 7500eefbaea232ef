"""The coframe of sublocales of a finite frame.

A sublocale is an element bitset S satisfying (S1), closure under all meets
(the top being the empty meet), and (S2), a -> s in S for every s in S and
a in L. Sl(L) is ordered by inclusion; meets are intersections and the join
of a family is the meet-closure of its union.

Sublocale classes are int bitsets over the sublocale indices of a
SublocaleLattice.
"""
import logging
from dataclasses import dataclass, fields
from functools import cached_property
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from locfit.util import bitset as bs
from locfit.models.lattice import (
    ElementId, FiniteLattice, InvariantViolation, LocfitError, NotAFrameError,
    checkClosureOperator, checkInteriorOperator, coheytingDifference, isFrame,
    primes, pseudocomplement,
)
from locfit.models.polarity import meetClosure
from locfit.models.settings import locfitSettings

if TYPE_CHECKING:
    from locfit.models.filters import FilterLattice

logger = logging.getLogger(__name__)

__all__ = [
    "FrameTooLargeError", "NotPrimeError", "Sublocale", "SublocaleLattice",
    "SublocaleTags", "SUBLOCALE_CLASS_NAMES", "sublocaleDefect",
    "isSublocale", "subcolocaleCheck", "enumerateSublocales",
    "openSublocale", "closedSublocale", "openClosedLaws", "fit", "closure",
    "onePoint", "spatialization", "operatorLaws", "classifySublocale",
    "sublocaleClasses", "stf", "fts", "adjunctionWitness", "fittedJoin",
    "fittedJoinClosure", "joinClosureOf", "fitImage", "fjLemmaWitness",
    "supplement", "isFit", "frameBooleanization", "primeLawWitness",
]

Sublocale = int
SublocaleClass = int

# Largest sublocale whose (S1) test also runs over every subset of members.
S1_SCAN_SIZE = 8

SUBLOCALE_CLASS_NAMES = ("so", "sc", "sb", "sk", "ssp", "slc", "sco", "sop", "os", "cs")


class FrameTooLargeError(LocfitError):
    pass


class NotPrimeError(LocfitError):
    def __init__(self, label: str) -> None:
        super().__init__(f"{label} is not a prime element")
        self.label = label


def _binaryMeetDefect(L: FiniteLattice, mask: int) -> Optional[Tuple[int, int]]:
    members = bs.toIndices(mask)
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if not mask >> L.meet(a, b) & 1:
                return a, b
    return None


def _subsetMeetDefect(L: FiniteLattice, mask: int) -> Optional[int]:
    for M in bs.iterSubsets(mask):
        if not mask >> L.meetOf(M) & 1:
            return M
    return None


def _arrowDefect(L: FiniteLattice, mask: int) -> Optional[Tuple[int, int]]:
    arrow = L.arrowTable
    for s in bs.iterBits(mask):
        for a in range(L.n):
            if not mask >> int(arrow[a, s]) & 1:
                return a, s
    return None


def sublocaleDefect(L: FiniteLattice, mask: int) -> Optional[dict]:
    """The first failure of (S1) or (S2), None for a sublocale.

    Raises:
        NotAFrameError: if L is not a frame.
        InvariantViolation: if the subset scan and the binary test of (S1)
            disagree.
    """
    if not L.frameReport.isDistributiveFrame:
        raise NotAFrameError(L.frameReport, L)
    lab = L.labels
    if not mask >> L.top & 1:
        return {"axiom": "S1", "meet": []}
    pair = _binaryMeetDefect(L, mask)
    if bs.popcount(mask) <= S1_SCAN_SIZE:
        subset = _subsetMeetDefect(L, mask)
        if (subset is None) != (pair is None):
            raise InvariantViolation("(S1) tests disagree", {"set": L.labelsOf(mask)})
    if pair is not None:
        return {"axiom": "S1", "meet": [lab[pair[0]], lab[pair[1]]]}
    arrow = _arrowDefect(L, mask)
    if arrow is not None:
        return {"axiom": "S2", "a": lab[arrow[0]], "s": lab[arrow[1]]}
    return None


def isSublocale(L: FiniteLattice, mask: int) -> bool:
    return sublocaleDefect(L, mask) is None


def subcolocaleCheck(C: FiniteLattice, mask: int) -> bool:
    """Whether mask is a subcolocale of the finite coframe C."""
    return isSublocale(C.dual(), mask)


def _generatedSublocale(L: FiniteLattice, mask: int) -> int:
    arrow = L.arrowTable
    closed = meetClosure(L, mask)
    while True:
        grown = closed
        for s in bs.iterBits(closed):
            grown |= bs.fromIndices(arrow[:, s])
        if grown == closed:
            return closed
        closed = meetClosure(L, grown)


def _label(L: FiniteLattice, mask: int) -> str:
    return "{" + ",".join(L.labelsOf(mask)) + "}"


class SublocaleLattice:
    """All sublocales of a finite frame, ordered by inclusion.

    Attributes:
        frame: the underlying frame L.
        sublocales: element bitsets in ascending integer order.
        lattice: the sublocales ordered by inclusion.
        emp, fll: the element bitsets {1} and L.
    """

    def __init__(self, frame: FiniteLattice, sublocales: Sequence[int]) -> None:
        self.frame = frame
        self.sublocales: Tuple[int, ...] = tuple(sorted(sublocales))
        self._index: Dict[int, int] = {m: i for i, m in enumerate(self.sublocales)}
        labels = [_label(frame, m) for m in self.sublocales]
        self.lattice = FiniteLattice.fromFamily(self.sublocales, labels, name=f"Sl({frame.name})")
        self.emp = 1 << frame.top
        self.fll = frame.full

    def __len__(self) -> int:
        return len(self.sublocales)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sublocales)

    def __repr__(self) -> str:
        return f"SublocaleLattice({self.frame.name or '?'}, {len(self)} sublocales)"

    @property
    def full(self) -> SublocaleClass:
        return bs.fullMask(len(self.sublocales))

    def indexOf(self, mask: int) -> int:
        try:
            return self._index[mask]
        except KeyError:
            raise InvariantViolation("Not a sublocale", {"set": self.frame.labelsOf(mask)}) from None

    def contains(self, mask: int) -> bool:
        return mask in self._index

    def label(self, mask: int) -> str:
        return _label(self.frame, mask)

    def masksOf(self, classMask: SublocaleClass) -> List[int]:
        return [self.sublocales[i] for i in bs.iterBits(classMask)]

    def classOf(self, masks: Iterable[int]) -> SublocaleClass:
        return bs.fromIndices(self.indexOf(m) for m in masks)

    def join(self, a: int, b: int) -> int:
        return meetClosure(self.frame, a | b)

    def joinOf(self, masks: Iterable[int]) -> int:
        union = 0
        for m in masks:
            union |= m
        return meetClosure(self.frame, union)

    @cached_property
    def opens(self) -> Tuple[int, ...]:
        return tuple(openSublocale(self.frame, a) for a in range(self.frame.n))

    @cached_property
    def closeds(self) -> Tuple[int, ...]:
        return tuple(closedSublocale(self.frame, a) for a in range(self.frame.n))

    @cached_property
    def points(self) -> Dict[ElementId, int]:
        """The one-point sublocale of every prime."""
        return {p: onePoint(self.frame, p) for p in primes(self.frame)}

    @cached_property
    def coverFamilies(self) -> Tuple[Tuple[int, ElementId], ...]:
        L = self.frame
        return tuple(
            (A, L.joinOf(A))
            for A in bs.iterSubsetsCapped(L.full, locfitSettings.subsetScanCap)
        )

    @cached_property
    def classes(self) -> Dict[str, SublocaleClass]:
        return sublocaleClasses(self)

    @cached_property
    def tags(self) -> Tuple["SublocaleTags", ...]:
        return tuple(classifySublocale(self, m) for m in self.sublocales)


def enumerateSublocales(
        L: FiniteLattice,
        cap: Optional[int] = None,
        oracleCap: Optional[int] = None,
) -> SublocaleLattice:
    """Enumerate Sl(L) by growing generated sublocales from {1}.

    Args:
        L: a finite frame.
        cap: largest frame accepted, sublocaleCap by default.
        oracleCap: largest frame cross-checked against the raw scan of all
            2^n subsets, sublocaleOracleCap by default.

    Raises:
        NotAFrameError: if L is not a frame.
        FrameTooLargeError: if L exceeds the cap.
        InvariantViolation: if the oracle, the join formula or the coframe
            law disagree.
    """
    if cap is None:
        cap = locfitSettings.sublocaleCap
    if oracleCap is None:
        oracleCap = locfitSettings.sublocaleOracleCap
    if not L.frameReport.isDistributiveFrame:
        raise NotAFrameError(L.frameReport, L)
    if L.n > cap:
        raise FrameTooLargeError(f"{L.name or 'frame'} has {L.n} elements, sublocale cap is {cap}")

    start = _generatedSublocale(L, 1 << L.top)
    found = {start}
    pending = [start]
    while pending:
        S = pending.pop()
        for a in bs.iterBits(L.full & ~S):
            T = _generatedSublocale(L, S | (1 << a))
            if T not in found:
                found.add(T)
                pending.append(T)

    for S in found:
        defect = sublocaleDefect(L, S)
        if defect is not None:
            raise InvariantViolation("Generated set is not a sublocale", defect)
    if L.n <= oracleCap:
        raw = {
            m for m in range(1 << L.n)
            if m >> L.top & 1 and _binaryMeetDefect(L, m) is None and _arrowDefect(L, m) is None
        }
        if raw != found:
            raise InvariantViolation(
                "Sublocale enumeration disagrees with the subset scan",
                {"sets": [L.labelsOf(m) for m in sorted(raw ^ found)][:4]},
            )

    SL = SublocaleLattice(L, found)
    C = SL.lattice
    for i, a in enumerate(SL.sublocales):
        for j in range(i, len(SL)):
            b = SL.sublocales[j]
            if SL._index.get(SL.join(a, b)) != C.join(i, j):
                raise InvariantViolation(
                    "Sublocale join formula disagrees with the least upper bound",
                    {"pair": [SL.label(a), SL.label(b)]},
                )
            if SL._index.get(a & b) != C.meet(i, j):
                raise InvariantViolation("Sublocale meet is not the intersection",
                                         {"pair": [SL.label(a), SL.label(b)]})
    report = isFrame(C.dual())
    if not report.isDistributiveFrame:
        raise InvariantViolation("Sl(L) is not a coframe", report.toJson(C.dual()))
    logger.debug(f"{L.name}: {len(SL)} sublocales")
    return SL


def openSublocale(L: FiniteLattice, a: ElementId) -> int:
    """os(a) = {a -> b | b in L}, checked against {x | a -> x = x}."""
    arrow = L.arrowTable
    images = bs.fromIndices(arrow[a])
    fixed = bs.fromIndices(x for x in range(L.n) if arrow[a, x] == x)
    if images != fixed:
        raise InvariantViolation("The two forms of an open sublocale differ", {"a": L.labels[a]})
    defect = sublocaleDefect(L, images)
    if defect is not None:
        raise InvariantViolation("Open sublocale fails the sublocale axioms", defect)
    return images


def closedSublocale(L: FiniteLattice, a: ElementId) -> int:
    """cs(a), the up-set of a."""
    defect = sublocaleDefect(L, L.upMask[a])
    if defect is not None:
        raise InvariantViolation("Closed sublocale fails the sublocale axioms", defect)
    return L.upMask[a]


def openClosedLaws(SL: SublocaleLattice) -> Optional[dict]:
    """First failure of the open and closed sublocale laws, None if all hold.

    Families range over every subset of L up to subsetScanCap, then over the
    deterministic sample of iterSubsetsCapped.
    """
    L = SL.frame
    lab = L.labels
    opens, closeds = SL.opens, SL.closeds
    for family in bs.iterSubsetsCapped(L.full, locfitSettings.subsetScanCap):
        top = L.joinOf(family)
        if SL.joinOf(opens[a] for a in bs.iterBits(family)) != opens[top]:
            return {"law": "open-joins", "family": L.labelsOf(family)}
        inter = L.full
        for a in bs.iterBits(family):
            inter &= closeds[a]
        if inter != closeds[top]:
            return {"law": "closed-meets", "family": L.labelsOf(family)}
    for a in range(L.n):
        for b in range(L.n):
            m = L.meet(a, b)
            if opens[a] & opens[b] != opens[m]:
                return {"law": "open-meets", "a": lab[a], "b": lab[b]}
            if SL.join(closeds[a], closeds[b]) != closeds[m]:
                return {"law": "closed-joins", "a": lab[a], "b": lab[b]}
        if closeds[a] & opens[a] != SL.emp:
            return {"law": "disjoint", "a": lab[a]}
        if SL.join(closeds[a], opens[a]) != SL.fll:
            return {"law": "cover", "a": lab[a]}
    return None


def fit(SL: SublocaleLattice, S: int) -> int:
    """The intersection of the open sublocales containing S."""
    result = SL.fll
    for o in SL.opens:
        if S & ~o == 0:
            result &= o
    return result


def closure(SL: SublocaleLattice, S: int) -> int:
    """cl(S), the intersection of the closed sublocales containing S.

    Raises:
        InvariantViolation: if it differs from the up-set of the meet of S.
    """
    L = SL.frame
    result = SL.fll
    for c in SL.closeds:
        if S & ~c == 0:
            result &= c
    if result != L.upMask[L.meetOf(S)]:
        raise InvariantViolation("Closure is not the up-set of the meet", {"S": SL.label(S)})
    return result


def onePoint(L: FiniteLattice, p: ElementId) -> int:
    """b(p) = {p, 1} for a prime p.

    Raises:
        NotPrimeError: if p is not prime.
    """
    if p not in primes(L):
        raise NotPrimeError(L.labels[p])
    point = (1 << p) | (1 << L.top)
    defect = sublocaleDefect(L, point)
    if defect is not None:
        raise InvariantViolation("One-point set fails the sublocale axioms", defect)
    return point


def spatialization(SL: SublocaleLattice, S: int) -> int:
    """The join of the one-point sublocales inside S."""
    return SL.joinOf(b for b in SL.points.values() if b & ~S == 0)


def operatorLaws(SL: SublocaleLattice) -> Optional[dict]:
    """Closure laws of fit and cl, interior laws of sp, and their fixpoints."""
    domain = list(SL.sublocales)
    subset = lambda a, b: a & ~b == 0  # noqa: E731
    for name, op, check in (
            ("fit", lambda s: fit(SL, s), checkClosureOperator),
            ("cl", lambda s: closure(SL, s), checkClosureOperator),
            ("sp", lambda s: spatialization(SL, s), checkInteriorOperator),
    ):
        witness = check(domain, op, subset)
        if witness is not None:
            return {"operator": name, "law": witness["law"],
                    **{k: SL.label(v) for k, v in witness.items() if k != "law"}}
    if spatialization(SL, SL.emp) != SL.emp:
        return {"operator": "sp", "law": "empty"}
    for a in domain:
        for b in domain:
            if spatialization(SL, SL.join(a, b)) != SL.join(
                    spatialization(SL, a), spatialization(SL, b)):
                return {"operator": "sp", "law": "finite-joins", "u": SL.label(a), "v": SL.label(b)}
    fixed = SL.classOf(s for s in domain if fit(SL, s) == s)
    if fixed != SL.classes["so"]:
        return {"operator": "fit", "law": "fixpoints"}
    spatial = SL.classOf(s for s in domain if spatialization(SL, s) == s)
    if spatial != SL.classes["ssp"]:
        return {"operator": "sp", "law": "fixpoints"}
    return None


def joinClosureOf(SL: SublocaleLattice, classMask: SublocaleClass) -> SublocaleClass:
    """J(class) in Sl(L), the empty join Emp included."""
    closed = classMask | (1 << SL.indexOf(SL.emp))
    frontier = closed
    while frontier:
        added = 0
        for i in bs.iterBits(closed):
            for j in bs.iterBits(frontier):
                added |= 1 << SL.indexOf(SL.join(SL.sublocales[i], SL.sublocales[j]))
        frontier = added & ~closed
        closed |= added
    return closed


def _intersectionClosure(SL: SublocaleLattice, masks: Iterable[int]) -> SublocaleClass:
    closed = SL.classOf(masks) | (1 << SL.indexOf(SL.fll))
    frontier = closed
    while frontier:
        added = 0
        for i in bs.iterBits(closed):
            for j in bs.iterBits(frontier):
                added |= 1 << SL.indexOf(SL.sublocales[i] & SL.sublocales[j])
        frontier = added & ~closed
        closed |= added
    return closed


def _isCompact(SL: SublocaleLattice, S: int) -> bool:
    opens = SL.opens
    for A, top in SL.coverFamilies:
        if S & ~opens[top]:
            continue
        if not any(S & ~opens[SL.frame.joinOf(B)] == 0 for B in bs.iterSubsetsCapped(A, 64)):
            return False
    return True


@dataclass(frozen=True)
class SublocaleTags:
    open: bool
    closed: bool
    fitted: bool
    locallyClosed: bool
    smooth: bool
    joinOfClosed: bool
    compact: bool
    joinOfCompact: bool
    spatial: bool
    onePoint: bool

    def names(self) -> List[str]:
        words = ("open", "closed", "fitted", "locally-closed", "smooth", "join-of-closed",
                 "compact", "join-of-compact", "spatial", "one-point")
        return [w for w, f in zip(words, fields(self)) if getattr(self, f.name)]


def sublocaleClasses(SL: SublocaleLattice) -> Dict[str, SublocaleClass]:
    """Each name of SUBLOCALE_CLASS_NAMES mapped to its members.

    Raises:
        InvariantViolation: if the spatial sublocales differ from J(Sop).
    """
    L = SL.frame
    os = SL.classOf(SL.opens)
    cs = SL.classOf(SL.closeds)
    slc = SL.classOf({c & o for c in SL.closeds for o in SL.opens})
    sco = SL.classOf(s for s in SL.sublocales if _isCompact(SL, s))
    sop = SL.classOf(SL.points.values())
    ssp = SL.classOf(s for s in SL.sublocales if spatialization(SL, s) == s)
    if joinClosureOf(SL, sop) != ssp:
        raise InvariantViolation("Spatial sublocales are not the joins of one-point sublocales",
                                 {"frame": L.name})
    return {
        "so": _intersectionClosure(SL, SL.opens),
        "sc": joinClosureOf(SL, cs),
        "sb": joinClosureOf(SL, slc),
        "sk": joinClosureOf(SL, sco),
        "ssp": ssp,
        "slc": slc,
        "sco": sco,
        "sop": sop,
        "os": os,
        "cs": cs,
    }


def classifySublocale(SL: SublocaleLattice, S: int) -> SublocaleTags:
    i = SL.indexOf(S)
    classes = SL.classes
    member = lambda name: bool(classes[name] >> i & 1)  # noqa: E731
    return SublocaleTags(
        open=member("os"),
        closed=member("cs"),
        fitted=member("so"),
        locallyClosed=member("slc"),
        smooth=member("sb"),
        joinOfClosed=member("sc"),
        compact=_isCompact(SL, S),
        joinOfCompact=member("sk"),
        spatial=spatialization(SL, S) == S,
        onePoint=member("sop"),
    )


def isFit(SL: SublocaleLattice) -> bool:
    """Whether every sublocale is fitted."""
    return SL.classes["so"] == SL.full


def supplement(SL: SublocaleLattice, S: int) -> int:
    """S# = Fll \\ S, the coHeyting difference in Sl(L)."""
    C = SL.lattice
    return SL.sublocales[coheytingDifference(C, C.top, SL.indexOf(S))]


def stf(FL: "FilterLattice", S: int) -> int:
    """stf(S) = {a | S inside os(a)}, as a filter index."""
    opens = FL.frame.openMasks
    return FL.indexOf(bs.fromIndices(a for a in range(FL.frame.n) if S & ~opens[a] == 0))


def fts(FL: "FilterLattice", f: int) -> int:
    """fts(F), the intersection of os(a) for a in F."""
    L = FL.frame
    result = L.full
    for a in bs.iterBits(FL.members(f)):
        result &= L.openMasks[a]
    return result


def adjunctionWitness(SL: SublocaleLattice, FL: "FilterLattice") -> Optional[dict]:
    """First failure of stf -| fts or of the stf images of basic sublocales."""
    from locfit.models.filters import closedFilter, locallyClosedFilter  # noqa: circular

    L = SL.frame
    lab = L.labels
    images = [fts(FL, f) for f in range(len(FL))]
    for S in SL.sublocales:
        s = stf(FL, S)
        for f, image in enumerate(images):
            if FL.isBelow(s, f) != (S & ~image == 0):
                return {"law": "adjunction", "S": SL.label(S), "F": FL.label(f)}
    for a in range(L.n):
        if stf(FL, SL.closeds[a]) != closedFilter(FL, a):
            return {"law": "stf-closed", "a": lab[a]}
        if stf(FL, SL.opens[a]) != FL.principal(a):
            return {"law": "stf-open", "a": lab[a]}
        if fts(FL, FL.principal(a)) != SL.opens[a]:
            return {"law": "fts-principal", "a": lab[a]}
        for y in range(L.n):
            if stf(FL, SL.closeds[a] & SL.opens[y]) != locallyClosedFilter(FL, a, y):
                return {"law": "stf-locally-closed", "x": lab[a], "y": lab[y]}
    for S in SL.masksOf(SL.classes["so"]):
        if fts(FL, stf(FL, S)) != S:
            return {"law": "fts-stf", "S": SL.label(S)}
    return None


def fittedJoin(SL: SublocaleLattice, masks: Iterable[int]) -> int:
    """fit of the join; the empty family gives Emp."""
    return fit(SL, SL.joinOf(masks))


def fitImage(SL: SublocaleLattice, classMask: SublocaleClass) -> SublocaleClass:
    """fit[class]."""
    return SL.classOf(fit(SL, S) for S in SL.masksOf(classMask))


def fittedJoinClosure(SL: SublocaleLattice, classMask: SublocaleClass) -> SublocaleClass:
    """FJ(class): closure under fitted joins, the empty one included."""
    closed = classMask | (1 << SL.indexOf(fittedJoin(SL, [])))
    frontier = closed
    while frontier:
        added = 0
        for i in bs.iterBits(closed):
            for j in bs.iterBits(frontier):
                added |= 1 << SL.indexOf(fittedJoin(SL, [SL.sublocales[i], SL.sublocales[j]]))
        frontier = added & ~closed
        closed |= added
    return closed


def fjLemmaWitness(SL: SublocaleLattice) -> Optional[dict]:
    """FJ(fit[A]) = fit[J(A)] for A among Slc, cs[L], Sco and Sop."""
    for name in ("slc", "cs", "sco", "sop"):
        A = SL.classes[name]
        left = fittedJoinClosure(SL, fitImage(SL, A))
        right = fitImage(SL, joinClosureOf(SL, A))
        if left != right:
            return {"class": name,
                    "fj": [SL.label(m) for m in SL.masksOf(left)],
                    "fit": [SL.label(m) for m in SL.masksOf(right)]}
    return None


def frameBooleanization(L: FiniteLattice) -> int:
    """B(L), the regular elements a* of a frame, as an element bitset."""
    return bs.fromIndices(pseudocomplement(L, a) for a in range(L.n))


def primeLawWitness(SL: SublocaleLattice) -> Optional[dict]:
    """Primes are the p != 1 with {p, 1} a sublocale; b(p) inside os(a) iff a not <= p."""
    L = SL.frame
    viaSublocale = tuple(
        p for p in range(L.n) if p != L.top and isSublocale(L, (1 << p) | (1 << L.top))
    )
    if viaSublocale != primes(L):
        return {"law": "primes", "sublocale": [L.labels[p] for p in viaSublocale],
                "prime": [L.labels[p] for p in primes(L)]}
    for p, point in SL.points.items():
        for a in range(L.n):
            if (point & ~SL.opens[a] == 0) != (not L.isLeq(a, p)):
                return {"law": "point-in-open", "p": L.labels[p], "a": L.labels[a]}
    return None
