"""Filter extensions of a finite frame.

For a class F of filters of L, the filter extension is L^F = GC(F, L, ∋),
the Galois-closed sets of the polarity relating a filter to its members. It
comes with eps: L -> L^F, a -> {F | a in F}, and kappa: F -> L^F. Concretely
L^F is Int(F), the intersections of class members ordered by reverse
inclusion, a closed set A corresponding to the intersection of A. Both
constructions are built and matched on every run.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from locfit.util import bitset as bs
from locfit.models.lattice import (
    ElementId, FiniteLattice, InvariantViolation, primes,
)
from locfit.models.polarity import (
    GaloisClosedFamily, Polarity, UniversalPropertyReport,
    checkUniversalProperties, galoisClosed, inducedLattice,
)
from locfit.models.filters import (
    FilterClass, FilterLattice, allFilters, completelyJoinPrime,
    filterClasses, intClosure, isExactMeet, isStronglyExactMeet,
)
from locfit.models.settings import locfitSettings

logger = logging.getLogger(__name__)

__all__ = [
    "EXTENSION_CLASSES", "FilterExtension", "ExtensionReport", "MeetVerdict",
    "CpUpsetReport", "DlatReport", "extensionClass", "buildExtension",
    "axiomWitness", "basicProperties", "generalChar", "meetPreservation",
    "meetPreservationScan", "specialCases", "dlatCanonicalExtension",
    "cpUpsetLemma",
]

EXTENSION_CLASSES = ("cl", "so", "cp", "ex", "se", "lcl", "principal")


@dataclass
class FilterExtension:
    """L^F for one filter class, abstract and concrete.

    Attributes:
        base: the frame L.
        filterLattice: Filt(L).
        className: the class name, or "custom".
        classFilters: the class members as filter indices, ascending.
        polarity: (F, L, ∋).
        family: GC(F, L, ∋).
        concrete: Int(F) as a filter class.
        eMap: eps(a) as a family index, per element a.
        kMap: kappa(F) as a family index, per class position.
        iso: family index -> filter index of the intersection.
    """

    base: FiniteLattice
    filterLattice: FilterLattice
    className: str
    classFilters: Tuple[int, ...]
    polarity: Polarity
    family: GaloisClosedFamily
    concrete: FilterClass
    eMap: Tuple[int, ...]
    kMap: Tuple[int, ...]
    iso: Tuple[int, ...]
    universal: Optional[UniversalPropertyReport] = None

    @property
    def lattice(self) -> FiniteLattice:
        return self.family.lattice

    @property
    def concreteLattice(self) -> FiniteLattice:
        members = sorted(bs.iterBits(self.concrete))
        return inducedLattice(self.filterLattice.lattice, members, name=f"Int({self.className})")

    def concreteE(self, a: ElementId) -> int:
        """The filter index of the intersection of the class members containing a."""
        FL = self.filterLattice
        holders = bs.fromIndices(f for f in self.classFilters if FL.members(f) >> a & 1)
        return FL.lattice.joinOf(holders)

    def toJson(self) -> dict:
        FL = self.filterLattice
        return {
            "frame": self.base.name,
            "class": self.className,
            "class_size": len(self.classFilters),
            "size": len(self.family),
            "int": FL.labelsOf(self.concrete),
            "eps": {self.base.labels[a]: FL.label(self.concreteE(a)) for a in range(self.base.n)},
            "axioms": self.universal.passed if self.universal else None,
        }


@dataclass
class ExtensionReport:
    name: str
    passed: bool
    items: Dict[str, bool] = field(default_factory=dict)
    witness: Optional[dict] = None

    def toJson(self) -> dict:
        return {"check": self.name, "passed": self.passed, "items": dict(self.items),
                "witness": self.witness}


def extensionClass(FL: FilterLattice, name: str) -> FilterClass:
    """The filters of a named class; 'principal' is every filter."""
    if name not in EXTENSION_CLASSES:
        raise ValueError(f"Unknown filter class {name!r}, expected one of {', '.join(EXTENSION_CLASSES)}")
    return filterClasses(FL)[name]


def buildExtension(
        FL: FilterLattice,
        className: str,
        classMask: Optional[FilterClass] = None,
) -> FilterExtension:
    """Build L^F = GC(F, L, ∋) and Int(F) and match them.

    Args:
        FL: the filters of L.
        className: a name of EXTENSION_CLASSES, or a free name when classMask
            is given.
        classMask: an explicit class overriding the named one.

    Raises:
        InvariantViolation: if the intersection map is not an order
            isomorphism onto Int(F) carrying the abstract maps to the
            concrete ones.
    """
    L = FL.frame
    if classMask is None:
        classMask = extensionClass(FL, className)
    classFilters = bs.toIndices(classMask)
    xUp = [
        bs.fromIndices(j for j, g in enumerate(classFilters) if FL.isBelow(f, g))
        for f in classFilters
    ]
    P = Polarity.fromRelation(
        [FL.label(f) for f in classFilters],
        L.labels,
        lambda i, a: bool(FL.members(classFilters[i]) >> a & 1),
        xUp,
        L.upMask,
    )
    family = galoisClosed(P, name=f"{L.name}^{className}")
    concrete = intClosure(FL, classMask)

    C = FL.lattice
    iso = tuple(
        C.joinOf(bs.fromIndices(classFilters[i] for i in bs.iterBits(A)))
        for A in family.closedSets
    )
    if sorted(iso) != sorted(bs.iterBits(concrete)) or len(set(iso)) != len(iso):
        raise InvariantViolation(
            "Intersection map is not a bijection onto Int(F)",
            {"class": className, "gc": len(family), "int": bs.popcount(concrete)},
        )
    for i, A in enumerate(family.closedSets):
        for j, B in enumerate(family.closedSets):
            if (A & ~B == 0) != C.isLeq(iso[i], iso[j]):
                raise InvariantViolation(
                    "Intersection map is not an order isomorphism",
                    {"class": className, "pair": [FL.label(iso[i]), FL.label(iso[j])]},
                )
    ext = FilterExtension(
        L, FL, className, classFilters, P, family, concrete,
        family.yeIndex, family.xeIndex, iso,
    )
    for a in range(L.n):
        if iso[ext.eMap[a]] != ext.concreteE(a):
            raise InvariantViolation("eps disagrees with its concrete form",
                                     {"class": className, "a": L.labels[a]})
    for i, f in enumerate(classFilters):
        if iso[ext.kMap[i]] != f:
            raise InvariantViolation("kappa disagrees with its concrete form",
                                     {"class": className, "filter": FL.label(f)})
        members = FL.members(f)
        if family.meetOf(ext.eMap[a] for a in bs.iterBits(members)) != ext.kMap[i]:
            raise InvariantViolation("kappa(F) is not the meet of eps[F]",
                                     {"class": className, "filter": FL.label(f)})

    ext.universal = checkUniversalProperties(
        P, family.lattice, ext.kMap, ext.eMap, gc=family,
        checkUniqueness=len(family) <= locfitSettings.gcBruteForceCap,
    )
    witness = axiomWitness(ext)
    if witness is not None or not ext.universal.passed:
        raise InvariantViolation(
            "Filter extension fails its axioms",
            witness or {"item": ext.universal.item, **(ext.universal.witness or {})},
        )
    logger.debug(f"{L.name}^{className}: {len(family)} elements")
    return ext


def axiomWitness(
        ext: FilterExtension,
        lattice: Optional[FiniteLattice] = None,
        kMap: Optional[Tuple[int, ...]] = None,
        eMap: Optional[Tuple[int, ...]] = None,
) -> Optional[dict]:
    """First failure of (D^F) or (C^F) on a candidate extension.

    (D^F): every element is a join of elements meet(eps[F]).
    (C^F): meet(eps[F]) <= eps(a) implies a in F.
    The candidate defaults to the built extension.
    """
    C = lattice if lattice is not None else ext.family.lattice
    kMap = kMap if kMap is not None else ext.kMap
    eMap = eMap if eMap is not None else ext.eMap
    FL = ext.filterLattice
    L = ext.base
    meets = []
    for i, f in enumerate(ext.classFilters):
        meet = C.meetOf(bs.fromIndices(eMap[a] for a in bs.iterBits(FL.members(f))))
        if meet != kMap[i]:
            return {"axiom": "kappa", "filter": FL.label(f)}
        meets.append(meet)
    for u in range(C.n):
        below = bs.fromIndices(m for m in meets if C.isLeq(m, u))
        if C.joinOf(below) != u:
            return {"axiom": "D", "element": C.labels[u]}
    for i, f in enumerate(ext.classFilters):
        for a in range(L.n):
            if C.isLeq(meets[i], eMap[a]) and not FL.members(f) >> a & 1:
                return {"axiom": "C", "filter": FL.label(f), "a": L.labels[a]}
    return None


def _separationWitness(ext: FilterExtension) -> Optional[dict]:
    FL = ext.filterLattice
    L = ext.base
    for a in range(L.n):
        for b in range(a):
            if all((FL.members(f) >> a & 1) == (FL.members(f) >> b & 1) for f in ext.classFilters):
                return {"a": L.labels[a], "b": L.labels[b]}
    return None


def _classPosetBound(ext: FilterExtension, i: int, j: int, upper: bool) -> Optional[int]:
    """Least upper (or greatest lower) bound of two class positions inside the class."""
    FL = ext.filterLattice
    fs = ext.classFilters
    if upper:
        bounds = [k for k in range(len(fs)) if FL.isBelow(fs[i], fs[k]) and FL.isBelow(fs[j], fs[k])]
        best = [k for k in bounds if all(FL.isBelow(fs[k], fs[m]) for m in bounds)]
    else:
        bounds = [k for k in range(len(fs)) if FL.isBelow(fs[k], fs[i]) and FL.isBelow(fs[k], fs[j])]
        best = [k for k in bounds if all(FL.isBelow(fs[m], fs[k]) for m in bounds)]
    return best[0] if best else None


def basicProperties(ext: FilterExtension) -> ExtensionReport:
    """The six basic properties of eps and kappa."""
    FL = ext.filterLattice
    L = ext.base
    C = ext.family.lattice
    fs = ext.classFilters
    k, e = ext.kMap, ext.eMap
    report = ExtensionReport("basic", True)

    def fail(item: str, witness: dict) -> None:
        report.items[item] = False
        if report.passed:
            report.passed = False
            report.witness = {"item": item, **witness}

    report.items["kappa-embedding"] = True
    for i in range(len(fs)):
        for j in range(len(fs)):
            if FL.isBelow(fs[i], fs[j]) != C.isLeq(k[i], k[j]):
                fail("kappa-embedding", {"F": FL.label(fs[i]), "G": FL.label(fs[j])})
    # Meets existing in (F, ⊑) are kept; a join only when F ∩ G is in the class.
    report.items["kappa-bounds"] = True
    classMembers = {FL.members(f) for f in fs}
    for i in range(len(fs)):
        for j in range(len(fs)):
            for upper in (True, False):
                if upper and FL.members(fs[i]) & FL.members(fs[j]) not in classMembers:
                    continue
                bound = _classPosetBound(ext, i, j, upper)
                if bound is None:
                    continue
                image = C.join(k[i], k[j]) if upper else C.meet(k[i], k[j])
                if k[bound] != image:
                    fail("kappa-bounds", {"F": FL.label(fs[i]), "G": FL.label(fs[j]),
                                          "bound": "join" if upper else "meet"})
    report.items["eps-monotone"] = True
    for a in range(L.n):
        for b in range(L.n):
            if L.isLeq(a, b) and not C.isLeq(e[a], e[b]):
                fail("eps-monotone", {"a": L.labels[a], "b": L.labels[b]})
    report.items["eps-meets"] = e[L.bottom] == C.bottom
    if not report.items["eps-meets"]:
        fail("eps-meets", {"a": L.labels[L.bottom]})
    for a in range(L.n):
        for b in range(L.n):
            if e[L.meet(a, b)] != C.meet(e[a], e[b]):
                fail("eps-meets", {"a": L.labels[a], "b": L.labels[b]})

    injective = len(set(e)) == L.n
    separation = _separationWitness(ext)
    report.items["eps-injective"] = injective
    report.items["separable"] = separation is None
    if injective != (separation is None):
        fail("separable", separation or {})
    report.items["frame-embedding"] = True
    if injective:
        for A in bs.iterSubsetsCapped(L.full, locfitSettings.subsetScanCap):
            if e[L.joinOf(A)] != C.joinOf(bs.fromIndices(e[a] for a in bs.iterBits(A))):
                fail("frame-embedding", {"family": L.labelsOf(A)})
                break
    if separation is not None and report.witness is None:
        report.witness = {"inseparable": separation}
    return report


def generalChar(ext: FilterExtension) -> ExtensionReport:
    """eps injective iff F-separable iff eps(a) = up(a) for all a iff Int(F) holds the principals."""
    FL = ext.filterLattice
    L = ext.base
    items = {
        "eps-injective": len(set(ext.eMap)) == L.n,
        "separable": _separationWitness(ext) is None,
        "eps-principal": all(ext.concreteE(a) == FL.principal(a) for a in range(L.n)),
        "int-has-principals": all(ext.concrete >> FL.principal(a) & 1 for a in range(L.n)),
    }
    passed = len(set(items.values())) == 1
    witness = None
    if not passed:
        witness = {"items": dict(items)}
    elif not items["separable"]:
        witness = {"inseparable": _separationWitness(ext)}
    return ExtensionReport("generalchar", passed, items, witness)


@dataclass(frozen=True)
class MeetVerdict:
    meet: Tuple[str, ...]
    preserved: bool
    classClosed: bool
    special: Optional[bool] = None

    @property
    def agrees(self) -> bool:
        return self.preserved == self.classClosed and self.special in (None, self.classClosed)


def meetPreservation(ext: FilterExtension, M: int) -> MeetVerdict:
    """Whether eps preserves the meet of M, against closure of the class under it.

    For SE the closure is also compared with strong exactness of the meet,
    for Ex with exactness.
    """
    FL = ext.filterLattice
    L = ext.base
    m = L.meetOf(M)
    preserved = ext.eMap[m] == ext.family.meetOf(ext.eMap[a] for a in bs.iterBits(M))
    closed = all(
        FL.members(f) >> m & 1 for f in ext.classFilters if M & ~FL.members(f) == 0
    )
    special = None
    if ext.className == "se":
        special = isStronglyExactMeet(L, M)
    elif ext.className == "ex":
        special = isExactMeet(L, M)
    return MeetVerdict(tuple(L.labelsOf(M)), preserved, closed, special)


def meetPreservationScan(ext: FilterExtension) -> ExtensionReport:
    L = ext.base
    report = ExtensionReport("meets", True)
    allPreserved = True
    for M in bs.iterSubsetsCapped(L.full, locfitSettings.subsetScanCap):
        verdict = meetPreservation(ext, M)
        allPreserved &= verdict.preserved
        if not verdict.agrees:
            report.passed = False
            report.witness = {"meet": list(verdict.meet), "preserved": verdict.preserved,
                              "closed": verdict.classClosed, "special": verdict.special}
            break
    report.items["all-preserved"] = report.passed and allPreserved
    return report


def _spatialWitness(L: FiniteLattice) -> Optional[dict]:
    points = bs.fromIndices(primes(L))
    for a in range(L.n):
        if L.meetOf(points & L.upMask[a]) != a:
            return {"a": L.labels[a]}
    return None


def specialCases(ext: FilterExtension) -> ExtensionReport:
    """Directed joins for classes inside SO, injectivity for classes holding SO or CP."""
    FL = ext.filterLattice
    L = ext.base
    C = ext.family.lattice
    classes = filterClasses(FL)
    classMask = bs.fromIndices(ext.classFilters)
    report = ExtensionReport("special", True)
    spatial = _spatialWitness(L)
    report.items["spatial"] = spatial is None
    if spatial is not None:
        report.passed, report.witness = False, {"item": "spatial", **spatial}
        return report

    injective = len(set(ext.eMap)) == L.n
    if classMask & ~classes["so"] == 0:
        ok = all(
            ext.eMap[top] == C.joinOf(bs.fromIndices(ext.eMap[a] for a in bs.iterBits(A)))
            for A, top in FL.directedSubsets
        )
        report.items["directed-joins"] = ok
        if not ok:
            report.passed, report.witness = False, {"item": "directed-joins"}
    for name in ("so", "cp"):
        if classes[name] & ~classMask == 0:
            report.items[f"holds-{name}-injective"] = injective
            if not injective and report.passed:
                report.passed, report.witness = False, {"item": f"holds-{name}-injective"}
    principals = bs.fromIndices(FL.principal(a) for a in range(L.n))
    for name in ("so", "cp"):
        ok = principals & ~intClosure(FL, classes[name]) == 0
        report.items[f"int-{name}-principals"] = ok
        if not ok and report.passed:
            report.passed, report.witness = False, {"item": f"int-{name}-principals"}
    return report


@dataclass
class DlatReport:
    passed: bool
    lattice: Optional[FiniteLattice] = None
    embedding: Tuple[int, ...] = ()
    witness: Optional[dict] = None


def dlatCanonicalExtension(D: FiniteLattice) -> DlatReport:
    """GC(Filt(D), Idl(D), F meets I) with axioms (D) and (C), and D^delta = D.

    Ideals are the filters of the order dual.
    """
    filters = allFilters(D)
    ideals = allFilters(D.dual())
    P = Polarity.fromRelation(
        [filters.label(f) for f in range(len(filters))],
        [f"↓{D.labels[ideals.filters[i].generator]}" for i in range(len(ideals))],
        lambda f, i: bool(filters.members(f) & ideals.members(i)),
    )
    gc = galoisClosed(P, name=f"{D.name}^delta")
    C = gc.lattice
    xhat, yhat = gc.xeIndex, gc.yeIndex
    embedding = tuple(xhat[filters.principal(a)] for a in range(D.n))
    report = DlatReport(True, C, embedding)

    def fail(witness: dict) -> DlatReport:
        report.passed, report.witness = False, witness
        return report

    for a in range(D.n):
        if embedding[a] != yhat[ideals.principal(a)]:
            return fail({"axiom": "embedding", "a": D.labels[a]})
    for f in range(len(filters)):
        members = filters.members(f)
        if C.meetOf(bs.fromIndices(embedding[a] for a in bs.iterBits(members))) != xhat[f]:
            return fail({"axiom": "filter-meet", "filter": filters.label(f)})
    for i in range(len(ideals)):
        members = ideals.members(i)
        if C.joinOf(bs.fromIndices(embedding[a] for a in bs.iterBits(members))) != yhat[i]:
            return fail({"axiom": "ideal-join", "ideal": P.yLabels[i]})
    for u in range(C.n):
        if C.joinOf(bs.fromIndices(x for x in xhat if C.isLeq(x, u))) != u:
            return fail({"axiom": "D-join", "element": C.labels[u]})
        if C.meetOf(bs.fromIndices(y for y in yhat if C.isLeq(u, y))) != u:
            return fail({"axiom": "D-meet", "element": C.labels[u]})
    for f in range(len(filters)):
        for i in range(len(ideals)):
            if C.isLeq(xhat[f], yhat[i]) != P.related(f, i):
                return fail({"axiom": "C", "filter": filters.label(f), "ideal": P.yLabels[i]})
    if len(set(embedding)) != D.n or C.n != D.n:
        return fail({"axiom": "finite-collapse", "sizes": [D.n, C.n]})
    for a in range(D.n):
        for b in range(D.n):
            if D.isLeq(a, b) != C.isLeq(embedding[a], embedding[b]):
                return fail({"axiom": "finite-collapse", "a": D.labels[a], "b": D.labels[b]})
    return report


@dataclass
class CpUpsetReport:
    passed: bool
    points: Tuple[str, ...] = ()
    upsets: int = 0
    intSize: int = 0
    witness: Optional[dict] = None


def cpUpsetLemma(FL: FilterLattice) -> CpUpsetReport:
    """Int(CP(L)) against the up-sets of the points of L.

    Points are the primes, ordered by the dual of the order of L. A filter G
    of Int(CP) goes to {p | gen(G) not <= p}, and to {Q in CP | G inside Q};
    both must be order isomorphisms. Each completely prime filter must be
    completely join-prime in Filt(L).
    """
    L = FL.frame
    C = FL.lattice
    cp = filterClasses(FL)["cp"]
    closure = sorted(bs.iterBits(intClosure(FL, cp)))
    points = primes(L)
    pointMask = bs.fromIndices(points)
    upsets = [
        U for U in bs.iterSubsets(pointMask)
        if all(pointMask & L.downMask[p] & ~U == 0 for p in bs.iterBits(U))
    ]
    report = CpUpsetReport(True, tuple(L.labels[p] for p in points), len(upsets), len(closure))

    def fail(witness: dict) -> CpUpsetReport:
        report.passed, report.witness = False, witness
        return report

    for f in bs.iterBits(cp):
        if not completelyJoinPrime(FL, f):
            return fail({"item": "join-prime", "filter": FL.label(f)})

    cpList = list(bs.iterBits(cp))
    maps: List[Tuple[str, List[int], List[int]]] = [
        ("points",
         [bs.fromIndices(p for p in points if not L.isLeq(FL.filters[g].generator, p)) for g in closure],
         upsets),
        ("completely-prime",
         [bs.fromIndices(q for q, Q in enumerate(cpList) if FL.members(g) & ~FL.members(Q) == 0)
          for g in closure],
         [U for U in bs.iterSubsets(bs.fullMask(len(cpList)))
          if all(U >> j & 1 for i in bs.iterBits(U) for j in range(len(cpList))
                 if FL.members(cpList[i]) & ~FL.members(cpList[j]) == 0)]),
    ]
    for name, images, targets in maps:
        if sorted(images) != sorted(targets) or len(set(images)) != len(images):
            return fail({"item": name, "sizes": [len(closure), len(targets)]})
        for i, g in enumerate(closure):
            for j, h in enumerate(closure):
                if C.isLeq(g, h) != (images[i] & ~images[j] == 0):
                    return fail({"item": name, "pair": [FL.label(g), FL.label(h)]})
    return report
