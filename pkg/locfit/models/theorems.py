"""Named theorem checkers over one finite frame.

Every checker recomputes both sides of its statement from definitions and
returns a witness dict on failure, None on success. Isomorphism checkers
build an explicit OrderMap and accept a Mutation, applied to the candidate
map or its codomain before verification, as a negative control.

Checkers are registered in THEOREMS under stable ids, in report order.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, partial
from typing import (
    Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union,
)

import numpy as np

from locfit.util import bitset as bs
from locfit.util.basicpatterns import ObjectFactory
from locfit.models.lattice import (
    BoundTooLargeError, FiniteLattice, InvariantViolation, LocfitError,
    heytingLawWitness, isFrame, pseudocomplement,
)
from locfit.models.polarity import (
    Polarity, checkUniversalProperties, clIntInside, galoisClosed,
    inducedLattice, oppositeFamily,
)
from locfit.models.filters import (
    FilterLattice, allFilters, booleanization, filterClasses, intClosure,
    isExactMeet, regularFilters, sclCondition, subfitnessSuite,
    filterLawWitness,
)
from locfit.models.sublocales import (
    FrameTooLargeError, SublocaleLattice, adjunctionWitness, closure,
    enumerateSublocales, fit, fitImage, fjLemmaWitness, frameBooleanization,
    fts, isFit, joinClosureOf, openClosedLaws, operatorLaws, primeLawWitness,
    spatialization, stf, sublocaleDefect,
)
from locfit.models.extensions import (
    EXTENSION_CLASSES, FilterExtension, axiomWitness, basicProperties,
    buildExtension, cpUpsetLemma, dlatCanonicalExtension, generalChar,
    meetPreservationScan, specialCases,
)
from locfit.models.settings import locfitSettings

logger = logging.getLogger(__name__)

__all__ = [
    "Mutation", "OrderMap", "TheoremVerdict", "SkippedFrame", "FrameContext",
    "THEOREMS", "ISOMORPHISM_CHECKERS", "SUITE_GROUPS", "selectTheorems",
    "shrinkWitness", "failedVerdicts", "checkFrame",
]

Witness = Optional[dict]


class Mutation(Enum):
    DELETE_ELEMENT = "delete-element"
    REMAP_ELEMENT = "remap-element"
    FLIP_RELATION = "flip-relation"


@dataclass(frozen=True, eq=False)
class OrderMap:
    """A candidate order isomorphism between two finite posets.

    mapping[i] is the target index of source element i, -1 when undefined.
    """

    sourceLabels: Tuple[str, ...]
    sourceLeq: np.ndarray
    targetLabels: Tuple[str, ...]
    targetLeq: np.ndarray
    mapping: Tuple[int, ...]

    @classmethod
    def restrict(
            cls,
            source: FiniteLattice,
            sourceMembers: Sequence[int],
            target: FiniteLattice,
            targetMembers: Sequence[int],
            f: Callable[[int], int],
    ) -> "OrderMap":
        """f restricted to sourceMembers, read inside targetMembers."""
        src = np.array(sourceMembers, dtype=np.int64)
        dst = np.array(targetMembers, dtype=np.int64)
        position = {t: k for k, t in enumerate(targetMembers)}
        return cls(
            tuple(source.labels[i] for i in sourceMembers),
            source.leq[np.ix_(src, src)],
            tuple(target.labels[i] for i in targetMembers),
            target.leq[np.ix_(dst, dst)],
            tuple(position.get(f(i), -1) for i in sourceMembers),
        )

    def mutate(self, mutation: Optional[Mutation]) -> "OrderMap":
        if mutation is None:
            return self
        mapping = list(self.mapping)
        if mutation is Mutation.DELETE_ELEMENT:
            leq = self.targetLeq
            k = len(self.targetLabels)
            inner = [
                t for t in range(k)
                if leq[:, t].sum() > 1 and leq[t, :].sum() > 1
            ]
            victim = inner[0] if inner else k - 1
            keep = [t for t in range(k) if t != victim]
            idx = np.array(keep, dtype=np.int64)
            shifted = [-1 if m == victim else m - (m > victim) for m in mapping]
            return OrderMap(
                self.sourceLabels, self.sourceLeq,
                tuple(self.targetLabels[t] for t in keep), leq[np.ix_(idx, idx)],
                tuple(shifted),
            )
        if mutation is Mutation.REMAP_ELEMENT:
            mapping[0] = mapping[1] if len(mapping) > 1 else -1
            return OrderMap(self.sourceLabels, self.sourceLeq,
                            self.targetLabels, self.targetLeq, tuple(mapping))
        leq = self.targetLeq.copy()
        a, b = (0, 1) if len(self.targetLabels) > 1 else (0, 0)
        leq[a, b] = not leq[a, b]
        return OrderMap(self.sourceLabels, self.sourceLeq, self.targetLabels, leq, self.mapping)

    def witness(self) -> Witness:
        """First failure among totality, bijectivity and order reflection."""
        m = self.mapping
        src, dst = self.sourceLabels, self.targetLabels
        for i, t in enumerate(m):
            if not 0 <= t < len(dst):
                return {"defect": "undefined", "element": src[i]}
        seen: Dict[int, int] = {}
        for i, t in enumerate(m):
            if t in seen:
                return {"defect": "not-injective", "elements": [src[seen[t]], src[i]]}
            seen[t] = i
        missing = [dst[t] for t in range(len(dst)) if t not in seen]
        if missing:
            return {"defect": "not-surjective", "missing": missing[0]}
        for i in range(len(m)):
            for j in range(len(m)):
                if bool(self.sourceLeq[i, j]) != bool(self.targetLeq[m[i], m[j]]):
                    return {"defect": "order", "pair": [src[i], src[j]]}
        return None


def shrinkWitness(items: Sequence, stillFails: Callable[[List], bool]) -> List:
    """Greedily drop items, in order, while the failure persists."""
    kept = list(items)
    i = 0
    while i < len(kept):
        candidate = kept[:i] + kept[i + 1:]
        if candidate and stillFails(candidate):
            kept = candidate
        else:
            i += 1
    return kept


@dataclass(frozen=True)
class TheoremVerdict:
    theoremId: str
    frameId: str
    passed: bool
    witness: Witness = None

    def toJson(self) -> dict:
        data = {"frame": self.frameId, "theorem": self.theoremId, "passed": self.passed}
        if self.witness is not None:
            data["witness"] = self.witness
        return data


@dataclass(frozen=True)
class SkippedFrame:
    frameId: str
    reason: str
    witness: Witness = None

    def toJson(self) -> dict:
        data = {"frame": self.frameId, "skipped": True, "reason": self.reason}
        if self.witness is not None:
            data["witness"] = self.witness
        return data


class FrameContext:
    """Lazily computed structures of one frame, shared by the checkers."""

    def __init__(self, frame: FiniteLattice, frameId: Optional[str] = None) -> None:
        self.frame = frame
        self.frameId = frameId or frame.name or "frame"
        self._extensions: Dict[str, FilterExtension] = {}

    @cached_property
    def filters(self) -> FilterLattice:
        return allFilters(self.frame)

    @cached_property
    def sublocales(self) -> SublocaleLattice:
        return enumerateSublocales(self.frame)

    @cached_property
    def filterClasses(self) -> Dict[str, int]:
        return filterClasses(self.filters)

    @cached_property
    def sublocaleClasses(self) -> Dict[str, int]:
        return self.sublocales.classes

    def extension(self, className: str) -> FilterExtension:
        if className not in self._extensions:
            self._extensions[className] = buildExtension(self.filters, className)
        return self._extensions[className]

    def sublocaleIndices(self, classMask: int) -> List[int]:
        return sorted(bs.iterBits(classMask))

    def ftsIndex(self, f: int) -> int:
        """fts(F) as a sublocale index."""
        return self.sublocales.indexOf(fts(self.filters, f))


THEOREMS = ObjectFactory()
ISOMORPHISM_CHECKERS: Set[str] = set()

# Group names accepted by selectTheorems besides single ids.
SUITE_GROUPS: Dict[str, Tuple[str, ...]] = {
    "thm-restrictions": (
        "thm-ex-sb", "thm-r-sc", "thm-so-sk", "thm-cp-ssp", "lem-lcl-slc", "prop-johnstone",
    ),
}


def theorem(theoremId: str, isomorphism: bool = False, checker: Optional[Callable] = None):
    def register(func: Callable) -> Callable:
        THEOREMS.registerBuilder(theoremId, func)
        if isomorphism:
            ISOMORPHISM_CHECKERS.add(theoremId)
        return func
    if checker is not None:
        return register(checker)
    return register


def selectTheorems(names: Optional[Iterable[str]] = None) -> List[str]:
    """Expand 'all', group names and ids into registry ids, in registry order.

    Raises:
        ValueError: on an unknown name.
    """
    if names is None:
        return list(THEOREMS)
    wanted: Set[str] = set()
    for name in names:
        if name == "all":
            wanted.update(THEOREMS)
        elif name in SUITE_GROUPS:
            wanted.update(SUITE_GROUPS[name])
        elif name in THEOREMS:
            wanted.add(name)
        else:
            raise ValueError(f"Unknown theorem {name!r}")
    return [t for t in THEOREMS if t in wanted]


def _isoWitness(orderMap: OrderMap, mutation: Optional[Mutation]) -> Witness:
    return orderMap.mutate(mutation).witness()


def _inclusionWitness(name: str, small: int, big: int, label: Callable[[int], str]) -> Witness:
    extra = bs.toIndices(small & ~big)
    if not extra:
        return None
    kept = shrinkWitness(extra, lambda items: any(not big >> i & 1 for i in items))
    return {"inclusion": name, "outside": [label(i) for i in kept]}


def _equalityWitness(name: str, left: int, right: int, label: Callable[[int], str]) -> Witness:
    if left == right:
        return None
    diff = bs.toIndices(left ^ right)
    kept = shrinkWitness(diff, lambda items: any((left ^ right) >> i & 1 for i in items))
    return {"equality": name, "differ": [label(i) for i in kept]}


def _slLabel(ctx: FrameContext) -> Callable[[int], str]:
    return ctx.sublocales.lattice.label


def _sublocaleBooleanization(C: FiniteLattice, members: Sequence[int]) -> int:
    """Regular elements of the sub-coframe on members, as indices of C."""
    ordered = sorted(members)
    sub = inducedLattice(C, ordered)
    return bs.fromIndices(ordered[i] for i in bs.iterBits(booleanization(sub)))


# -- Frame-level laws ---------------------------------------------------------

@theorem("lem-heyting")
def checkHeyting(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return heytingLawWitness(ctx.frame)


@theorem("lem-degeneracy")
def checkDegeneracy(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """Every filter principal, SO = SE = Ex = Filt, fitted means open, all compact."""
    FL = ctx.filters
    L = ctx.frame
    for f in FL.filters:
        if L.upMask[L.meetOf(f.members)] != f.members:
            return {"item": "principal", "filter": L.labelsOf(f.members)}
    classes = ctx.filterClasses
    for name in ("so", "se", "ex", "principal"):
        witness = _equalityWitness(f"{name}=filt", classes[name], FL.full, FL.label)
        if witness:
            return witness
    sc = ctx.sublocaleClasses
    SL = ctx.sublocales
    return (_equalityWitness("fitted=open", sc["so"], sc["os"], _slLabel(ctx))
            or _equalityWitness("compact=all", sc["sco"], SL.full, _slLabel(ctx)))


@theorem("lem-filter-coframe")
def checkCoframes(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    for name, lattice in (("filt", ctx.filters.dualLattice),
                          ("sl", ctx.sublocales.lattice.dual())):
        report = isFrame(lattice)
        if not report.isDistributiveFrame:
            return {"coframe": name, **report.toJson(lattice)}
    return filterLawWitness(ctx.filters)


@theorem("lem-primes")
def checkPrimes(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return primeLawWitness(ctx.sublocales)


@theorem("laws-open-closed")
def checkOpenClosed(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return openClosedLaws(ctx.sublocales)


@theorem("laws-operators")
def checkOperators(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return operatorLaws(ctx.sublocales)


@theorem("adj-stf-fts")
def checkAdjunction(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return adjunctionWitness(ctx.sublocales, ctx.filters)


@theorem("lem-fj-fit")
def checkFittedJoins(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return fjLemmaWitness(ctx.sublocales)


# -- Filter classes -------------------------------------------------------------

@theorem("prop-so-se")
def checkScottOpenStronglyExact(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    FL = ctx.filters
    for f, tag in enumerate(FL.tags):
        if tag.scottOpen and not tag.stronglyExact:
            return {"filter": FL.label(f)}
    return None


@theorem("prop-sfre")
def checkSubfitness(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """The subfitness characterizations agree, and so do Ex = R and Ex Boolean."""
    FL = ctx.filters
    report = subfitnessSuite(FL)
    if not report.agrees:
        return {"item": "characterizations", **report.toJson()}
    classes = ctx.filterClasses
    exIsRegular = classes["ex"] == regularFilters(FL)
    if exIsRegular != report.subfit:
        return {"item": "ex-regular", "subfit": report.subfit}
    ex = sorted(bs.iterBits(classes["ex"]))
    exBoolean = booleanization(inducedLattice(FL.lattice, ex)) == bs.fullMask(len(ex))
    if exBoolean != report.subfit:
        return {"item": "ex-boolean", "subfit": report.subfit}
    return None


@theorem("lem-scl")
def checkScl(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    FL = ctx.filters
    classes = ctx.filterClasses
    for name in ("cl", "so", "cp", "ex", "se"):
        report = sclCondition(FL, classes[name])
        if not report.holds:
            return {"class": name, "item": "scl", **(report.witness or {})}
        if not report.subcolocale:
            return {"class": name, "item": "subcolocale", **(report.subcolocaleWitness or {})}
    return None


# -- Isomorphisms SE = So and its restrictions ------------------------------------

@theorem("thm-se-iso", isomorphism=True)
def checkSeIso(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """fts and stf restrict to mutually inverse isomorphisms SE -> So."""
    FL, SL = ctx.filters, ctx.sublocales
    se = sorted(bs.iterBits(ctx.filterClasses["se"]))
    so = ctx.sublocaleIndices(ctx.sublocaleClasses["so"])
    for f in se:
        if stf(FL, fts(FL, f)) != f:
            return {"item": "stf-fts", "filter": FL.label(f)}
    for s in so:
        S = SL.sublocales[s]
        if fts(FL, stf(FL, S)) != S:
            return {"item": "fts-stf", "sublocale": SL.label(S)}
    orderMap = OrderMap.restrict(FL.lattice, se, SL.lattice, so, ctx.ftsIndex)
    return _isoWitness(orderMap, mutation)


def _restriction(
        ctx: FrameContext,
        mutation: Optional[Mutation],
        domain: Callable[[FrameContext], int],
        codomain: Callable[[FrameContext], int],
) -> Witness:
    FL, SL = ctx.filters, ctx.sublocales
    orderMap = OrderMap.restrict(
        FL.lattice, sorted(bs.iterBits(domain(ctx))),
        SL.lattice, ctx.sublocaleIndices(codomain(ctx)),
        ctx.ftsIndex,
    )
    return _isoWitness(orderMap, mutation)


def _fitOf(name: str) -> Callable[[FrameContext], int]:
    return lambda ctx: fitImage(ctx.sublocales, ctx.sublocaleClasses[name])


def _intOf(name: str) -> Callable[[FrameContext], int]:
    return lambda ctx: intClosure(ctx.filters, ctx.filterClasses[name])


def _classOf(name: str) -> Callable[[FrameContext], int]:
    return lambda ctx: ctx.filterClasses[name]


def _compactFitted(ctx: FrameContext) -> int:
    return ctx.sublocaleClasses["so"] & ctx.sublocaleClasses["sco"]


_RESTRICTIONS = (
    ("thm-ex-sb", _classOf("ex"), _fitOf("sb")),
    ("thm-r-sc", lambda ctx: regularFilters(ctx.filters), _fitOf("sc")),
    ("thm-so-sk", _intOf("so"), _fitOf("sk")),
    ("thm-cp-ssp", _intOf("cp"), _fitOf("ssp")),
    ("lem-lcl-slc", _classOf("lcl"), _fitOf("slc")),
    ("prop-johnstone", _classOf("so"), _compactFitted),
)

for _id, _domain, _codomain in _RESTRICTIONS:
    theorem(_id, isomorphism=True,
            checker=partial(_restriction, domain=_domain, codomain=_codomain))


@theorem("cor-inclusion-diagrams")
def checkInclusionDiagrams(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """R, Ex, SE inside Filt and J(CP), J(SO) inside SE, all subcolocales."""
    FL, SL = ctx.filters, ctx.sublocales
    classes = ctx.filterClasses
    r = regularFilters(FL)
    chains = [
        ("r", r), ("ex", classes["ex"]), ("se", classes["se"]), ("filt", FL.full),
    ]
    cpChain = [
        ("j(cp)", intClosure(FL, classes["cp"])), ("j(so)", intClosure(FL, classes["so"])),
        ("se", classes["se"]),
    ]
    for chain in (chains, cpChain):
        for (a, small), (b, big) in zip(chain, chain[1:]):
            witness = _inclusionWitness(f"{a}<={b}", small, big, FL.label)
            if witness:
                return witness
        for name, members in chain:
            defect = sublocaleDefect(FL.dualLattice, members)
            if defect is not None:
                return {"subcolocale": name, **defect}

    sc = ctx.sublocaleClasses
    fitted = {name: fitImage(SL, sc[name]) for name in ("sc", "sb", "sk", "ssp")}
    mirror = [
        [("fit[sc]", fitted["sc"]), ("fit[sb]", fitted["sb"]), ("so", sc["so"])],
        [("fit[ssp]", fitted["ssp"]), ("fit[sk]", fitted["sk"]), ("so", sc["so"])],
        [("sc", sc["sc"]), ("sb", sc["sb"]), ("sl", SL.full)],
        [("ssp", sc["ssp"]), ("sk", sc["sk"]), ("sl", SL.full)],
    ]
    for chain in mirror:
        for (a, small), (b, big) in zip(chain, chain[1:]):
            witness = _inclusionWitness(f"{a}<={b}", small, big, _slLabel(ctx))
            if witness:
                return witness
    if isFit(SL):
        witness = (_equalityWitness("sc=sb", sc["sc"], sc["sb"], _slLabel(ctx))
                   or _equalityWitness("r=ex", r, classes["ex"], FL.label))
        if witness:
            return {"fit": True, **witness}
    return None


# -- Booleanization -------------------------------------------------------------

@theorem("thm-booleanization")
def checkBooleanization(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """B(Ex) = B(SE) = B(Filt) = R and fit[Sc] = B(fit[Sb]) = B(So)."""
    FL, SL = ctx.filters, ctx.sublocales
    classes = ctx.filterClasses
    r = regularFilters(FL)
    for name, members in (("ex", classes["ex"]), ("se", classes["se"]), ("filt", FL.full)):
        witness = _equalityWitness(f"b({name})=r", _sublocaleBooleanization(
            FL.lattice, list(bs.iterBits(members))), r, FL.label)
        if witness:
            return witness
    sc = ctx.sublocaleClasses
    fitSc = fitImage(SL, sc["sc"])
    for name, members in (("fit[sb]", fitImage(SL, sc["sb"])), ("so", sc["so"])):
        boolean = _sublocaleBooleanization(SL.lattice, list(bs.iterBits(members)))
        witness = _equalityWitness(f"b({name})=fit[sc]", boolean, fitSc, _slLabel(ctx))
        if witness:
            return witness
    return None


@theorem("cor-bool-polarity", isomorphism=True)
def checkBoolPolarity(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """GC(L^op, L, tot) = GC(cs, os, inside) = fit[Sc] = B(So), and the dual chain
    GC(L, L^op, con) = GC(os, cs, inside) = cl[os] = B(cs^op) = B(L)."""
    L, SL = ctx.frame, ctx.sublocales
    C = SL.lattice
    sc = ctx.sublocaleClasses
    cs = [SL.indexOf(c) for c in SL.closeds]
    os = [SL.indexOf(o) for o in SL.opens]
    cap = max(locfitSettings.gcCarrierCap, len(SL))

    tot = Polarity.fromRelation(L.labels, L.labels, lambda x, y: L.join(x, y) == L.top)
    con = Polarity.fromRelation(L.labels, L.labels, lambda x, y: L.meet(x, y) == L.bottom)
    for name, P, sub in (("tot", tot, Polarity.fromOrder(C, cs, os)),
                         ("con", con, Polarity.fromOrder(C, os, cs))):
        if P.rows != sub.rows:
            return {"item": f"{name}-relation"}

    # GC(L^op, L, tot) -> fit[Sc], M -> fit(join cs[M])
    target = fitImage(SL, sc["sc"])
    witness = _equalityWitness("fit[sc]=b(so)", target, _sublocaleBooleanization(
        C, list(bs.iterBits(sc["so"]))), _slLabel(ctx))
    if witness:
        return witness
    report = clIntInside(C, cs, os, carrierCap=cap)
    if not report.passed:
        return {"item": "cl-int-tot", **report.witness}
    witness = _equalityWitness("cl_os[j(cs)]=fit[sc]", bs.fromIndices(report.closureImage),
                               target, _slLabel(ctx))
    if witness:
        return witness
    gc = galoisClosed(tot, carrierCap=cap)
    toFit = lambda M: SL.indexOf(fit(SL, SL.joinOf(SL.closeds[x] for x in bs.iterBits(M))))  # noqa: E731
    orderMap = OrderMap.restrict(
        gc.lattice, range(len(gc)), C, sorted(bs.iterBits(target)),
        lambda i: toFit(gc.closedSets[i]),
    )
    witness = _isoWitness(orderMap, mutation)
    if witness:
        return {"item": "tot", **witness}

    # GC(L, L^op, con) -> cl[os], M -> cl(join os[M])
    for x in range(L.n):
        if closure(SL, SL.opens[x]) != SL.closeds[pseudocomplement(L, x)]:
            return {"item": "cl-os", "x": L.labels[x]}
    boolean = frameBooleanization(L)
    clOs = bs.fromIndices(SL.indexOf(SL.closeds[x]) for x in bs.iterBits(boolean))
    report = clIntInside(C, os, cs, carrierCap=cap)
    if not report.passed:
        return {"item": "cl-int-con", **report.witness}
    witness = _equalityWitness("cl_cs[j(os)]=b(cs^op)", bs.fromIndices(report.closureImage),
                               clOs, _slLabel(ctx))
    if witness:
        return witness
    gc = galoisClosed(con, carrierCap=cap)
    toCl = lambda M: SL.indexOf(closure(SL, SL.joinOf(SL.opens[x] for x in bs.iterBits(M))))  # noqa: E731
    orderMap = OrderMap.restrict(
        gc.lattice, range(len(gc)), C, sorted(bs.iterBits(clOs)),
        lambda i: toCl(gc.closedSets[i]),
    )
    witness = _isoWitness(orderMap, mutation)
    if witness:
        return {"item": "con", **witness}
    if not inducedLattice(L, bs.toIndices(boolean)).isIsomorphic(
            inducedLattice(C, bs.toIndices(clOs))):
        return {"item": "b(l)", "size": bs.popcount(boolean)}
    return None


@theorem("thm-exact-subset-order", isomorphism=True)
def checkExactSubsetOrder(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """(Ex, inside) = GC(L, Ex, in) = Sc via F -> join of cs(f), f in F."""
    L, FL, SL = ctx.frame, ctx.filters, ctx.sublocales
    C = SL.lattice
    ex = sorted(bs.iterBits(ctx.filterClasses["ex"]))
    sc = ctx.sublocaleIndices(ctx.sublocaleClasses["sc"])
    csIndex = [SL.indexOf(c) for c in SL.closeds]

    def J(f: int) -> int:
        return SL.indexOf(SL.joinOf(SL.closeds[a] for a in bs.iterBits(FL.members(f))))

    for f in ex:
        j = J(f)
        for a in range(L.n):
            if C.isLeq(csIndex[a], j) != bool(FL.members(f) >> a & 1):
                return {"item": "cs-below-j", "filter": FL.label(f), "a": L.labels[a]}

    # (Ex, inside) is Filt read upwards
    inclusion = FL.dualLattice
    orderMap = OrderMap.restrict(inclusion, ex, C, sc, J)
    witness = _isoWitness(orderMap, mutation)
    if witness:
        return witness

    P = Polarity.fromRelation(L.labels, [FL.label(f) for f in ex],
                              lambda a, i: bool(FL.members(ex[i]) >> a & 1))
    target = inducedLattice(C, sc)
    position = {s: k for k, s in enumerate(sc)}
    universal = checkUniversalProperties(
        P, target,
        [position[csIndex[a]] for a in range(L.n)],
        [position[J(f)] for f in ex],
        checkUniqueness=len(sc) <= locfitSettings.gcBruteForceCap,
    )
    if not universal.passed:
        return {"item": f"universal-{universal.item}", **(universal.witness or {})}
    for M in bs.iterSubsetsCapped(L.full, locfitSettings.subsetScanCap):
        if isExactMeet(L, M) and SL.joinOf(SL.closeds[a] for a in bs.iterBits(M)) != SL.closeds[L.meetOf(M)]:
            return {"item": "exact-meet-join", "meet": L.labelsOf(M)}
    return None


@theorem("thm-fit-vs-int", isomorphism=True)
def checkFitVsInt(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """fit[J(A)] = int_A[So] for A among Slc, cs, Sco, Sop; int_Sop[So] = sp[So]."""
    SL = ctx.sublocales
    C = SL.lattice
    sc = ctx.sublocaleClasses
    os = [SL.indexOf(o) for o in sorted(set(SL.opens))]
    fitted = [SL.sublocales[i] for i in bs.iterBits(sc["so"])]
    for name in ("slc", "cs", "sco", "sop"):
        A = sc[name]
        members = [SL.sublocales[i] for i in bs.iterBits(A)]
        report = clIntInside(C, bs.toIndices(A), os, carrierCap=max(locfitSettings.gcCarrierCap, len(SL)))
        if not report.passed:
            return {"class": name, **report.witness}
        closureSet = fitImage(SL, joinClosureOf(SL, A))
        witness = _equalityWitness(f"cl_os[j({name})]=fit[j({name})]",
                                   bs.fromIndices(report.closureImage), closureSet, _slLabel(ctx))
        if witness:
            return witness
        interior = SL.classOf(SL.joinOf(m for m in members if m & ~S == 0) for S in fitted)
        witness = _equalityWitness(f"int_{name}[so]", bs.fromIndices(report.interiorImage),
                                   interior, _slLabel(ctx))
        if witness:
            return witness
        if name == "sop":
            sp = SL.classOf(spatialization(SL, S) for S in fitted)
            witness = _equalityWitness("int_sop[so]=sp[so]", interior, sp, _slLabel(ctx))
            if witness:
                return witness
        orderMap = OrderMap.restrict(
            C, list(report.interiorImage), C, list(report.closureImage),
            lambda i: SL.indexOf(fit(SL, SL.sublocales[i])),
        )
        witness = _isoWitness(orderMap, mutation)
        if witness:
            return {"class": name, **witness}
    return None


# -- Filter extensions -------------------------------------------------------------

def _perClass(ctx: FrameContext, check: Callable[[FilterExtension], Witness]) -> Witness:
    for name in EXTENSION_CLASSES:
        witness = check(ctx.extension(name))
        if witness:
            return {"class": name, **witness}
    return None


@theorem("prop-fe-basic", isomorphism=True)
def checkExtensionBasics(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """Axioms, L^F = Int(F), the six basic properties; eps_SE and eps_Ex embed."""
    FL = ctx.filters

    def check(ext: FilterExtension) -> Witness:
        witness = axiomWitness(ext)
        if witness:
            return witness
        orderMap = OrderMap.restrict(
            ext.family.lattice, range(len(ext.family)),
            FL.lattice, sorted(bs.iterBits(ext.concrete)),
            lambda i: ext.iso[i],
        )
        witness = _isoWitness(orderMap, mutation)
        if witness:
            return {"item": "int", **witness}
        report = basicProperties(ext)
        if not report.passed:
            return report.witness
        if ext.className in ("se", "ex") and not report.items["eps-injective"]:
            return {"item": "embedding"}
        return None

    return _perClass(ctx, check)


@theorem("prop-fe-generalchar")
def checkExtensionGeneralChar(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    def check(ext: FilterExtension) -> Witness:
        report = generalChar(ext)
        return None if report.passed else report.witness

    return _perClass(ctx, check)


@theorem("prop-fe-meets")
def checkExtensionMeets(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    def check(ext: FilterExtension) -> Witness:
        report = meetPreservationScan(ext)
        if not report.passed:
            return report.witness
        if ext.className in ("se", "ex") and not report.items["all-preserved"]:
            return {"item": "all-preserved"}
        return None

    return _perClass(ctx, check)


@theorem("prop-fe-special")
def checkExtensionSpecial(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return _perClass(ctx, lambda ext: specialCases(ext).witness)


@theorem("lem-cp-upset")
def checkCpUpset(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return cpUpsetLemma(ctx.filters).witness


@theorem("ex-dlat-canonical")
def checkDlatCanonical(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    return dlatCanonicalExtension(ctx.frame).witness


@theorem("cor-gc-opposite")
def checkGcOpposite(ctx: FrameContext, mutation: Optional[Mutation] = None) -> Witness:
    """GC(L, L, <=) against L itself, and its opposite family."""
    L = ctx.frame
    P = Polarity.fromOrder(L, list(range(L.n)), list(range(L.n)))
    report = oppositeFamily(P)
    if not report.passed:
        return {"item": "opposite", **(report.witness or {})}
    identity = list(range(L.n))
    universal = checkUniversalProperties(
        P, L, identity, identity, checkUniqueness=L.n <= locfitSettings.gcBruteForceCap,
    )
    if not universal.passed:
        return {"item": f"universal-{universal.item}", **(universal.witness or {})}
    return None


# -- Running ---------------------------------------------------------------------

def _skipReason(ctx: FrameContext) -> Optional[SkippedFrame]:
    report = ctx.frame.frameReport
    if not report.isDistributiveFrame:
        return SkippedFrame(ctx.frameId, "not a frame", report.toJson(ctx.frame))
    return None


def failedVerdicts(
        frameId: str,
        theoremIds: Optional[Sequence[str]],
        witness: dict,
) -> List[TheoremVerdict]:
    """One failed verdict per selected theorem, all carrying the same witness."""
    return [TheoremVerdict(theoremId, frameId, False, dict(witness)) for theoremId in selectTheorems(theoremIds)]


def checkFrame(
        frame: FiniteLattice,
        frameId: Optional[str] = None,
        theoremIds: Optional[Sequence[str]] = None,
        mutation: Optional[Mutation] = None,
) -> List[Union[TheoremVerdict, SkippedFrame]]:
    """Run the selected checkers on one frame, in registry order.

    A frame failing isFrame, or beyond the enumeration caps, yields a single
    SkippedFrame. An InvariantViolation raised by a checker fails its
    verdict with the violation's witness.
    """
    ctx = FrameContext(frame, frameId)
    skipped = _skipReason(ctx)
    if skipped:
        logger.info(f"{ctx.frameId} skipped: {skipped.reason}")
        return [skipped]
    try:
        ctx.filters
        ctx.sublocales
    except (BoundTooLargeError, FrameTooLargeError) as e:
        logger.info(f"{ctx.frameId} skipped: {e}")
        return [SkippedFrame(ctx.frameId, str(e))]
    except LocfitError as e:
        logger.error(f"Cannot enumerate {ctx.frameId}: {e}")
        extra = e.witness if isinstance(e, InvariantViolation) else {}
        return failedVerdicts(ctx.frameId, theoremIds, {"error": str(e), **extra})

    verdicts: List[Union[TheoremVerdict, SkippedFrame]] = []
    for theoremId in selectTheorems(theoremIds):
        checker = THEOREMS.builder(theoremId)
        try:
            witness = checker(ctx, mutation)
        except InvariantViolation as e:
            witness = {"error": str(e), **(e.witness or {})}
        except LocfitError as e:
            witness = {"error": str(e)}
        verdict = TheoremVerdict(theoremId, ctx.frameId, witness is None, witness)
        if not verdict.passed:
            logger.warning(f"{theoremId} fails on {ctx.frameId}: {witness}")
        verdicts.append(verdict)
    logger.debug(f"{ctx.frameId}: {len(verdicts)} verdicts")
    return verdicts
