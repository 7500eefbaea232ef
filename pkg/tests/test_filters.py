import pytest
from hypothesis import given, strategies as st

from locfit.util import bitset as bs
from locfit.models import catalog
from locfit.models.lattice import BoundTooLargeError, NotAFrameError
from locfit.models.filters import (
    allFilters, booleanization, closedFilter, difference, filterClasses,
    filterLawWitness, intClosure, isExactMeet, isStronglyExactMeet,
    locallyClosedFilter, openFilter, regularFilters, sclCondition,
    subfitnessSuite, supplement,
)

CATALOG_FRAMES = catalog.defaultCatalog()


@pytest.mark.parametrize("name, count", [("two", 2), ("three", 3), ("b4", 4)])
def test_filter_counts(name, count):
    FL = allFilters(catalog.NAMED_FRAMES[name]())
    assert len(FL) == count
    assert all(f.members == FL.frame.upMask[f.generator] for f in FL)


def test_filters_of_the_three_chain(three):
    FL = allFilters(three)
    m = three.indexOf("m")
    assert FL.labelsOf(FL.full) == ["↑0", "↑m", "↑1"]
    assert FL.members(FL.top) == 1 << three.top
    assert FL.members(FL.bottom) == three.full
    # reverse inclusion: L is the least filter, {1} the greatest
    assert FL.isBelow(FL.bottom, FL.principal(m))
    assert FL.isBelow(FL.principal(m), FL.top)
    assert FL.intersection(FL.principal(m), FL.top) == FL.top
    assert FL.dualLattice.isLeq(FL.top, FL.bottom)


def test_closed_and_supplement(three):
    FL = allFilters(three)
    m = three.indexOf("m")
    assert closedFilter(FL, m) == FL.top
    assert closedFilter(FL, three.top) == FL.bottom
    assert supplement(FL, FL.principal(m)) == FL.top
    assert supplement(FL, FL.top) == FL.bottom
    assert difference(FL, FL.top, FL.principal(m)) == FL.top
    assert openFilter(FL, m) == FL.principal(m)
    assert locallyClosedFilter(FL, three.bottom, m) == FL.principal(m)


@pytest.mark.parametrize("name, count", [("two", 2), ("three", 2), ("b4", 4)])
def test_regular_filters(name, count):
    FL = allFilters(catalog.NAMED_FRAMES[name]())
    regular = regularFilters(FL)
    assert bs.popcount(regular) == count
    assert booleanization(FL.lattice) == regular


def test_completely_prime_filters_match_primes(three):
    FL = allFilters(three)
    classes = filterClasses(FL)
    assert FL.labelsOf(classes["cp"]) == ["↑m", "↑1"]
    assert classes["principal"] == FL.full
    assert classes["cl"] & ~classes["lcl"] == 0
    assert classes["lcl"] & ~classes["ex"] == 0


def test_int_of_empty_class_is_the_improper_filter(b4):
    FL = allFilters(b4)
    assert intClosure(FL, 0) == 1 << FL.bottom


def test_subfitness(three, b4):
    chain = subfitnessSuite(allFilters(three))
    assert chain.agrees and not chain.subfit
    assert chain.witness == {"a": "m", "b": "0"}
    assert not chain.boolean and not chain.complemented
    square = subfitnessSuite(allFilters(b4))
    assert square.agrees and square.subfit and square.boolean
    assert square.toJson()["agrees"] is True


def test_scl_on_full_class(b4):
    FL = allFilters(b4)
    report = sclCondition(FL, FL.full)
    assert report.holds and report.subcolocale


def test_meets_are_exact_in_a_finite_frame(b4):
    assert isExactMeet(b4, b4.full)
    assert isStronglyExactMeet(b4, b4.full)
    assert isExactMeet(b4, 0)


def test_not_a_frame(m3):
    with pytest.raises(NotAFrameError):
        allFilters(m3)


def test_filter_cap():
    with pytest.raises(BoundTooLargeError):
        allFilters(catalog.chain(5), cap=4)


@given(st.sampled_from(CATALOG_FRAMES))
def test_filter_laws_on_catalog(L):
    FL = allFilters(L)
    assert len(FL) == L.n
    assert filterLawWitness(FL) is None
    assert subfitnessSuite(FL).agrees
