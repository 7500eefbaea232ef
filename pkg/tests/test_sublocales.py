import pytest
from hypothesis import given, strategies as st

from locfit.util import bitset as bs
from locfit.models import catalog
from locfit.models.lattice import NotAFrameError, primes
from locfit.models.filters import allFilters
from locfit.models.sublocales import (
    FrameTooLargeError, NotPrimeError, adjunctionWitness, closure,
    enumerateSublocales, fit, fjLemmaWitness, frameBooleanization, isFit,
    onePoint, openClosedLaws, operatorLaws, primeLawWitness, spatialization,
    stf, subcolocaleCheck, sublocaleDefect, supplement,
)

CATALOG_FRAMES = [L for L in catalog.defaultCatalog() if L.n <= 8]


def _mask(L, *labels):
    return bs.fromIndices(L.indexOf(x) for x in labels)


@pytest.mark.parametrize("name, count", [("two", 2), ("three", 4), ("b4", 4)])
def test_sublocale_count_is_two_to_the_primes(name, count):
    L = catalog.NAMED_FRAMES[name]()
    SL = enumerateSublocales(L)
    assert len(SL) == count == 2 ** len(primes(L))


def test_sublocales_of_the_three_chain(three):
    SL = enumerateSublocales(three)
    assert set(SL) == {
        _mask(three, "1"), _mask(three, "m", "1"), _mask(three, "0", "1"), three.full,
    }
    assert SL.opens[three.indexOf("m")] == _mask(three, "0", "1")
    assert SL.closeds[three.indexOf("m")] == _mask(three, "m", "1")
    assert bs.popcount(SL.classes["sc"]) == 3
    assert bs.popcount(SL.classes["so"]) == 3
    assert not isFit(SL)


def test_operators(three):
    SL = enumerateSublocales(three)
    assert fit(SL, _mask(three, "m", "1")) == three.full
    assert closure(SL, _mask(three, "0", "1")) == three.full
    assert spatialization(SL, three.full) == three.full
    assert operatorLaws(SL) is None
    assert openClosedLaws(SL) is None


def test_one_point_sublocales(three):
    assert onePoint(three, three.indexOf("m")) == _mask(three, "m", "1")
    with pytest.raises(NotPrimeError):
        onePoint(three, three.top)


def test_boolean_frame_is_fit(b4):
    SL = enumerateSublocales(b4)
    assert isFit(SL)
    assert supplement(SL, _mask(b4, "a", "1")) == _mask(b4, "b", "1")


def test_sublocale_defects(three, b4):
    assert sublocaleDefect(three, _mask(three, "0", "m")) == {"axiom": "S1", "meet": []}
    assert sublocaleDefect(b4, _mask(b4, "0", "1")) == {"axiom": "S2", "a": "a", "s": "0"}
    FL = allFilters(b4)
    assert subcolocaleCheck(FL.lattice, FL.full)


def test_frame_booleanization(three):
    assert frameBooleanization(three) == _mask(three, "0", "1")


def test_stf_of_extremes(b4):
    SL = enumerateSublocales(b4)
    FL = allFilters(b4)
    assert stf(FL, SL.emp) == FL.bottom
    assert stf(FL, SL.fll) == FL.top


def test_enumeration_limits(m3):
    with pytest.raises(NotAFrameError):
        enumerateSublocales(m3)
    with pytest.raises(FrameTooLargeError):
        enumerateSublocales(catalog.chain(5), cap=4)


@given(st.sampled_from(CATALOG_FRAMES))
def test_sublocale_laws_on_catalog(L):
    SL = enumerateSublocales(L)
    FL = allFilters(L)
    assert len(SL) == 2 ** len(primes(L))
    assert primeLawWitness(SL) is None
    assert adjunctionWitness(SL, FL) is None
    assert fjLemmaWitness(SL) is None
