import numpy as np
import pytest
from hypothesis import given, strategies as st

from locfit.models import catalog
from locfit.models.lattice import (
    FiniteLattice, NotAFrameError, NotALatticeError, NotAPosetError, buildLattice,
    checkClosureOperator, checkInteriorOperator, coheytingDifference, heyting,
    heytingLawWitness, isFrame, primes, pseudocomplement,
)

CATALOG_FRAMES = catalog.defaultCatalog()


def test_boolean_diamond_tables(b4):
    a, b = b4.indexOf("a"), b4.indexOf("b")
    assert b4.meet(a, b) == b4.bottom
    assert b4.join(a, b) == b4.top
    assert b4.label(b4.top) == "1"
    assert b4.labelsOf(b4.upSet(a)) == ["a", "1"]
    assert b4.isDownClosed(b4.downSet(a))


def test_subset_meet_and_join(b4):
    assert b4.meetOf(0) == b4.top
    assert b4.joinOf(0) == b4.bottom
    assert b4.joinOf(b4.full) == b4.top


def test_cycle_is_not_a_poset():
    with pytest.raises(NotAPosetError) as info:
        buildLattice(["x", "y"], [("x", "y"), ("y", "x")])
    assert set(info.value.pair) == {"x", "y"}


def test_two_maxima_is_not_a_lattice():
    with pytest.raises(NotALatticeError) as info:
        buildLattice(["0", "a", "b"], [("0", "a"), ("0", "b")])
    assert info.value.kind == "join"


def test_undeclared_element():
    with pytest.raises(KeyError):
        buildLattice(["0", "1"], [("0", "2")])


@pytest.mark.parametrize("name", ["two", "three", "b4"])
def test_named_frames_are_frames(name):
    report = isFrame(catalog.NAMED_FRAMES[name]())
    assert report.isLattice and report.isDistributiveFrame
    assert report.witness is None


@pytest.mark.parametrize("name", ["m3", "n5"])
def test_non_distributive_lattices(name):
    L = catalog.NAMED_FRAMES[name]()
    report = isFrame(L)
    assert report.isLattice and not report.isDistributiveFrame
    w = report.witness
    # the witness reproduces the failure
    rhs = L.bottom
    for x in w.subset:
        rhs = L.join(rhs, L.meet(x, w.b))
    assert L.meet(L.joinOf(sum(1 << x for x in w.subset)), w.b) != rhs
    assert report.toJson(L)["witness"]["b"] == L.labels[w.b]


def test_binary_check_agrees_with_exhaustive(m3, b4):
    assert not isFrame(m3, threshold=0).isDistributiveFrame
    assert isFrame(b4, threshold=0).isDistributiveFrame
    assert isFrame(b4, threshold=0).method == "binary"


def test_primes(three, b4):
    assert [three.labels[p] for p in primes(three)] == ["0", "m"]
    assert [b4.labels[p] for p in primes(b4)] == ["a", "b"]


def test_primes_need_a_frame(m3):
    with pytest.raises(NotAFrameError):
        primes(m3)


def test_heyting(three, b4):
    m = three.indexOf("m")
    assert pseudocomplement(three, m) == three.bottom
    assert heyting(three, m, three.bottom) == three.bottom
    assert heyting(three, three.bottom, m) == three.top
    a, b = b4.indexOf("a"), b4.indexOf("b")
    assert pseudocomplement(b4, a) == b


def test_coheyting_difference(b4, three):
    a, b = b4.indexOf("a"), b4.indexOf("b")
    assert coheytingDifference(b4, b4.top, a) == b
    m = three.indexOf("m")
    assert coheytingDifference(three, three.top, m) == three.top


def test_dual(three, b4):
    assert b4.dual().isIsomorphic(b4)
    dual = three.dual()
    assert dual.top == three.bottom
    assert dual.isIsomorphic(three)


def test_fromFamily_orders_by_inclusion():
    L = FiniteLattice.fromFamily([0b00, 0b01, 0b10, 0b11])
    assert L.isIsomorphic(catalog.booleanDiamond())
    assert L.bottom == 0 and L.top == 3


def test_isomorphism_is_label_blind(b4):
    assert catalog.powerset(2).isIsomorphic(b4)
    assert not catalog.chain(3).isIsomorphic(b4)
    assert catalog.chain(3).canonicalKey() != b4.canonicalKey()
    iso = catalog.powerset(2).findIsomorphism(b4)
    assert iso is not None and len(iso) == 4


def test_toJson_lists_covers(three):
    assert three.toJson() == {"elements": ["0", "m", "1"], "leq": [["0", "m"], ["m", "1"]]}


def test_closure_operator_laws():
    domain = list(range(8))
    subset = lambda a, b: a & ~b == 0  # noqa: E731
    assert checkClosureOperator(domain, lambda m: m | 1, subset) is None
    assert checkClosureOperator(domain, lambda m: m & ~1, subset)["law"] == "inflationary"
    assert checkInteriorOperator(domain, lambda m: m & ~1, subset) is None
    assert checkInteriorOperator(domain, lambda m: m | 1, subset)["law"] == "deflationary"


@given(st.sampled_from(CATALOG_FRAMES))
def test_heyting_laws_on_catalog(L):
    assert heytingLawWitness(L) is None


@given(st.sampled_from(CATALOG_FRAMES))
def test_tables_are_commutative_and_absorptive(L):
    assert np.array_equal(L.meetTable, L.meetTable.T)
    assert np.array_equal(L.joinTable, L.joinTable.T)
    idx = np.arange(L.n)
    assert np.array_equal(L.meetTable[idx[:, None], L.joinTable], np.broadcast_to(idx[:, None], (L.n, L.n)))
