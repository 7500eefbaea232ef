import pytest
from hypothesis import given, strategies as st

from locfit.util import bitset as bs
from locfit.models import catalog
from locfit.models.polarity import (
    CarrierTooLargeError, Polarity, PropertyFailedError, checkUniversalProperties, clIntInside,
    countCommutingIsomorphisms, galoisClosed, inducedLattice, joinClosure, joinFormulaWitness,
    meetClosure, oppositeFamily, polarP, polarQ, polarityLawWitness, posetLemmaSuite,
    randomPolarity, semilatticeEmbeddingLemma,
)

IDENTITY = Polarity.fromPairs(["x0", "x1"], ["y0", "y1"], [(0, 0), (1, 1)])


def test_polars():
    assert polarP(IDENTITY, 0b01) == 0b01
    assert polarP(IDENTITY, 0) == IDENTITY.yFull
    assert polarQ(IDENTITY, 0b11) == 0
    assert IDENTITY.transpose().rows == IDENTITY.cols


def test_identity_context_has_four_closed_sets():
    gc = galoisClosed(IDENTITY)
    assert gc.closedSets == (0b00, 0b01, 0b10, 0b11)
    assert gc.lattice.isIsomorphic(catalog.booleanDiamond())
    assert gc.joinOf([1, 2]) == 3
    assert gc.meetOf([1, 2]) == 0
    assert gc.xeIndex == (1, 2)


def test_empty_relation():
    P = Polarity.fromPairs(["a", "b"], ["m"], [])
    gc = galoisClosed(P)
    # only the empty set and the whole carrier are closed
    assert gc.closedSets[-1] == P.xFull
    assert len(gc) == 2


def test_carrier_cap():
    P = randomPolarity(6, 3, 0.5, seed=1)
    with pytest.raises(CarrierTooLargeError):
        galoisClosed(P, carrierCap=5)


def test_randomPolarity_is_seeded():
    assert randomPolarity(5, 4, 0.4, seed=7) == randomPolarity(5, 4, 0.4, seed=7)
    P = randomPolarity(5, 4, 1.0, seed=0)
    assert all(row == P.yFull for row in P.rows)


@given(
    st.integers(min_value=1, max_value=10),
    st.integers(min_value=1, max_value=8),
    st.sampled_from([0.2, 0.5, 0.8]),
    st.integers(min_value=0, max_value=10_000),
)
def test_next_closure_matches_brute_force(nx, ny, density, seed):
    P = randomPolarity(nx, ny, density, seed)
    gc = galoisClosed(P, oracleCap=0)
    brute = [m for m in range(1 << nx) if polarQ(P, polarP(P, m)) == m]
    assert list(gc.closedSets) == brute


@given(st.integers(min_value=0, max_value=10_000))
def test_theorem_items_and_opposite_on_random_contexts(seed):
    P = randomPolarity(5, 4, 0.5, seed)
    gc = galoisClosed(P)
    assert polarityLawWitness(P) is None
    assert joinFormulaWitness(gc) is None
    report = checkUniversalProperties(P, gc.lattice, gc.xeIndex, gc.yeIndex, gc=gc, checkUniqueness=True)
    assert report.passed
    assert report.iota == tuple(range(len(gc)))
    assert oppositeFamily(P, gc).passed


def _seededContext(seed):
    nx = 1 + seed % 10
    ny = 1 + (seed * 7 + seed // 10) % 8
    density = (0.2, 0.4, 0.6, 0.8)[seed % 4]
    return randomPolarity(nx, ny, density, seed)


@pytest.mark.parametrize("seed", range(200))
def test_seeded_contexts_against_brute_force(seed):
    P = _seededContext(seed)
    gc = galoisClosed(P, oracleCap=0)
    brute = [m for m in range(1 << P.nx) if polarQ(P, polarP(P, m)) == m]
    assert list(gc.closedSets) == brute
    report = checkUniversalProperties(P, gc.lattice, gc.xeIndex, gc.yeIndex, gc=gc)
    assert report.passed, report.item
    assert oppositeFamily(P, gc).passed


def test_universal_property_failure_raises(b4):
    P = Polarity.fromOrder(b4, list(range(4)), list(range(4)))
    wrong = [b4.top] * 4
    report = checkUniversalProperties(P, b4, wrong, list(range(4)))
    assert not report.passed
    assert report.item == "1-join"
    with pytest.raises(PropertyFailedError):
        report.raiseOnFailure()


def test_lattice_order_polarity_recovers_lattice(three):
    identity = list(range(three.n))
    P = Polarity.fromOrder(three, identity, identity)
    gc = galoisClosed(P)
    assert gc.lattice.isIsomorphic(three)
    report = checkUniversalProperties(P, three, identity, identity, checkUniqueness=True)
    assert report.passed and report.commutingIsomorphisms == 1
    assert countCommutingIsomorphisms(three, gc, identity, identity) == 1


@pytest.mark.parametrize("name", ["two", "three", "b4", "n5"])
def test_poset_lemmas(name):
    L = catalog.NAMED_FRAMES[name]()
    identity = list(range(L.n))
    report = posetLemmaSuite(Polarity.fromOrder(L, identity, identity))
    assert report.passed
    assert report.item("xe-injective").left


def test_poset_lemmas_need_orders():
    with pytest.raises(ValueError):
        posetLemmaSuite(IDENTITY)


def test_join_and_meet_closures(b4):
    a, b = b4.indexOf("a"), b4.indexOf("b")
    assert joinClosure(b4, 1 << a) == (1 << a) | (1 << b4.bottom)
    assert joinClosure(b4, (1 << a) | (1 << b)) == b4.full
    assert meetClosure(b4, (1 << a) | (1 << b)) == b4.full


def test_semilattice_embedding_lemma(three, b4):
    assert semilatticeEmbeddingLemma(three, three, list(range(3))) is True
    assert semilatticeEmbeddingLemma(three, b4, [0, 0, 3]) is None


def test_clIntInside_whole_lattice(b4):
    identity = list(range(b4.n))
    report = clIntInside(b4, identity, identity)
    assert report.passed
    assert sorted(report.interiorImage) == identity
    assert report.gcSize == 4
    assert report.closureLattice(b4).isIsomorphic(b4)


def test_inducedLattice(b4):
    sub = inducedLattice(b4, [b4.bottom, b4.indexOf("a"), b4.top])
    assert sub.isIsomorphic(catalog.threeChain())
    assert bs.popcount(sub.full) == 3
