from hypothesis import given, strategies as st

from locfit.util import bitset as bs


def test_fromIndices_toIndices():
    assert bs.fromIndices([0, 2, 5]) == 0b100101
    assert bs.toIndices(0b100101) == (0, 2, 5)
    assert bs.toIndices(0) == ()


def test_lowestBit():
    assert bs.lowestBit(0b1000) == 3
    assert bs.lowestBit(0) == -1


def test_iterSubsets_is_ascending_and_complete():
    subsets = list(bs.iterSubsets(0b1010))
    assert subsets == [0, 0b10, 0b1000, 0b1010]


@given(st.integers(min_value=0, max_value=(1 << 12) - 1))
def test_popcount_matches_indices(mask):
    assert bs.popcount(mask) == len(bs.toIndices(mask))
    assert bs.fromIndices(bs.iterBits(mask)) == mask


@given(st.integers(min_value=0, max_value=(1 << 6) - 1))
def test_iterSubsets_are_subsets(mask):
    subsets = list(bs.iterSubsets(mask))
    assert len(subsets) == 1 << bs.popcount(mask)
    assert all(bs.isSubset(s, mask) for s in subsets)


def test_iterSubsetsCapped_exhaustive_below_cap():
    assert list(bs.iterSubsetsCapped(0b111, 8)) == list(bs.iterSubsets(0b111))


def test_iterSubsetsCapped_samples_past_cap():
    mask = bs.fullMask(5)
    sample = list(bs.iterSubsetsCapped(mask, 8))
    assert len(sample) == len(set(sample))
    # empty, 5 singletons, 10 pairs, 5 co-singletons, full
    assert len(sample) == 1 + 5 + 10 + 5 + 1
    assert mask in sample and 0 in sample
