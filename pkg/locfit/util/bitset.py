"""Subsets of a finite indexed carrier encoded as Python ints.

Bit i of a mask stands for the element of index i. Iteration is always in
ascending index order so that every enumeration built on top of these helpers
is deterministic.
"""
from typing import Iterable, Iterator, Tuple

__all__ = [
    "bit", "fullMask", "fromIndices", "toIndices", "iterBits", "popcount",
    "isSubset", "lowestBit", "iterSubsets", "iterSubsetsCapped",
]


def bit(i: int) -> int:
    return 1 << i


def fullMask(n: int) -> int:
    return (1 << n) - 1


def fromIndices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


def iterBits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def toIndices(mask: int) -> Tuple[int, ...]:
    return tuple(iterBits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def isSubset(a: int, b: int) -> bool:
    return a & ~b == 0


def lowestBit(mask: int) -> int:
    """Index of the lowest set bit, -1 for the empty mask."""
    return (mask & -mask).bit_length() - 1


def iterSubsets(mask: int) -> Iterator[int]:
    """Yield every subset of mask in ascending integer order."""
    indices = toIndices(mask)
    for k in range(1 << len(indices)):
        sub = 0
        j = 0
        while k:
            if k & 1:
                sub |= 1 << indices[j]
            k >>= 1
            j += 1
        yield sub


def iterSubsetsCapped(mask: int, cap: int) -> Iterator[int]:
    """Yield all subsets of mask, or a deterministic sample past the cap.

    When 2^|mask| exceeds cap, the sample is made of the subsets of size at
    most two, the co-subsets of size at most one and the full mask, without
    repetition.

    Args:
        mask: the carrier subset to explore.
        cap: the largest number of subsets enumerated exhaustively.

    Returns:
        An iterator over subset masks.
    """
    indices = toIndices(mask)
    if (1 << len(indices)) <= cap:
        yield from iterSubsets(mask)
        return
    seen = set()

    def emit(sub: int) -> Iterator[int]:
        if sub not in seen:
            seen.add(sub)
            yield sub

    yield from emit(0)
    for pos, i in enumerate(indices):
        yield from emit(1 << i)
        for j in indices[pos + 1:]:
            yield from emit((1 << i) | (1 << j))
    for i in indices:
        yield from emit(mask & ~(1 << i))
    yield from emit(mask)
