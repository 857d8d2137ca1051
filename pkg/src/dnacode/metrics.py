"""Split Hamming distances on strands and the DNA-distance on messages.

Distances between same-shape strands are pairs (index distance, data
distance) under the componentwise partial order: (a, b) <= (c, d) iff
a <= c and b <= d.  The DNA-distance between messages with equal
data-field multisets is the worst bottleneck assignment between matching
index groups; messages with different multisets are infinitely far
apart, realized as math.inf so plain comparisons (k < math.inf) work.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence, Union

from .errors import DuplicateCodeword, ShapeMismatch, TooFewCodewords
from .matching import bottleneck_bijection
from .model import Message, Strand, data_field_multiset, data_field_set, index_group


class PairDistance(NamedTuple):
    """(index-field Hamming distance, data-field Hamming distance)."""

    idx: int
    dat: int


def pair_leq(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Componentwise order; partial, not total: (1,0) and (0,1) are incomparable."""
    return a[0] <= b[0] and a[1] <= b[1]


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()


def split_weight(x: Strand) -> PairDistance:
    return PairDistance(x.index_bits.bit_count(), x.data_bits.bit_count())


def split_distance(x: Strand, y: Strand) -> PairDistance:
    """Hamming distances of the index fields and of the data fields."""
    if not x.same_shape(y):
        raise ShapeMismatch(
            f"strands have shapes ({x.length},{x.index_len}) and ({y.length},{y.index_len})"
        )
    return PairDistance(hamming(x.index_bits, y.index_bits), hamming(x.data_bits, y.data_bits))


DnaDistance = Union[int, float]
"""Non-negative int, or math.inf when the data-field multisets differ."""


def dna_distance(z1: Message, z2: Message) -> DnaDistance:
    """DNA-distance between two messages.

    math.inf when the data-field multisets differ.  Otherwise, for each
    data field u, solve the bottleneck assignment between the index
    groups I(u, Z1) and I(u, Z2) (minimum over bijections of the maximum
    index Hamming distance) and return the worst value over u.
    """
    if not z1.same_shape(z2):
        raise ShapeMismatch(
            f"messages have shapes (M={z1.m},L={z1.length},l={z1.index_len}) and "
            f"(M={z2.m},L={z2.length},l={z2.index_len})"
        )
    if data_field_multiset(z1) != data_field_multiset(z2):
        return math.inf
    worst = 0
    for u in sorted(data_field_set(z1)):
        g1 = index_group(u, z1)
        g2 = index_group(u, z2)
        # equal multisets force equal group sizes; a mismatch is a caller bug
        assert len(g1) == len(g2)
        value, _ = bottleneck_bijection(g1, g2)
        worst = max(worst, value)
    return worst


def min_dna_distance(
    code: Sequence[Message],
) -> tuple[DnaDistance, tuple[Message, Message]]:
    """Minimum pairwise DNA-distance of a code, with an argmin pair.

    The witness is the first pair attaining the minimum, iterating
    unordered pairs in the order the code lists them.
    """
    if len(code) < 2:
        raise TooFewCodewords(f"need at least 2 codewords, got {len(code)}")
    if len(set(code)) != len(code):
        raise DuplicateCodeword("codewords must be pairwise distinct")
    best: DnaDistance = math.inf
    witness: tuple[Message, Message] | None = None
    for i in range(len(code)):
        for j in range(i + 1, len(code)):
            d = dna_distance(code[i], code[j])
            if witness is None or d < best:
                best = d
                witness = (code[i], code[j])
    assert witness is not None
    return best, witness
