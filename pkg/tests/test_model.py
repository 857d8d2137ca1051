"""Strand/message/parameter model: packing, validation, enumeration."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dnacode import (
    DuplicateIndex,
    DuplicateStrand,
    Message,
    ReadPool,
    ShapeMismatch,
    SpaceTooLarge,
    Strand,
    SystemParams,
    ValidationError,
    WrongCount,
    WrongLength,
    enumerate_space,
    has_distinct_data,
    in_restricted_space,
    space_size,
    validate_message,
)
from dnacode.model import bits_from_string, bits_to_string, flip_positions

from oracles import mk_message, mk_params, random_message

bitstrings = st.text(alphabet="01", min_size=1, max_size=16)


@given(bitstrings)
def test_bit_string_round_trip(s):
    assert bits_to_string(bits_from_string(s), len(s)) == s


def test_bits_msb_first():
    assert bits_from_string("100") == 4
    assert bits_from_string("001") == 1
    assert bits_to_string(6, 4) == "0110"


def test_flip_positions_counts_from_left():
    assert flip_positions(bits_from_string("000"), 3, [0]) == bits_from_string("100")
    assert flip_positions(bits_from_string("000"), 3, [2]) == bits_from_string("001")
    assert flip_positions(bits_from_string("010"), 3, [0, 2]) == bits_from_string("111")


@given(bitstrings, st.data())
def test_flip_positions_is_an_involution(s, data):
    positions = data.draw(
        st.lists(st.integers(0, len(s) - 1), unique=True, max_size=len(s))
    )
    bits = bits_from_string(s)
    once = flip_positions(bits, len(s), positions)
    assert flip_positions(once, len(s), positions) == bits


def test_strand_fields():
    s = Strand.from_string("110", index_len=2)
    assert (s.index_bits, s.data_bits) == (3, 0)
    assert (s.length, s.index_len, s.data_len) == (3, 2, 1)
    assert str(s) == "110"
    assert Strand.from_fields(3, 0, 3, 2) == s


def test_strand_rejects_out_of_range_bits():
    with pytest.raises(ValidationError):
        Strand(bits=8, length=3, index_len=1)
    with pytest.raises(ValidationError):
        Strand(bits=0, length=0, index_len=0)
    with pytest.raises(ValidationError):
        Strand(bits=0, length=3, index_len=3)  # data field must be non-empty


def test_message_canonical_order_ignores_input_order():
    a = mk_message(1, "00", "11")
    b = mk_message(1, "11", "00")
    assert a == b
    assert [str(s) for s in a.strands] == ["00", "11"]
    assert str(a) == "{00,11}"


def test_message_duplicate_strand_beats_duplicate_index():
    s = Strand.from_string("01", 1)
    with pytest.raises(DuplicateStrand):
        Message((s, s))
    with pytest.raises(DuplicateIndex):
        mk_message(1, "00", "01")


def test_message_shape_and_count_errors():
    with pytest.raises(WrongCount):
        Message(())
    with pytest.raises(ShapeMismatch):
        Message((Strand.from_string("00", 1), Strand.from_string("110", 1)))


def test_validate_message_error_precedence():
    p = mk_params(2, 3, 2, 2, 1, 1, 1)
    # wrong length reported before wrong count
    with pytest.raises(WrongLength):
        validate_message(["0000"], p)
    with pytest.raises(WrongCount):
        validate_message(["000"], p)
    with pytest.raises(WrongCount):
        validate_message(["000", "010", "100"], p)
    with pytest.raises(DuplicateStrand):
        validate_message(["000", "000"], p)
    with pytest.raises(DuplicateIndex):
        validate_message(["000", "001"], p)
    z = validate_message(["010", "000"], p)
    assert str(z) == "{000,010}"


def test_read_pool_is_a_sorted_multiset():
    pool = ReadPool.from_reads(["11", "00", "11"], 2)
    assert pool.entries == ((0, 1), (3, 2))
    assert pool.size == 3
    assert pool.to_reads() == [0, 3, 3]
    assert pool == ReadPool.from_reads([3, 3, 0], 2)


def test_system_params_validation():
    with pytest.raises(ValidationError):
        mk_params(3, 3, 1, 2, 1, 1, 1)  # M > 2^l
    with pytest.raises(ValidationError):
        mk_params(1, 2, 1, 2, "3/2", 1, 1)  # tau > 1
    with pytest.raises(ValidationError):
        SystemParams(1, 2, 1, 2, Fraction(0), 1, 1)  # tau must be positive
    with pytest.raises(ValidationError):
        mk_params(1, 2, 1, 2, 1, 2, 1)  # e_i > l
    with pytest.raises(ValidationError):
        mk_params(1, 2, 1, 2, 1, 1, 2)  # e_d > L - l
    with pytest.raises(ValidationError):
        mk_params(1, 65, 1, 2, 1, 1, 1)  # strand too long


def test_tau_budget_is_an_exact_floor():
    assert mk_params(1, 2, 1, 3, "2/3", 1, 1).tau_budget == 2
    assert mk_params(1, 2, 1, 3, "1/2", 1, 1).tau_budget == 1
    assert mk_params(1, 2, 1, 2, "1/3", 1, 1).tau_budget == 0
    assert mk_params(1, 2, 1, 2, "1", 1, 1).tau_budget == 2
    # 0.66... * 3 must not round up
    assert mk_params(1, 2, 1, 3, Fraction(66, 100), 1, 1).tau_budget == 1


def test_pool_size():
    assert mk_params(2, 3, 2, 3, 1, 1, 1).pool_size == 6


def test_space_size_matches_enumeration():
    for m, L, l in [(1, 2, 1), (2, 3, 2), (2, 3, 1), (3, 3, 2), (1, 4, 2)]:
        p = mk_params(m, L, l, 2, 1, 0, 0)
        msgs = list(enumerate_space(p))
        assert len(msgs) == space_size(p)
        assert len(set(msgs)) == len(msgs)


def test_space_sizes_by_formula():
    assert space_size(mk_params(1, 2, 1, 2, 1, 0, 0)) == 4
    assert space_size(mk_params(2, 3, 2, 2, 1, 0, 0)) == 24
    assert space_size(mk_params(2, 3, 1, 2, 1, 0, 0)) == 16


def test_enumeration_cap():
    p = mk_params(2, 3, 2, 2, 1, 0, 0)
    with pytest.raises(SpaceTooLarge):
        list(enumerate_space(p, cap=10))


def test_restricted_enumeration_matches_filter():
    p = mk_params(2, 3, 2, 2, 1, 1, 0)
    whole = list(enumerate_space(p))
    for r in [(0, 0), (1, 0), (2, 0), (2, 1)]:
        got = list(enumerate_space(p, restrict=r))
        assert got == [z for z in whole if in_restricted_space(z, *r)]


def test_restricted_spaces_nest_as_radii_grow():
    p = mk_params(2, 3, 2, 2, 1, 1, 0)
    for z in enumerate_space(p):
        if in_restricted_space(z, 2, 1):
            assert in_restricted_space(z, 2, 0)
            assert in_restricted_space(z, 1, 0)


def test_distinct_data_is_the_data_zero_restriction():
    p = mk_params(2, 3, 2, 2, 1, 1, 0)
    for z in enumerate_space(p):
        assert has_distinct_data(z) == in_restricted_space(z, p.index_len, 0)
        if has_distinct_data(z):
            # distinct data defeats any index radius paired with data radius 0
            assert in_restricted_space(z, 2 * p.index_len, 0)


def test_single_strand_messages_are_always_restricted():
    p = mk_params(1, 3, 1, 2, 1, 1, 1)
    for z in enumerate_space(p):
        assert in_restricted_space(z, 3, 3)
        assert has_distinct_data(z)


def test_random_message_generator_produces_valid_messages():
    rng = random.Random(7)
    p = mk_params(3, 5, 2, 2, 1, 1, 1)
    for _ in range(50):
        z = random_message(rng, p)
        assert z.m == 3 and z.length == 5 and z.index_len == 2
