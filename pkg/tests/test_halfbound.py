from fractions import Fraction

import numpy as np
import pytest

from src.halfbound import (
    checkpoint_agreement,
    corrupt,
    decode_bit,
    decode_range,
    encode,
    majority_margin,
    misdecode_budget,
    safe_budget,
)
from src.intervals import IntervalScheme, interval_bounds
from src.numeric import SetPrefix
from src.utils.errors import InsufficientPrefixError, ResourceError

N_MAX = 7


def source(*members: int, n_max: int = 2) -> SetPrefix:
    return SetPrefix.from_positions(members, n_max + 1)


@pytest.mark.parametrize(
    "members, expected",
    [((1,), "010000"), ((2,), "001111"), ((), "000000"), ((1, 2), "011111")],
)
def test_encode_small_sources(members, expected):
    amplified = encode(source(*members), 2)
    assert amplified.encoded.to_string() == expected
    assert amplified.n_max == 2


def test_position_zero_of_the_source_is_ignored():
    assert encode(source(0), 2).encoded == SetPrefix.zeros(6)


def test_encoding_spans_factorial_blocks():
    a = source(1, 3, n_max=4)
    encoded = encode(a, 4).encoded
    assert encoded.length == 120
    for n in range(1, 5):
        span = interval_bounds(IntervalScheme.FACTORIAL, n)
        assert encoded.count(span.start, span.stop) == a[n] * len(span)


def test_cap_guards_factorial_growth():
    with pytest.raises(ResourceError):
        encode(SetPrefix.zeros(12), 11)
    assert encode(SetPrefix.zeros(10), 9, cap=9).encoded.length == 3628800


def test_decode_bit():
    encoded = encode(source(2), 2).encoded
    assert decode_bit(encoded, 2) == 1
    assert decode_bit(encoded, 1) == 0
    assert decode_bit(SetPrefix.zeros(6), 2) == 0


def test_ties_decode_to_zero():
    half = SetPrefix.from_string("001100")
    assert decode_bit(half, 2) == 0
    assert majority_margin(SetPrefix.zeros(6), half, 2) == Fraction(1, 2)


def test_decoding_needs_the_whole_interval():
    with pytest.raises(InsufficientPrefixError) as info:
        decode_bit(SetPrefix.zeros(10), 3)
    assert info.value.required_length == 24


def test_uncorrupted_and_complemented_encodings():
    a = source(1, 4, 5, n_max=5)
    encoded = encode(a, 5).encoded
    assert decode_range(encoded, 1, 5) == a[1:]
    assert decode_range(encoded.complement(), 1, 5) == a[1:].complement()
    profile = checkpoint_agreement(encoded, encoded, 1, 5)
    assert profile.values == [1] * 5
    assert profile.checkpoints == [2, 6, 24, 120, 720]


@pytest.mark.parametrize("n, expected", [(1, 0), (2, 1), (3, 8), (4, 47)])
def test_safe_budget(n, expected):
    assert safe_budget(n) == expected


def test_misdecode_budget_respects_tie_rule():
    ones, zeros = source(2), source()
    assert misdecode_budget(ones, 2) == 2
    assert misdecode_budget(zeros, 2) == 3
    assert misdecode_budget(ones, 1) == 1 and misdecode_budget(zeros, 1) == 1


def test_corruption_flips_exactly_the_budget():
    encoded = encode(source(1, 3, n_max=4), 4).encoded
    received = corrupt(encoded, {2: 1, 4: 30}, 99)
    flipped = np.flatnonzero(encoded.bits != received.bits)
    assert len(flipped) == 31
    assert sum(1 for x in flipped if 2 <= x < 6) == 1
    assert corrupt(encoded, {2: 1, 4: 30}, 99) == received


def test_random_sources_survive_safe_corruption():
    rng = np.random.default_rng(7)
    indices = range(1, N_MAX + 1)
    for _ in range(100):
        a = SetPrefix(np.concatenate([[0], rng.integers(0, 2, size=N_MAX)]))
        encoded = encode(a, N_MAX).encoded
        budgets = {n: int(rng.integers(0, safe_budget(n) + 1)) for n in indices}
        received = corrupt(encoded, budgets, rng)
        assert decode_range(received, 1, N_MAX) == a[1:]
        assert all(majority_margin(encoded, received, n) > Fraction(1, 2) for n in indices)

        target = int(rng.integers(1, N_MAX + 1))
        attacked = corrupt(encoded, {target: misdecode_budget(a, target)}, rng)
        wrong = decode_range(attacked, 1, N_MAX)
        assert [n for n in indices if wrong[n - 1] != a[n]] == [target]


def test_checkpoint_density_above_half_plus_margin_decodes():
    n_max = 6
    rng = np.random.default_rng(11)
    triggered = 0
    for _ in range(100):
        a = SetPrefix(np.concatenate([[0], rng.integers(0, 2, size=n_max)]))
        encoded = encode(a, n_max).encoded
        budgets = {}
        for n in range(1, n_max + 1):
            size = len(interval_bounds(IntervalScheme.FACTORIAL, n))
            budgets[n] = int(rng.integers(0, int(size * rng.uniform(0.05, 0.7)) + 1))
        received = corrupt(encoded, budgets, rng)
        decoded = decode_range(received, 1, n_max)
        profile = checkpoint_agreement(encoded, received, 1, n_max)
        for big_n in range(1, n_max + 1):
            if min(profile.values[big_n - 1:]) > Fraction(1, 2) + Fraction(1, big_n):
                triggered += 1
                assert all(decoded[n - 1] == a[n] for n in range(big_n, n_max + 1))
    assert triggered > 0
