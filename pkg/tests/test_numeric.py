from fractions import Fraction
from math import ceil

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from src.intervals import IntervalScheme, interval_bounds
from src.numeric import (
    DensityProfile,
    SetPrefix,
    agreement_count,
    agreement_positions,
    agreement_profile,
    bookkeeping_constants,
    claim1_check,
    density_profile,
    prefix_density,
    tail_min_density,
)
from src.utils.errors import HypothesisFailure, PrefixRangeError

P = Fraction(1, 4)


def prefix(text: str) -> SetPrefix:
    return SetPrefix.from_string(text)


class TestSetPrefix:
    def test_bits_are_read_only(self):
        a = prefix("1010")
        with pytest.raises(ValueError):
            a.bits[0] = 0

    def test_rejects_non_bits(self):
        with pytest.raises(ValueError):
            SetPrefix([0, 2, 1])

    def test_out_of_range_index(self):
        with pytest.raises(PrefixRangeError):
            prefix("10")[2]

    def test_positions_and_complement(self):
        a = SetPrefix.from_positions([0, 3], 5)
        assert a.to_string() == "10010"
        assert a.positions() == frozenset({0, 3})
        assert a.complement().to_string() == "01101"

    def test_concat_and_slicing(self):
        a = prefix("10").concat(prefix("0"), prefix("11"))
        assert a.to_string() == "10011"
        assert a[1:4] == prefix("001")
        assert a.count(2, 5) == 2


@pytest.mark.parametrize(
    "a, r, n, expected",
    [
        ("1010", "1010", 4, {0, 1, 2, 3}),
        ("1100", "0011", 4, set()),
        ("1100", "1010", 4, {0, 3}),
        ("1100", "1010", 2, {0}),
    ],
)
def test_agreement_positions(a, r, n, expected):
    assert agreement_positions(prefix(a), prefix(r), n) == expected
    assert agreement_count(prefix(a), prefix(r), n) == len(expected)


def test_agreement_beyond_prefix():
    with pytest.raises(PrefixRangeError):
        agreement_positions(prefix("10"), prefix("1010"), 3)


@pytest.mark.parametrize(
    "s, n, expected",
    [
        (range(10), 10, Fraction(1)),
        (range(0, 10, 2), 10, Fraction(1, 2)),
        ({0, 3}, 4, Fraction(1, 2)),
        ({0, 3, 9}, 4, Fraction(1, 2)),
    ],
)
def test_prefix_density(s, n, expected):
    assert prefix_density(set(s), n) == expected


@st.composite
def bit_pairs(draw):
    length = draw(st.integers(min_value=1, max_value=200))
    bits = st.lists(st.integers(0, 1), min_size=length, max_size=length)
    return SetPrefix(draw(bits)), SetPrefix(draw(bits))


@settings(max_examples=300)
@given(bit_pairs(), st.data())
def test_prefix_density_is_monotone_under_inclusion(pair, data):
    a, b = pair
    subset = SetPrefix(a.bits & b.bits)
    n = data.draw(st.integers(min_value=1, max_value=a.length))
    assert prefix_density(subset, n) <= prefix_density(a, n)
    assert prefix_density(subset.positions(), n) <= prefix_density(a.positions(), n)


@settings(max_examples=300)
@given(bit_pairs(), st.data())
def test_agreement_with_a_set_and_its_complement_covers_the_segment(pair, data):
    a, r = pair
    n = data.draw(st.integers(min_value=0, max_value=a.length))
    assert len(agreement_positions(a, r, n)) + len(agreement_positions(a, r.complement(), n)) == n
    assert agreement_count(a, r, n) + agreement_count(a, r.complement(), n) == n


def test_prefix_density_on_set_prefix():
    assert prefix_density(prefix("1001"), 4) == Fraction(1, 2)


def test_prefix_density_of_empty_segment():
    with pytest.raises(ZeroDivisionError):
        prefix_density({1}, 0)


@pytest.mark.parametrize(
    "values, from_index, expected",
    [
        ([1, Fraction(1, 2), Fraction(1, 3)], 0, Fraction(1, 3)),
        ([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)], 1, Fraction(1, 2)),
        ([Fraction(2, 7)] * 3, 0, Fraction(2, 7)),
    ],
)
def test_tail_min_density(values, from_index, expected):
    profile = DensityProfile(checkpoints=list(range(1, len(values) + 1)), values=values)
    assert tail_min_density(profile, from_index) == expected


def test_tail_min_density_empty_tail():
    profile = DensityProfile(checkpoints=[1, 2], values=[1, 1])
    with pytest.raises(ValueError):
        tail_min_density(profile, 2)


def test_profile_rejects_unordered_checkpoints():
    with pytest.raises(ValueError):
        DensityProfile(checkpoints=[2, 2], values=[1, 1])


def test_density_and_agreement_profiles():
    evens = SetPrefix([1 - x % 2 for x in range(16)])
    assert density_profile(evens, [1, 2, 3, 16]).values == [1, Fraction(1, 2), Fraction(2, 3), Fraction(1, 2)]
    empty = SetPrefix.zeros(16)
    assert agreement_profile(evens, empty, [2, 4, 8, 16]).values == [Fraction(1, 2)] * 4
    with pytest.raises(PrefixRangeError):
        density_profile(evens, [17])


def test_profile_csv_keeps_exact_values(tmp_path):
    big = Fraction(3 ** 80, 3 ** 80 + 1)
    profile = DensityProfile(checkpoints=[1, 10], values=[Fraction(1, 3), big])
    path = tmp_path / "profile.csv"
    profile.write_csv(path)
    assert DensityProfile.read_csv(path) == profile


class TestClaim1:
    def test_constant_agreement_gives_the_stated_bound(self):
        big_n = 6
        ratios = [P] * (big_n + 1)
        gammas = [Fraction(0)] * (big_n + 1)
        x = interval_bounds(IntervalScheme.TRIANGULAR, big_n + 1).stop - 1
        outcome = claim1_check(ratios, gammas, P, x)
        assert outcome.big_n == big_n
        assert outcome.bound == Fraction(big_n - 1, big_n + 1) * P
        assert outcome.holds

    def test_zero_target_is_trivial(self):
        ratios = [Fraction(0)] * 5
        outcome = claim1_check(ratios, [Fraction(0)] * 5, Fraction(0), 10)
        assert outcome.bound <= 0
        assert outcome.holds

    def test_hypothesis_failure_names_the_interval(self):
        ratios = [P, P, Fraction(0), P]
        with pytest.raises(HypothesisFailure) as info:
            claim1_check(ratios, [Fraction(0)] * 4, P, 6)
        assert info.value.n == 3

    def test_start_index_skips_early_intervals(self):
        ratios = [Fraction(0), P, P, P]
        outcome = claim1_check(ratios, [Fraction(0)] * 4, P, 6, start_index=2)
        assert outcome.holds

    def test_bookkeeping_constants(self):
        ratios = [Fraction(1), Fraction(0), Fraction(1), Fraction(1)]
        # cumulative ratios 1, 1/3, 4/6, 8/10
        assert bookkeeping_constants(ratios, [Fraction(1, 2), Fraction(1, 5), Fraction(0)], Fraction(1)) == [3, 4, None]


@st.composite
def agreement_sets(draw):
    """Agreement bits over I_1 .. I_{N+1} whose per-interval ratios satisfy a_n >= p - 1/(n+4)."""
    big_n = draw(st.integers(min_value=2, max_value=30))
    seed = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    blocks, ratios, gammas = [], [], []
    for n in range(1, big_n + 2):
        gamma = Fraction(1, n + 4)
        lowest = max(0, ceil((P - gamma) * n))
        hits = int(rng.integers(lowest, n + 1))
        block = np.zeros(n, dtype=np.uint8)
        block[rng.choice(n, size=hits, replace=False)] = 1
        blocks.append(block)
        ratios.append(Fraction(hits, n))
        gammas.append(gamma)
    return big_n, SetPrefix(np.concatenate(blocks)), ratios, gammas


@settings(max_examples=100, deadline=None)
@given(agreement_sets())
def test_claim1_bound_holds_on_synthetic_profiles(case):
    big_n, agreement, ratios, gammas = case
    for x in interval_bounds(IntervalScheme.TRIANGULAR, big_n + 1):
        outcome = claim1_check(ratios, gammas, P, x, agreement=agreement)
        brute = Fraction(int(agreement.bits[:x + 1].sum()), x + 1)
        assert outcome.actual == brute
        assert outcome.holds, (x, outcome)
