"""
Factorial-interval amplification and majority decoding.

Index n of a source set becomes the whole block I_n = [n!, (n+1)!) of B; position 0
lies in no block and is always 0. Any R that agrees with B on more than half of I_n
recovers A(n) by a strict majority vote; exact ties decode to 0.
"""
from collections.abc import Mapping
from fractions import Fraction
from math import factorial

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.hypergeom.sampling import SeedValue, make_generator, sample_without_replacement
from src.intervals import IntervalScheme, interval_bounds, interval_length
from src.numeric import DensityProfile, SetPrefix, agreement_profile
from src.utils.errors import InsufficientPrefixError, PrefixRangeError, ResourceError
from src.utils.log_services import get_logger

logger = get_logger(__name__)

DEFAULT_N_MAX_CAP = 8


class AmplifiedSet(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: SetPrefix
    encoded: SetPrefix
    n_max: int


def _require_cover(r: SetPrefix, n: int) -> range:
    span = interval_bounds(IntervalScheme.FACTORIAL, n)
    if r.length < span.stop:
        raise InsufficientPrefixError(f"decoding index {n} needs all of I_{n}", required_length=span.stop)
    return span


def encode(a: SetPrefix, n_max: int, cap: int = DEFAULT_N_MAX_CAP) -> AmplifiedSet:
    """B = union of I_n over n in A with 1 <= n <= n_max, over [0, (n_max + 1)!)."""
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    if n_max > cap:
        raise ResourceError(f"n_max = {n_max} exceeds the cap {cap}: {factorial(n_max + 1)} positions")
    if a.length <= n_max:
        raise PrefixRangeError(f"source prefix of length {a.length} does not cover index {n_max}")
    # block lengths |I_n| = n * n!, with position 0 prepended as its own zero block
    lengths = [1] + [interval_length(IntervalScheme.FACTORIAL, n) for n in range(1, n_max + 1)]
    values = np.concatenate([[0], a.bits[1:n_max + 1]]).astype(np.uint8)
    encoded = SetPrefix(np.repeat(values, lengths))
    return AmplifiedSet(source=a[:n_max + 1], encoded=encoded, n_max=n_max)


def decode_bit(r: SetPrefix, n: int) -> int:
    """1 iff strictly more than half of I_n lies in R."""
    span = _require_cover(r, n)
    return int(2 * r.count(span.start, span.stop) > len(span))


def decode_range(r: SetPrefix, n_from: int, n_to: int) -> SetPrefix:
    """Decoded bits for the indices n_from .. n_to (bit i of the result is index n_from + i)."""
    if n_from < 1 or n_to < n_from:
        raise ValueError(f"need 1 <= n_from <= n_to, got [{n_from}, {n_to}]")
    return SetPrefix([decode_bit(r, n) for n in range(n_from, n_to + 1)])


def corrupt(encoded: SetPrefix, budgets: Mapping[int, int], seed: SeedValue) -> SetPrefix:
    """Flips a uniform random subset of the given size inside each I_n named in budgets."""
    rng = make_generator(seed)
    bits = encoded.bits.copy()
    for n in sorted(budgets):
        span = _require_cover(encoded, n)
        flips = sample_without_replacement(len(span), budgets[n], rng)
        positions = np.fromiter((span.start + i for i in sorted(flips)), dtype=np.int64, count=len(flips))
        bits[positions] ^= 1
    return SetPrefix(bits)


def safe_budget(n: int) -> int:
    """Largest flip count in I_n that can never change the majority: floor((|I_n| - 1) / 2)."""
    return (interval_length(IntervalScheme.FACTORIAL, n) - 1) // 2


def misdecode_budget(a: SetPrefix, n: int) -> int:
    """Fewest flips in I_n that force a wrong decode of index n when R starts from B."""
    size = interval_length(IntervalScheme.FACTORIAL, n)
    if a[n]:
        return (size + 1) // 2  # leave at most half: ties decode to 0
    return size // 2 + 1


def checkpoint_agreement(encoded: SetPrefix, r: SetPrefix, n_from: int, n_to: int) -> DensityProfile:
    """Agreement density of R with B at the checkpoints (n + 1)! for n_from <= n <= n_to."""
    checkpoints = [factorial(n + 1) for n in range(n_from, n_to + 1)]
    return agreement_profile(encoded, r, checkpoints)


def majority_margin(encoded: SetPrefix, r: SetPrefix, n: int) -> Fraction:
    """|(B <-> R) on I_n| / |I_n|; above 1/2 guarantees a correct decode."""
    span = _require_cover(r, n)
    agree = int(np.count_nonzero(encoded.bits[span.start:span.stop] == r.bits[span.start:span.stop]))
    return Fraction(agree, len(span))
