"""
Multiset images of triangular intervals and their star split.

For a reduction f and the interval I_n, the image J = f(I_n) (with multiplicity)
splits as J = J* + 2 J**: every element of odd multiplicity leaves one copy in J*,
and the remaining copies pair up into J**. The matching partition of I_n groups
positions by image value, sorts each group ascending and pairs consecutive
members; the first of a pair goes to I**,1, the second to I**,2 and an unpaired
last member to I*. The approximation B* is the union of all I**,1.
"""
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType

import numpy as np

from src.intervals import IntervalScheme, interval_bounds, interval_index
from src.numeric.prefix import SetPrefix
from src.reductions.specs import ReductionSpec
from src.utils.errors import InsufficientPrefixError

Multiset = Counter[int]


@dataclass(frozen=True, slots=True)
class StarSplit:
    j_star: frozenset[int]
    j_starstar: Mapping[int, int]
    i_star: frozenset[int]
    i_ss1: frozenset[int]
    i_ss2: frozenset[int]

    @property
    def paired(self) -> int:
        """|I**,1| = |I**,2| = |J**|."""
        return len(self.i_ss1)


@dataclass(frozen=True, slots=True)
class IntervalDecomposition:
    """
    I_n relative to one stage with prior length L and window [L+K, L+K+N):
    I*,1 maps below L, I*,2 into the window, I*,3 to [L, L+K) or past the window.
    """
    n: int
    star_below: frozenset[int]
    star_window: frozenset[int]
    star_other: frozenset[int]
    ss1: frozenset[int]
    ss2: frozenset[int]

    @property
    def star(self) -> frozenset[int]:
        return self.star_below | self.star_window | self.star_other


def multiset_image(f: ReductionSpec, n: int) -> Multiset:
    span = interval_bounds(IntervalScheme.TRIANGULAR, n)
    return Counter(f.images(span.start, span.stop))


def star_split_multiset(j: Multiset) -> tuple[frozenset[int], Multiset]:
    j_star = frozenset(value for value, count in j.items() if count % 2)
    j_starstar = Counter({value: count // 2 for value, count in j.items() if count >= 2})
    return j_star, j_starstar


@lru_cache(maxsize=1 << 16)
def partition_interval(f: ReductionSpec, n: int) -> StarSplit:
    """Canonical partition of I_n; memoized per (reduction, n) and safe to share across threads."""
    span = interval_bounds(IntervalScheme.TRIANGULAR, n)
    groups: dict[int, list[int]] = {}
    for x, y in zip(span, f.images(span.start, span.stop)):
        groups.setdefault(y, []).append(x)

    i_star: list[int] = []
    i_ss1: list[int] = []
    i_ss2: list[int] = []
    for members in groups.values():
        i_ss1.extend(members[0:len(members) - 1:2])
        i_ss2.extend(members[1::2])
        if len(members) % 2:
            i_star.append(members[-1])

    j_star, j_starstar = star_split_multiset(Counter({y: len(members) for y, members in groups.items()}))
    return StarSplit(
        j_star=j_star,
        j_starstar=MappingProxyType(j_starstar),
        i_star=frozenset(i_star),
        i_ss1=frozenset(i_ss1),
        i_ss2=frozenset(i_ss2),
    )


def bstar_membership(f: ReductionSpec, x: int) -> int:
    """B*(x): never consults A."""
    split = partition_interval(f, interval_index(IntervalScheme.TRIANGULAR, x))
    return int(x in split.i_ss1)


def be_membership(f: ReductionSpec, a: SetPrefix, x: int) -> int:
    """B_e(x) = A(f(x))."""
    y = f(x)
    if y >= a.length:
        raise InsufficientPrefixError(f"f({x}) = {y} lies beyond the prefix of A", required_length=y + 1)
    return a[y]


def be_prefix(f: ReductionSpec, a: SetPrefix, length: int) -> SetPrefix:
    """Bits of B_e = f^-1(A) on [0, length)."""
    images = np.array(f.images(0, length), dtype=object)
    if images.size and max(images) >= a.length:
        raise InsufficientPrefixError(
            f"B_e on [0, {length}) reads A beyond its prefix", required_length=int(max(images)) + 1,
        )
    return SetPrefix(a.bits[images.astype(np.int64)] if images.size else [])


def bstar_prefix(f: ReductionSpec, length: int) -> SetPrefix:
    """Bits of B* on [0, length)."""
    if length <= 0:
        return SetPrefix.zeros(0)
    members: list[int] = []
    last = interval_index(IntervalScheme.TRIANGULAR, length - 1)
    for n in range(1, last + 1):
        members.extend(x for x in partition_interval(f, n).i_ss1 if x < length)
    return SetPrefix.from_positions(members, length)


def determined_length(f: ReductionSpec, available: int, limit: int) -> int:
    """Largest m <= limit such that f maps all of [0, m) below available."""
    images = f.images(0, limit)
    return next((x for x, y in enumerate(images) if y >= available), limit)


def decompose_interval(f: ReductionSpec, n: int, window: range, lower: int) -> IntervalDecomposition:
    """Five-way split of I_n for a stage with prior length lower (L) and the given window."""
    split = partition_interval(f, n)
    below, inside, other = [], [], []
    for x in sorted(split.i_star):
        y = f(x)
        if y < lower:
            below.append(x)
        elif y in window:
            inside.append(x)
        else:
            other.append(x)
    return IntervalDecomposition(
        n=n,
        star_below=frozenset(below),
        star_window=frozenset(inside),
        star_other=frozenset(other),
        ss1=split.i_ss1,
        ss2=split.i_ss2,
    )
