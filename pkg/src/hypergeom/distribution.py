"""
Exact hypergeometric distribution H(K, N, n).

X ~ H(K, N, n) counts the marked elements in a uniform K-subset of an N-element
population containing n marked elements:

    Pr(X = x) = C(n, x) C(N - n, K - x) / C(N, K)

Probabilities are exact fractions.Fraction values.
"""
from fractions import Fraction
from itertools import accumulate
from math import ceil, comb, floor

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator


class HypergeomParams(BaseModel):
    """K draws from a population of N containing n successes."""
    model_config = ConfigDict(frozen=True)

    K: int = Field(ge=0, description="number of draws")
    N: int = Field(ge=0, description="population size")
    n: int = Field(ge=0, description="successes in the population")

    @model_validator(mode="after")
    def check_sizes(self) -> Self:
        if self.K > self.N or self.n > self.N:
            raise ValueError(f"draws and successes must not exceed the population: {self}")
        return self

    @property
    def draw_ratio(self) -> Fraction:
        """p = K / N, the expected fraction of successes drawn."""
        return Fraction(self.K, self.N) if self.N else Fraction(0)

    @property
    def support(self) -> range:
        return range(max(0, self.K - (self.N - self.n)), min(self.K, self.n) + 1)


def binomial(a: int, b: int) -> int:
    """C(a, b), zero outside 0 <= b <= a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def _weights(h: HypergeomParams) -> list[int]:
    """Numerators C(n, x) C(N - n, K - x) for x = 0 .. min(K, n)."""
    return [binomial(h.n, x) * binomial(h.N - h.n, h.K - x) for x in range(min(h.K, h.n) + 1)]


def pmf(h: HypergeomParams, x: int) -> Fraction:
    return Fraction(binomial(h.n, x) * binomial(h.N - h.n, h.K - x), comb(h.N, h.K))


def tail_leq(h: HypergeomParams, threshold: Fraction | int) -> Fraction:
    """Pr(X <= threshold); non-integral thresholds are floored."""
    top = floor(threshold)
    if top < 0:
        return Fraction(0)
    weights = _weights(h)
    if top >= len(weights) - 1:
        return Fraction(1)
    return Fraction(sum(weights[: top + 1]), comb(h.N, h.K))


def failure_probability(h: HypergeomParams, required: Fraction | int) -> Fraction:
    """Pr(X < required): the exact probability that a draw misses its quota."""
    return tail_leq(h, ceil(required) - 1)


class CumulativeTail:
    """
    All left tails of one distribution from a single pass of prefix sums.
    Used by the certificate grid, which queries the same (K, N, n) for many thresholds.
    """

    def __init__(self, h: HypergeomParams):
        self.params = h
        self._total = comb(h.N, h.K)
        self._running = list(accumulate(_weights(h)))

    def leq(self, threshold: Fraction | int) -> Fraction:
        top = floor(threshold)
        if top < 0:
            return Fraction(0)
        if top >= len(self._running) - 1:
            return Fraction(1)
        return Fraction(self._running[top], self._total)
