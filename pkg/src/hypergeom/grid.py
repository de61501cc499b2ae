"""Certificate grid comparing exact left tails with the round-up Hoeffding bound."""
from collections.abc import Iterator
from fractions import Fraction
from typing import NamedTuple

import polars as pl

from src.hypergeom.bounds import as_fraction, format_upper, hoeffding_bound
from src.hypergeom.distribution import CumulativeTail, HypergeomParams


class GridPoint(NamedTuple):
    K: int
    N: int
    n: int
    q: Fraction
    tail: Fraction
    bound_upper: str
    holds: bool


def hypergrid(population_max: int, q_steps: int) -> Iterator[GridPoint]:
    """
    Every (K, N, n) with N <= population_max and every q = j / q_steps (0 <= j < q_steps)
    with K/N > q, in lexicographic order of (N, K, n, j).
    """
    quantiles = [Fraction(j, q_steps) for j in range(q_steps)]
    for big_n in range(1, population_max + 1):
        for k in range(big_n + 1):
            ratio = Fraction(k, big_n)
            active = [q for q in quantiles if ratio > q]
            if not active:
                continue
            for n in range(big_n + 1):
                tails = CumulativeTail(HypergeomParams(K=k, N=big_n, n=n))
                for q in active:
                    tail = tails.leq(q * n)
                    bound = hoeffding_bound(ratio - q, n)
                    yield GridPoint(
                        K=k,
                        N=big_n,
                        n=n,
                        q=q,
                        tail=tail,
                        bound_upper=format_upper(bound),
                        holds=tail <= as_fraction(bound),
                    )


def grid_frame(points: list[GridPoint]) -> pl.DataFrame:
    return pl.DataFrame(
        {
            "K": [pt.K for pt in points],
            "N": [pt.N for pt in points],
            "n": [pt.n for pt in points],
            "q": [f"{pt.q.numerator}/{pt.q.denominator}" for pt in points],
            "exact_tail_num": [str(pt.tail.numerator) for pt in points],
            "exact_tail_den": [str(pt.tail.denominator) for pt in points],
            "hoeffding_upper": [pt.bound_upper for pt in points],
            "holds": [pt.holds for pt in points],
        },
        schema={
            "K": pl.Int64,
            "N": pl.Int64,
            "n": pl.Int64,
            "q": pl.Utf8,
            "exact_tail_num": pl.Utf8,
            "exact_tail_den": pl.Utf8,
            "hoeffding_upper": pl.Utf8,
            "holds": pl.Boolean,
        },
    )
