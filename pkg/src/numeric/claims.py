"""
Checker for the step from per-interval agreement to lower density.

Given the agreement ratios a_n = |(B <-> B*) restricted to I_n| / n over the
triangular intervals and a non-increasing error sequence gamma_n, the
hypothesis a_n >= p - gamma_n forces the prefix agreement density at any
x in I_{N+1} to be at least ((N-1)/(N+1)) (p - gamma_m), where m is the largest
index whose bookkeeping constant K_m is at most N.

K_m is the first interval count K from which the cumulative agreement ratio over
I_1 .. I_K' stays at or above p - gamma_m for every supplied K' >= K.
"""
from collections.abc import Sequence
from fractions import Fraction
from typing import NamedTuple

from src.intervals import IntervalScheme, interval_bounds, interval_index
from src.numeric.prefix import SetPrefix
from src.utils.errors import HypothesisFailure, PrefixRangeError
from src.utils.log_services import get_logger

logger = get_logger(__name__)


class Claim1Outcome(NamedTuple):
    bound: Fraction
    holds: bool
    m: int | None
    big_n: int
    actual: Fraction


def check_hypothesis(
        per_interval_agreement: Sequence[Fraction],
        gammas: Sequence[Fraction],
        p: Fraction,
        start_index: int = 1,
) -> None:
    """Raises HypothesisFailure at the first n >= start_index with a_n < p - gamma_n."""
    for n, (agreement, gamma) in enumerate(zip(per_interval_agreement, gammas), start=1):
        if n >= start_index and agreement < p - gamma:
            raise HypothesisFailure(n, agreement, p - gamma)


def bookkeeping_constants(
        per_interval_agreement: Sequence[Fraction],
        gammas: Sequence[Fraction],
        p: Fraction,
) -> list[int | None]:
    """K_m for m = 1 .. len(gammas); None where no supplied K qualifies."""
    cumulative: list[Fraction] = []
    agreed, covered = Fraction(0), 0
    for n, ratio in enumerate(per_interval_agreement, start=1):
        agreed += ratio * n
        covered += n
        cumulative.append(agreed / covered)

    # suffix minima: tail[k] = min of cumulative[k:]
    tail = cumulative[:]
    for k in range(len(tail) - 2, -1, -1):
        tail[k] = min(tail[k], tail[k + 1])

    constants: list[int | None] = []
    for gamma in gammas:
        target = p - gamma
        constants.append(next((k + 1 for k, value in enumerate(tail) if value >= target), None))
    return constants


def claim1_check(
        per_interval_agreement: Sequence[Fraction],
        gammas: Sequence[Fraction],
        p: Fraction,
        x: int,
        agreement: SetPrefix | None = None,
        start_index: int = 1,
) -> Claim1Outcome:
    """
    Evaluates the lower bound at position x and whether the actual prefix agreement
    density |agreement restricted to [0, x]| / (x + 1) meets it.

    :param per_interval_agreement: a_n for n = 1, 2, ... (index 0 holds a_1).
    :param gammas: gamma_n for n = 1, 2, ..., non-increasing and non-negative.
    :param p: target density.
    :param x: position inside I_{N+1} with N >= 2.
    :param agreement: optional raw agreement set; without it the complete intervals
        I_1 .. I_N stand in for [0, x], which can only under-count.
    :param start_index: first interval at which the hypothesis is required.
    """
    if len(gammas) < len(per_interval_agreement):
        raise ValueError("every supplied interval needs its gamma")
    if any(g < 0 for g in gammas) or any(b > a for a, b in zip(gammas, gammas[1:])):
        raise ValueError("gammas must be non-negative and non-increasing")
    check_hypothesis(per_interval_agreement, gammas, p, start_index)

    big_n = interval_index(IntervalScheme.TRIANGULAR, x) - 1
    if big_n < 2:
        raise ValueError(f"x = {x} must lie in I_(N+1) with N >= 2")
    if big_n > len(per_interval_agreement):
        raise PrefixRangeError(f"x = {x} needs agreement data for I_1 .. I_{big_n}")

    if agreement is not None:
        if agreement.length <= x:
            raise PrefixRangeError(f"agreement prefix of length {agreement.length} does not reach {x}")
        for n, ratio in enumerate(per_interval_agreement, start=1):
            span = interval_bounds(IntervalScheme.TRIANGULAR, n)
            if span.stop <= agreement.length and Fraction(agreement.count(span.start, span.stop), n) != ratio:
                raise ValueError(f"agreement ratio of I_{n} disagrees with the agreement set")
        actual = Fraction(agreement.count(0, x + 1), x + 1)
    else:
        counted = sum((ratio * n for n, ratio in enumerate(per_interval_agreement[:big_n], start=1)), Fraction(0))
        actual = counted / (x + 1)

    constants = bookkeeping_constants(per_interval_agreement, gammas, p)
    eligible = [m for m, k in enumerate(constants, start=1) if k is not None and k <= big_n]
    if not eligible:
        logger.debug(f"no bookkeeping constant reaches N = {big_n}; bound is trivial")
        return Claim1Outcome(bound=Fraction(0), holds=actual >= 0, m=None, big_n=big_n, actual=actual)

    m = max(eligible)
    bound = Fraction(big_n - 1, big_n + 1) * (p - gammas[m - 1])
    return Claim1Outcome(bound=bound, holds=actual >= bound, m=m, big_n=big_n, actual=actual)
