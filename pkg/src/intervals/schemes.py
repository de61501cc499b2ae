"""
Interval schemes over the natural numbers.

Triangular intervals I_1, I_2, ... have lengths 1, 2, 3, ... and tile [0, inf):
I_n = [n(n-1)/2, n(n+1)/2).  Factorial intervals I_n = [n!, (n+1)!) for n >= 1
tile [1, inf); position 0 lies in none of them.
"""
from enum import Enum
from math import factorial, isqrt

from src.utils.errors import NoContainingIntervalError


class IntervalScheme(Enum):
    TRIANGULAR = "triangular"
    FACTORIAL = "factorial"


def _require_index(n: int) -> None:
    if n < 1:
        raise ValueError(f"interval indices start at 1, got {n}")


def interval_bounds(scheme: IntervalScheme, n: int) -> range:
    """Half-open range of positions making up I_n."""
    _require_index(n)
    if scheme is IntervalScheme.TRIANGULAR:
        return range(n * (n - 1) // 2, n * (n + 1) // 2)
    return range(factorial(n), factorial(n + 1))


def interval_index(scheme: IntervalScheme, x: int) -> int:
    """The unique n with x in I_n."""
    if x < 0:
        raise ValueError(f"positions are natural numbers, got {x}")
    if scheme is IntervalScheme.TRIANGULAR:
        # largest n with n(n-1)/2 <= x, i.e. 2n - 1 <= isqrt(8x + 1)
        return (isqrt(8 * x + 1) + 1) // 2
    if x == 0:
        raise NoContainingIntervalError("position 0 lies in no factorial interval")
    n, upper = 1, 2
    while upper <= x:
        n += 1
        upper *= n + 1
    return n


def intervals_meeting(scheme: IntervalScheme, window: range, n_max: int) -> list[int]:
    """All n <= n_max whose interval intersects the window."""
    _require_index(n_max)
    start, stop = window.start, window.stop
    if scheme is IntervalScheme.FACTORIAL:
        start = max(start, 1)
    if stop <= start:
        return []
    first = interval_index(scheme, start)
    last = min(interval_index(scheme, stop - 1), n_max)
    return list(range(first, last + 1))


def interval_length(scheme: IntervalScheme, n: int) -> int:
    _require_index(n)
    if scheme is IntervalScheme.TRIANGULAR:
        return n
    return n * factorial(n)
