"""
Round-up exponentials and the Hoeffding tail bound.

For X ~ H(K, N, n) with p = K/N > q and t = p - q:

    Pr(X <= q n) <= exp(-2 t^2 n)

The bound is only ever used as an upper estimate, so every exponential is
computed with directed rounding toward +inf at WORKING_PRECISION bits and
then padded by a few ulps. Comparisons against exact tails convert the
binary result to a Fraction without loss.
"""
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.libmp import from_rational, mpf_exp, mpf_mul, to_rational

WORKING_PRECISION = 128
ROUND_UP = "c"
_PAD_BITS = WORKING_PRECISION - 4
# 1 + 2^-(prec-4): covers an exp that is off by a few ulps
_PAD = from_rational(2 ** _PAD_BITS + 1, 2 ** _PAD_BITS, WORKING_PRECISION, ROUND_UP)


@lru_cache(maxsize=65536)
def exp_upper(exponent: Fraction) -> mpmath.mpf:
    """An upper bound for exp(exponent), exact when exponent == 0."""
    if exponent == 0:
        return mpmath.mpf(1)
    argument = from_rational(exponent.numerator, exponent.denominator, WORKING_PRECISION, ROUND_UP)
    value = mpf_exp(argument, WORKING_PRECISION, ROUND_UP)
    return mpmath.mpf(mpf_mul(value, _PAD, WORKING_PRECISION, ROUND_UP))


def as_fraction(value: mpmath.mpf) -> Fraction:
    """Exact rational value of a binary float."""
    numerator, denominator = to_rational(value._mpf_)
    return Fraction(numerator, denominator)


def hoeffding_bound(t: Fraction, n: int) -> mpmath.mpf:
    """exp(-2 t^2 n) rounded up."""
    if t <= 0:
        raise ValueError(f"the tail bound needs t > 0, got {t}")
    if n < 0:
        raise ValueError(f"n counts elements, got {n}")
    return exp_upper(-2 * t * t * n)


def format_upper(value: mpmath.mpf, digits: int = 40) -> str:
    """Decimal string that is never below value: rounds the exact value up at the last digit."""
    exact = as_fraction(value)
    scale = 10 ** digits
    scaled = -((-exact.numerator * scale) // exact.denominator)
    whole, fraction_part = divmod(scaled, scale)
    return f"{whole}.{fraction_part:0{digits}d}"
