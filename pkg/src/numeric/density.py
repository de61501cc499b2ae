"""
Exact density and agreement computations.

All values are fractions.Fraction (normalized to lowest terms on construction);
nothing in this module touches floating point.
"""
from collections.abc import Collection, Sequence
from fractions import Fraction
from pathlib import Path

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import numpy as np
import polars as pl
from pydantic import BaseModel, ConfigDict, model_validator

from src.configmodels.config_types import Rational
from src.numeric.prefix import SetPrefix
from src.utils.errors import PrefixRangeError

PROFILE_COLUMNS = ("checkpoint", "numerator", "denominator")


def _require_covered(n: int, *prefixes: SetPrefix) -> None:
    if n < 0:
        raise PrefixRangeError(f"position bound must be non-negative, got {n}")
    for prefix in prefixes:
        if n > prefix.length:
            raise PrefixRangeError(f"n = {n} exceeds prefix length {prefix.length}")


def agreement_positions(a: SetPrefix, r: SetPrefix, n: int) -> frozenset[int]:
    """(A <-> R) restricted to [0, n)."""
    _require_covered(n, a, r)
    return frozenset(np.flatnonzero(a.bits[:n] == r.bits[:n]).tolist())


def agreement_count(a: SetPrefix, r: SetPrefix, n: int) -> int:
    """|(A <-> R) restricted to [0, n)|, without materializing the set."""
    _require_covered(n, a, r)
    return int(np.count_nonzero(a.bits[:n] == r.bits[:n]))


def prefix_density(s: Collection[int] | SetPrefix, n: int) -> Fraction:
    """|s restricted to [0, n)| / n."""
    if n <= 0:
        raise ZeroDivisionError("density is undefined on an empty initial segment")
    if isinstance(s, SetPrefix):
        _require_covered(n, s)
        return Fraction(s.count(0, n), n)
    return Fraction(sum(1 for x in s if 0 <= x < n), n)


class DensityProfile(BaseModel):
    """
    Finite evidence for a lower density: the quotient |Z restricted to [0,n)| / n
    sampled at increasing checkpoints n.
    """
    model_config = ConfigDict(frozen=True)

    checkpoints: list[int]
    values: list[Rational]

    @model_validator(mode="after")
    def check_alignment(self) -> Self:
        if len(self.checkpoints) != len(self.values):
            raise ValueError("checkpoints and values must have the same length")
        if any(c <= 0 for c in self.checkpoints):
            raise ValueError("checkpoints are positive positions")
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if any(not 0 <= v <= 1 for v in self.values):
            raise ValueError("densities lie in [0, 1]")
        return self

    def __len__(self) -> int:
        return len(self.checkpoints)

    def to_frame(self) -> pl.DataFrame:
        # big integers travel as decimal strings so no precision is lost in CSV
        return pl.DataFrame(
            {
                "checkpoint": self.checkpoints,
                "numerator": [str(v.numerator) for v in self.values],
                "denominator": [str(v.denominator) for v in self.values],
            },
            schema={"checkpoint": pl.Int64, "numerator": pl.Utf8, "denominator": pl.Utf8},
        )

    def write_csv(self, path: Path) -> None:
        self.to_frame().write_csv(path)

    @classmethod
    def read_csv(cls, path: Path) -> "DensityProfile":
        frame = pl.read_csv(path, schema_overrides={"numerator": pl.Utf8, "denominator": pl.Utf8})
        missing = set(PROFILE_COLUMNS) - set(frame.columns)
        if missing:
            raise ValueError(f"profile CSV lacks columns {sorted(missing)}")
        return cls(
            checkpoints=frame["checkpoint"].to_list(),
            values=[Fraction(int(num), int(den)) for num, den in zip(frame["numerator"], frame["denominator"])],
        )


def tail_min_density(profile: DensityProfile, from_index: int) -> Fraction:
    """Minimum profile value over checkpoints with index >= from_index."""
    if not 0 <= from_index < len(profile):
        raise ValueError(f"empty tail: from_index {from_index} with {len(profile)} checkpoint(s)")
    return min(profile.values[from_index:])


def density_profile(s: SetPrefix, checkpoints: Sequence[int]) -> DensityProfile:
    """|S restricted to [0,n)| / n at each checkpoint n."""
    return _profile_from_indicator(s.bits, checkpoints)


def agreement_profile(a: SetPrefix, r: SetPrefix, checkpoints: Sequence[int]) -> DensityProfile:
    """Density profile of the agreement set A <-> R."""
    limit = max(checkpoints, default=0)
    _require_covered(limit, a, r)
    return _profile_from_indicator(a.bits[:limit] == r.bits[:limit], checkpoints)


def _profile_from_indicator(indicator: np.ndarray, checkpoints: Sequence[int]) -> DensityProfile:
    if not checkpoints:
        return DensityProfile(checkpoints=[], values=[])
    if max(checkpoints) > indicator.size:
        raise PrefixRangeError(f"checkpoint {max(checkpoints)} beyond prefix length {indicator.size}")
    running = np.cumsum(indicator, dtype=np.int64)
    return DensityProfile(
        checkpoints=list(checkpoints),
        values=[Fraction(int(running[c - 1]), c) for c in checkpoints],
    )
