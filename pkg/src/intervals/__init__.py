from src.intervals.schemes import (
    IntervalScheme,
    interval_bounds,
    interval_index,
    interval_length,
    intervals_meeting,
)

__all__ = [
    "IntervalScheme",
    "interval_bounds",
    "interval_index",
    "interval_length",
    "intervals_meeting",
]
