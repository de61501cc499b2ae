"""Rejection sampling of the forcing set S inside a stage window."""
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from src.construction.parameters import union_bound
from src.construction.records import BoundMode, Constraint
from src.hypergeom import sample_without_replacement
from src.utils.errors import ParameterError, SelectionFailure
from src.utils.log_services import get_logger

logger = get_logger(__name__)


def violated_constraints(forcing_set: frozenset[int], constraints: Sequence[Constraint], p: Fraction) -> list[Constraint]:
    return [c for c in constraints if not c.satisfied_by(forcing_set, p)]


def choose_S(
        window: range,
        r: int,
        constraints: Sequence[Constraint],
        p: Fraction,
        rng: np.random.Generator,
        max_retries: int,
        bound_mode: BoundMode = BoundMode.EXACT_FINITE,
) -> tuple[frozenset[int], int]:
    """
    Draws uniform r-subsets of the window until one satisfies every constraint.

    :return: the accepted set and the number of rejected samples before it.
    :raises ParameterError: exact-finite mode and the exact union bound is not below 1.
    :raises SelectionFailure: max_retries rejections without success; carries the
        constraints violated by the last sample.
    """
    if r > len(window):
        raise ParameterError(f"cannot force {r} positions in a window of {len(window)}")
    if bound_mode is BoundMode.EXACT_FINITE and constraints:
        bound = union_bound(constraints, len(window), r, p)
        if bound >= 1:
            raise ParameterError(f"exact union bound {bound} is not below 1")

    violated: list[Constraint] = []
    for attempt in range(max_retries + 1):
        offsets = sample_without_replacement(len(window), r, rng)
        forcing_set = frozenset(window.start + i for i in offsets)
        violated = violated_constraints(forcing_set, constraints, p)
        if not violated:
            if attempt:
                logger.info(f"forcing set accepted after {attempt} rejected sample(s)")
            return forcing_set, attempt
        logger.debug(f"sample {attempt} violates {len(violated)} constraint(s)")
    raise SelectionFailure("no admissible forcing set found", violated, max_retries)
