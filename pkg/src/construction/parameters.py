"""
Stage parameters: the small/medium cutoff M, the zero block length K, the window
length N and the constraint set of one stage.
"""
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import ceil
from typing import NamedTuple, TypeVar

from src.construction.records import BoundMode, Constraint, ConstructionConfig
from src.hypergeom import HypergeomParams, as_fraction, exp_upper, failure_probability
from src.intervals import IntervalScheme, intervals_meeting
from src.reductions import ReductionSpec, partition_interval
from src.utils.errors import ParameterError, ResourceError
from src.utils.log_services import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
U = TypeVar("U")


class StageParameters(NamedTuple):
    M: int
    K: int
    N: int
    r: int
    window: range
    constraints: list[Constraint]
    union_bound: Fraction
    rounds: int


def ordered_map(task: Callable[[T], U], items: Sequence[T], workers: int) -> list[U]:
    """Maps in input order; the result does not depend on the thread count."""
    if workers <= 1 or len(items) <= 1:
        return [task(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, items))


def _tail_sum_small(stage: int, epsilon: Fraction, m: int) -> bool:
    """stage * r^m / (1 - r) < 1 for r = exp(-epsilon^3), with both exponentials rounded up."""
    cube = epsilon ** 3
    margin = 1 - as_fraction(exp_upper(-cube))
    if margin <= 0:
        raise ParameterError(f"epsilon = {epsilon} is too small for the working precision")
    return stage * as_fraction(exp_upper(-cube * m)) < margin


def choose_M(
        stage: int,
        L: int,
        epsilon: Fraction,
        prev_M: int,
        bound_mode: BoundMode = BoundMode.EXACT_FINITE,
) -> int:
    """
    Minimal M > prev_M with M >= L / epsilon. In hoeffding mode M must also make
    stage * sum_{n >= M} exp(-epsilon^3 n) < 1; the condition is vacuous at stage 0.
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    base = max(prev_M + 1, ceil(L / epsilon))
    if bound_mode is BoundMode.EXACT_FINITE or stage == 0 or _tail_sum_small(stage, epsilon, base):
        return base

    # gallop to a passing M, then bisect on the monotone condition
    low, high = base, base * 2
    while not _tail_sum_small(stage, epsilon, high):
        low, high = high, high * 2
    while high - low > 1:
        middle = (low + high) // 2
        if _tail_sum_small(stage, epsilon, middle):
            high = middle
        else:
            low = middle
    return high


def choose_K(stage: int, M: int, L: int, reductions: Sequence[ReductionSpec]) -> int:
    """Minimal K >= 1 such that every image of I_i (i < M) under f_e (e <= stage) is below L + K."""
    if M < 1:
        raise ParameterError(f"M must be at least 1, got {M}")
    covered = M * (M - 1) // 2  # I_1 .. I_{M-1} tile [0, covered)
    highest = -1
    for f in reductions[:stage + 1]:
        images = f.images(0, covered)
        if images:
            highest = max(highest, max(images))
    return max(1, highest + 1 - L)


def choose_N(L: int, K: int, p: Fraction, epsilon: Fraction) -> int:
    """
    Minimal N with (L + K + (p + eps) N) / (L + K + N) <= p + 2 eps
    and floor((p + eps) N) / N - p >= eps / 2.
    """
    if epsilon <= 0 or not 0 < p + epsilon < 1:
        raise ParameterError(f"need epsilon > 0 and 0 < p + epsilon < 1, got p = {p}, epsilon = {epsilon}")
    offset = L + K
    # first inequality rearranges to N >= offset (1 - p - 2 eps) / eps
    slack = offset * (1 - p - 2 * epsilon)
    n = max(1, ceil(slack / epsilon)) if slack > 0 else 1
    while (p + epsilon) * n // 1 < (p + epsilon / 2) * n:
        n += 1
    return n


def collect_constraints(
        stage: int,
        M: int,
        window: range,
        reductions: Sequence[ReductionSpec],
        epsilon: Fraction,
        n_horizon: int,
        workers: int = 1,
) -> list[Constraint]:
    """
    Pairs (n, e) with e <= stage, M <= n <= n_horizon and |J*| > 2 eps n whose J* meets
    the window, ordered by (e, n).
    """
    def candidates(e: int) -> Sequence[int]:
        # J* of the identity on I_n is I_n itself
        if reductions[e].is_identity:
            return [n for n in intervals_meeting(IntervalScheme.TRIANGULAR, window, n_horizon) if n >= M]
        return range(M, n_horizon + 1)

    pairs = [(e, n) for e in range(min(stage + 1, len(reductions))) for n in candidates(e)]

    def inspect(pair: tuple[int, int]) -> Constraint | None:
        e, n = pair
        j_star = partition_interval(reductions[e], n).j_star
        if len(j_star) <= 2 * epsilon * n:
            return None
        outside = sum(1 for y in j_star if y not in window)
        if outside == len(j_star):
            return None
        return Constraint(n=n, e=e, j_star=sorted(j_star), outside_count=outside)

    return [c for c in ordered_map(inspect, pairs, workers) if c is not None]


def union_bound(constraints: Iterable[Constraint], window_size: int, r: int, p: Fraction) -> Fraction:
    """
    Sum over constraints of the exact probability that a uniform r-subset misses its quota.

    A constraint fails when X < required, X the number of hits inside the window. Since X
    is an integer, Pr(X < required) = tail_leq(h, ceil(required) - 1), which is what
    failure_probability evaluates; for integral required this is Pr(X <= required - 1).
    """
    total = Fraction(0)
    for constraint in constraints:
        h = HypergeomParams(K=r, N=window_size, n=constraint.inside_count())
        total += failure_probability(h, constraint.required(p))
    return total


def derive_stage_parameters(stage: int, L: int, prev_M: int, config: ConstructionConfig) -> StageParameters:
    """
    Runs choose_M, choose_K, choose_N and collect_constraints; in exact-finite mode M is
    raised one step at a time until the exact union bound drops below 1.

    Raises:
        ParameterError: the union bound stays >= 1 after max_parameter_rounds raises.
        ResourceError: the stage would exceed max_prefix_bits.
    """
    epsilon = config.epsilon(stage)
    M = choose_M(stage, L, epsilon, prev_M, config.bound_mode)
    reductions = config.reductions

    for rounds in range(config.max_parameter_rounds + 1):
        if M * (M - 1) // 2 > config.max_prefix_bits:
            raise ResourceError(f"stage {stage}: M = {M} needs images of {M * (M - 1) // 2} positions")
        K = choose_K(stage, M, L, reductions)
        N = choose_N(L, K, config.p, epsilon)
        if L + K + N > config.max_prefix_bits:
            raise ResourceError(
                f"stage {stage} would reach length {L + K + N} > max_prefix_bits = {config.max_prefix_bits}"
            )
        r = (config.p + epsilon) * N // 1
        window = range(L + K, L + K + N)
        constraints = collect_constraints(stage, M, window, reductions, epsilon, config.n_horizon, config.workers)
        bound = union_bound(constraints, N, int(r), config.p)
        logger.debug(f"stage {stage} round {rounds}: M={M} K={K} N={N} constraints={len(constraints)} bound={float(bound):.4g}")
        if config.bound_mode is BoundMode.HOEFFDING or bound < 1:
            return StageParameters(M, K, N, int(r), window, constraints, bound, rounds)
        M += 1

    raise ParameterError(
        f"stage {stage}: exact union bound still >= 1 after {config.max_parameter_rounds} increases of M"
    )
