"""
Seeded uniform sampling without replacement.

Algorithm (fixed so seeds are portable): a numpy PCG64 generator drives a partial
Fisher-Yates shuffle over the implicit index range [0, universe_size). Step i draws
j uniformly from [i, universe_size) with Generator.integers and swaps positions i
and j; only swapped positions are stored, so memory is O(r).
"""
import numpy as np

SeedValue = int | np.random.Generator


def make_generator(seed: SeedValue) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed < 0:
        raise ValueError(f"seeds are non-negative integers, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def stage_generator(master_seed: int, stage: int) -> np.random.Generator:
    """Per-stage generator: SeedSequence([master_seed, stage]) mixes the two integers."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, stage])))


def sample_without_replacement(universe_size: int, r: int, seed: SeedValue) -> frozenset[int]:
    """Uniform r-subset of [0, universe_size)."""
    if r < 0 or r > universe_size:
        raise ValueError(f"cannot draw {r} elements from a universe of {universe_size}")
    rng = make_generator(seed)
    swapped: dict[int, int] = {}
    chosen: list[int] = []
    for i in range(r):
        j = int(rng.integers(i, universe_size))
        value_j = swapped.get(j, j)
        swapped[j] = swapped.get(i, i)
        chosen.append(value_j)
    return frozenset(chosen)
