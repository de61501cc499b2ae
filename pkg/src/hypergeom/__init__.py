from src.hypergeom.bounds import as_fraction, exp_upper, format_upper, hoeffding_bound
from src.hypergeom.distribution import (
    CumulativeTail,
    HypergeomParams,
    binomial,
    failure_probability,
    pmf,
    tail_leq,
)
from src.hypergeom.grid import GridPoint, grid_frame, hypergrid
from src.hypergeom.sampling import make_generator, sample_without_replacement, stage_generator

__all__ = [
    "CumulativeTail",
    "GridPoint",
    "HypergeomParams",
    "as_fraction",
    "binomial",
    "exp_upper",
    "failure_probability",
    "format_upper",
    "grid_frame",
    "hoeffding_bound",
    "hypergrid",
    "make_generator",
    "pmf",
    "sample_without_replacement",
    "stage_generator",
    "tail_leq",
]
