from src.reductions.grammar import parse_expression
from src.reductions.specs import ReductionField, ReductionSpec, SetField, SetSpec, eval_reduction, parse_specs
from src.reductions.split import (
    IntervalDecomposition,
    Multiset,
    StarSplit,
    be_membership,
    be_prefix,
    bstar_membership,
    bstar_prefix,
    decompose_interval,
    determined_length,
    multiset_image,
    partition_interval,
    star_split_multiset,
)

__all__ = [
    "IntervalDecomposition",
    "Multiset",
    "ReductionField",
    "ReductionSpec",
    "SetField",
    "SetSpec",
    "StarSplit",
    "be_membership",
    "be_prefix",
    "bstar_membership",
    "bstar_prefix",
    "decompose_interval",
    "determined_length",
    "eval_reduction",
    "multiset_image",
    "parse_expression",
    "parse_specs",
    "partition_interval",
    "star_split_multiset",
]
