from src.construction.builder import build_prefix, run_stage
from src.construction.forcing import choose_S, violated_constraints
from src.construction.parameters import (
    StageParameters,
    choose_K,
    choose_M,
    choose_N,
    collect_constraints,
    derive_stage_parameters,
    union_bound,
)
from src.construction.records import (
    BoundMode,
    ClauseResult,
    Constraint,
    ConstructionConfig,
    StageRecord,
    VerificationReport,
)
from src.construction.verifier import verify_construction

__all__ = [
    "BoundMode",
    "ClauseResult",
    "Constraint",
    "ConstructionConfig",
    "StageParameters",
    "StageRecord",
    "VerificationReport",
    "build_prefix",
    "choose_K",
    "choose_M",
    "choose_N",
    "choose_S",
    "collect_constraints",
    "derive_stage_parameters",
    "run_stage",
    "union_bound",
    "verify_construction",
    "violated_constraints",
]
