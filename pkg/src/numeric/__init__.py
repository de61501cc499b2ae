from src.numeric.claims import Claim1Outcome, bookkeeping_constants, check_hypothesis, claim1_check
from src.numeric.density import (
    DensityProfile,
    agreement_count,
    agreement_positions,
    agreement_profile,
    density_profile,
    prefix_density,
    tail_min_density,
)
from src.numeric.prefix import SetPrefix

__all__ = [
    "Claim1Outcome",
    "DensityProfile",
    "SetPrefix",
    "agreement_count",
    "agreement_positions",
    "agreement_profile",
    "bookkeeping_constants",
    "check_hypothesis",
    "claim1_check",
    "density_profile",
    "prefix_density",
    "tail_min_density",
]
