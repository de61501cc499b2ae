from src.halfbound.amplify import (
    DEFAULT_N_MAX_CAP,
    AmplifiedSet,
    checkpoint_agreement,
    corrupt,
    decode_bit,
    decode_range,
    encode,
    majority_margin,
    misdecode_budget,
    safe_budget,
)

__all__ = [
    "DEFAULT_N_MAX_CAP",
    "AmplifiedSet",
    "checkpoint_agreement",
    "corrupt",
    "decode_bit",
    "decode_range",
    "encode",
    "majority_margin",
    "misdecode_budget",
    "safe_budget",
]
