from src.harness.commands import (
    COMMANDS,
    ConstructCommand,
    ExitCode,
    ExperimentCommand,
    GammaCommand,
    HalfboundCommand,
    HypergridCommand,
    VerifyCommand,
    read_ledger,
    run_command,
    write_ledger,
)
from src.harness.gamma import GammaEstimate, estimate_gamma, geometric_checkpoints
from src.reductions import parse_specs

__all__ = [
    "COMMANDS",
    "ConstructCommand",
    "ExitCode",
    "ExperimentCommand",
    "GammaCommand",
    "GammaEstimate",
    "HalfboundCommand",
    "HypergridCommand",
    "VerifyCommand",
    "estimate_gamma",
    "geometric_checkpoints",
    "parse_specs",
    "read_ledger",
    "run_command",
    "write_ledger",
]
