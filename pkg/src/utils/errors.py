"""
Error hierarchy shared by every module.

Library code raises these and never exits the process; the harness maps them
to exit codes (see src.harness.commands.ExitCode).
"""
from typing import Any


class GammaError(Exception):
    """Base class of every error raised by the package."""


class PrefixRangeError(GammaError, IndexError):
    """A position or length lies outside the available prefix."""


class InsufficientPrefixError(GammaError):
    """A query needs more bits of a prefix than were built."""

    def __init__(self, message: str, required_length: int):
        super().__init__(f"{message} (required length {required_length})")
        self.required_length = required_length


class NoContainingIntervalError(GammaError, ValueError):
    """The position belongs to no interval of the scheme."""


class HypothesisFailure(GammaError):
    """The per-interval agreement hypothesis fails at interval n."""

    def __init__(self, n: int, agreement: Any, required: Any):
        super().__init__(f"hypothesis fails at interval {n}: agreement {agreement} < {required}")
        self.n = n
        self.agreement = agreement
        self.required = required


class SpecParseError(GammaError, ValueError):
    """A reduction or set expression could not be parsed."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class ParameterError(GammaError, ValueError):
    """Stage parameters cannot be derived from the given inputs."""


class SelectionFailure(GammaError):
    """Rejection sampling of the forcing set ran out of retries."""

    def __init__(self, message: str, violated: list[Any], retries: int):
        super().__init__(f"{message}: {len(violated)} violated constraint(s) after {retries} retries")
        self.violated = violated
        self.retries = retries


class ConstructionAborted(GammaError):
    """A stage failed; carries everything built before the failure."""

    def __init__(self, message: str, ledger: list[Any], prefix: Any):
        super().__init__(message)
        self.ledger = ledger
        self.prefix = prefix


class ResourceError(GammaError):
    """A requested run would exceed a configured size cap."""


class BitFileError(GammaError, ValueError):
    """A bit file is malformed."""
