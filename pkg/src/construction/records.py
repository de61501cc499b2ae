"""
Configuration, ledger and report models of the stage-wise construction.

All models are pydantic; exact rationals travel as "a/b" strings and reduction or
set expressions as their canonical text, so a ledger line or a report can be
re-read into the same objects.
"""
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

from fractions import Fraction
from pathlib import Path
from typing import Literal

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
import yaml  # type: ignore

from src.configmodels.config_types import Rational
from src.reductions import ReductionField, ReductionSpec, SetField, SetSpec
from src.utils.errors import ParameterError
from src.utils.log_services import get_logger

logger = get_logger(__name__)

HALF = Fraction(1, 2)


class BoundMode(StrEnum):
    HOEFFDING = "hoeffding"
    EXACT_FINITE = "exact-finite"


class ConstructionConfig(BaseModel):
    """
    Inputs of one construction run.

    Attributes:
        p: target value in [0, 1/2].
        epsilons: explicit strictly decreasing positive error schedule; stages past its
            end continue geometrically with epsilon_ratio.
        set_family: the sets C_l, cycled so each recurs infinitely often.
        reductions: the reductions f_e; the identity must be among them.
        stages: number of stages to build.
        n_horizon: largest interval index considered for constraints and checks.
        seed: master seed; stage seeds derive from it and the stage index.
        max_retries: rejection-sampling budget per stage.
        bound_mode: exact-finite certifies the exact union bound; hoeffding sizes M by
            the tail-sum condition.
        enforce_smallness: turn the two smallness inequalities on the first epsilon
            into hard errors instead of warnings.
        max_prefix_bits: cap on the length of the built prefix.
        max_parameter_rounds: cap on M increases while certifying the exact union bound.
        workers: threads for constraint collection and verification.
    """
    model_config = ConfigDict(frozen=True)

    p: Rational
    epsilons: list[Rational] = Field(min_length=1)
    epsilon_ratio: Rational = Fraction(1, 2)
    set_family: list[SetField] = Field(min_length=1)
    reductions: list[ReductionField] = Field(min_length=1)
    stages: int = Field(ge=0)
    n_horizon: int = Field(ge=1)
    seed: int = Field(ge=0)
    max_retries: int = Field(default=1000, ge=0)
    bound_mode: BoundMode = BoundMode.EXACT_FINITE
    enforce_smallness: bool = False
    max_prefix_bits: int = Field(default=10 ** 7, ge=1)
    max_parameter_rounds: int = Field(default=256, ge=0)
    workers: int = Field(default=1, ge=1)

    @field_validator("p")
    @classmethod
    def check_p(cls, value: Fraction) -> Fraction:
        if not 0 <= value <= HALF:
            raise ValueError(f"p must lie in [0, 1/2], got {value}")
        return value

    @field_validator("epsilons")
    @classmethod
    def check_epsilons(cls, values: list[Fraction]) -> list[Fraction]:
        if any(v <= 0 for v in values):
            raise ValueError("every epsilon must be positive")
        if any(b >= a for a, b in zip(values, values[1:])):
            raise ValueError("epsilons must be strictly decreasing")
        return values

    @field_validator("epsilon_ratio")
    @classmethod
    def check_ratio(cls, value: Fraction) -> Fraction:
        if not 0 < value < 1:
            raise ValueError(f"epsilon_ratio must lie in (0, 1), got {value}")
        return value

    @field_validator("reductions")
    @classmethod
    def check_identity(cls, values: list[ReductionSpec]) -> list[ReductionSpec]:
        if not any(f.is_identity for f in values):
            raise ValueError("the identity reduction 'x' must be among the reductions")
        return values

    @model_validator(mode="after")
    def check_schedule(self) -> Self:
        first = self.epsilons[0]
        if self.p + first >= 1:
            raise ValueError(f"p + epsilon_0 = {self.p + first} must stay below 1")
        if 0 < self.p < HALF:
            problems = []
            if self.p - first <= 0:
                problems.append(f"p - epsilon_0 = {self.p - first} is not positive")
            if self.p + first >= HALF:
                problems.append(f"p + epsilon_0 = {self.p + first} is not below 1/2")
            for problem in problems:
                if self.enforce_smallness:
                    raise ValueError(problem)
                logger.warning(f"smallness condition relaxed: {problem}")
        return self

    def epsilon(self, stage: int) -> Fraction:
        if stage < len(self.epsilons):
            return self.epsilons[stage]
        return self.epsilons[-1] * self.epsilon_ratio ** (stage - len(self.epsilons) + 1)

    def set_for_stage(self, stage: int) -> SetSpec:
        return self.set_family[stage % len(self.set_family)]

    def active_reductions(self, stage: int) -> list[tuple[int, ReductionSpec]]:
        """The pairs (e, f_e) with e <= stage."""
        return list(enumerate(self.reductions[:stage + 1]))

    @property
    def endpoint_label(self) -> str | None:
        if self.p == 0:
            return "vacuous"
        if self.p == HALF:
            return "extension"
        return None

    @classmethod
    def from_yaml(cls, path: Path) -> "ConstructionConfig":
        """
        Reads a construction config from YAML (JSON documents load the same way).

        Raises:
            FileNotFoundError: the file does not exist.
            yaml.YAMLError: the file is not valid YAML.
            ValidationError: the content violates a config invariant.
        """
        with path.open("r", encoding="utf-8") as f:
            data = yaml.load(f, Loader=yaml.SafeLoader)
        if not isinstance(data, dict):
            raise ParameterError(f"{path} does not hold a mapping")
        return cls(**data)


class Constraint(BaseModel):
    """One member (n, e) of the constraint set with J* meeting the stage window."""
    model_config = ConfigDict(frozen=True)

    n: int
    e: int
    j_star: list[int]
    outside_count: int

    def required(self, p: Fraction) -> Fraction:
        """Hits S must score inside the window: p |J*| - |J* outside the window|."""
        return p * len(self.j_star) - self.outside_count

    def inside_count(self) -> int:
        return len(self.j_star) - self.outside_count

    def satisfied_by(self, forcing_set: frozenset[int], p: Fraction) -> bool:
        hits = sum(1 for y in self.j_star if y in forcing_set)
        return hits >= self.required(p)


class StageRecord(BaseModel):
    """Everything chosen at one stage; one JSON line of the ledger."""
    model_config = ConfigDict(frozen=True)

    stage: int
    L: int
    M: int
    K: int
    N: int
    r: int
    epsilon: Rational
    window_start: int
    window_stop: int
    S: list[int]
    constraints: list[Constraint]
    retries: int
    union_bound: Rational
    parameter_rounds: int = 0

    @property
    def window(self) -> range:
        return range(self.window_start, self.window_stop)

    @property
    def checkpoint(self) -> int:
        return self.L + self.K + self.N


ClauseName = Literal["a", "a-chain", "b", "c", "d*", "d**", "structural"]
ClauseStatus = Literal["pass", "fail", "deferred", "vacuous"]


class ClauseResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    clause: ClauseName
    stage: int
    e: int | None = None
    n: int | None = None
    lhs: Rational | None = None
    rhs: Rational | None = None
    status: ClauseStatus
    detail: str = ""


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: Rational
    stages: int
    prefix_length: int
    bound_mode: BoundMode
    label: str | None
    passed: bool
    clauses: list[ClauseResult]

    def failures(self) -> list[ClauseResult]:
        return [c for c in self.clauses if c.status == "fail"]

    def count(self, status: ClauseStatus) -> int:
        return sum(1 for c in self.clauses if c.status == status)

    def summary(self) -> str:
        lines = [
            f"verdict: {'PASS' if self.passed else 'FAIL'}",
            f"p = {self.p}, stages = {self.stages}, prefix length = {self.prefix_length}, mode = {self.bound_mode}",
        ]
        if self.label:
            lines.append(f"label: {self.label}")
        for name in ("structural", "a", "a-chain", "b", "c", "d*", "d**"):
            selected = [c for c in self.clauses if c.clause == name]
            if not selected:
                continue
            tally = {status: sum(1 for c in selected if c.status == status)
                     for status in ("pass", "fail", "deferred", "vacuous")}
            shown = ", ".join(f"{k} {v}" for k, v in tally.items() if v)
            lines.append(f"clause {name}: {shown}")
        for failure in self.failures():
            where = f"stage {failure.stage}" + (f", e = {failure.e}" if failure.e is not None else "") \
                + (f", n = {failure.n}" if failure.n is not None else "")
            lines.append(f"FAILED {failure.clause} at {where}: {failure.lhs} vs {failure.rhs} {failure.detail}".rstrip())
        return "\n".join(lines) + "\n"
