"""
Harness Configuration Module

Configuration classes for the command-line harness: the process-wide settings read
from the environment, the per-invocation ExperimentManifest, and the YAML configs of
the gamma, hypergrid and halfbound commands. Construction runs are configured by
src.construction.ConstructionConfig.

Classes:
    HarnessSettings: GAMMA_* environment variables and the optional .env.harness file
    CommandName: the commands the CLI offers
    ExperimentManifest: one CLI invocation (command, paths, overrides, verbosity)
    GammaConfig: target, approximators and checkpoints of a gamma estimate
    HypergridConfig: bounds of the hypergeometric certificate grid
    HalfboundConfig: encode/corrupt/decode trial parameters

Constants:
    ROOT_DIR: Project root directory path
    CONFIG_DIR: Directory of the shipped YAML configurations
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
from pydantic_settings import BaseSettings, SettingsConfigDict
import yaml  # type: ignore

from src.configmodels.config_types import Rational, pydantic_config
from src.construction.records import BoundMode
from src.reductions import ReductionField, SetField
from src.utils.errors import ParameterError

ROOT_DIR = Path(__file__).resolve().parents[2]
CONFIG_DIR = ROOT_DIR / "yaml_configurations"


def load_yaml(cls: type[pydantic_config], path: Path) -> pydantic_config:
    """
    Builds a config model from a YAML (or JSON) file.

    Raises:
        FileNotFoundError: the file does not exist.
        yaml.YAMLError: the file cannot be parsed.
        ValidationError: the content does not match the model.
    """
    with path.open("r", encoding="utf-8") as f:
        data = yaml.load(f, Loader=yaml.SafeLoader)
    if not isinstance(data, dict):
        raise ParameterError(f"{path} does not hold a mapping")
    return cls(**data)


class HarnessSettings(BaseSettings):
    """
    Process-wide settings of the harness.

    Attributes:
        log_dir: folder of the log file; None logs to stdout only.
        output_dir: default artifact directory when --out is not given.
        halfbound_cap: largest n_max the halfbound command accepts.
        workers: default thread count for construction and verification.
    """
    model_config = SettingsConfigDict(env_prefix="GAMMA_", env_file=".env.harness", extra="ignore")

    log_dir: Path | None = None
    output_dir: Path = Path("runs")
    halfbound_cap: int = Field(default=8, ge=1)
    workers: int = Field(default=1, ge=1)


class CommandName(StrEnum):
    CONSTRUCT = "construct"
    VERIFY = "verify"
    GAMMA = "gamma"
    HYPERGRID = "hypergrid"
    HALFBOUND = "halfbound"


Verbosity = Literal["quiet", "normal", "verbose"]


class ExperimentManifest(BaseModel):
    """One CLI invocation: which command, which config, where artifacts go, and overrides."""
    model_config = ConfigDict(frozen=True)

    command: CommandName
    config_path: Path
    output_dir: Path
    seed: int | None = Field(default=None, ge=0, lt=2 ** 64)
    stages: int | None = Field(default=None, ge=0)
    horizon: int | None = Field(default=None, ge=1)
    bound_mode: BoundMode | None = None
    n_max_override: int | None = Field(default=None, ge=1)
    verbosity: Verbosity = "normal"

    @field_validator("config_path")
    @classmethod
    def check_config(cls, value: Path) -> Path:
        if not value.is_file():
            raise ValueError(f"config file {value} does not exist")
        return value

    @field_validator("output_dir")
    @classmethod
    def check_output(cls, value: Path) -> Path:
        existing = next((parent for parent in (value, *value.parents) if parent.exists()), None)
        if existing is None or not existing.is_dir():
            raise ValueError(f"output directory {value} cannot be created")
        return value


CheckpointMode = Literal["explicit", "stages", "geometric"]


class GammaConfig(BaseModel):
    """
    Gamma estimate of a target set: either a set expression or the prefix built by a
    construction config (resolved relative to this file).
    """
    model_config = ConfigDict(frozen=True)

    target: SetField | None = None
    construction_config: Path | None = None
    approximators: list[SetField] = Field(min_length=1)
    reductions: list[ReductionField] = Field(default_factory=list)
    checkpoint_mode: CheckpointMode = "geometric"
    checkpoints: list[int] = Field(default_factory=list)
    checkpoint_start: int = Field(default=2, ge=1)
    checkpoint_ratio: Rational = Fraction(2)
    limit: int = Field(default=4096, ge=1)
    tail_from: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_target(self) -> Self:
        if (self.target is None) == (self.construction_config is None):
            raise ValueError("give exactly one of target and construction_config")
        if self.checkpoint_mode == "explicit" and not self.checkpoints:
            raise ValueError("explicit checkpoint mode needs a checkpoint list")
        if self.checkpoint_mode == "stages" and self.construction_config is None:
            raise ValueError("stage checkpoints need a construction_config target")
        if self.checkpoint_ratio <= 1:
            raise ValueError("checkpoint_ratio must exceed 1")
        return self


class HypergridConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    population_max: int = Field(default=50, ge=1)
    q_steps: int = Field(default=20, ge=1)


class HalfboundConfig(BaseModel):
    """
    Attributes:
        n_max: largest source index; the encoding spans (n_max + 1)! positions.
        trials: number of random source sets.
        seed: master seed of the fuzzer.
        targeted: also run one above-threshold corruption per trial.
    """
    model_config = ConfigDict(frozen=True)

    n_max: int = Field(default=7, ge=1)
    trials: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)
    targeted: bool = True
