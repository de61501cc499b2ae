"""
Experiment Command Module

Every CLI command follows the same workflow, fixed by the Template Method
ExperimentCommand.execute:

    load_config -> run -> emit -> exit code

Subclasses supply the config loading, the computation and the artifacts; the base
class owns logging and the mapping of errors to exit codes:

    0 success, 1 verification failure, 2 configuration error, 3 resource error
"""
from abc import ABC, abstractmethod
from enum import IntEnum
from pathlib import Path
from typing import Any, Generic

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError
import yaml  # type: ignore

from src.configmodels.config_types import Rational, pydantic_config
from src.configmodels.harness_config import (
    CommandName,
    ExperimentManifest,
    GammaConfig,
    HalfboundConfig,
    HarnessSettings,
    HypergridConfig,
    load_yaml,
)
from src.construction import (
    ConstructionConfig,
    StageRecord,
    VerificationReport,
    build_prefix,
    verify_construction,
)
from src.halfbound import (
    checkpoint_agreement,
    corrupt,
    decode_range,
    encode,
    misdecode_budget,
    safe_budget,
)
from src.harness.gamma import estimate_gamma, geometric_checkpoints
from src.hypergeom import grid_frame, hypergrid, make_generator
from src.numeric import SetPrefix, tail_min_density
from src.utils.bitfile import read_bitfile, write_bitfile, write_raw
from src.utils.errors import BitFileError, ConstructionAborted, ParameterError, ResourceError, SpecParseError
from src.utils.log_services import get_logger

logger = get_logger(__name__)

PREFIX_FILE = "prefix.gma"
RAW_FILE = "prefix.bits"
LEDGER_FILE = "ledger.jsonl"
REPORT_FILE = "report.json"
SUMMARY_FILE = "report.txt"
CONFIG_FILE = "config.json"


class ExitCode(IntEnum):
    OK = 0
    VERIFICATION_FAILED = 1
    CONFIG_ERROR = 2
    RESOURCE_ERROR = 3


class ExperimentCommand(ABC, Generic[pydantic_config]):
    """
    Abstract base class of the harness commands (Template Method).

    Type Parameters:
        pydantic_config: the config model the command reads

    Attributes:
        manifest: the invocation
        settings: process-wide harness settings
    """

    def __init__(self, manifest: ExperimentManifest, settings: HarnessSettings):
        self.manifest = manifest
        self.settings = settings

    @property
    def out(self) -> Path:
        return self.manifest.output_dir

    @abstractmethod
    def load_config(self) -> pydantic_config:
        """Reads and validates the command config, applying CLI overrides."""

    @abstractmethod
    def run(self, config: pydantic_config) -> Any:
        """The computation; returns whatever emit needs."""

    @abstractmethod
    def emit(self, config: pydantic_config, result: Any) -> ExitCode:
        """Writes artifacts and decides the exit code."""

    def execute(self) -> ExitCode:
        name = self.manifest.command
        try:
            config = self.load_config()
        except (ValidationError, SpecParseError, ParameterError, yaml.YAMLError, FileNotFoundError) as e:
            logger.error(f"{name}: configuration error in {self.manifest.config_path}: {e}")
            return ExitCode.CONFIG_ERROR

        self.out.mkdir(parents=True, exist_ok=True)
        logger.info(f"{name}: running with config {self.manifest.config_path}, artifacts in {self.out}")
        try:
            result = self.run(config)
            code = self.emit(config, result)
        except ConstructionAborted as e:
            logger.error(f"{name}: construction aborted after {len(e.ledger)} stage(s): {e}")
            return self._aborted_code(e)
        except ResourceError as e:
            logger.error(f"{name}: resource limit reached: {e}")
            return ExitCode.RESOURCE_ERROR
        except (ParameterError, BitFileError, FileNotFoundError,
                ValidationError, SpecParseError, yaml.YAMLError) as e:
            logger.error(f"{name}: {e}")
            return ExitCode.CONFIG_ERROR
        logger.info(f"{name}: finished with exit code {int(code)} ({code.name})")
        return code

    @staticmethod
    def _aborted_code(aborted: ConstructionAborted) -> ExitCode:
        """Exit code of an aborted construction, taken from the error that stopped the stage."""
        if isinstance(aborted.__cause__, ResourceError):
            return ExitCode.RESOURCE_ERROR
        if isinstance(aborted.__cause__, ParameterError):
            return ExitCode.CONFIG_ERROR
        return ExitCode.VERIFICATION_FAILED


def _construction_config(manifest: ExperimentManifest, settings: HarnessSettings, path: Path) -> ConstructionConfig:
    config = ConstructionConfig.from_yaml(path)
    overrides: dict[str, Any] = {}
    if manifest.seed is not None:
        overrides["seed"] = manifest.seed
    if manifest.stages is not None:
        overrides["stages"] = manifest.stages
    if manifest.horizon is not None:
        overrides["n_horizon"] = manifest.horizon
    if manifest.bound_mode is not None:
        overrides["bound_mode"] = manifest.bound_mode
    if settings.workers != 1 and config.workers == 1:
        overrides["workers"] = settings.workers
    if not overrides:
        return config
    # re-validate so overrides obey the same invariants as the file
    return ConstructionConfig(**{**config.model_dump(), **overrides})


def write_ledger(ledger: list[StageRecord], path: Path) -> None:
    path.write_text("".join(record.model_dump_json() + "\n" for record in ledger), encoding="utf-8")


def read_ledger(path: Path) -> list[StageRecord]:
    lines = path.read_text(encoding="utf-8").splitlines()
    return [StageRecord.model_validate_json(line) for line in lines if line.strip()]


class ConstructCommand(ExperimentCommand[ConstructionConfig]):
    """Builds A, writes the bit file, the ledger and the verification report."""

    def load_config(self) -> ConstructionConfig:
        return _construction_config(self.manifest, self.settings, self.manifest.config_path)

    def run(self, config: ConstructionConfig) -> tuple[SetPrefix, list[StageRecord], ConstructionAborted | None]:
        try:
            prefix, ledger = build_prefix(config)
        except ConstructionAborted as e:
            return e.prefix, e.ledger, e
        return prefix, ledger, None

    def emit(self, config: ConstructionConfig, result: tuple[SetPrefix, list[StageRecord], ConstructionAborted | None]) -> ExitCode:
        prefix, ledger, aborted = result
        (self.out / CONFIG_FILE).write_text(config.model_dump_json(indent=2) + "\n", encoding="utf-8")
        write_bitfile(prefix, self.out / PREFIX_FILE)
        write_raw(prefix, self.out / RAW_FILE)
        write_ledger(ledger, self.out / LEDGER_FILE)
        if aborted is not None:
            logger.error(f"construction aborted after {len(ledger)} stage(s); partial ledger written: {aborted}")
            return self._aborted_code(aborted)

        report = verify_construction(prefix, ledger, config)
        (self.out / REPORT_FILE).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        (self.out / SUMMARY_FILE).write_text(report.summary(), encoding="utf-8")
        return ExitCode.OK if report.passed else ExitCode.VERIFICATION_FAILED


class VerifyCommand(ExperimentCommand[ConstructionConfig]):
    """
    Re-verifies the artifacts of a construct run found in the output directory and
    checks the verdict against the embedded report.
    """

    def load_config(self) -> ConstructionConfig:
        return _construction_config(self.manifest, self.settings, self.manifest.config_path)

    def run(self, config: ConstructionConfig) -> tuple[VerificationReport, bool | None]:
        prefix = read_bitfile(self.out / PREFIX_FILE)
        ledger = read_ledger(self.out / LEDGER_FILE)
        report = verify_construction(prefix, ledger, config)
        embedded_path = self.out / REPORT_FILE
        embedded = None
        if embedded_path.exists():
            embedded = VerificationReport.model_validate_json(embedded_path.read_text(encoding="utf-8")).passed
        return report, embedded

    def emit(self, config: ConstructionConfig, result: tuple[VerificationReport, bool | None]) -> ExitCode:
        report, embedded = result
        (self.out / "verify_report.json").write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        if embedded is not None and embedded != report.passed:
            logger.error(f"verdict mismatch: embedded {embedded}, recomputed {report.passed}")
            return ExitCode.VERIFICATION_FAILED
        return ExitCode.OK if report.passed else ExitCode.VERIFICATION_FAILED


class GammaCommand(ExperimentCommand[GammaConfig]):
    """Agreement profiles and finite gamma / m-degree evidence."""

    def load_config(self) -> GammaConfig:
        return load_yaml(GammaConfig, self.manifest.config_path)

    def run(self, config: GammaConfig) -> Any:
        if config.construction_config is not None:
            path = config.construction_config
            if not path.is_absolute():
                path = self.manifest.config_path.parent / path
            construction = _construction_config(self.manifest, self.settings, path)
            target, ledger = build_prefix(construction)
            label = f"constructed A ({path.name}, {len(ledger)} stage(s))"
            stage_points = [record.checkpoint for record in ledger]
        else:
            assert config.target is not None
            target = config.target.prefix(config.limit)
            label = config.target.text
            stage_points = []

        if config.checkpoint_mode == "explicit":
            points = list(config.checkpoints)
        elif config.checkpoint_mode == "stages":
            points = stage_points
        else:
            points = geometric_checkpoints(config.checkpoint_start, config.checkpoint_ratio,
                                           min(config.limit, target.length))
        return estimate_gamma(target, label, config.approximators, config.reductions, points, config.tail_from)

    def emit(self, config: GammaConfig, result: Any) -> ExitCode:
        estimate, table = result
        table.write_csv(self.out / "gamma_profiles.csv")
        (self.out / "gamma.json").write_text(estimate.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"gamma lower evidence {estimate.gamma_lower_evidence}, m-degree evidence {estimate.gamma_m_evidence}")
        return ExitCode.OK


class HypergridCommand(ExperimentCommand[HypergridConfig]):
    """Exact hypergeometric tails against the rounded-up Hoeffding bound."""

    def load_config(self) -> HypergridConfig:
        return load_yaml(HypergridConfig, self.manifest.config_path)

    def run(self, config: HypergridConfig) -> Any:
        return list(hypergrid(config.population_max, config.q_steps))

    def emit(self, config: HypergridConfig, result: Any) -> ExitCode:
        grid_frame(result).write_csv(self.out / "hypergrid.csv")
        violations = [point for point in result if not point.holds]
        logger.info(f"hypergrid: {len(result)} grid point(s), {len(violations)} violation(s)")
        for point in violations[:20]:
            logger.error(f"bound violated at K={point.K} N={point.N} n={point.n} q={point.q}")
        return ExitCode.VERIFICATION_FAILED if violations else ExitCode.OK


class TrialResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    trial: int
    source: str
    recovered: bool
    min_checkpoint_agreement: Rational
    target_index: int | None = None
    misdecoded: list[int] = []
    targeted_exact: bool | None = None


class HalfboundReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_max: int
    trials: int
    recovered: int
    targeted_exact: int
    passed: bool
    results: list[TrialResult]


class HalfboundCommand(ExperimentCommand[HalfboundConfig]):
    """Encode, corrupt below and above the majority threshold, decode."""

    def load_config(self) -> HalfboundConfig:
        config = load_yaml(HalfboundConfig, self.manifest.config_path)
        updates: dict[str, Any] = {}
        if self.manifest.seed is not None:
            updates["seed"] = self.manifest.seed
        if self.manifest.n_max_override is not None:
            updates["n_max"] = self.manifest.n_max_override
        return HalfboundConfig(**{**config.model_dump(), **updates}) if updates else config

    def run(self, config: HalfboundConfig) -> HalfboundReport:
        cap = max(self.settings.halfbound_cap, self.manifest.n_max_override or 0)
        rng = make_generator(config.seed)
        results: list[TrialResult] = []
        indices = range(1, config.n_max + 1)
        for trial in range(config.trials):
            source = SetPrefix(np.concatenate([[0], rng.integers(0, 2, size=config.n_max)]))
            amplified = encode(source, config.n_max, cap=cap)
            budgets = {n: int(rng.integers(0, safe_budget(n) + 1)) for n in indices}
            received = corrupt(amplified.encoded, budgets, rng)
            decoded = decode_range(received, 1, config.n_max)
            recovered = decoded == source[1:]
            profile = checkpoint_agreement(amplified.encoded, received, 1, config.n_max)

            target_index, misdecoded, exact = None, [], None
            if config.targeted:
                target_index = int(rng.integers(1, config.n_max + 1))
                attacked = corrupt(amplified.encoded, {target_index: misdecode_budget(source, target_index)}, rng)
                wrong = decode_range(attacked, 1, config.n_max)
                misdecoded = [n for n in indices if wrong[n - 1] != source[n]]
                exact = misdecoded == [target_index]

            results.append(TrialResult(
                trial=trial,
                source=source.to_string(),
                recovered=recovered,
                min_checkpoint_agreement=tail_min_density(profile, 0),
                target_index=target_index,
                misdecoded=misdecoded,
                targeted_exact=exact,
            ))
            logger.debug(f"trial {trial}: recovered={recovered} misdecoded={misdecoded}")

        recovered_count = sum(r.recovered for r in results)
        exact_count = sum(bool(r.targeted_exact) for r in results)
        passed = recovered_count == config.trials and (not config.targeted or exact_count == config.trials)
        return HalfboundReport(n_max=config.n_max, trials=config.trials, recovered=recovered_count,
                               targeted_exact=exact_count, passed=passed, results=results)

    def emit(self, config: HalfboundConfig, result: HalfboundReport) -> ExitCode:
        (self.out / "halfbound.json").write_text(result.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"halfbound: {result.recovered}/{result.trials} recovered, "
                    f"{result.targeted_exact} exact targeted misdecodes")
        return ExitCode.OK if result.passed else ExitCode.VERIFICATION_FAILED


COMMANDS: dict[CommandName, type[ExperimentCommand[Any]]] = {
    CommandName.CONSTRUCT: ConstructCommand,
    CommandName.VERIFY: VerifyCommand,
    CommandName.GAMMA: GammaCommand,
    CommandName.HYPERGRID: HypergridCommand,
    CommandName.HALFBOUND: HalfboundCommand,
}


def run_command(manifest: ExperimentManifest, settings: HarnessSettings) -> ExitCode:
    return COMMANDS[manifest.command](manifest, settings).execute()
