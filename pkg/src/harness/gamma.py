"""
Finite evidence for gamma(A) and for the m-degree bound.

gamma(A) is a supremum of lower densities, so a finite run can only exhibit
approximators and the minimum of their agreement densities over checkpoints.
Everything here is reported at explicit checkpoints and never extrapolated:
checkpoints past the available prefix are dropped with a note.
"""
from collections.abc import Sequence
from fractions import Fraction

import polars as pl
from pydantic import BaseModel, ConfigDict

from src.configmodels.config_types import Rational
from src.numeric import DensityProfile, SetPrefix, agreement_profile, tail_min_density
from src.reductions import ReductionSpec, SetSpec, be_prefix, bstar_prefix, determined_length
from src.utils.log_services import get_logger

logger = get_logger(__name__)


class ReductionEvidence(BaseModel):
    model_config = ConfigDict(frozen=True)

    reduction: str
    determined_length: int
    against_bstar: Rational | None
    best: Rational | None


class GammaEstimate(BaseModel):
    """
    Attributes:
        target: description of the target set.
        approximators: the set expressions tried.
        checkpoints: the positions actually evaluated.
        evidence: per approximator, the minimum agreement density over the tail.
        gamma_lower_evidence: maximum of the per-approximator evidence.
        reductions: per reduction, the evidence for B_e against B*_e and the approximators.
        gamma_m_evidence: minimum over reductions of their best evidence.
        notes: truncation and finiteness notices.
    """
    model_config = ConfigDict(frozen=True)

    target: str
    approximators: list[str]
    checkpoints: list[int]
    evidence: dict[str, Rational | None]
    gamma_lower_evidence: Rational | None
    reductions: list[ReductionEvidence]
    gamma_m_evidence: Rational | None
    notes: list[str]


def geometric_checkpoints(start: int, ratio: Fraction, limit: int) -> list[int]:
    """start, start * ratio, ... (floored, deduplicated) up to limit."""
    points: list[int] = []
    value = Fraction(start)
    while value <= limit:
        point = int(value)
        if not points or point > points[-1]:
            points.append(point)
        value *= ratio
    return points


def _clip(checkpoints: Sequence[int], available: int, what: str, notes: list[str]) -> list[int]:
    kept = [c for c in checkpoints if 0 < c <= available]
    if len(kept) < len(checkpoints):
        notice = f"{what}: {len(checkpoints) - len(kept)} checkpoint(s) beyond length {available} dropped"
        logger.warning(notice)
        notes.append(notice)
    return kept


def _evidence(profile: DensityProfile, tail_from: int) -> Fraction | None:
    if tail_from >= len(profile):
        return None
    return tail_min_density(profile, tail_from)


def _maximum(values: Sequence[Fraction | None]) -> Fraction | None:
    present = [v for v in values if v is not None]
    return max(present) if present else None


def estimate_gamma(
        target: SetPrefix,
        target_label: str,
        approximators: Sequence[SetSpec],
        reductions: Sequence[ReductionSpec],
        checkpoints: Sequence[int],
        tail_from: int = 0,
) -> tuple[GammaEstimate, pl.DataFrame]:
    """
    Agreement profiles of the target with every approximator, and of each B_e = f_e^-1(target)
    with B*_e and with every approximator.

    :return: the summary and a long table (series, checkpoint, numerator, denominator).
    """
    notes = ["finite evidence only: minima over checkpoints, not limits"]
    points = _clip(checkpoints, target.length, "target", notes)
    frames: list[pl.DataFrame] = []
    evidence: dict[str, Fraction | None] = {}

    approximator_bits = {spec.text: spec.prefix(target.length) for spec in approximators}
    for name, bits in approximator_bits.items():
        profile = agreement_profile(target, bits, points)
        evidence[name] = _evidence(profile, tail_from)
        frames.append(profile.to_frame().with_columns(pl.lit(f"target~{name}").alias("series")))

    reduction_evidence: list[ReductionEvidence] = []
    for f in reductions:
        m = determined_length(f, target.length, target.length)
        be = be_prefix(f, target, m)
        local = _clip(points, m, f"B_e for {f.text}", notes)
        scores: list[Fraction | None] = []
        bstar_profile = agreement_profile(be, bstar_prefix(f, m), local)
        frames.append(bstar_profile.to_frame().with_columns(pl.lit(f"B[{f.text}]~B*").alias("series")))
        against_bstar = _evidence(bstar_profile, tail_from)
        scores.append(against_bstar)
        for name, bits in approximator_bits.items():
            profile = agreement_profile(be, bits[:m], local)
            frames.append(profile.to_frame().with_columns(pl.lit(f"B[{f.text}]~{name}").alias("series")))
            scores.append(_evidence(profile, tail_from))
        reduction_evidence.append(ReductionEvidence(
            reduction=f.text, determined_length=m, against_bstar=against_bstar, best=_maximum(scores),
        ))

    bests = [r.best for r in reduction_evidence if r.best is not None]
    estimate = GammaEstimate(
        target=target_label,
        approximators=list(approximator_bits),
        checkpoints=points,
        evidence=evidence,
        gamma_lower_evidence=_maximum(list(evidence.values())),
        reductions=reduction_evidence,
        gamma_m_evidence=min(bests) if bests else None,
        notes=notes,
    )
    table = pl.concat(frames).select("series", "checkpoint", "numerator", "denominator") if frames else \
        pl.DataFrame(schema={"series": pl.Utf8, "checkpoint": pl.Int64, "numerator": pl.Utf8, "denominator": pl.Utf8})
    return estimate, table
