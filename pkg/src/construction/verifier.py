"""
Independent verification of a built prefix against its ledger.

Clauses per stage l (L, K, N, S and eps from the ledger):

    structural  alpha zone and S are 0; window positions off S differ from C_l
    a           |(A <-> C_l) on [0, L+K+N)| / (L+K+N) <= p + 2 eps
    a-chain     (L + K + |S|) / (L+K+N) <= (L + K + (p + eps) N) / (L+K+N) <= p + 2 eps
    c           |S| / N <= p + eps
    b           |(B_e <-> B*_e) on I_n| / n >= p - eps for e <= l, M_l <= n < M_{l+1}
    d*          |(B_e <-> B*_e) on I*| + L >= p |I*| for constrained medium intervals
    d**         |(B_e <-> B*_e) on I**| = |I**,1| for constrained intervals

An interval is checked only when its whole image lies inside the built prefix;
otherwise its clauses are reported as deferred.
"""
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from src.construction.parameters import choose_M, ordered_map
from src.construction.records import ClauseResult, ConstructionConfig, StageRecord, VerificationReport
from src.intervals import IntervalScheme, interval_bounds
from src.numeric import SetPrefix, agreement_count
from src.reductions import ReductionSpec, decompose_interval, partition_interval
from src.utils.log_services import get_logger

logger = get_logger(__name__)


def _status(ok: bool, rhs: Fraction) -> str:
    if not ok:
        return "fail"
    return "vacuous" if rhs <= 0 else "pass"


def _interval_view(f: ReductionSpec, a: SetPrefix, n: int) -> tuple[np.ndarray, np.ndarray] | None:
    """(B_e bits, B* bits) on I_n, or None when the image leaves the built prefix."""
    span = interval_bounds(IntervalScheme.TRIANGULAR, n)
    images = np.array(f.images(span.start, span.stop), dtype=object)
    if max(images) >= a.length:
        return None
    be = a.bits[images.astype(np.int64)]
    ss1 = partition_interval(f, n).i_ss1
    bstar = np.fromiter((x in ss1 for x in span), dtype=np.uint8, count=len(span))
    return be, bstar


def structural_clause(a: SetPrefix, record: StageRecord, config: ConstructionConfig) -> ClauseResult:
    problems = []
    alpha_stop = record.L + record.K
    if a.count(record.L, alpha_stop):
        problems.append("alpha zone holds ones")
    window = record.window
    offsets = np.array(record.S, dtype=np.int64) - window.start
    block = a.bits[window.start:window.stop]
    if offsets.size and block[offsets].any():
        problems.append("forcing set holds ones")
    off_s = np.ones(len(window), dtype=bool)
    off_s[offsets] = False
    c_bits = config.set_for_stage(record.stage).segment(window.start, window.stop)
    if np.any(block[off_s] == c_bits[off_s]):
        problems.append("window agrees with C off the forcing set")
    return ClauseResult(clause="structural", stage=record.stage, status="fail" if problems else "pass",
                        detail="; ".join(problems))


def checkpoint_clauses(a: SetPrefix, record: StageRecord, config: ConstructionConfig) -> list[ClauseResult]:
    p, eps, stage = config.p, record.epsilon, record.stage
    top = record.checkpoint
    target = p + 2 * eps
    c_prefix = config.set_for_stage(stage).prefix(top)
    agreement = Fraction(agreement_count(a, c_prefix, top), top)

    chain_low = Fraction(record.L + record.K + len(record.S), top)
    chain_mid = (record.L + record.K + (p + eps) * record.N) / top
    chain_ok = chain_low <= chain_mid <= target

    share = Fraction(len(record.S), record.N)
    return [
        ClauseResult(clause="a", stage=stage, lhs=agreement, rhs=target,
                     status="pass" if agreement <= target else "fail"),
        ClauseResult(clause="a-chain", stage=stage, lhs=chain_low, rhs=target,
                     status="pass" if chain_ok else "fail", detail=f"middle term {chain_mid}"),
        ClauseResult(clause="c", stage=stage, lhs=share, rhs=p + eps,
                     status="pass" if share <= p + eps else "fail"),
    ]


def medium_clause(a: SetPrefix, record: StageRecord, config: ConstructionConfig, e: int, n: int) -> ClauseResult:
    view = _interval_view(config.reductions[e], a, n)
    rhs = config.p - record.epsilon
    if view is None:
        return ClauseResult(clause="b", stage=record.stage, e=e, n=n, rhs=rhs, status="deferred",
                            detail="image leaves the built prefix")
    be, bstar = view
    lhs = Fraction(int(np.count_nonzero(be == bstar)), n)
    return ClauseResult(clause="b", stage=record.stage, e=e, n=n, lhs=lhs, rhs=rhs, status=_status(lhs >= rhs, rhs))


def constrained_clauses(
        a: SetPrefix, record: StageRecord, config: ConstructionConfig, e: int, n: int, medium: bool,
) -> list[ClauseResult]:
    f = config.reductions[e]
    view = _interval_view(f, a, n)
    if view is None:
        return [ClauseResult(clause="d**", stage=record.stage, e=e, n=n, status="deferred",
                             detail="image leaves the built prefix")]
    span = interval_bounds(IntervalScheme.TRIANGULAR, n)
    be, bstar = view
    agree = {x for x, b1, b2 in zip(span, be, bstar) if b1 == b2}

    parts = decompose_interval(f, n, record.window, record.L)
    paired = len(agree & (parts.ss1 | parts.ss2))
    results = [ClauseResult(clause="d**", stage=record.stage, e=e, n=n, lhs=Fraction(paired),
                            rhs=Fraction(len(parts.ss1)),
                            status="pass" if paired == len(parts.ss1) == len(parts.ss2) else "fail")]
    if medium:
        star = parts.star
        lhs = Fraction(len(agree & star) + record.L)
        rhs = config.p * len(star)
        results.append(ClauseResult(clause="d*", stage=record.stage, e=e, n=n, lhs=lhs, rhs=rhs,
                                    status=_status(lhs >= rhs, rhs)))
    return results


def next_cutoffs(ledger: Sequence[StageRecord], config: ConstructionConfig) -> list[int]:
    """M_{l+1} for each stage; past the last stage the minimal admissible M stands in."""
    cutoffs = [record.M for record in ledger[1:]]
    if ledger:
        last = ledger[-1]
        cutoffs.append(choose_M(last.stage + 1, last.checkpoint, config.epsilon(last.stage + 1), last.M,
                                config.bound_mode))
    return cutoffs


def verify_construction(a: SetPrefix, ledger: Sequence[StageRecord], config: ConstructionConfig) -> VerificationReport:
    clauses: list[ClauseResult] = []
    for record, upper in zip(ledger, next_cutoffs(ledger, config)):
        clauses.append(structural_clause(a, record, config))
        clauses.extend(checkpoint_clauses(a, record, config))

        last_n = min(upper - 1, config.n_horizon)
        pairs = [(e, n) for e, _ in config.active_reductions(record.stage) for n in range(record.M, last_n + 1)]
        clauses.extend(ordered_map(lambda pair: medium_clause(a, record, config, *pair), pairs, config.workers))

        constrained = [(c.e, c.n) for c in record.constraints]
        for batch in ordered_map(
                lambda pair: constrained_clauses(a, record, config, *pair, medium=pair[1] < upper),
                constrained,
                config.workers,
        ):
            clauses.extend(batch)
        logger.debug(f"stage {record.stage}: medium range [{record.M}, {last_n}], {len(constrained)} constrained")

    report = VerificationReport(
        p=config.p,
        stages=len(ledger),
        prefix_length=a.length,
        bound_mode=config.bound_mode,
        label=config.endpoint_label,
        passed=not any(c.status == "fail" for c in clauses),
        clauses=clauses,
    )
    logger.info(
        f"verification {'passed' if report.passed else 'FAILED'}: {report.count('pass')} pass, "
        f"{report.count('vacuous')} vacuous, {report.count('deferred')} deferred, {report.count('fail')} fail"
    )
    return report
