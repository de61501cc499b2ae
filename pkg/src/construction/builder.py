"""
Block assembly A = alpha_1 beta_1 alpha_2 beta_2 ...

Stage l appends alpha = 0^K and a window block beta of length N: positions of the
forcing set S are 0 and every other window position takes the opposite value of the
stage's set C_l.
"""
import numpy as np

from src.construction.forcing import choose_S
from src.construction.parameters import derive_stage_parameters
from src.construction.records import ConstructionConfig, StageRecord
from src.hypergeom import stage_generator
from src.numeric import SetPrefix
from src.utils.errors import ConstructionAborted, GammaError
from src.utils.log_services import get_logger

logger = get_logger(__name__)


def run_stage(prefix: SetPrefix, stage: int, prev_M: int, config: ConstructionConfig) -> tuple[SetPrefix, SetPrefix, StageRecord]:
    """Builds alpha and beta of one stage on top of prefix (so L = prefix.length)."""
    L = prefix.length
    params = derive_stage_parameters(stage, L, prev_M, config)
    window = params.window
    logger.info(
        f"stage {stage}: L={L} M={params.M} K={params.K} N={params.N} r={params.r} "
        f"constraints={len(params.constraints)} union bound={float(params.union_bound):.6g}"
    )

    forcing_set, retries = choose_S(
        window,
        params.r,
        params.constraints,
        config.p,
        stage_generator(config.seed, stage),
        config.max_retries,
        config.bound_mode,
    )

    c_bits = config.set_for_stage(stage).segment(window.start, window.stop)
    beta = 1 - c_bits
    offsets = np.fromiter((x - window.start for x in forcing_set), dtype=np.int64, count=len(forcing_set))
    beta[offsets] = 0

    record = StageRecord(
        stage=stage,
        L=L,
        M=params.M,
        K=params.K,
        N=params.N,
        r=params.r,
        epsilon=config.epsilon(stage),
        window_start=window.start,
        window_stop=window.stop,
        S=sorted(forcing_set),
        constraints=params.constraints,
        retries=retries,
        union_bound=params.union_bound,
        parameter_rounds=params.rounds,
    )
    return SetPrefix.zeros(params.K), SetPrefix(beta), record


def build_prefix(config: ConstructionConfig) -> tuple[SetPrefix, list[StageRecord]]:
    """
    Runs config.stages stages from the empty prefix.

    :raises ConstructionAborted: a stage failed; the error carries the ledger and the
        prefix built before the failing stage, and the original error as its cause.
    """
    prefix = SetPrefix.zeros(0)
    ledger: list[StageRecord] = []
    prev_M = 0
    for stage in range(config.stages):
        try:
            alpha, beta, record = run_stage(prefix, stage, prev_M, config)
        except GammaError as e:
            logger.error(f"stage {stage} failed: {e}")
            raise ConstructionAborted(f"stage {stage} failed: {e}", ledger, prefix) from e
        prefix = prefix.concat(alpha, beta)
        ledger.append(record)
        prev_M = record.M
    logger.info(f"built {len(ledger)} stage(s), prefix length {prefix.length}")
    return prefix, ledger
