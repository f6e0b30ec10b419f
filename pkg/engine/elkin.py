#!/usr/bin/env python3
"""
APFREE - Torus Construction
Randomised construction of large progression-free subsets of {1, ..., N}.

FLOW:
1. Parameters: d = ceil(sqrt(2 log2 N)), delta = c * sqrt(d) * N^(-2/d) (kept below 1/10)
2. Radius r by pigeonhole over the norm histogram (engine.geometry)
3. Each trial draws theta, alpha uniformly on T^d and keeps
   A = {n <= N : theta n + alpha mod 1 lies in S(r)}
4. Progressions inside A are deleted (engine.apcore)
5. The best trial wins; its set is certified before it leaves this module
"""

import math
import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from core.config import config
from core.errors import CertificationError, ParameterError
from core.models import (
    AnnulusSpec, AuditReport, CandidateSet, ConstructionParams, ConstructionResult,
    DeletionStrategy, SelectionCriterion, TorusPoint, TrialOutcome,
)
from core.rng import Stream, substream, map_ordered
from engine.apcore import complete_greedily, count_3aps, full_interval_3ap_count, greedy_delete_to_ap_free, verify_ap_free
from engine.bounds import shape_term
from engine.geometry import annulus_mask, estimate_annulus_volume, estimate_pair_volume, psi_map_many, select_radius

logger = logging.getLogger(__name__)


# ============== PARAMETERS ==============

def dimension_for(n_limit: float) -> int:
    """ceil(sqrt(2 log2 N)); the small slack keeps exact squares from rounding up"""
    return max(1, math.ceil(math.sqrt(2.0 * math.log2(n_limit)) - 1e-9))


def formula_delta(n_limit: float, d: int, c_delta: float) -> float:
    """c * sqrt(d) * N^(-2/d), evaluated in log space"""
    return math.exp(math.log(c_delta) + 0.5 * math.log(d) - (2.0 / d) * math.log(n_limit))


def derive_params(
    N: int,
    c_delta: Optional[float] = None,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    d_override: Optional[int] = None,
    radius_samples: Optional[int] = None,
    volume_samples: Optional[int] = None,
    threads: int = 1,
) -> ConstructionParams:
    """Auto parameters for N; deterministic in (inputs, seed)"""
    cfg = config.elkin
    c_delta = cfg.c_delta if c_delta is None else c_delta
    trials = cfg.trials if trials is None else trials
    seed = cfg.master_seed if seed is None else seed
    radius_samples = config.geometry.radius_samples if radius_samples is None else radius_samples
    volume_samples = config.geometry.volume_samples if volume_samples is None else volume_samples

    if N < 8:
        raise ParameterError(f"N must be >= 8, got {N}")
    if c_delta <= 0:
        raise ParameterError(f"c_delta must be positive, got {c_delta}")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if d_override is not None and d_override < 1:
        raise ParameterError(f"d must be >= 1, got {d_override}")

    d = d_override if d_override is not None else dimension_for(N)
    delta = formula_delta(N, d, c_delta)
    clamped = False
    if delta >= cfg.delta_ceiling:
        if cfg.strict_delta_range:
            raise ParameterError(
                f"N={N} too small: delta={delta:.4g} is not below 1/10 (c_delta={c_delta}, d={d})"
            )
        logger.warning(f"⚠️ delta={delta:.4g} for N={N}, d={d} clamped to {cfg.delta_ceiling}")
        delta = cfg.delta_ceiling
        clamped = True
    if not math.isfinite(delta) or delta <= 0:
        raise ParameterError(f"delta underflow for N={N}, d={d}")

    spec = select_radius(d, delta, radius_samples, seed, threads=threads)
    volume = estimate_annulus_volume(spec, volume_samples, seed, threads=threads)
    logger.info(f"🔧 N={N}: d={d} delta={delta:.5g} r={spec.r:.5g} vol(S)≈{volume.mean:.4g}")
    return ConstructionParams(
        n_limit=N, d=d, delta=delta, spec=spec, trials=trials, master_seed=seed,
        c_delta=c_delta, volume=volume, delta_clamped=clamped,
    )


def params_for_spec(
    N: int,
    spec: AnnulusSpec,
    trials: int,
    seed: int,
    volume_samples: Optional[int] = None,
) -> ConstructionParams:
    """Params around a hand-picked annulus (no formula, no radius search)"""
    if N < 1:
        raise ParameterError(f"N must be positive, got {N}")
    volume_samples = config.geometry.volume_samples if volume_samples is None else volume_samples
    volume = estimate_annulus_volume(spec, volume_samples, seed)
    return ConstructionParams(
        n_limit=N, d=spec.d, delta=spec.delta, spec=spec, trials=trials,
        master_seed=seed, c_delta=0.0, volume=volume,
    )


# ============== TRIALS ==============

def draw_rotation(params: ConstructionParams, trial_index: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = substream(params.master_seed, Stream.TRIAL, trial_index)
    theta = rng.random(params.d)
    alpha = rng.random(params.d)
    return theta, alpha


def preimage(params: ConstructionParams, theta: np.ndarray, alpha: np.ndarray) -> CandidateSet:
    """A = {n in [N] : psi(n) in S}"""
    chunk = config.elkin.preimage_chunk
    kept = []
    for start in range(1, params.n_limit + 1, chunk):
        ns = np.arange(start, min(start + chunk, params.n_limit + 1), dtype=np.int64)
        mask = annulus_mask(psi_map_many(ns, theta, alpha), params.spec)
        kept.append(ns[mask])
    elements = np.concatenate(kept) if kept else np.empty(0, dtype=np.int64)
    return CandidateSet(params.n_limit, tuple(elements.tolist()))


def run_trial(
    params: ConstructionParams,
    trial_index: int,
    strategy: Optional[DeletionStrategy] = None,
    complete: Optional[bool] = None,
) -> TrialOutcome:
    complete = config.elkin.complete_to_maximal if complete is None else complete
    theta, alpha = draw_rotation(params, trial_index)
    raw = preimage(params, theta, alpha)
    ap_count = count_3aps(raw)
    survivors = greedy_delete_to_ap_free(raw, strategy)
    completed = complete_greedily(survivors) if complete else None

    outcome = TrialOutcome(
        trial_index=trial_index,
        theta=TorusPoint(theta),
        alpha=TorusPoint(alpha),
        raw_size=len(raw),
        ap_count=ap_count,
        final_size=len(survivors),
        completed_size=len(completed) if completed is not None else None,
        survivors=completed if completed is not None else survivors,
    )
    logger.debug(
        f"   trial {trial_index}: |A|={outcome.raw_size} T={ap_count} kept={outcome.final_size}"
        f" lemma={outcome.lemma_score:.2f}"
    )
    return outcome


def _selection_key(criterion: SelectionCriterion) -> Callable[[TrialOutcome], tuple]:
    if criterion == SelectionCriterion.LEMMA_SCORE:
        return lambda o: (o.lemma_score, -o.trial_index)
    return lambda o: (o.best_size, -o.trial_index)


# ============== CONSTRUCTION ==============

def size_floor(N: int, d: int, vol_S: float) -> Tuple[float, float]:
    """(N vol(S) / 6, sqrt(d) 2^-d N^(1-2/d)) with the absolute constant left at 1"""
    if N < 1 or d < 1 or vol_S < 0:
        raise ParameterError("size_floor needs N >= 1, d >= 1, vol_S >= 0")
    return N * vol_S / 6.0, shape_term(N, d)


def construct_with_report(
    params: ConstructionParams,
    threads: Optional[int] = None,
    strategy: Optional[DeletionStrategy] = None,
    selection: Optional[SelectionCriterion] = None,
    complete: Optional[bool] = None,
) -> ConstructionResult:
    threads = config.elkin.threads if threads is None else threads
    selection = SelectionCriterion(config.elkin.selection) if selection is None else selection

    outcomes: List[TrialOutcome] = map_ordered(
        lambda i: run_trial(params, i, strategy, complete), list(range(params.trials)), threads
    )
    best = max(outcomes, key=_selection_key(selection))
    result = CandidateSet(params.n_limit, best.survivors.elements)
    if not verify_ap_free(result):
        raise CertificationError(f"trial {best.trial_index} produced a set with progressions")

    vol = params.volume.mean if params.volume else estimate_annulus_volume(
        params.spec, config.geometry.volume_samples, params.master_seed).mean
    floor, shape = size_floor(params.n_limit, params.d, vol)
    logger.info(
        f"✅ N={params.n_limit}: best trial {best.trial_index} of {params.trials} -> {len(result)} elements"
        f" (floor N·vol/6 = {floor:.3g})"
    )
    return ConstructionResult(params=params, best=best, result=result, floor=floor, shape_term=shape, outcomes=outcomes)


def construct(params: ConstructionParams, threads: Optional[int] = None) -> CandidateSet:
    """Best-of-trials certified set"""
    return construct_with_report(params, threads=threads).result


# ============== EXPECTATION AUDIT ==============

def _mean_and_se(values: np.ndarray) -> Tuple[float, float]:
    n = values.size
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return mean, se


def expectation_audit(
    params: ConstructionParams,
    trials: int,
    pair_samples: Optional[int] = None,
) -> AuditReport:
    """
    Monte Carlo means of |A| and T(A) next to N vol(S), the predicted
    mean progression count and the ratio E(2|A|/3 - T) / (N vol(S) / 3).
    """
    if trials < 100:
        raise ParameterError(f"expectation_audit needs >= 100 trials, got {trials}")
    pair_samples = config.geometry.pair_volume_samples if pair_samples is None else pair_samples
    N = params.n_limit

    raw = np.empty(trials)
    aps = np.empty(trials)
    for i in range(trials):
        theta, alpha = draw_rotation(params, i)
        a = preimage(params, theta, alpha)
        raw[i] = len(a)
        aps[i] = count_3aps(a)

    vol_S = params.volume or estimate_annulus_volume(params.spec, config.geometry.volume_samples, params.master_seed)
    vol_B = estimate_pair_volume(params.spec, pair_samples, params.master_seed)

    mean_raw, se_raw = _mean_and_se(raw)
    mean_ap, se_ap = _mean_and_se(aps)
    lemma_mean, lemma_se = _mean_and_se(2.0 * raw / 3.0 - aps)
    denom = N * vol_S.mean / 3.0
    ratio = lemma_mean / denom if denom > 0 else math.nan
    ratio_se = lemma_se / denom if denom > 0 else math.nan

    report = AuditReport(
        trials=trials,
        mean_raw_size=mean_raw,
        raw_size_std_error=se_raw,
        mean_ap_count=mean_ap,
        ap_count_std_error=se_ap,
        vol_S_estimate=vol_S,
        vol_B_estimate=vol_B,
        predicted_mean_ap_count=full_interval_3ap_count(N) * vol_B.mean,
        lemma3_lhs_rhs_ratio=ratio,
        ratio_std_error=ratio_se,
        inequality_margin=vol_S.mean / 3.0 - 0.25 * (N - 5) * vol_B.mean,
    )
    logger.info(
        f"📊 audit N={N}: E|A|={mean_raw:.3f}±{se_raw:.3f} vs N·vol={N * vol_S.mean:.3f};"
        f" E T={mean_ap:.3f} (pred {report.predicted_mean_ap_count:.3f}); ratio={ratio:.3f}"
    )
    return report
