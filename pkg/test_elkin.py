#!/usr/bin/env python3
"""
APFREE - Torus Construction Tests
"""

import math
import logging

from core.config import config
from core.errors import ParameterError
from core.models import AnnulusSpec, SelectionCriterion
from engine.apcore import count_3aps, iter_3aps, midpoint_residual
from engine.elkin import (
    construct,
    construct_with_report,
    derive_params,
    dimension_for,
    draw_rotation,
    expectation_audit,
    formula_delta,
    params_for_spec,
    preimage,
    run_trial,
    size_floor,
)
from engine.oracle import exact_r3

logger = logging.getLogger(__name__)

TOY_SPEC = AnnulusSpec(d=1, r=0.3, delta=0.05)


def _expect_parameter_error(func, *args, **kwargs) -> None:
    try:
        func(*args, **kwargs)
    except ParameterError:
        return
    raise AssertionError(f"{func.__name__} accepted {args} {kwargs}")


# ============== PARAMETERS ==============

def test_dimension_formula():
    """Test: d = ceil(sqrt(2 log2 N)) at exact squares"""
    assert dimension_for(2 ** 32) == 8
    assert dimension_for(2 ** 12.5) == 5
    assert dimension_for(1000) == 5
    expected = math.sqrt(5) * (2 ** 12.5) ** (-2.0 / 5.0)
    assert math.isclose(formula_delta(2 ** 12.5, 5, 1.0), expected, rel_tol=1e-12)
    logger.info("✅ dimension and delta formulas")


def test_derive_params_large_n():
    """Test: N = 2^32 gives d = 8 and the formula delta unclamped"""
    params = derive_params(2 ** 32, trials=1, seed=0, radius_samples=50_000, volume_samples=50_000)
    assert params.d == 8
    assert not params.delta_clamped
    assert math.isclose(params.delta, math.sqrt(8) * 2.0 ** (-8), rel_tol=1e-12)
    assert params.delta <= params.r <= math.sqrt(8) / 2.0
    logger.info(f"✅ N=2^32: d={params.d} delta={params.delta:.5f} r={params.r:.4f}")


def test_derive_params_deterministic():
    """Test: same inputs -> identical params including r and vol(S)"""
    a = derive_params(1000, trials=4, seed=3)
    b = derive_params(1000, trials=4, seed=3)
    assert a.to_dict() == b.to_dict()
    assert a.spec == b.spec
    logger.info(f"✅ N=1000 params reproducible: r={a.r:.4f}")


def test_derive_params_small_n():
    """Test: N < 8 is an error; large delta clamps, or errors in strict mode"""
    _expect_parameter_error(derive_params, 7)
    _expect_parameter_error(derive_params, 1000, c_delta=0.0)
    _expect_parameter_error(derive_params, 1000, trials=0)

    params = derive_params(100, trials=1, radius_samples=20_000, volume_samples=20_000)
    assert params.delta_clamped
    assert params.delta == config.elkin.delta_ceiling

    config.elkin.strict_delta_range = True
    try:
        _expect_parameter_error(derive_params, 100, trials=1)
    finally:
        config.elkin.strict_delta_range = False
    logger.info("✅ small-N handling")


# ============== TRIALS ==============

def test_trial_mean_matches_volume(seed: int = 71):
    """Test: mean |A| over trials is N vol(S) on the 1-D toy annulus"""
    params = params_for_spec(100, TOY_SPEC, trials=1, seed=seed)
    audit = expectation_audit(params, 400, pair_samples=50_000)
    assert abs(audit.mean_raw_size - 5.0) <= 4.0 * audit.raw_size_std_error + 0.05, audit
    assert audit.expectation_gap_sigmas(100) <= 4.0, audit
    logger.info(f"✅ E|A| = {audit.mean_raw_size:.3f} ± {audit.raw_size_std_error:.3f} (exact 5)")


def test_trial_deterministic():
    """Test: a trial depends only on (master_seed, trial_index)"""
    params = params_for_spec(500, AnnulusSpec(d=2, r=0.4, delta=0.05), trials=8, seed=9)
    a = run_trial(params, 5)
    b = run_trial(params, 5)
    assert a.to_dict() == b.to_dict()
    assert a.survivors.elements == b.survivors.elements

    one = construct_with_report(params, threads=1)
    many = construct_with_report(params, threads=4)
    assert one.result.elements == many.result.elements
    assert one.best.trial_index == many.best.trial_index
    assert [o.to_dict() for o in one.outcomes] == [o.to_dict() for o in many.outcomes]
    logger.info("✅ trials reproducible across thread counts")


def test_trial_outcome_scores():
    """Test: score and lemma score follow from raw size and progression count"""
    params = params_for_spec(2000, AnnulusSpec(d=2, r=0.45, delta=0.08), trials=1, seed=4)
    outcome = run_trial(params, 0)
    assert outcome.score == outcome.raw_size - outcome.ap_count
    assert math.isclose(outcome.lemma_score, 2.0 * outcome.raw_size / 3.0 - outcome.ap_count)
    assert outcome.final_size <= outcome.raw_size
    assert outcome.completed_size is None
    assert count_3aps(outcome.survivors) == 0
    logger.info(f"✅ trial |A|={outcome.raw_size} T={outcome.ap_count} kept={outcome.final_size}")


def test_preimage_progressions_need_no_wraparound():
    """Test: every progression of a preimage set maps to a real-coordinate progression"""
    toy = params_for_spec(2000, AnnulusSpec(d=2, r=0.45, delta=0.08), trials=20, seed=13)
    auto = derive_params(10_000, trials=20, seed=13)
    checked = 0
    worst = 0.0
    for params in (toy, auto):
        for i in range(params.trials):
            theta, alpha = draw_rotation(params, i)
            for triple in iter_3aps(preimage(params, theta, alpha)):
                worst = max(worst, midpoint_residual(theta, alpha, triple))
                checked += 1
    assert checked > 0
    assert worst < 1e-9, worst
    logger.info(f"✅ {checked} preimage progressions, max residual {worst:.1e}")


# ============== CONSTRUCTION ==============

def test_construct_n100_certified():
    """Test: auto params at N = 100 give a certified set"""
    params = derive_params(100, trials=64, seed=0)
    s = construct(params)
    assert s.certified_ap_free
    assert count_3aps(s, "naive") == 0
    assert len(s) >= 2
    logger.info(f"✅ N=100: {len(s)} elements")


def test_construct_certified_sweep():
    """Test: N = 10^2 .. 10^6 over three seeds, output has no progression by two counting paths"""
    for n_limit in (10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6):
        for seed in (0, 1, 2):
            s = construct(derive_params(n_limit, trials=16, seed=seed))
            assert s.certified_ap_free and s.n_limit == n_limit
            assert count_3aps(s, "sparse") == 0, (n_limit, seed)
            assert count_3aps(s, "naive") == 0, (n_limit, seed)
            assert len(s) >= 1
        logger.info(f"✅ N={n_limit}: three seeds certified")


def test_construct_more_trials_never_worse():
    """Test: best of 64 trials >= trial 0 alone"""
    one = construct(derive_params(1000, trials=1, seed=5))
    many = construct(derive_params(1000, trials=64, seed=5))
    assert len(many) >= len(one)
    logger.info(f"✅ 1 trial -> {len(one)}, 64 trials -> {len(many)}")


def test_construct_n30_near_optimal(seed: int = 0):
    """Test: with completion to maximal sets, N = 30 lands within 4 of r3(30)"""
    optimum = exact_r3(30).r3
    params = derive_params(30, trials=256, seed=seed)
    built = construct_with_report(params, complete=True)
    assert built.result.certified_ap_free
    assert optimum - 4 <= len(built.result) <= optimum, (len(built.result), optimum)
    assert built.best.completed_size == len(built.result)
    logger.info(f"✅ N=30: {len(built.result)} vs r3 = {optimum}")


def test_lemma_selection():
    """Test: the lemma criterion picks the trial with the largest 2|A|/3 - T"""
    params = params_for_spec(300, AnnulusSpec(d=2, r=0.4, delta=0.06), trials=16, seed=2)
    built = construct_with_report(params, selection=SelectionCriterion.LEMMA_SCORE)
    top = max(o.lemma_score for o in built.outcomes)
    assert built.best.lemma_score == top
    assert built.result.certified_ap_free
    logger.info(f"✅ lemma selection: trial {built.best.trial_index}")


def test_size_floor():
    """Test: N vol / 6 and the shape term"""
    floor, _ = size_floor(100, 1, 0.05)
    assert math.isclose(floor, 5.0 / 6.0)
    assert size_floor(100, 3, 0.0)[0] == 0.0
    _, shape = size_floor(10 ** 6, 7, 0.01)
    assert math.isclose(shape, math.sqrt(7) * 2.0 ** -7 * (10 ** 6) ** (1 - 2 / 7), rel_tol=1e-12)
    _expect_parameter_error(size_floor, 100, 3, -0.1)
    logger.info("✅ size floor")


# ============== AUDIT ==============

def test_audit_standard_error_scaling(seed: int = 81):
    """Test: 4x the trials roughly halves the standard error"""
    params = params_for_spec(100, TOY_SPEC, trials=1, seed=seed)
    small = expectation_audit(params, 100, pair_samples=20_000)
    large = expectation_audit(params, 1600, pair_samples=20_000)
    ratio = small.raw_size_std_error / large.raw_size_std_error
    assert 2.5 <= ratio <= 6.5, ratio
    _expect_parameter_error(expectation_audit, params, 99)
    logger.info(f"✅ SE ratio 100 vs 1600 trials: {ratio:.2f} (expect ~4)")


def test_audit_auto_params(seed: int = 83):
    """Test: with auto parameters at N = 10^4, mean |A| over 200 trials is N vol(S)"""
    params = derive_params(10_000, trials=1, seed=seed)
    audit = expectation_audit(params, 200)
    assert audit.expectation_gap_sigmas(10_000) <= 3.0, audit
    logger.info(
        f"✅ N=10^4: E|A| = {audit.mean_raw_size:.2f} vs N vol = {audit.expected_raw_size(10_000):.2f}"
        f" ({audit.expectation_gap_sigmas(10_000):.2f} sigma)"
    )
