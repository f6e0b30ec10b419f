#!/usr/bin/env python3
"""
APFREE - Exact Oracle Tests
"""

import itertools
import logging

from core.errors import ParameterError
from core.models import CandidateSet, OracleStatus
from engine.apcore import verify_ap_free
from engine.oracle import exact_r3, naive_r3

logger = logging.getLogger(__name__)

# r3(1..14) by exhaustive search
KNOWN_R3 = [1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8]


def test_exact_small_values():
    """Test: r3(1) = 1, r3(5) = 4 with witness {1,2,4,5}, r3(9) = 5"""
    assert exact_r3(1).r3 == 1
    five = exact_r3(5)
    assert five.r3 == 4 and five.witness.elements == (1, 2, 4, 5)
    assert five.is_optimal and five.status == OracleStatus.OPTIMAL
    assert exact_r3(9).r3 == 5
    logger.info("✅ small r3 values")


def test_naive_small_values():
    """Test: brute force reproduces the known table"""
    assert naive_r3(4) == 3
    assert naive_r3(12) == 6
    assert [naive_r3(n) for n in range(1, 15)] == KNOWN_R3
    logger.info("✅ naive r3 table")


def test_exact_matches_naive():
    """Test: branch and bound agrees with brute force up to N = 20"""
    for n in range(1, 21):
        result = exact_r3(n)
        assert result.r3 == naive_r3(n), n
        assert len(result.witness) == result.r3
        assert verify_ap_free(result.witness)
    logger.info(f"✅ exact == naive for N <= 20 (r3(20) = {exact_r3(20).r3})")


def test_r3_steps_by_at_most_one():
    """Test: r3(N) <= r3(N + 1) <= r3(N) + 1 for N <= 40"""
    values = [exact_r3(n).r3 for n in range(1, 42)]
    assert values[:14] == KNOWN_R3
    for n, (here, after) in enumerate(zip(values, values[1:]), start=1):
        assert here <= after <= here + 1, (n, here, after)
    logger.info(f"✅ r3 monotone with unit steps up to N = 41 (r3(40) = {values[39]})")


def _lex_first_optimum(n: int, size: int) -> tuple:
    for combo in itertools.combinations(range(1, n + 1), size):
        if verify_ap_free(CandidateSet(n, combo)):
            return combo
    raise AssertionError(f"no AP-free set of size {size} in [{n}]")


def test_witness_is_lexicographically_smallest():
    """Test: the witness is the first optimal set in lexicographic order"""
    for n in range(3, 16):
        result = exact_r3(n)
        assert result.witness.elements == _lex_first_optimum(n, result.r3), n
    logger.info("✅ witnesses are lexicographically smallest")


def test_budget_exhaustion():
    """Test: a tiny budget returns a certified set flagged as not proven"""
    result = exact_r3(40, node_budget=200)
    assert result.status == OracleStatus.BUDGET_EXHAUSTED
    assert not result.is_optimal
    assert result.witness.certified_ap_free
    assert result.witness.n_limit == 40
    assert result.nodes_explored > 0
    logger.info(f"✅ budget result: size {result.r3} after {result.nodes_explored} nodes")


def test_oracle_errors():
    """Test: N < 1 and N beyond the brute-force limit"""
    for func, arg in ((exact_r3, 0), (naive_r3, 25)):
        try:
            func(arg)
            raise AssertionError(f"{func.__name__}({arg}) accepted")
        except ParameterError:
            pass
    logger.info("✅ oracle errors")
