#!/usr/bin/env python3
"""
APFREE - Bound Formula Tests
"""

import math
import logging

from core.errors import ParameterError
from engine.bounds import behrend_bound, bound_report, elkin_bound, shape_term

logger = logging.getLogger(__name__)


def test_behrend_bound_value():
    """Test: direct evaluation at N = 2^16"""
    n = 2 ** 16
    expected = n / (2.0 ** (2.0 * math.sqrt(2.0) * 4.0) * math.log(n) ** 0.25)
    assert math.isclose(behrend_bound(n), expected, rel_tol=1e-12)
    logger.info(f"✅ behrend_bound(2^16) = {behrend_bound(n):.6g}")


def test_ratio_identity():
    """Test: elkin / behrend = sqrt(ln N) and behrend < elkin"""
    for n in (8, 10, 100, 12345, 10 ** 6, 10 ** 9, 2 ** 40):
        ratio = elkin_bound(n) / behrend_bound(n)
        assert math.isclose(ratio, math.sqrt(math.log(n)), rel_tol=1e-12), n
        assert behrend_bound(n) < elkin_bound(n)
    logger.info("✅ ratio identity")


def test_bounds_domain():
    """Test: positive, finite, increasing from N = 100; N < 8 is an error"""
    previous = 0.0
    for exponent in range(20, 91):
        n = 10 ** (exponent / 10.0)
        b, e = behrend_bound(n), elkin_bound(n)
        assert 0 < b < math.inf and 0 < e < math.inf
        assert b > previous, n
        previous = b
    logger.info(f"✅ elkin_bound(10^6) = {elkin_bound(10 ** 6):.6g}")

    for func in (behrend_bound, elkin_bound):
        try:
            func(7)
            raise AssertionError(f"{func.__name__}(7) accepted")
        except ParameterError:
            pass


def test_shape_term_and_report():
    """Test: shape term formula and report ratios"""
    assert math.isclose(shape_term(10 ** 6, 7), math.sqrt(7) / 128.0 * (10 ** 6) ** (5.0 / 7.0), rel_tol=1e-12)
    report = bound_report(10 ** 4, 40, behrend_size=60)
    assert math.isclose(report.ratios["size_over_elkin"], 40 / report.elkin_value)
    assert math.isclose(report.ratios["behrend_size_over_behrend"], 60 / report.behrend_value)
    assert math.isclose(report.ratios["elkin_over_behrend_size"], 40 / 60)
    assert "elkin_over_behrend_size" not in bound_report(10 ** 4, 40).ratios
    logger.info("✅ bound report")
