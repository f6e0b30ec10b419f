#!/usr/bin/env python3
"""
APFREE - Bound Formulas
Evaluable forms of the two classical lower bounds for r3(N).

Convention: the hidden absolute constants are 1 and log^(1/4) N uses the
natural logarithm; only ratios between these numbers and real set sizes
are meaningful.
"""

import math
from typing import Optional

from core.errors import ParameterError
from core.models import BoundReport


def _core(N: float) -> float:
    """N / 2^(2 sqrt(2) sqrt(log2 N)), in log space"""
    if N < 8:
        raise ParameterError(f"bound formulas need N >= 8, got {N}")
    return math.exp(math.log(N) - 2.0 * math.sqrt(2.0) * math.sqrt(math.log2(N)) * math.log(2.0))


def behrend_bound(N: float) -> float:
    return _core(N) / math.log(N) ** 0.25


def elkin_bound(N: float) -> float:
    return _core(N) * math.log(N) ** 0.25


def shape_term(N: float, d: int) -> float:
    """sqrt(d) 2^-d N^(1 - 2/d)"""
    return math.exp(0.5 * math.log(d) - d * math.log(2.0) + (1.0 - 2.0 / d) * math.log(N))


def bound_report(N: int, construction_size: int, behrend_size: Optional[int] = None) -> BoundReport:
    b = behrend_bound(N)
    e = elkin_bound(N)
    ratios = {
        "size_over_elkin": construction_size / e,
        "size_over_behrend": construction_size / b,
    }
    if behrend_size is not None:
        ratios["behrend_size_over_behrend"] = behrend_size / b
        ratios["elkin_over_behrend_size"] = construction_size / behrend_size if behrend_size else math.inf
    return BoundReport(
        n_limit=N,
        behrend_value=b,
        elkin_value=e,
        construction_size=construction_size,
        behrend_size=behrend_size,
        ratios=ratios,
    )
