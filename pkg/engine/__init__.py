#!/usr/bin/env python3
"""
APFREE - Engine Package
"""

from .apcore import (
    count_3aps,
    enumerate_3aps,
    first_3ap,
    verify_ap_free,
    greedy_delete_to_ap_free,
    complete_greedily
)

from .elkin import (
    derive_params,
    construct,
    construct_with_report,
    expectation_audit
)

from .behrend import behrend_construct
from .oracle import exact_r3, naive_r3
from .bounds import behrend_bound, elkin_bound, bound_report

__all__ = [
    # Progressions
    "count_3aps",
    "enumerate_3aps",
    "first_3ap",
    "verify_ap_free",
    "greedy_delete_to_ap_free",
    "complete_greedily",
    # Torus construction
    "derive_params",
    "construct",
    "construct_with_report",
    "expectation_audit",
    # Baseline and oracle
    "behrend_construct",
    "exact_r3",
    "naive_r3",
    # Bounds
    "behrend_bound",
    "elkin_bound",
    "bound_report"
]
