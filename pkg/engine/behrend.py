#!/usr/bin/env python3
"""
APFREE - Digit-Sphere Baseline

Integers whose base-2m digits all lie in {0, ..., m-1} add without carries,
so a + c = 2b forces the same relation digit by digit. Keeping only digit
vectors on one sphere then rules out nontrivial progressions (a sphere
contains no midpoint of two of its points).

Two sphere families are histogrammed exactly, with no sampling:
- origin:  sum d_i^2
- centred: sum (2 d_i - (m - 1))^2, the sphere centred in the digit cube
Digit value x is reported as the integer x + 1 so the set lives in [1, N].
"""

import math
import logging
from typing import Optional, Tuple

import numpy as np

from core.config import config
from core.errors import CertificationError, ParameterError
from core.models import BehrendParams, CandidateSet, SphereFamily
from engine.apcore import verify_ap_free

logger = logging.getLogger(__name__)


def alphabet_size(N: int, k: int) -> int:
    """m = ceil(N^(1/k) / 2), nudged so that (2m)^k >= N"""
    m = max(1, math.ceil(N ** (1.0 / k) / 2.0))
    while (2 * m) ** k < N:
        m += 1
    return m


def digit_vectors(N: int, k: int, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """(values, digits) for every vector in {0..m-1}^k with value + 1 <= N"""
    q = 2 * m
    codes = np.arange(m ** k, dtype=np.int64)
    digits = np.empty((codes.size, k), dtype=np.int64)
    rest = codes.copy()
    for i in range(k):
        rest, digits[:, i] = np.divmod(rest, m)
    values = digits @ (q ** np.arange(k, dtype=np.int64))
    keep = values <= N - 1
    return values[keep], digits[keep]


def shell_values(digits: np.ndarray, m: int, family: SphereFamily) -> np.ndarray:
    if family == SphereFamily.ORIGIN:
        return np.einsum("ij,ij->i", digits, digits)
    centred = 2 * digits - (m - 1)
    return np.einsum("ij,ij->i", centred, centred)


def shell_histogram(N: int, k: int, m: int, family: SphereFamily) -> np.ndarray:
    """Exact occupancy of every shell among digit vectors <= N - 1"""
    _, digits = digit_vectors(N, k, m)
    counts = np.bincount(shell_values(digits, m, family))
    if family == SphereFamily.ORIGIN and counts.size:
        counts[0] = 0
    return counts


def behrend_construct_with_params(N: int) -> Tuple[CandidateSet, BehrendParams]:
    if N < 4:
        raise ParameterError(f"N must be >= 4, got {N}")
    k0 = max(1, round(math.sqrt(math.log2(N))))
    radius = config.behrend.k_radius
    families = [SphereFamily(f) for f in config.behrend.sphere_families]

    best: Optional[Tuple[int, BehrendParams]] = None
    for k in range(max(1, k0 - radius), k0 + radius + 1):
        m = alphabet_size(N, k)
        for family in families:
            counts = shell_histogram(N, k, m, family)
            if counts.size == 0 or counts.max() == 0:
                continue
            shell = int(np.argmax(counts))
            size = int(counts[shell])
            logger.debug(f"   k={k} m={m} {family.value}: shell {shell} holds {size}")
            if best is None or size > best[0]:
                best = (size, BehrendParams(n_limit=N, base=2 * m, digits=k, shell=shell, family=family))

    if best is None:
        raise ParameterError(f"no digit sphere fits N={N}")
    params = best[1]
    m = params.alphabet
    values, digits = digit_vectors(N, params.digits, m)
    chosen = values[shell_values(digits, m, params.family) == params.shell] + 1
    result = CandidateSet.of(N, chosen.tolist())
    if not verify_ap_free(result):
        raise CertificationError(f"digit sphere set for N={N} contains a progression")
    logger.info(
        f"✅ digit sphere N={N}: k={params.digits} base={params.base} {params.family.value}"
        f" shell={params.shell} -> {len(result)} elements"
    )
    return result, params


def behrend_construct(N: int) -> CandidateSet:
    return behrend_construct_with_params(N)[0]
