#!/usr/bin/env python3
"""
APFREE - Progression Core
Exact integer machinery: counting, enumerating and deleting 3-term
progressions, plus the geometric probes that tie torus points back to them.

RULES:
- Certification only ever uses integer arithmetic
- Counting has a bit-parallel path and a naive reference path; they must agree
- Deletion always ends with a verified, certified set
"""

import heapq
import math
import logging
from collections import defaultdict
from typing import Dict, Iterator, List, Optional

import numpy as np

from core.config import config
from core.errors import CertificationError, PreconditionError
from core.models import AnnulusSpec, ApTriple, CandidateSet, DeletionStrategy, TorusPoint
from engine.geometry import annulus_mask, centred_lift

logger = logging.getLogger(__name__)


# ============== COUNTING ==============

def to_bitset(s: CandidateSet, offset: int = 0) -> int:
    """Characteristic vector as a Python int, bit (x - offset) set for x in s"""
    if not s.elements:
        return 0
    span = s.elements[-1] - offset + 1
    char = np.zeros(span, dtype=np.uint8)
    char[s.as_array() - offset] = 1
    return int.from_bytes(np.packbits(char, bitorder="little").tobytes(), "little")


def count_3aps_bitset(s: CandidateSet) -> int:
    """
    Bit-parallel count: for each step k, bits of B & (B >> k) & (B >> 2k)
    mark the starts of progressions (a, a + k, a + 2k) inside s.
    """
    if len(s) < 3:
        return 0
    lo = s.elements[0]
    bits = to_bitset(s, offset=lo)
    span = s.elements[-1] - lo
    total = 0
    for k in range(1, span // 2 + 1):
        total += (bits & (bits >> k) & (bits >> (2 * k))).bit_count()
    return total


def count_3aps_naive(s: CandidateSet) -> int:
    """Reference count: every pair (a, c) of equal parity with its midpoint in s"""
    members = s.member_set
    elements = s.elements
    total = 0
    for i, a in enumerate(elements):
        for c in elements[i + 2:]:
            if (a + c) % 2 == 0 and (a + c) // 2 in members:
                total += 1
    return total


def count_3aps_sparse(s: CandidateSet) -> int:
    """Vectorised midpoint lookup, O(|s|^2) work independent of N"""
    if len(s) < 3:
        return 0
    arr = s.as_array()
    char = np.zeros(s.elements[-1] + 1, dtype=bool)
    char[arr] = True
    total = 0
    for i in range(len(arr) - 2):
        sums = arr[i] + arr[i + 2:]
        mids = sums[(sums & 1) == 0] >> 1
        total += int(np.count_nonzero(char[mids]))
    return total


def count_3aps(s: CandidateSet, method: str = "auto") -> int:
    """Number of unordered progressions a < b < c, a + c = 2b, inside s"""
    if method == "naive":
        return count_3aps_naive(s)
    if method == "bitset":
        return count_3aps_bitset(s)
    if method == "sparse":
        return count_3aps_sparse(s)
    if len(s) < 3:
        return 0
    span = s.elements[-1] - s.elements[0]
    dense = span * span / 64.0 <= config.ap.dense_factor * len(s) * len(s)
    return count_3aps_bitset(s) if dense else count_3aps_sparse(s)


def full_interval_3ap_count(N: int) -> int:
    """sum over k >= 1 of max(0, N - 2k): progressions inside {1, ..., N}"""
    if N < 1:
        return 0
    m = (N - 1) // 2
    return m * N - m * (m + 1)


# ============== ENUMERATION ==============

def iter_3aps(s: CandidateSet) -> Iterator[ApTriple]:
    """Progressions of s in lexicographic order of (a, b, c)"""
    members = s.member_set
    elements = s.elements
    if not elements:
        return
    top = elements[-1]
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            c = 2 * b - a
            if c > top:
                break
            if c in members:
                yield ApTriple(a, b, c)


def enumerate_3aps(s: CandidateSet, cap: Optional[int] = None) -> List[ApTriple]:
    """First `cap` progressions in lexicographic order (all of them if fewer)"""
    if cap is None:
        cap = config.ap.enumeration_cap
    if cap < 1:
        raise PreconditionError("cap must be >= 1")
    found = []
    for triple in iter_3aps(s):
        found.append(triple)
        if len(found) >= cap:
            break
    return found


def first_3ap(s: CandidateSet) -> Optional[ApTriple]:
    return next(iter_3aps(s), None)


def verify_ap_free(s: CandidateSet) -> bool:
    """Exact check; stamps s.certified_ap_free with the answer"""
    ok = count_3aps(s) == 0
    s.certified_ap_free = ok
    return ok


# ============== DELETION ==============

def _delete_max_degree(s: CandidateSet, triples: List[ApTriple]) -> List[int]:
    incidence: Dict[int, List[int]] = defaultdict(list)
    for t_id, t in enumerate(triples):
        for x in t.as_tuple():
            incidence[x].append(t_id)
    degree = {x: len(ids) for x, ids in incidence.items()}
    alive = [True] * len(triples)
    heap = [(-deg, x) for x, deg in degree.items()]
    heapq.heapify(heap)

    deleted = []
    while heap:
        neg_deg, x = heapq.heappop(heap)
        if degree.get(x, 0) != -neg_deg or neg_deg == 0:
            continue
        deleted.append(x)
        degree[x] = 0
        for t_id in incidence[x]:
            if not alive[t_id]:
                continue
            alive[t_id] = False
            for other in triples[t_id].as_tuple():
                if other != x and degree[other] > 0:
                    degree[other] -= 1
                    heapq.heappush(heap, (-degree[other], other))
    return deleted


def _delete_one_per_progression(triples: List[ApTriple]) -> List[int]:
    deleted = set()
    order = []
    for t in triples:
        if deleted.isdisjoint(t.as_tuple()):
            deleted.add(t.c)
            order.append(t.c)
    return order


def greedy_delete_to_ap_free(s: CandidateSet, strategy: Optional[DeletionStrategy] = None) -> CandidateSet:
    """
    Delete elements until no progression survives.

    max_degree: repeatedly remove the element lying on the most surviving
    progressions, smallest element first on ties.
    one_per_progression: walk progressions in lexicographic order and drop
    the largest element of each one still intact.
    """
    if strategy is None:
        strategy = DeletionStrategy(config.ap.deletion_strategy)
    triples = list(iter_3aps(s))
    if not triples:
        result = CandidateSet(s.n_limit, s.elements)
    else:
        if strategy == DeletionStrategy.MAX_DEGREE:
            deleted = _delete_max_degree(s, triples)
        else:
            deleted = _delete_one_per_progression(triples)
        result = s.without(deleted)
        logger.debug(f"✂️ deleted {len(deleted)} of {len(s)} ({len(triples)} progressions)")

    if not verify_ap_free(result):
        raise CertificationError(f"deletion left progressions in a set of size {len(result)}")
    return result


# ============== COMPLETION ==============

def complete_greedily(s: CandidateSet, block: int = 4096) -> CandidateSet:
    """Add n = 1..N in increasing order whenever no progression appears"""
    N = s.n_limit
    blocked = np.zeros(N + 1, dtype=bool)
    blocked[0] = True
    members = np.zeros(N, dtype=np.int64)
    count = 0

    def forbid(x: int, current: np.ndarray) -> None:
        if current.size == 0:
            return
        for cand in (2 * x - current, 2 * current - x):
            blocked[cand[(cand >= 1) & (cand <= N)]] = True
        sums = x + current
        blocked[sums[(sums & 1) == 0] >> 1] = True

    for x in s.elements:
        forbid(x, members[:count])
        members[count] = x
        count += 1
    blocked[s.as_array()] = True

    pos = 1
    while pos <= N:
        end = min(N, pos + block - 1)
        for n in (np.flatnonzero(~blocked[pos:end + 1]) + pos).tolist():
            if blocked[n]:
                continue
            forbid(n, members[:count])
            members[count] = n
            count += 1
            blocked[n] = True
        pos = end + 1

    result = CandidateSet.of(N, members[:count].tolist())
    if not verify_ap_free(result):
        raise CertificationError("greedy completion produced a progression")
    return result


# ============== GEOMETRIC PROBES ==============

def check_difference_norm_bound(x: TorusPoint, y: TorusPoint, spec: AnnulusSpec) -> bool:
    """
    For x - y, x, x + y in S (real vectors, y read in [-1/2, 1/2)^d) the
    parallelogram law forces |y| <= sqrt(2 delta r). Returns that comparison.
    """
    x.require_dimension(spec.d)
    y.require_dimension(spec.d)
    xv = x.coords
    yv = centred_lift(y)
    triple = np.stack([xv - yv, xv, xv + yv])
    if not np.all(annulus_mask(triple, spec)):
        raise PreconditionError("x - y, x, x + y must all lie in S")
    return bool(np.linalg.norm(yv) <= math.sqrt(2.0 * spec.delta * spec.r) + config.geometry.boundary_tolerance)


def difference_norm_violations(xs: np.ndarray, ys: np.ndarray, spec: AnnulusSpec) -> int:
    """Vectorised probe over many (x, y) rows; rows outside the precondition raise"""
    ok = annulus_mask(xs, spec) & annulus_mask(xs - ys, spec) & annulus_mask(xs + ys, spec)
    if not np.all(ok):
        raise PreconditionError(f"{int(np.count_nonzero(~ok))} rows violate the precondition")
    bound = math.sqrt(2.0 * spec.delta * spec.r) + config.geometry.boundary_tolerance
    return int(np.count_nonzero(np.linalg.norm(ys, axis=1) > bound))


def midpoint_residual(theta: np.ndarray, alpha: np.ndarray, triple: ApTriple) -> float:
    """
    max |psi(a) + psi(c) - 2 psi(b)| computed in real coordinates, no mod 1.
    Zero (up to rounding) whenever all three images lie in [0,1/2]^d.
    """
    images = np.mod(np.outer(np.array(triple.as_tuple(), dtype=np.float64), theta) + alpha, 1.0)
    return float(np.max(np.abs(images[0] + images[2] - 2.0 * images[1])))
