#!/usr/bin/env python3
"""
APFREE - Exact r3 Oracle
Branch and bound for the largest progression-free subset of {1, ..., N}.

Algorithm:
1. r3(1..N-1) are solved first; a set inside any window of L consecutive
   integers has at most r3(L) elements, which bounds every subtree.
2. Elements are decided in increasing order, include branch first, so sets
   are met in lexicographic order and the first optimum found is the
   lexicographically smallest one.
3. Including x forbids 2x - y for every earlier member y (bitmask).
4. A greedy deletion of {1..N} seeds the incumbent size.
"""

import logging
from typing import List, Optional

import numpy as np

from core.config import config
from core.errors import ParameterError
from core.models import CandidateSet, OracleResult, OracleStatus
from engine.apcore import greedy_delete_to_ap_free, verify_ap_free

logger = logging.getLogger(__name__)


class _BudgetExhausted(Exception):
    pass


class _Search:
    """DFS state for one N given r3 of all shorter intervals"""

    def __init__(self, N: int, table: List[int], incumbent: int, budget: int):
        self.N = N
        self.table = table
        self.budget = budget
        self.nodes = 0
        # Anything found must reach the incumbent size
        self.best_size = incumbent - 1
        self.best_mask = 0
        self.found = False
        self.full = (1 << (N + 1)) - 2

    def run(self) -> None:
        self._visit(1, 0, 0, 0)

    def _visit(self, x: int, members: int, forbidden: int, size: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted()
        if x > self.N:
            if size > self.best_size:
                self.best_size = size
                self.best_mask = members
                self.found = True
            return
        remaining = self.N - x + 1
        available = (self.full >> x << x) & ~forbidden
        window = self.table[remaining] if remaining < len(self.table) else self.table[-1] + 1
        bound = min(window, available.bit_count())
        if size + bound <= self.best_size:
            return

        if not (forbidden >> x) & 1:
            new_forbidden = forbidden
            y_bits = members
            while y_bits:
                low = y_bits & -y_bits
                y = low.bit_length() - 1
                z = 2 * x - y
                if z <= self.N:
                    new_forbidden |= 1 << z
                y_bits ^= low
            self._visit(x + 1, members | (1 << x), new_forbidden, size + 1)
        self._visit(x + 1, members, forbidden, size)


def _mask_elements(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def exact_r3(N: int, node_budget: Optional[int] = None) -> OracleResult:
    """Exact r3(N) with the lexicographically smallest optimal witness"""
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    budget = config.oracle.node_budget if node_budget is None else node_budget

    table = [0]
    witness = CandidateSet(1, ())
    total_nodes = 0
    for n in range(1, N + 1):
        greedy = greedy_delete_to_ap_free(CandidateSet.interval(n))
        search = _Search(n, table, incumbent=len(greedy), budget=budget - total_nodes)
        try:
            search.run()
        except _BudgetExhausted:
            total_nodes += search.nodes
            best = CandidateSet(n, tuple(_mask_elements(search.best_mask))) if search.found else greedy
            verify_ap_free(best)
            logger.warning(f"⚠️ oracle budget exhausted at N={n} after {total_nodes} nodes")
            return OracleResult(
                n_limit=N, r3=len(best), witness=CandidateSet(N, best.elements, best.certified_ap_free),
                nodes_explored=total_nodes, status=OracleStatus.BUDGET_EXHAUSTED,
            )
        total_nodes += search.nodes
        witness = CandidateSet(n, tuple(_mask_elements(search.best_mask))) if search.found else greedy
        table.append(len(witness))

    verify_ap_free(witness)
    logger.info(f"✅ r3({N}) = {table[N]} ({total_nodes} nodes)")
    return OracleResult(n_limit=N, r3=table[N], witness=witness, nodes_explored=total_nodes)


# ============== NAIVE CROSS-CHECK ==============

def _popcount_table(bits: int) -> np.ndarray:
    table = np.zeros(1 << bits, dtype=np.int64)
    for i in range(1, 1 << bits):
        table[i] = table[i >> 1] + (i & 1)
    return table


def naive_r3(N: int) -> int:
    """Brute force over all 2^N subsets, vectorised with numpy bit masks"""
    if N < 1:
        return 0
    if N > config.oracle.naive_limit:
        raise ParameterError(f"naive_r3 is limited to N <= {config.oracle.naive_limit}, got {N}")
    table = _popcount_table(12)
    best = 0
    chunk = 1 << 20
    for start in range(0, 1 << N, chunk):
        masks = np.arange(start, min(start + chunk, 1 << N), dtype=np.int64)
        ok = np.ones(masks.size, dtype=bool)
        for k in range(1, (N - 1) // 2 + 1):
            ok &= (masks & (masks >> k) & (masks >> (2 * k))) == 0
        good = masks[ok]
        if good.size:
            sizes = table[good & 0xFFF] + table[(good >> 12) & 0xFFF]
            best = max(best, int(sizes.max()))
    return best
