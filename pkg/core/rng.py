#!/usr/bin/env python3
"""
APFREE - Random Streams

Every random draw goes through a generator derived from
(seed, stream, index) with numpy's SeedSequence spawn keys, so a trial or a
sampling chunk sees the same numbers whatever the thread count or the order
in which work is scheduled.

Usage:
    from core.rng import Stream, substream, chunk_sizes

    rng = substream(seed, Stream.TRIAL, trial_index)
    theta = rng.random(d)
"""

from enum import IntEnum
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, List, Sequence, Tuple, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


class Stream(IntEnum):
    RADIUS = 1
    VOLUME = 2
    CONCENTRATION = 3
    TRIAL = 4
    EQUIDISTRIBUTION = 5
    PAIRS = 6
    TRIPLES = 7


def substream(seed: int, stream: Stream, index: int = 0) -> np.random.Generator:
    """Independent generator for (seed, stream, index)"""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(index)))
    return np.random.default_rng(seq)


def chunk_sizes(total: int, chunk: int) -> Iterator[Tuple[int, int]]:
    """Yield (chunk_index, size) covering `total` samples"""
    index = 0
    remaining = total
    while remaining > 0:
        size = min(chunk, remaining)
        yield index, size
        remaining -= size
        index += 1


def map_ordered(func: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """Apply `func` to every item, optionally on a thread pool; results keep item order"""
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
