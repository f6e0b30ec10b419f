#!/usr/bin/env python3
"""
APFREE - Torus Geometry
Affine maps into T^d, the annulus S(r) and the Monte Carlo machinery around it.

The torus is identified with [0,1)^d. S(r) is the set of points of
[0,1/2]^d whose Euclidean norm lies in [r - delta, r]; it never touches the
boundary of the fundamental cube, so progressions mapped into it need no
reduction mod 1.

All samplers work in fixed-size chunks, one random substream per chunk
(see core.rng), so estimates only depend on (inputs, seed).
"""

import math
import logging
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from core.config import config
from core.errors import ParameterError, DimensionMismatchError
from core.models import AnnulusSpec, TorusPoint, VolumeEstimate, NormStats, Chi2Result
from core.rng import Stream, substream, chunk_sizes, map_ordered

logger = logging.getLogger(__name__)


# ============== AFFINE MAP ==============

def psi_map(n: int, theta: TorusPoint, alpha: TorusPoint) -> TorusPoint:
    """Fractional part of theta * n + alpha, coordinatewise"""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if theta.dimension != alpha.dimension:
        raise DimensionMismatchError(theta.dimension, alpha.dimension)
    return TorusPoint(_wrap(theta.coords * n + alpha.coords))


def psi_map_many(ns: np.ndarray, theta: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Rows psi(n) for every n in `ns`; shape (len(ns), d)"""
    ns = np.asarray(ns, dtype=np.float64).reshape(-1, 1)
    return _wrap(ns * theta[None, :] + alpha[None, :])


def _wrap(values: np.ndarray) -> np.ndarray:
    frac = values - np.floor(values)
    # rounds up to exactly 1.0 for tiny negative inputs
    frac[frac >= 1.0] = 0.0
    return frac


def centred_lift(point: TorusPoint) -> np.ndarray:
    """Representative of a torus point in [-1/2, 1/2)^d"""
    coords = point.coords.copy()
    coords[coords >= 0.5] -= 1.0
    return coords


# ============== ANNULUS ==============

def annulus_mask(points: np.ndarray, spec: AnnulusSpec, tol: Optional[float] = None) -> np.ndarray:
    """Row-wise membership in S(r) for real vectors (box and both radii closed)"""
    if tol is None:
        tol = config.geometry.boundary_tolerance
    points = np.atleast_2d(points)
    if points.shape[1] != spec.d:
        raise DimensionMismatchError(spec.d, points.shape[1])
    in_box = np.all((points >= -tol) & (points <= 0.5 + tol), axis=1)
    norms = np.sqrt(np.einsum("ij,ij->i", points, points))
    return in_box & (norms >= spec.inner - tol) & (norms <= spec.r + tol)


def annulus_contains(p: TorusPoint, spec: AnnulusSpec) -> bool:
    p.require_dimension(spec.d)
    return bool(annulus_mask(p.coords[None, :], spec)[0])


def _box_hits(spec: AnnulusSpec, seed: int, stream: Stream, index: int, size: int, scale: float) -> int:
    rng = substream(seed, stream, index)
    points = rng.random((size, spec.d)) * scale
    return int(np.count_nonzero(annulus_mask(points, spec)))


def estimate_annulus_volume(
    spec: AnnulusSpec,
    samples: int,
    seed: int,
    method: str = "box",
    threads: int = 1,
) -> VolumeEstimate:
    """
    Monte Carlo estimate of vol(S(r)) as a fraction of T^d.

    method="torus" draws uniform points of [0,1)^d. method="box" draws
    uniform points of [0,1/2]^d and scales by 2^-d; since S lies inside
    that box both are unbiased, and "box" has 2^d fewer wasted samples.
    """
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    if method == "box":
        scale, factor = 0.5, 2.0 ** (-spec.d)
    elif method == "torus":
        scale, factor = 1.0, 1.0
    else:
        raise ParameterError(f"unknown volume method: {method}")

    chunks = list(chunk_sizes(samples, config.geometry.chunk_size))
    hits = sum(map_ordered(
        lambda c: _box_hits(spec, seed, Stream.VOLUME, c[0], c[1], scale), chunks, threads
    ))
    p = hits / samples
    se = math.sqrt(p * (1.0 - p) / (samples - 1)) if samples > 1 else 0.0
    estimate = VolumeEstimate(mean=p * factor, std_error=se * factor, samples=samples)
    logger.debug(f"🎲 vol(S) d={spec.d} r={spec.r:.4f} delta={spec.delta:.4f}: {estimate.mean:.3e} ± {estimate.std_error:.1e}")
    return estimate


# ============== RADIUS SELECTION ==============

def _norm_histogram(d: int, delta: float, bins: int, seed: int, index: int, size: int) -> np.ndarray:
    rng = substream(seed, Stream.RADIUS, index)
    points = rng.random((size, d)) * 0.5
    norms = np.sqrt(np.einsum("ij,ij->i", points, points))
    idx = np.minimum((norms / delta).astype(np.int64), bins - 1)
    return np.bincount(idx, minlength=bins)


def select_radius(d: int, delta: float, samples: int, seed: int, threads: int = 1) -> AnnulusSpec:
    """
    Pigeonhole over the norm histogram: bins of width delta on [0, sqrt(d)/2],
    outer radius = right edge of the fullest bin (ties -> smaller r).
    """
    if d < 1:
        raise ParameterError(f"d must be >= 1, got {d}")
    if not (0.0 < delta < config.geometry.max_delta):
        raise ParameterError(f"delta must lie in (0, 1/10), got {delta}")
    if samples < 1:
        raise ParameterError("samples must be >= 1")

    wanted = config.geometry.min_hits * (2.0 ** d) / delta
    if samples < wanted:
        logger.warning(
            f"⚠️ select_radius: {samples} samples < {wanted:.3g} suggested for d={d}, delta={delta:.4g}"
        )

    half_diag = 0.5 * math.sqrt(d)
    bins = max(1, math.ceil(half_diag / delta))
    chunks = list(chunk_sizes(samples, config.geometry.chunk_size))
    counts = sum(map_ordered(
        lambda c: _norm_histogram(d, delta, bins, seed, c[0], c[1]), chunks, threads
    ))
    best = int(np.argmax(counts))
    r = min((best + 1) * delta, half_diag)
    logger.debug(f"🔍 select_radius d={d}: bin {best}/{bins} holds {int(counts[best])}/{samples} -> r={r:.4f}")
    return AnnulusSpec(d=d, r=r, delta=delta)


def norm_concentration_stats(d: int, samples: int, seed: int) -> NormStats:
    """Mean of |x| and the share within C of sqrt(d/12), x uniform on [0,1/2]^d"""
    if samples < 10_000:
        logger.warning(f"⚠️ norm_concentration_stats: only {samples} samples")
    target = math.sqrt(d / 12.0)
    window = config.geometry.concentration_window
    total_norm = 0.0
    within = 0
    for index, size in chunk_sizes(samples, config.geometry.chunk_size):
        rng = substream(seed, Stream.CONCENTRATION, index)
        points = rng.random((size, d)) * 0.5
        norms = np.sqrt(np.einsum("ij,ij->i", points, points))
        total_norm += float(norms.sum())
        within += int(np.count_nonzero(np.abs(norms - target) <= window))
    return NormStats(
        mean_norm=total_norm / samples,
        fraction_within=within / samples,
        target=target,
        samples=samples,
    )


# ============== EQUIDISTRIBUTION ==============

def _orthant_cells(points: np.ndarray) -> np.ndarray:
    weights = 1 << np.arange(points.shape[1], dtype=np.int64)
    return (points >= 0.5).astype(np.int64) @ weights


def equidistribution_chi2(
    n: int,
    d: int,
    samples: int,
    seed: int,
    n_prime: Optional[int] = None,
) -> Chi2Result:
    """
    chi^2 test that psi(n) (or the pair psi(n), psi(n')) is uniform when
    theta and alpha are uniform: counts over the 2^d half-open orthant cells
    of T^d (4^d cells for the pair).
    """
    if n < 1 or (n_prime is not None and (n_prime < 1 or n_prime == n)):
        raise ParameterError("need n >= 1 and a distinct n' >= 1")
    cells = 2 ** d if n_prime is None else 4 ** d
    if samples < 5 * cells:
        raise ParameterError(f"{samples} samples too few for {cells} cells")

    counts = np.zeros(cells, dtype=np.int64)
    for index, size in chunk_sizes(samples, config.geometry.chunk_size):
        rng = substream(seed, Stream.EQUIDISTRIBUTION, index)
        theta = rng.random((size, d))
        alpha = rng.random((size, d))
        cell = _orthant_cells(_wrap(theta * n + alpha))
        if n_prime is not None:
            cell = cell + (_orthant_cells(_wrap(theta * n_prime + alpha)) << d)
        counts += np.bincount(cell, minlength=cells)

    statistic, p_value = stats.chisquare(counts)
    return Chi2Result(statistic=float(statistic), p_value=float(p_value), cells=cells, samples=samples)


# ============== PAIR VOLUME ==============

def ball_volume(d: int, radius: float) -> float:
    return math.exp((d / 2.0) * math.log(math.pi) + d * math.log(radius) - math.lgamma(d / 2.0 + 1.0))


def _uniform_ball(rng: np.random.Generator, size: int, d: int, radius: float) -> np.ndarray:
    g = rng.standard_normal((size, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * (radius * rng.random(size) ** (1.0 / d))[:, None]


def estimate_pair_volume(spec: AnnulusSpec, samples: int, seed: int) -> VolumeEstimate:
    """
    vol(B) for B = {(x, y) : x - y, x, x + y in S} inside T^d x T^d.

    Every admissible y has |y| <= sqrt(2 delta r) (parallelogram law), so x
    is drawn from [0,1/2]^d and y from that ball (or from the centred unit
    cell when the ball would not fit), and the hit rate is scaled by the
    two sampling volumes.
    """
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    d = spec.d
    rho = math.sqrt(2.0 * spec.delta * spec.r)
    use_ball = rho < 0.5
    y_volume = ball_volume(d, rho) if use_ball else 1.0
    factor = (2.0 ** (-d)) * y_volume

    hits = 0
    for index, size in chunk_sizes(samples, config.geometry.chunk_size):
        rng = substream(seed, Stream.PAIRS, index)
        x = rng.random((size, d)) * 0.5
        y = _uniform_ball(rng, size, d, rho) if use_ball else rng.random((size, d)) - 0.5
        ok = annulus_mask(x, spec) & annulus_mask(x + y, spec) & annulus_mask(x - y, spec)
        hits += int(np.count_nonzero(ok))

    p = hits / samples
    se = math.sqrt(p * (1.0 - p) / (samples - 1)) if samples > 1 else 0.0
    return VolumeEstimate(mean=p * factor, std_error=se * factor, samples=samples)


# ============== TRIPLE SAMPLER ==============

def sample_annulus_triples(
    spec: AnnulusSpec,
    count: int,
    seed: int,
    spread: float = 1.2,
    repeats: int = 16,
    max_batches: int = 10_000,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rejection-sample (x, y) with x - y, x, x + y all in S as real vectors.

    x is drawn uniformly from [0,1/2]^d and kept when it lies in S. Each kept
    x is paired with `repeats` proposals y uniform in the ball of radius
    spread * sqrt(2 delta r), so proposals overshoot the bound the
    parallelogram law gives in every direction, single coordinates included.
    """
    d = spec.d
    radius = spread * math.sqrt(2.0 * spec.delta * spec.r)
    batch = config.geometry.chunk_size
    xs, ys = [], []
    found = 0
    for index in range(max_batches):
        if found >= count:
            break
        rng = substream(seed, Stream.TRIPLES, index)
        x = rng.random((batch, d)) * 0.5
        x = np.repeat(x[annulus_mask(x, spec)], repeats, axis=0)
        y = _uniform_ball(rng, len(x), d, radius)
        ok = annulus_mask(x + y, spec) & annulus_mask(x - y, spec)
        xs.append(x[ok])
        ys.append(y[ok])
        found += int(np.count_nonzero(ok))
    if found < count:
        logger.warning(f"⚠️ sample_annulus_triples: only {found}/{count} triples after {max_batches} batches")
    x_all = np.concatenate(xs)[:count] if xs else np.empty((0, d))
    y_all = np.concatenate(ys)[:count] if ys else np.empty((0, d))
    return x_all, y_all
