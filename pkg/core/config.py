#!/usr/bin/env python3
"""
APFREE - Configuration
Centralised settings for sampling, construction, oracle and reports.
"""

from pathlib import Path
from dataclasses import dataclass
from typing import List


# ============== PATHS ==============

BASE_DIR = Path(__file__).parent.parent
TEMPLATES_DIR = BASE_DIR / "templates"


# ============== GEOMETRY CONFIG ==============

@dataclass
class GeometryConfig:
    """Monte Carlo settings for the torus/annulus side"""
    # Sample counts
    volume_samples: int = 200_000
    radius_samples: int = 200_000
    pair_volume_samples: int = 200_000

    # Every sampling loop draws in fixed-size chunks, one substream per chunk
    chunk_size: int = 65_536

    # select_radius wants samples >= min_hits * 2^d / delta
    min_hits: int = 100

    # |norm - sqrt(d/12)| <= window counts as "concentrated"
    concentration_window: float = 1.0

    # Closed inequalities are tested with this absolute slack
    boundary_tolerance: float = 1e-12

    # Paper range for delta is the open interval (0, 1/10)
    max_delta: float = 0.1


# ============== AP CONFIG ==============

@dataclass
class ApConfig:
    """Integer-side counting and deletion"""
    enumeration_cap: int = 1_000_000

    # Bitset path is used when span^2 / 64 <= dense_factor * size^2
    dense_factor: float = 4.0

    # max_degree | one_per_progression
    deletion_strategy: str = "max_degree"


# ============== ELKIN CONFIG ==============

@dataclass
class ElkinConfig:
    """Randomised construction"""
    trials: int = 64
    c_delta: float = 1.0
    master_seed: int = 0

    # Formula delta is clamped below 1/10 unless strict mode is on
    delta_ceiling: float = 0.0999
    strict_delta_range: bool = False

    # final_size | lemma_score
    selection: str = "final_size"

    # Extend every trial's survivors to a maximal AP-free set
    complete_to_maximal: bool = False

    # Rows of n per vectorised preimage block
    preimage_chunk: int = 262_144

    threads: int = 1


# ============== BEHREND CONFIG ==============

@dataclass
class BehrendConfig:
    """Digit-sphere baseline"""
    # k is searched over round(sqrt(log2 N)) +/- k_radius
    k_radius: int = 1
    sphere_families: List[str] = None

    def __post_init__(self):
        if self.sphere_families is None:
            self.sphere_families = ["origin", "centred"]


# ============== ORACLE CONFIG ==============

@dataclass
class OracleConfig:
    """Exact r3 search"""
    node_budget: int = 100_000_000
    naive_limit: int = 24


# ============== OUTPUT CONFIG ==============

@dataclass
class OutputConfig:
    """Report and file formats"""
    report_formats: List[str] = None
    sweep_columns: List[str] = None
    float_digits: int = 12

    def __post_init__(self):
        if self.report_formats is None:
            self.report_formats = ["json", "csv", "md"]
        if self.sweep_columns is None:
            self.sweep_columns = [
                "N", "d", "delta", "r",
                "elkin_size", "behrend_size",
                "behrend_bound", "elkin_bound", "ratio",
            ]


# ============== GLOBAL CONFIG ==============

@dataclass
class ApFreeConfig:
    """Global configuration"""
    geometry: GeometryConfig = None
    ap: ApConfig = None
    elkin: ElkinConfig = None
    behrend: BehrendConfig = None
    oracle: OracleConfig = None
    output: OutputConfig = None

    # Debug
    debug_mode: bool = False

    def __post_init__(self):
        if self.geometry is None:
            self.geometry = GeometryConfig()
        if self.ap is None:
            self.ap = ApConfig()
        if self.elkin is None:
            self.elkin = ElkinConfig()
        if self.behrend is None:
            self.behrend = BehrendConfig()
        if self.oracle is None:
            self.oracle = OracleConfig()
        if self.output is None:
            self.output = OutputConfig()


# ============== DEFAULT INSTANCE ==============

config = ApFreeConfig()
