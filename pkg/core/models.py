#!/usr/bin/env python3
"""
APFREE - Core Models
Dataclasses and enums shared by the engine and the CLI.
"""

import math
from dataclasses import dataclass, field, asdict, fields
from typing import List, Dict, Optional, Any, Iterable, Tuple
from enum import Enum

import numpy as np

from core.errors import ParameterError, DimensionMismatchError


class DeletionStrategy(Enum):
    MAX_DEGREE = "max_degree"
    ONE_PER_PROGRESSION = "one_per_progression"


class SelectionCriterion(Enum):
    FINAL_SIZE = "final_size"
    LEMMA_SCORE = "lemma_score"


class SphereFamily(Enum):
    ORIGIN = "origin"      # sum d_i^2
    CENTRED = "centred"    # sum (2 d_i - (m - 1))^2


class OracleStatus(Enum):
    OPTIMAL = "optimal"
    BUDGET_EXHAUSTED = "budget_exhausted"


# ============== TORUS MODELS ==============

@dataclass(eq=False)
class TorusPoint:
    """A point of T^d stored as d coordinates in [0, 1)"""
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64).reshape(-1)
        if coords.size < 1:
            raise ParameterError("torus point needs dimension >= 1")
        if not np.all((coords >= 0.0) & (coords < 1.0)):
            raise ParameterError(f"torus coordinates must lie in [0, 1): {coords.tolist()}")
        self.coords = coords

    @property
    def dimension(self) -> int:
        return int(self.coords.size)

    @classmethod
    def zeros(cls, d: int) -> "TorusPoint":
        return cls(np.zeros(d))

    def require_dimension(self, d: int) -> None:
        if self.dimension != d:
            raise DimensionMismatchError(d, self.dimension)

    def to_list(self) -> List[float]:
        return self.coords.tolist()

    def __repr__(self) -> str:
        return f"TorusPoint({self.to_list()})"


@dataclass(frozen=True)
class AnnulusSpec:
    """Region S(r) = {x in [0,1/2]^d : r - delta <= |x| <= r}"""
    d: int
    r: float
    delta: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ParameterError(f"dimension must be a positive integer, got {self.d}")
        if not (0.0 < self.delta < 0.1):
            raise ParameterError(f"delta must lie in (0, 1/10), got {self.delta}")
        if not (self.delta <= self.r <= 0.5 * math.sqrt(self.d) + 1e-12):
            raise ParameterError(
                f"radius must satisfy delta <= r <= sqrt(d)/2, got r={self.r} (d={self.d}, delta={self.delta})"
            )

    @property
    def inner(self) -> float:
        return self.r - self.delta

    def to_dict(self) -> Dict:
        return {"d": self.d, "r": self.r, "delta": self.delta}

    @classmethod
    def from_dict(cls, data: Dict) -> "AnnulusSpec":
        return cls(d=int(data["d"]), r=float(data["r"]), delta=float(data["delta"]))


@dataclass(frozen=True)
class VolumeEstimate:
    """Monte Carlo estimate of a volume as a fraction of the torus"""
    mean: float
    std_error: float
    samples: int

    def within(self, value: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - value) <= sigmas * self.std_error

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass(frozen=True)
class NormStats:
    """Concentration of |x| for x uniform on [0,1/2]^d"""
    mean_norm: float
    fraction_within: float
    target: float
    samples: int


@dataclass(frozen=True)
class Chi2Result:
    """Orthant-cell uniformity test"""
    statistic: float
    p_value: float
    cells: int
    samples: int

    def passed(self, alpha: float = 1e-3) -> bool:
        return self.p_value >= alpha


# ============== INTEGER-SIDE MODELS ==============

@dataclass(frozen=True, order=True)
class ApTriple:
    """Three-term progression a < b < c with a + c = 2b"""
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not (self.a < self.b < self.c and self.a + self.c == 2 * self.b):
            raise ParameterError(f"not a 3-term progression: ({self.a}, {self.b}, {self.c})")

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass
class CandidateSet:
    """Sorted, duplicate-free subset of {1, ..., N}"""
    n_limit: int
    elements: Tuple[int, ...] = ()
    certified_ap_free: bool = False

    def __post_init__(self):
        if self.n_limit < 1:
            raise ParameterError(f"N must be positive, got {self.n_limit}")
        elements = tuple(int(x) for x in self.elements)
        for prev, cur in zip(elements, elements[1:]):
            if cur <= prev:
                raise ParameterError(f"elements must be strictly increasing ({prev} then {cur})")
        if elements and (elements[0] < 1 or elements[-1] > self.n_limit):
            raise ParameterError(f"elements must lie in [1, {self.n_limit}]")
        self.elements = elements

    @classmethod
    def of(cls, n_limit: int, values: Iterable[int]) -> "CandidateSet":
        """Build from any iterable (sorted and deduplicated here)"""
        return cls(n_limit=n_limit, elements=tuple(sorted({int(v) for v in values})))

    @classmethod
    def interval(cls, n_limit: int) -> "CandidateSet":
        return cls(n_limit=n_limit, elements=tuple(range(1, n_limit + 1)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, value: int) -> bool:
        return value in self.member_set

    @property
    def member_set(self) -> frozenset:
        cached = self.__dict__.get("_members")
        if cached is None:
            cached = frozenset(self.elements)
            self.__dict__["_members"] = cached
        return cached

    def as_array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.int64)

    def without(self, removed: Iterable[int]) -> "CandidateSet":
        gone = set(removed)
        return CandidateSet(self.n_limit, tuple(x for x in self.elements if x not in gone))


# ============== CONSTRUCTION MODELS ==============

@dataclass
class ConstructionParams:
    """Everything a construction run depends on"""
    n_limit: int
    d: int
    delta: float
    spec: AnnulusSpec
    trials: int
    master_seed: int
    c_delta: float = 1.0
    volume: Optional[VolumeEstimate] = None
    delta_clamped: bool = False

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError(f"d must be >= 1, got {self.d}")
        if not (0.0 < self.delta < 0.1):
            raise ParameterError(f"delta must lie in (0, 1/10), got {self.delta}")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if self.spec.d != self.d:
            raise DimensionMismatchError(self.d, self.spec.d)

    @property
    def r(self) -> float:
        return self.spec.r

    def to_dict(self) -> Dict:
        return {
            "N": self.n_limit,
            "d": self.d,
            "delta": self.delta,
            "r": self.spec.r,
            "trials": self.trials,
            "seed": self.master_seed,
            "c_delta": self.c_delta,
            "volume": self.volume.to_dict() if self.volume else None,
            "delta_clamped": self.delta_clamped,
        }


@dataclass
class TrialOutcome:
    """One (theta, alpha) draw"""
    trial_index: int
    theta: TorusPoint
    alpha: TorusPoint
    raw_size: int
    ap_count: int
    final_size: int
    completed_size: Optional[int] = None
    survivors: Optional[CandidateSet] = field(default=None, repr=False)

    @property
    def score(self) -> int:
        return self.raw_size - self.ap_count

    @property
    def lemma_score(self) -> float:
        """2|A|/3 - T(A), the quantity whose expectation the existence argument bounds"""
        return 2.0 * self.raw_size / 3.0 - self.ap_count

    @property
    def best_size(self) -> int:
        return self.completed_size if self.completed_size is not None else self.final_size

    def to_dict(self) -> Dict:
        return {
            "trial_index": self.trial_index,
            "theta": self.theta.to_list(),
            "alpha": self.alpha.to_list(),
            "raw_size": self.raw_size,
            "ap_count": self.ap_count,
            "final_size": self.final_size,
            "completed_size": self.completed_size,
            "score": self.score,
            "lemma_score": self.lemma_score,
        }


@dataclass
class ConstructionResult:
    """Best trial plus what the report needs"""
    params: ConstructionParams
    best: TrialOutcome
    result: CandidateSet
    floor: float
    shape_term: float
    outcomes: List[TrialOutcome] = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class AuditReport:
    """Monte Carlo check of the expectation identities"""
    trials: int
    mean_raw_size: float
    raw_size_std_error: float
    mean_ap_count: float
    ap_count_std_error: float
    vol_S_estimate: VolumeEstimate
    vol_B_estimate: VolumeEstimate
    predicted_mean_ap_count: float
    lemma3_lhs_rhs_ratio: float
    ratio_std_error: float
    inequality_margin: float

    def expected_raw_size(self, n_limit: int) -> float:
        return n_limit * self.vol_S_estimate.mean

    def combined_std_error(self, n_limit: int) -> float:
        return math.hypot(self.raw_size_std_error, n_limit * self.vol_S_estimate.std_error)

    def expectation_gap_sigmas(self, n_limit: int) -> float:
        se = self.combined_std_error(n_limit)
        gap = abs(self.mean_raw_size - self.expected_raw_size(n_limit))
        return gap / se if se > 0 else (0.0 if gap == 0 else math.inf)


@dataclass(frozen=True)
class BehrendParams:
    """Digit-sphere parameters: digits in {0..m-1}, base q = 2m, k digits"""
    n_limit: int
    base: int
    digits: int
    shell: int
    family: SphereFamily = SphereFamily.ORIGIN

    @property
    def alphabet(self) -> int:
        return self.base // 2


# ============== ORACLE MODELS ==============

@dataclass
class OracleResult:
    """Exact r3(N) with a witness"""
    n_limit: int
    r3: int
    witness: CandidateSet
    nodes_explored: int
    status: OracleStatus = OracleStatus.OPTIMAL

    @property
    def is_optimal(self) -> bool:
        return self.status == OracleStatus.OPTIMAL


# ============== REPORT MODELS ==============

@dataclass(frozen=True)
class BoundReport:
    """Bound formulas next to actual construction sizes"""
    n_limit: int
    behrend_value: float
    elkin_value: float
    construction_size: int
    behrend_size: Optional[int] = None
    ratios: Dict[str, float] = field(default_factory=dict)


@dataclass
class RunReport:
    """Serializable record of one CLI run"""
    command: str
    n_limit: int
    d: Optional[int] = None
    delta: Optional[float] = None
    r: Optional[float] = None
    seed: Optional[int] = None
    trials: Optional[int] = None
    c_delta: Optional[float] = None
    size: Optional[int] = None
    ap_count: Optional[int] = None
    elapsed_ms: float = 0.0
    volume_mean: Optional[float] = None
    volume_std_error: Optional[float] = None
    floor: Optional[float] = None
    shape_term: Optional[float] = None
    behrend_size: Optional[int] = None
    behrend_bound: Optional[float] = None
    elkin_bound: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        kwargs = {}
        for f in fields(cls):
            if f.name not in data:
                continue
            kwargs[f.name] = data[f.name]
        return cls(**kwargs)
