#!/usr/bin/env python3
"""
APFREE - Core Package
"""

from .models import (
    DeletionStrategy,
    SelectionCriterion,
    SphereFamily,
    OracleStatus,
    TorusPoint,
    AnnulusSpec,
    VolumeEstimate,
    NormStats,
    Chi2Result,
    ApTriple,
    CandidateSet,
    ConstructionParams,
    TrialOutcome,
    ConstructionResult,
    AuditReport,
    BehrendParams,
    OracleResult,
    BoundReport,
    RunReport
)

from .config import (
    BASE_DIR,
    TEMPLATES_DIR,
    ApFreeConfig,
    config
)

from .errors import (
    ApFreeError,
    ParameterError,
    DimensionMismatchError,
    PreconditionError,
    SetFileError,
    CertificationError
)

__all__ = [
    # Enums
    "DeletionStrategy",
    "SelectionCriterion",
    "SphereFamily",
    "OracleStatus",
    # Models
    "TorusPoint",
    "AnnulusSpec",
    "VolumeEstimate",
    "NormStats",
    "Chi2Result",
    "ApTriple",
    "CandidateSet",
    "ConstructionParams",
    "TrialOutcome",
    "ConstructionResult",
    "AuditReport",
    "BehrendParams",
    "OracleResult",
    "BoundReport",
    "RunReport",
    # Config
    "BASE_DIR",
    "TEMPLATES_DIR",
    "ApFreeConfig",
    "config",
    # Errors
    "ApFreeError",
    "ParameterError",
    "DimensionMismatchError",
    "PreconditionError",
    "SetFileError",
    "CertificationError"
]
