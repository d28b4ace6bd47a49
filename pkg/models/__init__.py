"""
Data models for the intermediate β-shift toolkit
"""

from .shift_models import (
    AdmissibilityReport,
    KneadingPair,
    Params,
    PeriodizationTrace,
    PrefixReport,
    ScanRecord,
    SftApproximation,
    SftCertificate,
    ShiftClassification,
    ShiftStatus,
    Side,
    ValidationOutcome,
)

__all__ = [
    "AdmissibilityReport",
    "KneadingPair",
    "Params",
    "PeriodizationTrace",
    "PrefixReport",
    "ScanRecord",
    "SftApproximation",
    "SftCertificate",
    "ShiftClassification",
    "ShiftStatus",
    "Side",
    "ValidationOutcome",
]
