"""Excepciones del dominio."""
from __future__ import annotations

from .domain_exceptions import (
    BoundInvalidError,
    ConfigurationError,
    DataIncompatibleError,
    DomainException,
    EnhancementTooAggressiveError,
    MeasurementError,
    NumericalError,
    ParameterDomainError,
    PsiRangeError,
    RankDeficiencyError,
    SingularInversionError,
    SpectrumIOError,
    UnsupportedFormError,
)

__all__ = [
    "DomainException", "ParameterDomainError", "UnsupportedFormError",
    "ConfigurationError", "SpectrumIOError", "NumericalError",
    "SingularInversionError", "DataIncompatibleError", "MeasurementError",
    "PsiRangeError", "BoundInvalidError", "EnhancementTooAggressiveError",
    "RankDeficiencyError",
]
