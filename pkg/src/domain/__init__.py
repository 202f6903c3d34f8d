"""
Domain Layer - Numérica pura del realce de resolución espectral.

Este módulo contiene los modelos, excepciones, puertos y servicios del
dominio, independientes de la CLI, del formato de archivos y de la
configuración.
"""

# Excepciones de dominio
from .exceptions.domain_exceptions import (
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

# Modelos de dominio
from .models import (
    ConcavityRegion,
    EnhancementResult,
    FitProblem,
    FitResult,
    Grid,
    KernelFamily,
    KernelSpec,
    LineSpectrum,
    RegularizationConfig,
    RegularizationMethod,
    SampledSpectrum,
    SourceCondition,
    SourceKind,
    SpectralLine,
    TaylorPoly,
)

__all__ = [
    # Excepciones
    "DomainException",
    "ParameterDomainError",
    "UnsupportedFormError",
    "ConfigurationError",
    "SpectrumIOError",
    "NumericalError",
    "SingularInversionError",
    "DataIncompatibleError",
    "MeasurementError",
    "PsiRangeError",
    "BoundInvalidError",
    "EnhancementTooAggressiveError",
    "RankDeficiencyError",
    # Modelos
    "KernelFamily",
    "KernelSpec",
    "TaylorPoly",
    "Grid",
    "SampledSpectrum",
    "SpectralLine",
    "LineSpectrum",
    "RegularizationMethod",
    "RegularizationConfig",
    "EnhancementResult",
    "SourceKind",
    "SourceCondition",
    "ConcavityRegion",
    "FitProblem",
    "FitResult",
]
