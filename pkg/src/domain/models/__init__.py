"""Modelos de dominio del sistema."""
from __future__ import annotations

from .bounds_models import ConcavityRegion, SourceCondition, SourceKind
from .enhancement_models import EnhancementResult, RegularizationConfig, RegularizationMethod
from .fitting_models import FitProblem, FitResult, LineShape
from .kernel_models import KernelFamily, KernelSpec, TaylorPoly
from .spectrum_models import Grid, LineSpectrum, SampledSpectrum, SpectralLine

__all__ = [
    "KernelFamily", "KernelSpec", "TaylorPoly",
    "Grid", "SampledSpectrum", "SpectralLine", "LineSpectrum",
    "RegularizationMethod", "RegularizationConfig", "EnhancementResult",
    "SourceKind", "SourceCondition", "ConcavityRegion",
    "FitProblem", "FitResult", "LineShape",
]
