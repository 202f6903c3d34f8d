"""Modelos de dominio para la deconvolución regularizada."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from src.domain.exceptions import ParameterDomainError
from src.domain.models.bounds_models import SourceCondition
from src.domain.models.spectrum_models import SampledSpectrum


class RegularizationMethod(str, Enum):
    """Filtros de regularización disponibles."""
    TIKHONOV = "tikhonov"
    SPECTRAL_CUTOFF = "cutoff"
    SOURCE_PENALTY = "source"


@dataclass(frozen=True)
class RegularizationConfig:
    """
    Parámetros de regularización.

    SOURCE_PENALTY penaliza con la propia función índice ψ y por eso
    necesita una condición de fuente.
    """
    method: RegularizationMethod = RegularizationMethod.TIKHONOV
    alpha: float = 0.0
    tau: float = 1.1
    condition: SourceCondition | None = None

    def __post_init__(self) -> None:
        try:
            method = RegularizationMethod(self.method)
        except ValueError as exc:
            raise ParameterDomainError("method", self.method, "método desconocido") from exc
        object.__setattr__(self, "method", method)
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ParameterDomainError("alpha", self.alpha, "debe ser ≥ 0")
        if not math.isfinite(self.tau) or self.tau <= 1.0:
            raise ParameterDomainError("tau", self.tau, "debe ser > 1")
        if method is RegularizationMethod.SOURCE_PENALTY and self.condition is None:
            raise ParameterDomainError("condition", None, "SOURCE_PENALTY requiere condición de fuente")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "tau", float(self.tau))

    def with_alpha(self, alpha: float) -> RegularizationConfig:
        return RegularizationConfig(self.method, alpha, self.tau, self.condition)

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": self.method.value,
            "alpha": self.alpha,
            "tau": self.tau,
            "condition": self.condition.to_dict() if self.condition else None,
        }


@dataclass(frozen=True)
class EnhancementResult:
    """Resultado de una deconvolución: espectro realzado y diagnósticos."""
    f_alpha: SampledSpectrum
    alpha: float
    residual_epsilon: float
    method: RegularizationMethod
    psi_norm_Bf: float | None = None
    bound: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "residual": self.residual_epsilon,
            "method": self.method.value,
            "psi_norm": self.psi_norm_Bf,
            "bound": self.bound,
        }
