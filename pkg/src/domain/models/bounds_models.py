"""
Modelos de dominio para condiciones de fuente y regiones de concavidad.

Cada condición de fuente fija un par (ensanchamiento A, realce B) y la
función índice ψ que mide la suavidad de g respecto de B.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from src.domain.exceptions import ParameterDomainError
from src.domain.models.kernel_models import KernelSpec


class SourceKind(str, Enum):
    """Pares (ensanchamiento, realce) con función índice conocida."""
    EDDINGTON_GAUSSIAN = "EddingtonGaussian"
    GAUSSIAN_ON_GAUSSIAN = "GaussianOnGaussian"
    LORENTZ_ON_GAUSSIAN = "LorentzOnGaussian"
    LORENTZ_ON_VOIGT = "LorentzOnVoigt"


@dataclass(frozen=True)
class SourceCondition:
    """
    Condición de fuente ψ sobre [1, ∞).

    - EddingtonGaussian(k): ensanchamiento gaussiano unitario, B = EddingtonInverse(k), k ≥ 1.
    - GaussianOnGaussian(κ): ensanchamiento gaussiano unitario, B = GaussianWidth(κ), 0 < κ ≤ 1.
    - LorentzOnGaussian(κ): ensanchamiento gaussiano unitario, B = LorentzWidth(κ).
    - LorentzOnVoigt(κ, θ): ensanchamiento Voigt(θ), B = LorentzWidth(κ).
    """
    kind: SourceKind
    kappa: float | None = None
    theta: float | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        try:
            kind = SourceKind(self.kind)
        except ValueError as exc:
            raise ParameterDomainError("kind", self.kind, "condición desconocida") from exc
        object.__setattr__(self, "kind", kind)

        if kind is SourceKind.EDDINGTON_GAUSSIAN:
            if self.k is None or isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
                raise ParameterDomainError("k", self.k, "debe ser un entero ≥ 1")
            object.__setattr__(self, "k", int(self.k))
            if self.kappa is not None or self.theta is not None:
                raise ParameterDomainError("kappa/theta", (self.kappa, self.theta), "no aplican")
            return

        if self.k is not None:
            raise ParameterDomainError("k", self.k, f"no aplica a {kind.value}")
        if self.kappa is None or not math.isfinite(self.kappa) or self.kappa <= 0:
            raise ParameterDomainError("kappa", self.kappa, "debe ser > 0")
        object.__setattr__(self, "kappa", float(self.kappa))

        if kind is SourceKind.GAUSSIAN_ON_GAUSSIAN and self.kappa > 1.0:
            raise ParameterDomainError("kappa", self.kappa, "GaussianOnGaussian requiere κ ≤ 1")

        if kind is SourceKind.LORENTZ_ON_VOIGT:
            if self.theta is None or not 0.0 < self.theta <= 1.0:
                raise ParameterDomainError("theta", self.theta, "debe estar en (0, 1]")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise ParameterDomainError("theta", self.theta, f"no aplica a {kind.value}")

    @classmethod
    def eddington_gaussian(cls, k: int) -> SourceCondition:
        return cls(SourceKind.EDDINGTON_GAUSSIAN, k=k)

    @classmethod
    def gaussian_on_gaussian(cls, kappa: float) -> SourceCondition:
        return cls(SourceKind.GAUSSIAN_ON_GAUSSIAN, kappa=kappa)

    @classmethod
    def lorentz_on_gaussian(cls, kappa: float) -> SourceCondition:
        return cls(SourceKind.LORENTZ_ON_GAUSSIAN, kappa=kappa)

    @classmethod
    def lorentz_on_voigt(cls, kappa: float, theta: float) -> SourceCondition:
        return cls(SourceKind.LORENTZ_ON_VOIGT, kappa=kappa, theta=theta)

    def enhancement_kernel(self) -> KernelSpec:
        """Núcleo de realce B asociado a la condición."""
        if self.kind is SourceKind.EDDINGTON_GAUSSIAN:
            return KernelSpec.eddington_inverse(self.k)
        if self.kind is SourceKind.GAUSSIAN_ON_GAUSSIAN:
            return KernelSpec.gaussian_width(self.kappa)
        return KernelSpec.lorentz_width(self.kappa)

    def broadening_kernel(self) -> KernelSpec:
        """Núcleo de ensanchamiento A que la condición presupone."""
        if self.kind is SourceKind.LORENTZ_ON_VOIGT:
            return KernelSpec.voigt(self.theta)
        return KernelSpec.gaussian_unit()

    def matches(self, kernel: KernelSpec) -> bool:
        return kernel == self.enhancement_kernel()

    @property
    def label(self) -> str:
        params = [
            f"{name}={value:g}"
            for name, value in (("kappa", self.kappa), ("theta", self.theta), ("k", self.k))
            if value is not None
        ]
        return f"{self.kind.value}({', '.join(params)})"

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind.value}
        if self.kappa is not None:
            data["kappa"] = self.kappa
        if self.theta is not None:
            data["theta"] = self.theta
        if self.k is not None:
            data["k"] = self.k
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SourceCondition:
        if "kind" not in data:
            raise ParameterDomainError("kind", None, "campo requerido")
        return cls(
            kind=data["kind"],
            kappa=data.get("kappa"),
            theta=data.get("theta"),
            k=data.get("k"),
        )


@dataclass(frozen=True)
class ConcavityRegion:
    """Región [η₀, ∞) donde Ψ es cóncava; η₀ = 1 si es incondicional."""
    unconditional: bool
    eta_threshold: float = 1.0

    @property
    def log_eta_threshold(self) -> float:
        return math.log(self.eta_threshold)

    def contains_log(self, log_eta: float) -> bool:
        return log_eta >= 0.0 and (self.unconditional or log_eta >= self.log_eta_threshold)

    def to_dict(self) -> dict[str, Any]:
        return {"unconditional": self.unconditional, "eta_threshold": self.eta_threshold}
