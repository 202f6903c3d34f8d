"""
Modelos de dominio para núcleos de ensanchamiento y polinomios de Taylor.

Un núcleo se identifica por su familia y sus parámetros; la evaluación
numérica (símbolo de Fourier, forma en el espacio real) vive en
src.domain.services.kernels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from src.domain.exceptions import ParameterDomainError


class KernelFamily(str, Enum):
    """Familias de núcleos soportadas."""
    GAUSSIAN_UNIT = "GaussianUnit"
    GAUSSIAN_WIDTH = "GaussianWidth"
    LORENTZ_UNIT = "LorentzUnit"
    LORENTZ_WIDTH = "LorentzWidth"
    VOIGT = "Voigt"
    EDDINGTON_INVERSE = "EddingtonInverse"


_KAPPA_FAMILIES = {KernelFamily.GAUSSIAN_WIDTH, KernelFamily.LORENTZ_WIDTH}


@dataclass(frozen=True)
class KernelSpec:
    """
    Núcleo de convolución de masa unitaria.

    - GaussianWidth / LorentzWidth requieren kappa > 0.
    - Voigt requiere theta en (0, 1]; theta = 1 es la gaussiana unitaria.
    - EddingtonInverse requiere k entero ≥ 0 (k = 0 es la identidad).
    """
    family: KernelFamily
    kappa: float | None = None
    theta: float | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        try:
            family = KernelFamily(self.family)
        except ValueError as exc:
            raise ParameterDomainError("family", self.family, "familia desconocida") from exc
        object.__setattr__(self, "family", family)

        if family in _KAPPA_FAMILIES:
            if self.kappa is None or not math.isfinite(self.kappa) or self.kappa <= 0:
                raise ParameterDomainError("kappa", self.kappa, "debe ser > 0")
            object.__setattr__(self, "kappa", float(self.kappa))
        elif self.kappa is not None:
            raise ParameterDomainError("kappa", self.kappa, f"no aplica a {family.value}")

        if family is KernelFamily.VOIGT:
            if self.theta is None or not 0.0 < self.theta <= 1.0:
                raise ParameterDomainError("theta", self.theta, "debe estar en (0, 1]")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise ParameterDomainError("theta", self.theta, f"no aplica a {family.value}")

        if family is KernelFamily.EDDINGTON_INVERSE:
            if self.k is None or isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0:
                raise ParameterDomainError("k", self.k, "debe ser un entero ≥ 0")
            object.__setattr__(self, "k", int(self.k))
        elif self.k is not None:
            raise ParameterDomainError("k", self.k, f"no aplica a {family.value}")

    @classmethod
    def gaussian_unit(cls) -> KernelSpec:
        return cls(KernelFamily.GAUSSIAN_UNIT)

    @classmethod
    def gaussian_width(cls, kappa: float) -> KernelSpec:
        return cls(KernelFamily.GAUSSIAN_WIDTH, kappa=kappa)

    @classmethod
    def lorentz_unit(cls) -> KernelSpec:
        return cls(KernelFamily.LORENTZ_UNIT)

    @classmethod
    def lorentz_width(cls, kappa: float) -> KernelSpec:
        return cls(KernelFamily.LORENTZ_WIDTH, kappa=kappa)

    @classmethod
    def voigt(cls, theta: float) -> KernelSpec:
        return cls(KernelFamily.VOIGT, theta=theta)

    @classmethod
    def eddington_inverse(cls, k: int) -> KernelSpec:
        return cls(KernelFamily.EDDINGTON_INVERSE, k=k)

    @classmethod
    def identity(cls) -> KernelSpec:
        """Núcleo delta (EddingtonInverse con k = 0)."""
        return cls(KernelFamily.EDDINGTON_INVERSE, k=0)

    @property
    def is_identity(self) -> bool:
        return self.family is KernelFamily.EDDINGTON_INVERSE and self.k == 0

    @property
    def label(self) -> str:
        """Etiqueta corta para logs y nombres de columnas."""
        params = [
            f"{name}={value:g}"
            for name, value in (("kappa", self.kappa), ("theta", self.theta), ("k", self.k))
            if value is not None
        ]
        return f"{self.family.value}({', '.join(params)})" if params else self.family.value

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"family": self.family.value}
        if self.kappa is not None:
            data["kappa"] = self.kappa
        if self.theta is not None:
            data["theta"] = self.theta
        if self.k is not None:
            data["k"] = self.k
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> KernelSpec:
        if "family" not in data:
            raise ParameterDomainError("family", None, "campo requerido")
        return cls(
            family=data["family"],
            kappa=data.get("kappa"),
            theta=data.get("theta"),
            k=data.get("k"),
        )


@dataclass(frozen=True)
class TaylorPoly:
    """Polinomio de Taylor truncado t_k(x) = Σ_{j=0..k} x^j / j!."""
    k: int

    def __post_init__(self) -> None:
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0:
            raise ParameterDomainError("k", self.k, "debe ser un entero ≥ 0")
        object.__setattr__(self, "k", int(self.k))

    @property
    def coefficients(self) -> tuple[float, ...]:
        """Coeficientes en orden creciente de potencia."""
        return tuple(1.0 / math.factorial(j) for j in range(self.k + 1))

    def derivative(self) -> TaylorPoly:
        """d/dx t_k = t_{k-1}; la derivada de t_0 no es otro TaylorPoly."""
        if self.k == 0:
            raise ParameterDomainError("k", self.k, "t_0 es constante")
        return TaylorPoly(self.k - 1)
