"""
Configuración de experimentos (archivo JSON de --config).

Modelos pydantic que validan el JSON y lo convierten a los dataclasses del
dominio. Un error de validación se reporta como ConfigurationError.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.domain.exceptions import ConfigurationError, DomainException
from src.domain.models import (
    Grid,
    KernelFamily,
    KernelSpec,
    LineSpectrum,
    RegularizationConfig,
    RegularizationMethod,
    SourceCondition,
    SourceKind,
)

if TYPE_CHECKING:
    from src.adapters.config.settings import Settings

logger = logging.getLogger(__name__)


class GridConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = 4096
    length: float = 64.0

    def to_domain(self) -> Grid:
        return Grid(self.n, self.length)


class LineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    location: float
    intensity: float


class KernelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: KernelFamily
    kappa: float | None = None
    theta: float | None = None
    k: int | None = None

    def to_domain(self) -> KernelSpec:
        return KernelSpec(self.family, kappa=self.kappa, theta=self.theta, k=self.k)


class ConditionConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: SourceKind
    kappa: float | None = None
    theta: float | None = None
    k: int | None = None

    def to_domain(self) -> SourceCondition:
        return SourceCondition(self.kind, kappa=self.kappa, theta=self.theta, k=self.k)


class RegularizationSettings(BaseModel):
    """alpha = None pide elegir α por el principio de discrepancia."""
    model_config = ConfigDict(extra="forbid")

    method: RegularizationMethod = RegularizationMethod.TIKHONOV
    alpha: float | None = Field(None, ge=0.0)
    tau: float = Field(1.1, gt=1.0)
    condition: ConditionConfig | None = None

    def to_domain(self, alpha: float | None = None) -> RegularizationConfig:
        chosen = alpha if alpha is not None else (self.alpha or 0.0)
        condition = self.condition.to_domain() if self.condition else None
        return RegularizationConfig(self.method, chosen, self.tau, condition)


class ExperimentConfig(BaseModel):
    """
    Configuración completa de una corrida.

    Por defecto: una línea unitaria en x = 0, ensanchamiento gaussiano
    unitario, realce LorentzWidth(2), 5% de ruido y α por discrepancia.
    """
    model_config = ConfigDict(extra="forbid")

    grid: GridConfig = Field(default_factory=GridConfig)
    lines: list[LineConfig] = Field(
        default_factory=lambda: [LineConfig(location=0.0, intensity=1.0)], min_length=1
    )
    broadening: KernelConfig = Field(
        default_factory=lambda: KernelConfig(family=KernelFamily.GAUSSIAN_UNIT)
    )
    enhancement: KernelConfig = Field(
        default_factory=lambda: KernelConfig(family=KernelFamily.LORENTZ_WIDTH, kappa=2.0)
    )
    reg: RegularizationSettings = Field(default_factory=RegularizationSettings)
    noise_level: float = Field(0.05, ge=0.0)
    seed: int = 20090101
    outputs: str = "outputs"

    @model_validator(mode="after")
    def _check_domain(self) -> ExperimentConfig:
        try:
            grid = self.grid.to_domain()
            lines = self.line_spectrum()
            self.broadening.to_domain()
            enhancement = self.enhancement.to_domain()
            reg = self.reg.to_domain()
        except DomainException as exc:
            raise ValueError(str(exc)) from exc
        outside = [line.location for line in lines.lines if not grid.contains(line.location)]
        if outside:
            raise ValueError(f"líneas fuera de la malla: {outside}")
        if reg.condition is not None and not reg.condition.matches(enhancement):
            raise ValueError(f"la condición {reg.condition.label} no corresponde a {enhancement.label}")
        return self

    def line_spectrum(self) -> LineSpectrum:
        return LineSpectrum.from_pairs((line.location, line.intensity) for line in self.lines)

    @property
    def uses_discrepancy(self) -> bool:
        return self.reg.alpha is None

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: Any) -> ExperimentConfig:
        """Configuración por defecto con la malla, semilla y salida de Settings."""
        base: dict[str, Any] = {
            "grid": {"n": settings.grid_n, "length": settings.grid_length},
            "seed": settings.seed,
            "outputs": settings.output_dir,
            "reg": {"tau": settings.discrepancy_tau},
        }
        base.update(overrides)
        return cls.parse(base)

    @classmethod
    def parse(cls, data: dict[str, Any]) -> ExperimentConfig:
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            raise ConfigurationError("config", _summarize(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        try:
            return cls.model_validate_json(text)
        except ValidationError as exc:
            raise ConfigurationError("config", _summarize(exc)) from exc

    @classmethod
    def from_file(cls, path: Path) -> ExperimentConfig:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(str(path), f"no se pudo leer: {exc}") from exc
        logger.info(f"Configuración cargada desde {path}")
        return cls.from_json(text)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def with_overrides(self, **changes: Any) -> ExperimentConfig:
        """Copia validada con campos de primer nivel reemplazados."""
        data = self.model_dump(mode="json")
        data.update({key: value for key, value in changes.items() if value is not None})
        return self.parse(data)


def _summarize(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error.get("loc", ()))
        parts.append(f"{location or '<raíz>'}: {error.get('msg', '')}")
    return "; ".join(parts)
