"""Modelos de dominio para mallas y espectros muestreados."""
from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from src.domain.exceptions import ParameterDomainError


@dataclass(frozen=True)
class Grid:
    """
    Malla periódica uniforme de n puntos sobre [-L/2, L/2).

    Las frecuencias siguen el orden de la FFT: ω_j = 2πj/L con j en
    [0, n/2) ∪ [-n/2, 0).
    """
    n: int
    length: float

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 8:
            raise ParameterDomainError("n", self.n, "debe ser un entero ≥ 8")
        if self.n & (self.n - 1):
            raise ParameterDomainError("n", self.n, "debe ser potencia de 2")
        if not math.isfinite(self.length) or self.length <= 0:
            raise ParameterDomainError("length", self.length, "debe ser > 0")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "length", float(self.length))

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def d_omega(self) -> float:
        return 2.0 * math.pi / self.length

    @cached_property
    def x(self) -> np.ndarray:
        values = np.arange(self.n) * self.dx - self.length / 2.0
        values.setflags(write=False)
        return values

    @cached_property
    def omega(self) -> np.ndarray:
        values = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        values.setflags(write=False)
        return values

    def contains(self, location: float) -> bool:
        return -self.length / 2.0 <= location < self.length / 2.0

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "length": self.length}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Grid:
        return cls(n=data["n"], length=data["length"])


@dataclass(frozen=True, eq=False)
class SampledSpectrum:
    """Espectro real muestreado sobre una malla."""
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise ParameterDomainError(
                "values", values.shape, f"se esperaban {self.grid.n} muestras"
            )
        if not np.all(np.isfinite(values)):
            raise ParameterDomainError("values", "no finito", "el espectro contiene NaN o inf")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def norm(self) -> float:
        """Norma L² discreta: sqrt(Σ g² dx)."""
        return float(np.sqrt(np.sum(self.values**2) * self.grid.dx))

    def peak_location(self) -> float:
        return float(self.grid.x[int(np.argmax(self.values))])

    def _check_grid(self, other: SampledSpectrum) -> None:
        if other.grid != self.grid:
            raise ParameterDomainError("grid", other.grid, "los espectros usan mallas distintas")

    def __add__(self, other: SampledSpectrum) -> SampledSpectrum:
        self._check_grid(other)
        return SampledSpectrum(self.grid, self.values + other.values)

    def __sub__(self, other: SampledSpectrum) -> SampledSpectrum:
        self._check_grid(other)
        return SampledSpectrum(self.grid, self.values - other.values)

    def __mul__(self, factor: float) -> SampledSpectrum:
        return SampledSpectrum(self.grid, self.values * float(factor))

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpectralLine:
    """Línea espectral ideal (delta) con posición e intensidad."""
    location: float
    intensity: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.location):
            raise ParameterDomainError("location", self.location, "debe ser finita")
        if not math.isfinite(self.intensity):
            raise ParameterDomainError("intensity", self.intensity, "debe ser finita")
        object.__setattr__(self, "location", float(self.location))
        object.__setattr__(self, "intensity", float(self.intensity))

    def to_dict(self) -> dict[str, float]:
        return {"location": self.location, "intensity": self.intensity}


@dataclass(frozen=True)
class LineSpectrum:
    """Conjunto finito de líneas con posiciones distintas, ordenado por posición."""
    lines: tuple[SpectralLine, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.lines, key=lambda line: line.location))
        locations = [line.location for line in ordered]
        if len(set(locations)) != len(locations):
            raise ParameterDomainError("locations", locations, "posiciones repetidas")
        object.__setattr__(self, "lines", ordered)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> LineSpectrum:
        return cls(tuple(SpectralLine(location, intensity) for location, intensity in pairs))

    @property
    def locations(self) -> np.ndarray:
        return np.array([line.location for line in self.lines], dtype=float)

    @property
    def intensities(self) -> np.ndarray:
        return np.array([line.intensity for line in self.lines], dtype=float)

    def __len__(self) -> int:
        return len(self.lines)

    def to_dict(self) -> dict[str, Any]:
        return {"lines": [line.to_dict() for line in self.lines]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> LineSpectrum:
        return cls.from_pairs((item["location"], item["intensity"]) for item in data["lines"])
