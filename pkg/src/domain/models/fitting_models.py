"""Modelos de dominio para el ajuste de líneas por proyección variable."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.domain.exceptions import ParameterDomainError
from src.domain.models.kernel_models import KernelSpec
from src.domain.models.spectrum_models import SampledSpectrum

LineShape = KernelSpec | SampledSpectrum


@dataclass(frozen=True, eq=False)
class FitProblem:
    """
    Problema de ajuste: datos, forma de línea y posiciones iniciales.

    La forma de línea es un núcleo analítico o un espectro muestreado
    centrado en x = 0 (por ejemplo, la forma de línea ya realzada).
    Las posiciones iniciales se guardan ordenadas; deben estar separadas
    al menos 2·dx.
    """
    data: SampledSpectrum
    line_shape: LineShape
    n_lines: int
    initial_locations: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n_lines < 1:
            raise ParameterDomainError("n_lines", self.n_lines, "debe ser ≥ 1")
        locations = np.sort(np.asarray(self.initial_locations, dtype=float).ravel())
        if locations.size != self.n_lines:
            raise ParameterDomainError(
                "initial_locations", locations.size, f"se esperaban {self.n_lines} posiciones"
            )
        if not np.all(np.isfinite(locations)):
            raise ParameterDomainError("initial_locations", locations.tolist(), "deben ser finitas")
        grid = self.data.grid
        if not all(grid.contains(float(x)) for x in locations):
            raise ParameterDomainError("initial_locations", locations.tolist(), "fuera de la malla")
        if locations.size > 1 and np.min(np.diff(locations)) < 2.0 * grid.dx:
            raise ParameterDomainError(
                "initial_locations", locations.tolist(), f"separación menor que 2·dx={2 * grid.dx:.3g}"
            )
        if isinstance(self.line_shape, SampledSpectrum) and self.line_shape.grid != grid:
            raise ParameterDomainError("line_shape", self.line_shape.grid, "malla distinta a los datos")
        locations.setflags(write=False)
        object.__setattr__(self, "initial_locations", locations)


@dataclass(frozen=True, eq=False)
class FitResult:
    """Resultado del ajuste."""
    locations: np.ndarray
    intensities: np.ndarray
    residual_norm: float
    initial_residual: float
    converged: bool
    iterations: int
    condition_estimate: float

    def rows(self) -> list[tuple[int, float, float]]:
        """Filas (line, location, intensity) numeradas desde 1."""
        return [
            (index + 1, float(location), float(intensity))
            for index, (location, intensity) in enumerate(zip(self.locations, self.intensities))
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "locations": [float(x) for x in self.locations],
            "intensities": [float(u) for u in self.intensities],
            "residual_norm": self.residual_norm,
            "initial_residual": self.initial_residual,
            "converged": self.converged,
            "iterations": self.iterations,
            "condition_estimate": self.condition_estimate,
        }
