"""Mocks para testing de servicios."""
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from src.domain.models import LineSpectrum, SampledSpectrum
from src.domain.ports import CurvePlotterPort, SpectrumStorePort


class InMemorySpectrumStore(SpectrumStorePort):
    """Almacenamiento en memoria indexado por ruta."""

    def __init__(self):
        self.spectra: dict[Path, SampledSpectrum] = {}
        self.lines: dict[Path, LineSpectrum] = {}
        self.tables: dict[Path, tuple[list[str], list[tuple[Any, ...]]]] = {}
        self.documents: dict[Path, Any] = {}

    def write_spectrum(self, path: Path, spectrum: SampledSpectrum) -> Path:
        self.spectra[Path(path)] = spectrum
        return Path(path)

    def read_spectrum(self, path: Path) -> SampledSpectrum:
        return self.spectra[Path(path)]

    def write_lines(self, path: Path, lines: LineSpectrum) -> Path:
        self.lines[Path(path)] = lines
        return Path(path)

    def read_lines(self, path: Path) -> LineSpectrum:
        return self.lines[Path(path)]

    def write_table(self, path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        self.tables[Path(path)] = (list(columns), [tuple(row) for row in rows])
        return Path(path)

    def write_json(self, path: Path, payload: dict[str, Any] | list[Any]) -> Path:
        self.documents[Path(path)] = payload
        return Path(path)

    def read_json(self, path: Path) -> Any:
        return self.documents[Path(path)]


class RecordingPlotter(CurvePlotterPort):
    """Trazador que sólo registra las llamadas."""

    def __init__(self):
        self.calls: list[tuple[Path, list[str]]] = []

    def plot_curves(
        self,
        path: Path,
        x: np.ndarray,
        curves: Mapping[str, np.ndarray],
        title: str,
        log_scale: bool = False,
    ) -> Path | None:
        self.calls.append((Path(path), list(curves)))
        return Path(path)
