"""Puerto para la persistencia de espectros, tablas y reportes."""
from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from src.domain.models.spectrum_models import LineSpectrum, SampledSpectrum


class SpectrumStorePort(ABC):
    """Puerto para leer y escribir espectros y resultados."""

    @abstractmethod
    def write_spectrum(self, path: Path, spectrum: SampledSpectrum) -> Path:
        """Guardar un espectro muestreado (columnas x, value)."""
        pass

    @abstractmethod
    def read_spectrum(self, path: Path) -> SampledSpectrum:
        """Leer un espectro muestreado; la malla se reconstruye desde x."""
        pass

    @abstractmethod
    def write_lines(self, path: Path, lines: LineSpectrum) -> Path:
        """Guardar un espectro de líneas (columnas location, intensity)."""
        pass

    @abstractmethod
    def read_lines(self, path: Path) -> LineSpectrum:
        """Leer un espectro de líneas."""
        pass

    @abstractmethod
    def write_table(self, path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """Guardar una tabla con cabecera."""
        pass

    @abstractmethod
    def write_json(self, path: Path, payload: dict[str, Any] | list[Any]) -> Path:
        """Guardar un reporte JSON."""
        pass

    @abstractmethod
    def read_json(self, path: Path) -> Any:
        """Leer un documento JSON."""
        pass
