"""
Adaptador de persistencia en CSV/JSON con pandas.

CSV separado por comas, punto decimal, fin de línea LF y UTF-8; los
flotantes se escriben con 17 dígitos significativos para que la relectura
sea exacta y las corridas repetidas produzcan archivos idénticos.
"""
from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from src.domain.exceptions import DomainException, SpectrumIOError
from src.domain.models.spectrum_models import Grid, LineSpectrum, SampledSpectrum
from src.domain.ports.spectrum_store_port import SpectrumStorePort

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
_GRID_TOLERANCE = 1e-9


def _json_safe(value: Any) -> Any:
    """Convierte tipos numpy y flotantes no finitos a valores JSON estándar."""
    if isinstance(value, dict):
        return {str(key): _json_safe(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [_json_safe(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, np.ndarray):
        return [_json_safe(item) for item in value.tolist()]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class CsvSpectrumStore(SpectrumStorePort):
    """Implementación del puerto de almacenamiento sobre archivos locales."""

    def _write_frame(self, path: Path, frame: pd.DataFrame) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(
                path,
                index=False,
                float_format=FLOAT_FORMAT,
                lineterminator="\n",
                encoding="utf-8",
            )
        except OSError as exc:
            raise SpectrumIOError(str(path), str(exc)) from exc
        logger.debug(f"Escrito {path} ({len(frame)} filas)")
        return path

    def _read_frame(self, path: Path, required: Sequence[str]) -> pd.DataFrame:
        path = Path(path)
        try:
            frame = pd.read_csv(path, encoding="utf-8")
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
            raise SpectrumIOError(str(path), str(exc)) from exc
        missing = [column for column in required if column not in frame.columns]
        if missing:
            raise SpectrumIOError(str(path), f"faltan columnas {missing}")
        return frame

    def write_spectrum(self, path: Path, spectrum: SampledSpectrum) -> Path:
        frame = pd.DataFrame({"x": spectrum.grid.x, "value": spectrum.values})
        return self._write_frame(path, frame)

    def read_spectrum(self, path: Path) -> SampledSpectrum:
        frame = self._read_frame(path, ("x", "value"))
        x = frame["x"].to_numpy(dtype=float)
        if x.size < 2:
            raise SpectrumIOError(str(path), "se necesitan al menos dos muestras")
        dx = float(x[1] - x[0])
        try:
            grid = Grid(x.size, dx * x.size)
            expected = grid.x
            if np.max(np.abs(expected - x)) > _GRID_TOLERANCE * grid.length:
                raise SpectrumIOError(str(path), "la columna x no es una malla uniforme [-L/2, L/2)")
            return SampledSpectrum(grid, frame["value"].to_numpy(dtype=float))
        except SpectrumIOError:
            raise
        except DomainException as exc:
            raise SpectrumIOError(str(path), str(exc)) from exc

    def write_lines(self, path: Path, lines: LineSpectrum) -> Path:
        frame = pd.DataFrame({"location": lines.locations, "intensity": lines.intensities})
        return self._write_frame(path, frame)

    def read_lines(self, path: Path) -> LineSpectrum:
        frame = self._read_frame(path, ("location", "intensity"))
        try:
            return LineSpectrum.from_pairs(
                zip(frame["location"].to_numpy(dtype=float), frame["intensity"].to_numpy(dtype=float))
            )
        except DomainException as exc:
            raise SpectrumIOError(str(path), str(exc)) from exc

    def write_table(self, path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        frame = pd.DataFrame(list(rows), columns=list(columns))
        return self._write_frame(path, frame)

    def write_json(self, path: Path, payload: dict[str, Any] | list[Any]) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(
                json.dumps(_json_safe(payload), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
        except OSError as exc:
            raise SpectrumIOError(str(path), str(exc)) from exc
        return path

    def read_json(self, path: Path) -> Any:
        path = Path(path)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SpectrumIOError(str(path), str(exc)) from exc
