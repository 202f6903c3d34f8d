"""
Trazado estático de curvas en SVG con matplotlib (backend Agg).

matplotlib es una dependencia opcional (extra "plot"); sin ella el
trazado se omite con un aviso y el experimento sigue produciendo sus CSV.
"""
from __future__ import annotations

import logging
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from src.domain.exceptions import SpectrumIOError
from src.domain.ports.plot_port import CurvePlotterPort

logger = logging.getLogger(__name__)


class SvgCurvePlotter(CurvePlotterPort):
    """Dibuja familias de curvas en un único eje y guarda SVG."""

    def __init__(self, width: float = 7.0, height: float = 4.5):
        self.width = width
        self.height = height

    def plot_curves(
        self,
        path: Path,
        x: np.ndarray,
        curves: Mapping[str, np.ndarray],
        title: str,
        log_scale: bool = False,
    ) -> Path | None:
        try:
            import matplotlib

            matplotlib.use("Agg")
            matplotlib.rcParams["svg.hashsalt"] = "spectral-enhance"
            import matplotlib.pyplot as plt
        except ImportError:
            logger.warning("⚠️ matplotlib no está instalado; se omite el SVG (instalar el extra 'plot')")
            return None

        path = Path(path)
        figure, axis = plt.subplots(figsize=(self.width, self.height))
        try:
            for label, values in curves.items():
                axis.plot(x, values, label=label, linewidth=1.0)
            if log_scale:
                axis.set_xscale("log")
                axis.set_yscale("log")
            axis.set_title(title)
            axis.grid(True, alpha=0.3)
            axis.legend(fontsize="small")
            path.parent.mkdir(parents=True, exist_ok=True)
            # hashsalt fijo y sin fecha: SVG idéntico entre corridas
            figure.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise SpectrumIOError(str(path), str(exc)) from exc
        finally:
            plt.close(figure)
        logger.info(f"SVG guardado en {path}")
        return path
