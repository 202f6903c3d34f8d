"""Puerto para el trazado opcional de curvas."""
from abc import ABC, abstractmethod
from collections.abc import Mapping
from pathlib import Path

import numpy as np


class CurvePlotterPort(ABC):
    """Puerto para dibujar familias de curvas sobre un eje común."""

    @abstractmethod
    def plot_curves(
        self,
        path: Path,
        x: np.ndarray,
        curves: Mapping[str, np.ndarray],
        title: str,
        log_scale: bool = False,
    ) -> Path | None:
        """Dibujar las curvas; devuelve la ruta o None si no hay backend."""
        pass
