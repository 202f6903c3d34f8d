"""
Configuración compartida de pytest para todos los tests.
Fixtures reutilizables y configuración de entorno.
"""
import os

# Configurar variables de entorno antes de importar la configuración
os.environ["SPECENH_LOG_LEVEL"] = "WARNING"
os.environ["SPECENH_MAX_WORKERS"] = "2"

import numpy as np
import pytest

from src.adapters.config.settings import Settings
from src.domain.models import Grid, KernelSpec, LineSpectrum, SampledSpectrum
from src.domain.services import grid as grid_service


@pytest.fixture(scope="session")
def default_grid() -> Grid:
    """Malla por defecto (n=4096, L=64)."""
    return Grid(4096, 64.0)


@pytest.fixture(scope="session")
def coarse_grid() -> Grid:
    """Malla gruesa (dx=1) para inversiones sin regularizar."""
    return Grid(64, 64.0)


@pytest.fixture(scope="session")
def single_line() -> LineSpectrum:
    """Una línea unitaria en x = 0."""
    return LineSpectrum.from_pairs([(0.0, 1.0)])


@pytest.fixture(scope="session")
def unit_gaussian(default_grid, single_line) -> SampledSpectrum:
    """Línea gaussiana unitaria muestreada."""
    return grid_service.broaden(single_line, KernelSpec.gaussian_unit(), default_grid)


@pytest.fixture(scope="session")
def narrow_gaussian_data(default_grid, single_line) -> SampledSpectrum:
    """Gaussiana de varianza 1.25: una línea de σ=0.5 ensanchada por la gaussiana unitaria."""
    return grid_service.broaden(single_line, KernelSpec.gaussian_width(np.sqrt(1.25)), default_grid)


@pytest.fixture
def test_settings(tmp_path) -> Settings:
    """Settings aisladas con salida en tmp_path."""
    return Settings(output_dir=str(tmp_path), max_workers=2, log_level="WARNING")
