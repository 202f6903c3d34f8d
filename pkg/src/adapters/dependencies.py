"""
Factory de inyección de dependencias para arquitectura hexagonal.

Este módulo crea las instancias de servicios con sus dependencias
inyectadas, siguiendo el patrón de Dependency Injection.
"""

from __future__ import annotations

import logging
from functools import cache

from src.adapters.config.settings import Settings, settings
from src.adapters.plotting.svg_plotter import SvgCurvePlotter
from src.adapters.storage.csv_store import CsvSpectrumStore
from src.application.services.experiment_service import ExperimentService
from src.application.services.pipeline_service import SpectralPipelineService
from src.domain.ports import CurvePlotterPort, SpectrumStorePort

logger = logging.getLogger(__name__)


# --- Caché para singletons ---
@cache
def get_settings() -> Settings:
    """Configuración global (singleton)."""
    return settings


@cache
def get_spectrum_store() -> SpectrumStorePort:
    """Almacenamiento CSV/JSON (singleton)."""
    return CsvSpectrumStore()


@cache
def get_plotter() -> CurvePlotterPort:
    """Trazador SVG (singleton)."""
    return SvgCurvePlotter()


# --- Servicios ---
def get_pipeline_service(app_settings: Settings | None = None) -> SpectralPipelineService:
    """Servicio de synth/enhance/bound/fit."""
    return SpectralPipelineService(store=get_spectrum_store(), settings=app_settings or get_settings())


def get_experiment_service(
    app_settings: Settings | None = None, with_svg: bool = False
) -> ExperimentService:
    """Servicio de experimentos; con with_svg se inyecta el trazador."""
    return ExperimentService(
        store=get_spectrum_store(),
        settings=app_settings or get_settings(),
        plotter=get_plotter() if with_svg else None,
    )
