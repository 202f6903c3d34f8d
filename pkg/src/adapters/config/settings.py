"""
Módulo de configuración centralizado para la aplicación.

Utiliza pydantic-settings para cargar y validar la configuración desde
variables de entorno (prefijo SPECENH_) y/o un archivo .env.
"""

import logging

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """
    Define las variables de configuración de la aplicación.
    """

    # Configuración para pydantic-settings
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="SPECENH_",
        case_sensitive=False,
        extra="ignore",
    )

    # --- Malla ---
    grid_n: int = Field(4096, description="Número de puntos de la malla (potencia de 2, ≥ 8)")
    grid_length: float = Field(64.0, description="Longitud L del dominio periódico [-L/2, L/2)")
    seed: int = Field(20090101, description="Semilla del generador de ruido")

    # --- Principio de discrepancia ---
    discrepancy_tau: float = Field(1.1, description="Factor τ > 1 del principio de discrepancia")
    alpha_min: float = Field(1e-16, description="Extremo inferior de la búsqueda de α")
    alpha_max: float = Field(1e4, description="Extremo superior de la búsqueda de α")
    discrepancy_rel_tol: float = Field(
        0.01, description="Tolerancia relativa alrededor de τδ para aceptar α"
    )
    discrepancy_max_iter: int = Field(200, description="Máximo de bisecciones sobre log α")

    # --- Ajuste de líneas ---
    rank_rtol: float = Field(1e-10, description="Tolerancia relativa de rango para la QR con pivoteo")
    fit_max_iter: int = Field(50, description="Máximo de iteraciones de Gauss-Newton")
    fit_gtol: float = Field(1e-10, description="Tolerancia sobre la norma del gradiente ‖Jᵀr‖")

    # --- Norma ψ ---
    psi_spectral_floor: float = Field(
        1e-12, description="Frecuencias con |ĝ| ≤ floor·max|ĝ| no cuentan como resueltas"
    )
    psi_divergence_ratio: float = Field(
        1e3, description="Crecimiento del sumando en el borde de banda que se declara divergencia"
    )
    psi_outer_share: float = Field(
        1e-2, description="Fracción de la norma ψ en el 10% exterior de la banda que se declara divergencia"
    )

    # --- Experimentos ---
    fig1_alpha: float = Field(
        1e-24, description="α del corte espectral en el experimento de realce sin ruido"
    )
    rates_epsilons: list[float] = Field(
        default_factory=lambda: [1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
        description="Niveles de ruido absoluto del experimento de órdenes de convergencia",
    )
    max_workers: int = Field(4, description="Hilos para los barridos de parámetros")

    # --- Salida / logging ---
    log_level: str = Field("INFO", description="Nivel de logging: DEBUG, INFO, WARNING, ERROR")
    output_dir: str = Field("outputs", description="Directorio de salida por defecto")

    def validate_consistency(self) -> list[str]:
        """Valida la coherencia de la configuración. Retorna lista de problemas encontrados."""
        issues: list[str] = []
        if self.grid_n < 8 or self.grid_n & (self.grid_n - 1):
            issues.append(f"grid_n={self.grid_n}: debe ser potencia de 2 y ≥ 8")
        if self.grid_length <= 0:
            issues.append(f"grid_length={self.grid_length}: debe ser > 0")
        if self.discrepancy_tau <= 1.0:
            issues.append(f"discrepancy_tau={self.discrepancy_tau}: debe ser > 1")
        if not 0 < self.alpha_min < self.alpha_max:
            issues.append(f"alpha_min={self.alpha_min}, alpha_max={self.alpha_max}: rango vacío")
        if any(not 0 < eps < 1 for eps in self.rates_epsilons):
            issues.append(f"rates_epsilons={self.rates_epsilons}: deben estar en (0, 1)")
        if self.max_workers < 1:
            issues.append(f"max_workers={self.max_workers}: debe ser ≥ 1")
        return issues

    def log_startup_config(self) -> None:
        """Loguea la configuración de arranque con validación."""
        issues = self.validate_consistency()
        logger.info(f"Malla: n={self.grid_n}, L={self.grid_length:g}, dx={self.grid_length / self.grid_n:.4g}")
        logger.info(
            f"Discrepancia: τ={self.discrepancy_tau:g}, α∈[{self.alpha_min:g}, {self.alpha_max:g}], "
            f"tol={self.discrepancy_rel_tol:.0%}"
        )
        logger.info(f"Ajuste: max_iter={self.fit_max_iter}, gtol={self.fit_gtol:g}, rtol={self.rank_rtol:g}")
        if issues:
            for issue in issues:
                logger.error(f"CONFIG ISSUE: {issue}")
        else:
            logger.debug("Configuración validada correctamente")


# Instancia única para ser importada en otros módulos
settings = Settings()
