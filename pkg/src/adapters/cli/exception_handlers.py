"""
Manejadores de excepciones para mapear excepciones de dominio a códigos de
salida de la CLI.

- 0: éxito
- 2: error de configuración o de parámetros (corregible por el usuario)
- 3: fallo numérico (el problema no admite la operación pedida)
"""
from __future__ import annotations

import logging
from collections.abc import Callable

from src.domain.exceptions.domain_exceptions import (
    BoundInvalidError,
    ConfigurationError,
    DomainException,
    NumericalError,
    ParameterDomainError,
    PsiRangeError,
    RankDeficiencyError,
    SpectrumIOError,
    UnsupportedFormError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_UNEXPECTED = 1

ExitHandler = Callable[[Exception], int]


def parameter_domain_handler(exc: ParameterDomainError) -> int:
    """ParameterDomainError → 2."""
    logger.error(f"Parámetro inválido '{exc.parameter}' = {exc.value!r}: {exc.reason}")
    return EXIT_CONFIG


def unsupported_form_handler(exc: UnsupportedFormError) -> int:
    """UnsupportedFormError → 2."""
    logger.error(f"Operación no soportada: {exc}")
    return EXIT_CONFIG


def configuration_error_handler(exc: ConfigurationError) -> int:
    """ConfigurationError → 2."""
    logger.error(f"Configuración inválida en '{exc.field}': {exc.reason}")
    return EXIT_CONFIG


def spectrum_io_handler(exc: SpectrumIOError) -> int:
    """SpectrumIOError → 2, con la ruta del archivo."""
    logger.error(f"Error de E/S en {exc.path}: {exc.reason}")
    return EXIT_CONFIG


def psi_range_handler(exc: PsiRangeError) -> int:
    """PsiRangeError → 3, con el log-valor que desbordó."""
    logger.error(f"ψ/Ψ fuera de rango (log-valor {exc.log_value:.6g})")
    return EXIT_NUMERIC


def bound_invalid_handler(exc: BoundInvalidError) -> int:
    """BoundInvalidError → 3."""
    logger.error(f"Cota inválida: η={exc.eta:.6g} < umbral {exc.threshold:.6g}")
    return EXIT_NUMERIC


def rank_deficiency_handler(exc: RankDeficiencyError) -> int:
    """RankDeficiencyError → 3."""
    logger.error(f"Deficiencia de rango entre las líneas {exc.first} y {exc.second}")
    return EXIT_NUMERIC


def numerical_error_handler(exc: NumericalError) -> int:
    """Fallback para fallos numéricos → 3."""
    logger.error(f"Fallo numérico: {type(exc).__name__} - {exc}")
    return EXIT_NUMERIC


def domain_exception_handler(exc: DomainException) -> int:
    """Fallback para excepciones de dominio no específicas → 2."""
    logger.error(f"Excepción de dominio no manejada: {type(exc).__name__} - {exc}")
    return EXIT_CONFIG


def generic_exception_handler(exc: Exception) -> int:
    """Último recurso para errores inesperados → 1."""
    logger.error(f"Excepción no manejada: {type(exc).__name__} - {exc}", exc_info=True)
    return EXIT_UNEXPECTED


# Orden: específicas primero, luego los fallbacks.
EXCEPTION_HANDLERS: list[tuple[type[Exception], ExitHandler]] = [
    (ParameterDomainError, parameter_domain_handler),
    (UnsupportedFormError, unsupported_form_handler),
    (ConfigurationError, configuration_error_handler),
    (SpectrumIOError, spectrum_io_handler),
    (PsiRangeError, psi_range_handler),
    (BoundInvalidError, bound_invalid_handler),
    (RankDeficiencyError, rank_deficiency_handler),
    (NumericalError, numerical_error_handler),
    (DomainException, domain_exception_handler),
    (Exception, generic_exception_handler),
]


def handle_exception(exc: Exception) -> int:
    """Despacha al primer manejador cuyo tipo coincide y devuelve el código de salida."""
    for exc_type, handler in EXCEPTION_HANDLERS:
        if isinstance(exc, exc_type):
            return handler(exc)
    return generic_exception_handler(exc)
