"""
Excepciones de dominio para el realce de resolución espectral.

Estas excepciones representan errores de la numérica del dominio y son
independientes de la infraestructura (CLI, archivos CSV/JSON, configuración).
El adaptador de CLI las traduce a códigos de salida.
"""
from __future__ import annotations


class DomainException(Exception):
    """Excepción base para errores de dominio."""
    pass


class ParameterDomainError(DomainException):
    """Se lanza cuando un parámetro está fuera de su dominio válido."""
    def __init__(self, parameter: str, value: object, reason: str = "") -> None:
        self.parameter = parameter
        self.value = value
        self.reason = reason
        reason_text = f": {reason}" if reason else ""
        super().__init__(f"Parámetro '{parameter}' fuera de dominio (valor={value!r}){reason_text}")


class UnsupportedFormError(DomainException):
    """Se lanza cuando una familia de núcleos no tiene la forma cerrada pedida."""
    def __init__(self, family: str, operation: str) -> None:
        self.family = family
        self.operation = operation
        super().__init__(
            f"'{operation}' no tiene forma cerrada para la familia '{family}'; "
            "usar la vía numérica (símbolo de Fourier + grid.sample_kernel)"
        )


class ConfigurationError(DomainException):
    """Se lanza cuando la configuración es inconsistente o inválida."""
    def __init__(self, field: str, reason: str = "") -> None:
        self.field = field
        self.reason = reason
        reason_text = f": {reason}" if reason else ""
        super().__init__(f"Configuración inválida en '{field}'{reason_text}")


class SpectrumIOError(DomainException):
    """Se lanza cuando falla la lectura o escritura de un espectro o reporte."""
    def __init__(self, path: str, reason: str = "") -> None:
        self.path = path
        self.reason = reason
        reason_text = f": {reason}" if reason else ""
        super().__init__(f"Error de E/S en '{path}'{reason_text}")


class NumericalError(DomainException):
    """Excepción base para fallos numéricos (código de salida 3)."""
    pass


class SingularInversionError(NumericalError):
    """Inversión sin regularizar con el símbolo nulo en alguna frecuencia."""
    def __init__(self, frequency: float) -> None:
        self.frequency = frequency
        super().__init__(
            f"Inversión singular: el símbolo se anula en ω={frequency:.6g} con α=0"
        )


class DataIncompatibleError(NumericalError):
    """El principio de discrepancia no puede alcanzar el residuo objetivo."""
    def __init__(self, residual: float, target: float) -> None:
        self.residual = residual
        self.target = target
        super().__init__(
            f"Datos incompatibles con el rango de B: residuo mínimo {residual:.6g} "
            f"> objetivo τδ={target:.6g}"
        )


class MeasurementError(NumericalError):
    """Se lanza cuando una medición (FWHM, escala de ruido) no es posible."""
    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Medición imposible: {reason}")


class PsiRangeError(NumericalError):
    """ψ o Ψ excede el rango representable; se adjunta el valor logarítmico."""
    def __init__(self, log_value: float) -> None:
        self.log_value = log_value
        super().__init__(f"Desbordamiento en ψ/Ψ (log-valor={log_value:.6g})")


class BoundInvalidError(NumericalError):
    """El argumento de la cota cae fuera de la región de concavidad de Ψ."""
    def __init__(self, eta: float, threshold: float) -> None:
        self.eta = eta
        self.threshold = threshold
        super().__init__(
            f"Cota inválida: η={eta:.6g} por debajo del umbral de concavidad {threshold:.6g}"
        )


class EnhancementTooAggressiveError(NumericalError):
    """El déficit del exponente es ≥ 1: la cota es vacía."""
    def __init__(self, deficit: float) -> None:
        self.deficit = deficit
        super().__init__(f"Realce demasiado agresivo: déficit del exponente {deficit:.6g} ≥ 1")


class RankDeficiencyError(NumericalError):
    """La matriz de diseño del ajuste perdió rango (líneas casi coincidentes)."""
    def __init__(self, first: int, second: int, x_first: float, x_second: float) -> None:
        self.first = first
        self.second = second
        self.x_first = x_first
        self.x_second = x_second
        super().__init__(
            f"Deficiencia de rango: líneas {first} y {second} casi coincidentes "
            f"(x={x_first:.6g}, x={x_second:.6g})"
        )
