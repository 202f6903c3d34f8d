"""
Servicio de dominio para la deconvolución regularizada en Fourier.

Filtros disponibles (f̂ = filtro · ĝ):
- Tikhonov:      b̂ / (b̂² + α)
- Corte:         1/b̂ donde b̂² ≥ α, 0 en el resto
- Penalización:  1 / (b̂ (1 + α ψ(1/b̂²))), con la función índice ψ

α = 0 es la inversión exacta y exige b̂ ≠ 0 en toda la malla.
"""
from __future__ import annotations

import logging
import math

import numpy as np
from scipy.special import log_expit

from src.domain.exceptions import (
    BoundInvalidError,
    ConfigurationError,
    DataIncompatibleError,
    ParameterDomainError,
    PsiRangeError,
    SingularInversionError,
)
from src.domain.models.bounds_models import SourceCondition
from src.domain.models.enhancement_models import (
    EnhancementResult,
    RegularizationConfig,
    RegularizationMethod,
)
from src.domain.models.kernel_models import KernelSpec
from src.domain.models.spectrum_models import SampledSpectrum
from src.domain.services.bounds import log_psi, psi_norm, theorem1_bound
from src.domain.services.grid import convolve, forward_transform, inverse_transform
from src.domain.services.kernels import log_fourier_symbol

logger = logging.getLogger(__name__)

DEFAULT_ALPHA_MIN = 1e-16
DEFAULT_ALPHA_MAX = 1e4
DEFAULT_REL_TOL = 0.01
DEFAULT_MAX_ITER = 200


def regularization_filter(
    kernel: KernelSpec, omega: np.ndarray, reg: RegularizationConfig
) -> np.ndarray:
    """Multiplicador de Fourier que lleva ĝ a f̂_α."""
    log_b = np.asarray(log_fourier_symbol(kernel, omega), dtype=float)
    alpha = reg.alpha

    if alpha == 0.0:
        vanishing = np.isneginf(log_b) | (np.exp(log_b) == 0.0)
        if np.any(vanishing):
            raise SingularInversionError(float(np.abs(omega[vanishing]).min()))
        return np.exp(-log_b)

    if reg.method is RegularizationMethod.TIKHONOV:
        b = np.exp(log_b)
        return b / (b * b + alpha)

    if reg.method is RegularizationMethod.SPECTRAL_CUTOFF:
        keep = 2.0 * log_b >= math.log(alpha)
        return np.where(keep, np.exp(np.where(keep, -log_b, 0.0)), 0.0)

    # 1/(b(1 + αψ)) = (1/b)·expit(-(log α + log ψ)); el producto se arma en log.
    log_weight = math.log(alpha) + np.asarray(log_psi(reg.condition, -2.0 * log_b))
    log_gate = log_expit(-log_weight)
    return np.exp(np.minimum(log_gate - log_b, np.log(np.finfo(float).max)))


def _residual_norm(grid_length: float, coefficients: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(coefficients) ** 2) / grid_length))


def deconvolve(
    g: SampledSpectrum,
    kernel: KernelSpec,
    reg: RegularizationConfig,
    condition: SourceCondition | None = None,
    delta: float = 0.0,
) -> EnhancementResult:
    """
    f_α = R_α g con el filtro de reg.

    Si se pasa una condición de fuente se reporta ‖B f_α‖_ψ y, cuando es
    finita, la cota del error con ε = residuo + delta.
    """
    if reg.condition is not None and not reg.condition.matches(kernel):
        raise ConfigurationError(
            "condition", f"{reg.condition.label} no corresponde al núcleo de realce {kernel.label}"
        )
    if reg.alpha == 0.0 and not kernel.is_identity:
        logger.warning(f"Inversión sin regularizar (α=0) con {kernel.label}: el ruido se amplifica")

    if kernel.is_identity and reg.alpha == 0.0:
        f_alpha = g
        residual = 0.0
    else:
        g_hat = forward_transform(g)
        gain = regularization_filter(kernel, g.grid.omega, reg)
        f_hat = gain * g_hat
        f_alpha = inverse_transform(g.grid, f_hat)
        symbol = np.exp(np.asarray(log_fourier_symbol(kernel, g.grid.omega)))
        residual = _residual_norm(g.grid.length, symbol * f_hat - g_hat)

    psi_value: float | None = None
    bound: float | None = None
    if condition is not None:
        blurred = convolve(f_alpha, kernel)
        psi_value = psi_norm(blurred, condition, kernel)
        g_psi = psi_norm(g, condition, kernel)
        epsilon = residual + delta
        if math.isfinite(psi_value) and math.isfinite(g_psi) and epsilon > 0:
            c_plus_gpsi = math.sqrt(psi_value) + math.sqrt(g_psi)
            try:
                bound = theorem1_bound(epsilon, c_plus_gpsi, condition)
            except (BoundInvalidError, PsiRangeError) as exc:
                logger.warning(f"Cota no disponible: {exc}")
        else:
            logger.info(f"Cota omitida para {condition.label}: norma ψ infinita o ε nulo")

    logger.debug(f"deconvolve {kernel.label} {reg.method.value} α={reg.alpha:.3g} residuo={residual:.3g}")
    return EnhancementResult(
        f_alpha=f_alpha,
        alpha=reg.alpha,
        residual_epsilon=residual,
        method=reg.method,
        psi_norm_Bf=psi_value,
        bound=bound,
    )


def eddington_correct(g: SampledSpectrum, k: int, reg: RegularizationConfig) -> EnhancementResult:
    """Corrección de Eddington de orden k: deconvolución con EddingtonInverse(k)."""
    if k < 0:
        raise ParameterDomainError("k", k, "debe ser ≥ 0")
    return deconvolve(g, KernelSpec.eddington_inverse(k), reg)


def choose_alpha_discrepancy(
    g_delta: SampledSpectrum,
    kernel: KernelSpec,
    delta: float,
    method: RegularizationMethod | str = RegularizationMethod.TIKHONOV,
    tau: float = 1.1,
    condition: SourceCondition | None = None,
    alpha_min: float = DEFAULT_ALPHA_MIN,
    alpha_max: float = DEFAULT_ALPHA_MAX,
    rel_tol: float = DEFAULT_REL_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """
    Principio de discrepancia: α con ‖B R_α g_δ - g_δ‖ ≈ τδ.

    Bisección sobre log α en [alpha_min, alpha_max]; acepta cuando el
    residuo cae a ±rel_tol de τδ. El residuo es monótono en α, pero para
    el corte espectral es escalonado; si ningún α cae en la ventana se
    devuelve el mayor α con residuo ≤ τδ(1 + rel_tol).
    """
    if not math.isfinite(delta) or delta <= 0:
        raise ParameterDomainError("delta", delta, "debe ser > 0")
    data_norm = g_delta.norm()
    if delta >= data_norm:
        raise ParameterDomainError("delta", delta, f"debe ser menor que ‖g_δ‖={data_norm:.6g}")
    reg = RegularizationConfig(method=method, alpha=alpha_min, tau=tau, condition=condition)

    g_hat = forward_transform(g_delta)
    omega = g_delta.grid.omega
    symbol = np.exp(np.asarray(log_fourier_symbol(kernel, omega)))

    def residual(log_alpha: float) -> float:
        gain = regularization_filter(kernel, omega, reg.with_alpha(10.0**log_alpha))
        return _residual_norm(g_delta.grid.length, (symbol * gain - 1.0) * g_hat)

    target = tau * delta
    upper = target * (1.0 + rel_tol)
    lower = target * (1.0 - rel_tol)

    lo, hi = math.log10(alpha_min), math.log10(alpha_max)
    r_lo = residual(lo)
    if r_lo > upper:
        raise DataIncompatibleError(residual=r_lo, target=target)
    if r_lo >= lower:
        return alpha_min
    r_hi = residual(hi)
    if r_hi <= upper:
        if r_hi < lower:
            logger.warning(f"Residuo {r_hi:.3g} < τδ={target:.3g} incluso con α={alpha_max:g}")
        return alpha_max

    for iteration in range(max_iter):
        mid = 0.5 * (lo + hi)
        r_mid = residual(mid)
        if lower <= r_mid <= upper:
            logger.debug(f"Discrepancia: α={10.0**mid:.4g} en {iteration + 1} iteraciones")
            return 10.0**mid
        if r_mid > upper:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-12:
            break

    logger.warning(
        f"Discrepancia sin α en la ventana ±{rel_tol:.0%} de τδ={target:.3g}; "
        f"se usa α={10.0**lo:.4g}"
    )
    return 10.0**lo
