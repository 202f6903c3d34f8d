"""
Servicio de dominio para la teoría de estabilidad en escalas de Hilbert
variables: funciones índice ψ, sus inversas Ψ, concavidad, norma ψ y la
cota del error del realce.

Todo se calcula en escala logarítmica: ψ(λ) crece como exp(ω²) y se sale
del rango de float mucho antes que los datos.
"""
from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import logsumexp

from src.domain.exceptions import (
    BoundInvalidError,
    ConfigurationError,
    EnhancementTooAggressiveError,
    ParameterDomainError,
    PsiRangeError,
)
from src.domain.models.bounds_models import ConcavityRegion, SourceCondition, SourceKind
from src.domain.models.kernel_models import KernelFamily, KernelSpec
from src.domain.models.spectrum_models import SampledSpectrum
from src.domain.services.grid import forward_transform
from src.domain.services.kernels import SQRT2, log_fourier_symbol, taylor_eval, taylor_inverse

logger = logging.getLogger(__name__)

LOG_FLOAT_MAX = float(np.log(np.finfo(float).max))
DEFAULT_SPECTRAL_FLOOR = 1e-12
DEFAULT_DIVERGENCE_RATIO = 1e3
DEFAULT_OUTER_SHARE = 1e-2
_OUTER_BAND = 0.9
_FLOOR_EDGE_FACTOR = 1e3


def _as_float(values: ArrayLike) -> np.ndarray | float:
    array = np.asarray(values, dtype=float)
    return float(array) if array.ndim == 0 else array


def log_psi(condition: SourceCondition, log_lam: ArrayLike) -> np.ndarray | float:
    """log ψ(λ) en función de log λ ≥ 0."""
    s = np.asarray(log_lam, dtype=float)
    kind = condition.kind
    if kind is SourceKind.EDDINGTON_GAUSSIAN:
        result = 2.0 * np.asarray(taylor_inverse(condition.k, np.exp(0.5 * s)))
    elif kind is SourceKind.GAUSSIAN_ON_GAUSSIAN:
        result = s / condition.kappa**2
    elif kind is SourceKind.LORENTZ_ON_GAUSSIAN:
        result = (s / (2.0 * condition.kappa)) ** 2
    else:
        theta = condition.theta
        u = s / (2.0 * condition.kappa)
        result = theta * u**2 + 2.0 * SQRT2 * (1.0 - theta) * u
    return _as_float(result)


def log_Psi(condition: SourceCondition, log_eta: ArrayLike) -> np.ndarray | float:
    """log Ψ(η) en función de log η ≥ 0, con Ψ la inversa de ψ."""
    s = np.asarray(log_eta, dtype=float)
    kind = condition.kind
    if kind is SourceKind.EDDINGTON_GAUSSIAN:
        result = 2.0 * np.log(taylor_eval(condition.k, 0.5 * s))
    elif kind is SourceKind.GAUSSIAN_ON_GAUSSIAN:
        result = condition.kappa**2 * s
    elif kind is SourceKind.LORENTZ_ON_GAUSSIAN:
        result = 2.0 * condition.kappa * np.sqrt(s)
    else:
        theta = condition.theta
        offset = SQRT2 * (1.0 - theta)
        result = (2.0 * condition.kappa / theta) * (np.sqrt(offset**2 + theta * s) - offset)
    return _as_float(result)


def _checked_log_argument(name: str, values: ArrayLike) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(array)) or np.any(array < 1.0):
        raise ParameterDomainError(name, "fuera de [1, ∞)", "la función índice vive en [1, ∞)")
    return np.log(array)


def _checked_exp(log_values: ArrayLike) -> np.ndarray | float:
    array = np.asarray(log_values, dtype=float)
    worst = float(np.max(array)) if array.size else 0.0
    if worst > LOG_FLOAT_MAX:
        raise PsiRangeError(worst)
    return _as_float(np.exp(array))


def psi_eval(condition: SourceCondition, lam: ArrayLike) -> np.ndarray | float:
    """ψ(λ) para λ ≥ 1."""
    return _checked_exp(log_psi(condition, _checked_log_argument("lambda", lam)))


def Psi_eval(condition: SourceCondition, eta: ArrayLike) -> np.ndarray | float:
    """Ψ(η) = ψ^{-1}(η) para η ≥ 1."""
    return _checked_exp(log_Psi(condition, _checked_log_argument("eta", eta)))


def _quadratic_coefficients(condition: SourceCondition) -> tuple[float, float]:
    """
    (a, b) tales que, con s = sqrt(log η + b), Ψ es cóncava donde
    2s² - a·s + 1 ≥ 0.
    """
    kappa = condition.kappa
    if condition.kind is SourceKind.LORENTZ_ON_GAUSSIAN:
        return 2.0 * kappa, 0.0
    theta = condition.theta
    return 2.0 * kappa / math.sqrt(theta), 2.0 * (1.0 - theta) ** 2 / theta


def concavity_factor(condition: SourceCondition, eta: ArrayLike) -> np.ndarray | float:
    """
    Factor cuyo signo coincide con el de -Ψ''(η): Ψ es cóncava en η
    exactamente donde el factor es ≥ 0.
    """
    log_eta = _checked_log_argument("eta", eta)
    if condition.kind in (SourceKind.EDDINGTON_GAUSSIAN, SourceKind.GAUSSIAN_ON_GAUSSIAN):
        return _as_float(np.ones_like(log_eta))
    a, b = _quadratic_coefficients(condition)
    s = np.sqrt(log_eta + b)
    return _as_float(2.0 * s**2 - a * s + 1.0)


def concavity_region(condition: SourceCondition) -> ConcavityRegion:
    """
    Región donde Ψ es cóncava.

    EddingtonGaussian y GaussianOnGaussian son cóncavas en todo [1, ∞).
    Para las condiciones lorentzianas el umbral sale de la raíz mayor de
    2s² - a·s + 1; la concavidad es incondicional si el discriminante
    a² - 8 es ≤ 0.
    """
    if condition.kind in (SourceKind.EDDINGTON_GAUSSIAN, SourceKind.GAUSSIAN_ON_GAUSSIAN):
        return ConcavityRegion(unconditional=True)
    a, b = _quadratic_coefficients(condition)
    if a * a - 8.0 <= 1e-12:
        return ConcavityRegion(unconditional=True)
    roots = np.roots([2.0, -a, 1.0])
    s_plus = float(np.max(roots.real))
    log_threshold = s_plus**2 - b
    if log_threshold <= 0.0:
        return ConcavityRegion(unconditional=True)
    logger.debug(f"{condition.label}: concavidad para η ≥ exp({log_threshold:.6g})")
    return ConcavityRegion(unconditional=False, eta_threshold=math.exp(log_threshold))


def psi_norm(
    g: SampledSpectrum,
    condition: SourceCondition,
    kernel: KernelSpec,
    spectral_floor: float = DEFAULT_SPECTRAL_FLOOR,
    divergence_ratio: float = DEFAULT_DIVERGENCE_RATIO,
    outer_share: float = DEFAULT_OUTER_SHARE,
) -> float:
    """
    Forma cuadrática ‖g‖²_ψ = (1/2π) Σ ψ(1/b̂²)|ĝ|² Δω.

    Sólo se suman las frecuencias resueltas (|ĝ| > floor·max|ĝ|). Se
    devuelve inf, la firma discreta de una norma infinita, si:
    - la suma desborda;
    - el sumando crece en el borde de la banda resuelta (más de
      divergence_ratio veces el máximo interior);
    - la banda termina en el piso (|ĝ| decae hasta floor, no hay corte
      abrupto) y su 10% exterior aporta al menos outer_share de la suma:
      el sumando no decae y el valor dependería de floor.
    """
    if not condition.matches(kernel):
        raise ConfigurationError(
            "condition", f"{condition.label} no corresponde al núcleo de realce {kernel.label}"
        )
    grid = g.grid
    magnitude = np.abs(forward_transform(g))
    peak = float(np.max(magnitude))
    if peak == 0.0:
        return 0.0

    resolved = magnitude > spectral_floor * peak
    omega = np.abs(grid.omega[resolved])
    log_lam = -2.0 * np.asarray(log_fourier_symbol(kernel, grid.omega[resolved]))
    log_terms = (
        np.asarray(log_psi(condition, np.maximum(log_lam, 0.0)))
        + 2.0 * np.log(magnitude[resolved])
        + math.log(grid.d_omega / (2.0 * math.pi))
    )

    edge = float(np.max(omega))
    outer = omega >= _OUTER_BAND * edge
    if np.any(outer) and np.any(~outer):
        growth = float(np.max(log_terms[outer]) - np.max(log_terms[~outer]))
        if growth > math.log(divergence_ratio):
            logger.warning(
                f"Norma ψ divergente para {condition.label}: el sumando crece "
                f"exp({growth:.3g}) en el borde de la banda resuelta"
            )
            return math.inf

    total = float(logsumexp(log_terms))
    floor_limited = bool(np.any(outer)) and float(np.min(magnitude[resolved][outer])) <= (
        _FLOOR_EDGE_FACTOR * spectral_floor * peak
    )
    if floor_limited and np.any(~outer):
        share = math.exp(float(logsumexp(log_terms[outer])) - total)
        if share >= outer_share:
            logger.warning(
                f"Norma ψ divergente para {condition.label}: el borde de la banda "
                f"aporta {share:.1%} de la suma (el sumando no decae)"
            )
            return math.inf
    if total > LOG_FLOAT_MAX:
        logger.warning(f"Norma ψ desborda para {condition.label} (log={total:.3g})")
        return math.inf
    return math.exp(total)


def theorem1_bound(epsilon: float, c_plus_gpsi: float, condition: SourceCondition) -> float:
    """
    Cota del error ‖f - f_α‖ ≤ ε·sqrt(Ψ((C + ‖g‖_ψ)²/ε²)).

    Requiere que η = (C + ‖g‖_ψ)²/ε² caiga en la región de concavidad de Ψ.
    """
    if not math.isfinite(epsilon) or epsilon <= 0:
        raise ParameterDomainError("epsilon", epsilon, "debe ser > 0")
    if not math.isfinite(c_plus_gpsi) or c_plus_gpsi <= 0:
        raise ParameterDomainError("c_plus_gpsi", c_plus_gpsi, "debe ser > 0 y finito")
    log_eta = 2.0 * (math.log(c_plus_gpsi) - math.log(epsilon))
    region = concavity_region(condition)
    if not region.contains_log(log_eta):
        threshold = 1.0 if region.unconditional else region.eta_threshold
        raise BoundInvalidError(eta=math.exp(min(log_eta, LOG_FLOAT_MAX)), threshold=threshold)
    log_bound = math.log(epsilon) + 0.5 * float(log_Psi(condition, log_eta))
    if log_bound > LOG_FLOAT_MAX:
        raise PsiRangeError(log_bound)
    return math.exp(log_bound)


def exponent_deficit(condition: SourceCondition, epsilon: float) -> float:
    """
    Déficit d(ε) del orden de convergencia: el error se comporta como
    ε^{1 - d(ε)}. Tiende a 0 cuando ε → 0 salvo para GaussianOnGaussian,
    donde es constante κ².
    """
    if not 0.0 < epsilon < 1.0:
        raise ParameterDomainError("epsilon", epsilon, "debe estar en (0, 1)")
    log_inv = -math.log(epsilon)
    kind = condition.kind
    if kind is SourceKind.EDDINGTON_GAUSSIAN:
        if epsilon >= math.exp(-1.0):
            raise ParameterDomainError("epsilon", epsilon, "EddingtonGaussian requiere ε < 1/e")
        return condition.k * math.log(log_inv) / log_inv
    if kind is SourceKind.GAUSSIAN_ON_GAUSSIAN:
        return condition.kappa**2
    if kind is SourceKind.LORENTZ_ON_GAUSSIAN:
        return 2.0 * condition.kappa / math.sqrt(log_inv)
    theta = condition.theta
    return 2.0 * condition.kappa / math.sqrt(theta * log_inv + (1.0 - theta) ** 2)


def eta_exponent(condition: SourceCondition, epsilon: float) -> float:
    """Déficit del exponente, rechazando los casos en que la cota es vacía."""
    deficit = exponent_deficit(condition, epsilon)
    if deficit >= 1.0:
        raise EnhancementTooAggressiveError(deficit)
    return deficit


def infer_source_condition(broadening: KernelSpec, enhancement: KernelSpec) -> SourceCondition | None:
    """Condición de fuente que corresponde al par (A, B), si la hay."""
    if broadening.family is KernelFamily.GAUSSIAN_UNIT:
        if enhancement.family is KernelFamily.LORENTZ_WIDTH:
            return SourceCondition.lorentz_on_gaussian(enhancement.kappa)
        if enhancement.family is KernelFamily.GAUSSIAN_WIDTH and enhancement.kappa <= 1.0:
            return SourceCondition.gaussian_on_gaussian(enhancement.kappa)
        if enhancement.family is KernelFamily.EDDINGTON_INVERSE and enhancement.k >= 1:
            return SourceCondition.eddington_gaussian(enhancement.k)
    if broadening.family is KernelFamily.VOIGT and enhancement.family is KernelFamily.LORENTZ_WIDTH:
        return SourceCondition.lorentz_on_voigt(enhancement.kappa, broadening.theta)
    return None
