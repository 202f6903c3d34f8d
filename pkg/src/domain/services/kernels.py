"""
Servicio de dominio para núcleos: símbolos de Fourier, formas en el
espacio real y polinomios de Taylor truncados.

Convención de transformada: ĝ(ω) = ∫ g(x) e^{-iωx} dx. Todos los núcleos
tienen masa unitaria, así que b̂(0) = 1.
"""
from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike

from src.domain.exceptions import ParameterDomainError, UnsupportedFormError
from src.domain.models.kernel_models import KernelFamily, KernelSpec, TaylorPoly

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
_BISECTION_STEPS = 80
_NEWTON_STEPS = 3


def _as_float(values: ArrayLike) -> np.ndarray | float:
    array = np.asarray(values, dtype=float)
    return float(array) if array.ndim == 0 else array


def taylor_eval(k: int | TaylorPoly, x: ArrayLike) -> np.ndarray | float:
    """Evalúa t_k(x) = Σ_{j≤k} x^j/j! por Horner, para x ≥ 0."""
    poly = k if isinstance(k, TaylorPoly) else TaylorPoly(k)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0) or not np.all(np.isfinite(xs)):
        raise ParameterDomainError("x", "negativo o no finito", "t_k se evalúa para x ≥ 0")
    coefficients = poly.coefficients
    result = np.full_like(xs, coefficients[-1])
    for c in reversed(coefficients[:-1]):
        result = c + result * xs
    return _as_float(result)


def taylor_inverse(k: int | TaylorPoly, y: ArrayLike) -> np.ndarray | float:
    """
    Inversa de t_k en [0, ∞) para y ≥ 1.

    Bisección vectorizada sobre [0, max(1, y)] (acotada además por
    (k!·y)^{1/k}) y pulido con unos pasos de Newton con derivada t_{k-1}.
    """
    poly = k if isinstance(k, TaylorPoly) else TaylorPoly(k)
    if poly.k == 0:
        raise UnsupportedFormError("TaylorPoly(k=0)", "taylor_inverse")
    ys = np.asarray(y, dtype=float)
    if np.any(ys < 1.0) or not np.all(np.isfinite(ys)):
        raise ParameterDomainError("y", "menor que 1 o no finito", "t_k^{-1} se define para y ≥ 1")

    lo = np.zeros_like(ys)
    hi = np.maximum(1.0, ys)
    with np.errstate(over="ignore"):
        hi = np.minimum(hi, (math.factorial(poly.k) * ys) ** (1.0 / poly.k))
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        above = taylor_eval(poly, mid) >= ys
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)

    root = hi
    derivative = poly.derivative()
    for _ in range(_NEWTON_STEPS):
        step = (taylor_eval(poly, root) - ys) / taylor_eval(derivative, root)
        root = np.clip(root - step, lo, hi)
    return _as_float(root)


def kernel_width(kernel: KernelSpec) -> float:
    """Parámetro de anchura κ efectivo (1 para GaussianUnit, √2 para LorentzUnit)."""
    if kernel.family is KernelFamily.GAUSSIAN_UNIT:
        return 1.0
    if kernel.family is KernelFamily.LORENTZ_UNIT:
        return SQRT2
    if kernel.kappa is not None:
        return kernel.kappa
    raise UnsupportedFormError(kernel.family.value, "kernel_width")


def log_fourier_symbol(kernel: KernelSpec, omega: ArrayLike) -> np.ndarray | float:
    """log b̂(ω); permite trabajar con símbolos por debajo del rango de float."""
    w = np.asarray(omega, dtype=float)
    family = kernel.family
    if family in (KernelFamily.GAUSSIAN_UNIT, KernelFamily.GAUSSIAN_WIDTH):
        kappa = kernel_width(kernel)
        result = -0.5 * kappa**2 * w**2
    elif family in (KernelFamily.LORENTZ_UNIT, KernelFamily.LORENTZ_WIDTH):
        result = -kernel_width(kernel) * np.abs(w)
    elif family is KernelFamily.VOIGT:
        theta = kernel.theta
        result = -0.5 * theta * w**2 - SQRT2 * (1.0 - theta) * np.abs(w)
    else:
        result = -np.log(taylor_eval(kernel.k, 0.5 * w**2))
    return _as_float(result)


def fourier_symbol(kernel: KernelSpec, omega: ArrayLike) -> np.ndarray | float:
    """
    Símbolo de Fourier b̂(ω) del núcleo.

    - GaussianUnit: exp(-ω²/2); GaussianWidth(κ): exp(-κ²ω²/2)
    - LorentzUnit: exp(-√2|ω|); LorentzWidth(κ): exp(-κ|ω|)
    - Voigt(θ): exp(-θω²/2 - √2(1-θ)|ω|)
    - EddingtonInverse(k): 1 / t_k(ω²/2)
    """
    return _as_float(np.exp(log_fourier_symbol(kernel, omega)))


def compose_symbols(first: KernelSpec, second: KernelSpec, omega: ArrayLike) -> np.ndarray | float:
    """Símbolo de la convolución first * second (producto de símbolos)."""
    return _as_float(np.exp(log_fourier_symbol(first, omega) + log_fourier_symbol(second, omega)))


def real_space(kernel: KernelSpec, x: ArrayLike) -> np.ndarray | float:
    """
    Forma del núcleo en el espacio real, cuando existe forma cerrada.

    Voigt, EddingtonInverse(0) (delta) y EddingtonInverse(k ≥ 2) no la
    tienen; para ellas usar grid.sample_kernel.
    """
    xs = np.asarray(x, dtype=float)
    family = kernel.family
    if family in (KernelFamily.GAUSSIAN_UNIT, KernelFamily.GAUSSIAN_WIDTH):
        kappa = kernel_width(kernel)
        result = np.exp(-0.5 * (xs / kappa) ** 2) / (math.sqrt(2.0 * math.pi) * kappa)
    elif family in (KernelFamily.LORENTZ_UNIT, KernelFamily.LORENTZ_WIDTH):
        kappa = kernel_width(kernel)
        result = 1.0 / (math.pi * kappa * (1.0 + (xs / kappa) ** 2))
    elif family is KernelFamily.EDDINGTON_INVERSE and kernel.k == 1:
        result = np.exp(-SQRT2 * np.abs(xs)) / SQRT2
    else:
        raise UnsupportedFormError(kernel.label, "real_space")
    return _as_float(result)
