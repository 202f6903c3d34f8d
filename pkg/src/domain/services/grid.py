"""
Servicio de dominio para la malla: transformadas, muestreo de núcleos,
ensanchamiento de líneas, ruido y medición de FWHM.

La transformada directa escala por dx y la inversa por 1/L, de modo que
los coeficientes aproximan la transformada continua y se cumple
Σ|g|²dx = (1/L)Σ|ĝ|².
"""
from __future__ import annotations

import logging

import numpy as np
from scipy import fft

from src.domain.exceptions import MeasurementError, ParameterDomainError
from src.domain.models.kernel_models import KernelSpec
from src.domain.models.spectrum_models import Grid, LineSpectrum, SampledSpectrum
from src.domain.services.kernels import fourier_symbol

logger = logging.getLogger(__name__)

_IMAGINARY_TOLERANCE = 1e-8


def forward_transform(spectrum: SampledSpectrum) -> np.ndarray:
    """Coeficientes ĝ(ω_j) en el orden de grid.omega."""
    return fft.fft(fft.ifftshift(spectrum.values)) * spectrum.grid.dx


def inverse_transform(grid: Grid, coefficients: np.ndarray) -> SampledSpectrum:
    """Espectro real a partir de coeficientes hermíticos."""
    values = fft.fftshift(fft.ifft(coefficients)) / grid.dx
    peak = float(np.max(np.abs(values))) if values.size else 0.0
    leak = float(np.max(np.abs(values.imag)))
    if peak > 0 and leak > _IMAGINARY_TOLERANCE * peak:
        logger.debug(f"Parte imaginaria descartada: {leak:.3g} (pico {peak:.3g})")
    return SampledSpectrum(grid, values.real)


def translation_columns(grid: Grid, shape_hat: np.ndarray, locations: np.ndarray) -> np.ndarray:
    """
    Matriz n×m cuyas columnas son la forma trasladada a cada posición.

    La traslación es exacta en el espacio de Fourier: ĥ(ω)·e^{-iωx_i}.
    """
    phases = np.exp(-1j * np.outer(grid.omega, np.asarray(locations, dtype=float)))
    columns = fft.ifft(shape_hat[:, None] * phases, axis=0)
    return fft.fftshift(columns, axes=0).real / grid.dx


def sample_symbol(grid: Grid, symbol_values: np.ndarray) -> SampledSpectrum:
    """Espectro cuya transformada es el símbolo dado (centrado en x = 0)."""
    return inverse_transform(grid, np.asarray(symbol_values, dtype=complex))


def sample_kernel(kernel: KernelSpec, grid: Grid) -> SampledSpectrum:
    """Núcleo muestreado sobre la malla vía su símbolo de Fourier."""
    return sample_symbol(grid, fourier_symbol(kernel, grid.omega))


def broaden(lines: LineSpectrum, kernel: KernelSpec, grid: Grid) -> SampledSpectrum:
    """g(x) = Σ u_i a(x - x_i) evaluado en la malla."""
    if len(lines) == 0:
        raise ParameterDomainError("lines", 0, "se necesita al menos una línea")
    for line in lines.lines:
        if not grid.contains(line.location):
            raise ParameterDomainError(
                "location", line.location, f"fuera de [-{grid.length / 2:g}, {grid.length / 2:g})"
            )
    symbol = fourier_symbol(kernel, grid.omega)
    phases = np.exp(-1j * np.outer(grid.omega, lines.locations)) @ lines.intensities
    return inverse_transform(grid, symbol * phases)


def convolve(spectrum: SampledSpectrum, kernel: KernelSpec) -> SampledSpectrum:
    """Convolución periódica spectrum * kernel."""
    coefficients = forward_transform(spectrum) * fourier_symbol(kernel, spectrum.grid.omega)
    return inverse_transform(spectrum.grid, coefficients)


def add_noise(spectrum: SampledSpectrum, level: float, seed: int) -> SampledSpectrum:
    """
    Suma ruido gaussiano blanco escalado a ‖e‖ = level·‖g‖.

    Determinista para una semilla dada.
    """
    if not np.isfinite(level) or level <= 0:
        raise ParameterDomainError("level", level, "debe ser > 0")
    signal_norm = spectrum.norm()
    if signal_norm == 0.0:
        raise MeasurementError("escala de ruido indefinida para una señal nula")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(spectrum.grid.n)
    noise_norm = float(np.sqrt(np.sum(noise**2) * spectrum.grid.dx))
    noise *= level * signal_norm / noise_norm
    return SampledSpectrum(spectrum.grid, spectrum.values + noise)


def _half_crossing(x: np.ndarray, values: np.ndarray, inside: int, outside: int, half: float) -> float:
    y_in, y_out = values[inside], values[outside]
    return float(x[inside] + (half - y_in) * (x[outside] - x[inside]) / (y_out - y_in))


def fwhm(spectrum: SampledSpectrum) -> float:
    """
    Anchura a media altura del máximo global, con interpolación lineal
    entre muestras.
    """
    values = spectrum.values
    x = spectrum.grid.x
    peak = int(np.argmax(values))
    height = float(values[peak])
    if height <= 0:
        raise MeasurementError("el máximo no es positivo")
    half = 0.5 * height

    left = peak
    while values[left] >= half:
        if left == 0:
            raise MeasurementError("el pico no baja a media altura por la izquierda")
        left -= 1
    right = peak
    while values[right] >= half:
        if right == spectrum.grid.n - 1:
            raise MeasurementError("el pico no baja a media altura por la derecha")
        right += 1

    x_left = _half_crossing(x, values, left + 1, left, half)
    x_right = _half_crossing(x, values, right - 1, right, half)
    return x_right - x_left
