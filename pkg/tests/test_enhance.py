"""
Tests unitarios para la deconvolución regularizada y la elección de α.
"""
import math

import numpy as np
import pytest

from src.domain.exceptions import (
    ConfigurationError,
    DataIncompatibleError,
    ParameterDomainError,
    SingularInversionError,
)
from src.domain.models import (
    KernelSpec,
    LineSpectrum,
    RegularizationConfig,
    RegularizationMethod,
    SourceCondition,
)
from src.domain.services import grid as grid_service
from src.domain.services.enhance import (
    choose_alpha_discrepancy,
    deconvolve,
    eddington_correct,
    regularization_filter,
)


@pytest.fixture(scope="module")
def noisy_gaussian(unit_gaussian):
    """Gaussiana unitaria con 5% de ruido."""
    return grid_service.add_noise(unit_gaussian, 0.05, seed=3)


@pytest.mark.unit
class TestRegularizationConfig:
    """Tests de validación de RegularizationConfig."""

    def test_defaults(self):
        """Test de los valores por defecto."""
        reg = RegularizationConfig()
        assert reg.method is RegularizationMethod.TIKHONOV
        assert reg.alpha == 0.0
        assert reg.tau == 1.1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"alpha": -1.0},
            {"alpha": math.inf},
            {"tau": 1.0},
            {"method": "wiener"},
            {"method": "source", "alpha": 0.1},
        ],
    )
    def test_invalid(self, kwargs):
        """Test de configuraciones inválidas."""
        with pytest.raises(ParameterDomainError):
            RegularizationConfig(**kwargs)

    def test_with_alpha(self):
        """Test que with_alpha conserva el resto de campos."""
        reg = RegularizationConfig("cutoff", 0.1, 1.2)
        updated = reg.with_alpha(0.5)
        assert updated.method is RegularizationMethod.SPECTRAL_CUTOFF
        assert (updated.alpha, updated.tau) == (0.5, 1.2)


@pytest.mark.unit
class TestRegularizationFilter:
    """Tests de los multiplicadores de Fourier."""

    omega = np.linspace(-5.0, 5.0, 101)

    def test_tikhonov(self):
        """Test del filtro de Tikhonov b/(b² + α)."""
        kernel = KernelSpec.eddington_inverse(1)
        t = 1.0 + 0.5 * self.omega**2
        gain = regularization_filter(kernel, self.omega, RegularizationConfig("tikhonov", 0.01))
        np.testing.assert_allclose(gain, t / (1.0 + 0.01 * t**2), rtol=1e-12)

    def test_cutoff(self):
        """Test que el corte anula donde b² < α e invierte en el resto."""
        kernel = KernelSpec.lorentz_width(2.0)
        alpha = 1e-4
        gain = regularization_filter(kernel, self.omega, RegularizationConfig("cutoff", alpha))
        b = np.exp(-2.0 * np.abs(self.omega))
        keep = b**2 >= alpha
        np.testing.assert_allclose(gain[keep], 1.0 / b[keep], rtol=1e-12)
        assert np.all(gain[~keep] == 0.0)

    def test_source_penalty(self):
        """Test que la penalización de fuente da 1/(b(1 + α exp(ω²))) para LorentzOnGaussian."""
        kernel = KernelSpec.lorentz_width(2.0)
        reg = RegularizationConfig("source", 1e-3, condition=SourceCondition.lorentz_on_gaussian(2.0))
        gain = regularization_filter(kernel, self.omega, reg)
        expected = np.exp(2.0 * np.abs(self.omega)) / (1.0 + 1e-3 * np.exp(self.omega**2))
        np.testing.assert_allclose(gain, expected, rtol=1e-10)

    def test_source_penalty_decays_without_overflow(self, default_grid):
        """Test que la penalización de fuente se anula en altas frecuencias."""
        kernel = KernelSpec.lorentz_width(2.0)
        reg = RegularizationConfig("source", 1e-4, condition=SourceCondition.lorentz_on_gaussian(2.0))
        gain = regularization_filter(kernel, default_grid.omega, reg)
        assert np.all(np.isfinite(gain))
        assert gain[default_grid.n // 2] == 0.0

    def test_exact_inverse(self):
        """Test que α = 0 es 1/b."""
        kernel = KernelSpec.gaussian_unit()
        gain = regularization_filter(kernel, self.omega, RegularizationConfig())
        np.testing.assert_allclose(gain, np.exp(0.5 * self.omega**2), rtol=1e-12)

    def test_exact_inverse_singular(self, default_grid):
        """Test que α = 0 falla si b̂ se anula en la malla."""
        with pytest.raises(SingularInversionError) as exc_info:
            regularization_filter(KernelSpec.lorentz_width(4.0), default_grid.omega, RegularizationConfig())
        assert exc_info.value.frequency > 180.0


@pytest.mark.unit
class TestDeconvolve:
    """Tests de deconvolve y eddington_correct."""

    def test_identity_returns_input(self, unit_gaussian):
        """Test que el núcleo identidad con α = 0 devuelve g sin cambios."""
        result = deconvolve(unit_gaussian, KernelSpec.identity(), RegularizationConfig())
        assert result.f_alpha is unit_gaussian
        assert result.residual_epsilon == 0.0

    def test_exact_inverse_on_coarse_grid(self, coarse_grid, single_line):
        """Test que con α = 0 se cumple B f = g."""
        g = grid_service.broaden(single_line, KernelSpec.gaussian_unit(), coarse_grid)
        kernel = KernelSpec.lorentz_width(0.5)
        result = deconvolve(g, kernel, RegularizationConfig())
        reblurred = grid_service.convolve(result.f_alpha, kernel)
        np.testing.assert_allclose(reblurred.values, g.values, atol=1e-12)
        assert result.residual_epsilon == pytest.approx(0.0, abs=1e-12)

    def test_eddington_first_order_is_second_derivative(self, unit_gaussian):
        """Test que Eddington k=1 equivale a g - g''/2 por diferencias finitas."""
        result = eddington_correct(unit_gaussian, 1, RegularizationConfig())
        g = unit_gaussian.values
        dx = unit_gaussian.grid.dx
        second = (np.roll(g, -1) - 2.0 * g + np.roll(g, 1)) / dx**2
        np.testing.assert_allclose(result.f_alpha.values, g - 0.5 * second, atol=1e-4)

    def test_eddington_correct_matches_deconvolve(self, noisy_gaussian):
        """Test que eddington_correct es deconvolve con EddingtonInverse(k)."""
        reg = RegularizationConfig("tikhonov", 1e-3)
        direct = deconvolve(noisy_gaussian, KernelSpec.eddington_inverse(2), reg)
        corrected = eddington_correct(noisy_gaussian, 2, reg)
        np.testing.assert_array_equal(direct.f_alpha.values, corrected.f_alpha.values)
        with pytest.raises(ParameterDomainError):
            eddington_correct(noisy_gaussian, -1, reg)

    def test_tikhonov_residual_monotone_in_alpha(self, noisy_gaussian):
        """Test que el residuo de Tikhonov crece con α."""
        kernel = KernelSpec.lorentz_width(2.0)
        residuals = [
            deconvolve(noisy_gaussian, kernel, RegularizationConfig("tikhonov", alpha)).residual_epsilon
            for alpha in np.logspace(-12, 0, 13)
        ]
        assert all(b >= a - 1e-15 for a, b in zip(residuals, residuals[1:]))

    def test_enhancement_narrows_the_line(self, unit_gaussian):
        """Test que el realce estrecha la línea."""
        result = deconvolve(unit_gaussian, KernelSpec.lorentz_width(2.0), RegularizationConfig("cutoff", 1e-12))
        assert grid_service.fwhm(result.f_alpha) < grid_service.fwhm(unit_gaussian)

    @pytest.mark.parametrize("method", ["tikhonov", "cutoff"])
    def test_norm_non_increasing_in_alpha(self, noisy_gaussian, method):
        """Test que ‖f_α‖ no crece al aumentar α."""
        kernel = KernelSpec.lorentz_width(2.0)
        norms = [
            deconvolve(noisy_gaussian, kernel, RegularizationConfig(method, alpha)).f_alpha.norm()
            for alpha in np.logspace(-12, 0, 13)
        ]
        assert all(b <= a * (1.0 + 1e-12) for a, b in zip(norms, norms[1:]))

    def test_linear_in_data(self, noisy_gaussian, default_grid):
        """Test que a α fijo el realce es lineal en g."""
        kernel = KernelSpec.lorentz_width(1.0)
        reg = RegularizationConfig("tikhonov", 1e-3)
        other = grid_service.broaden(LineSpectrum.from_pairs([(2.0, 0.5)]), KernelSpec.lorentz_unit(), default_grid)
        combined = deconvolve(2.0 * noisy_gaussian - 3.0 * other, kernel, reg).f_alpha
        first = deconvolve(noisy_gaussian, kernel, reg).f_alpha
        second = deconvolve(other, kernel, reg).f_alpha
        expected = 2.0 * first - 3.0 * second
        scale = float(np.max(np.abs(expected.values)))
        np.testing.assert_allclose(combined.values, expected.values, atol=1e-10 * scale)

    def test_eddington_order_narrows_further(self, unit_gaussian):
        """Test que FWHM(k=2) < FWHM(k=1) < FWHM(g) para la corrección de Eddington sin regularizar."""
        widths = [grid_service.fwhm(eddington_correct(unit_gaussian, k, RegularizationConfig()).f_alpha) for k in (1, 2)]
        assert widths[1] < widths[0] < grid_service.fwhm(unit_gaussian)

    def test_condition_must_match_kernel(self, unit_gaussian):
        """Test que una condición de otro núcleo de realce se rechaza."""
        reg = RegularizationConfig("source", 1e-2, condition=SourceCondition.lorentz_on_gaussian(2.0))
        with pytest.raises(ConfigurationError):
            deconvolve(unit_gaussian, KernelSpec.lorentz_width(1.0), reg)

    def test_bound_dominates_error(self, narrow_gaussian_data, default_grid):
        """Test que la cota reportada acota el error real del realce."""
        kernel = KernelSpec.lorentz_width(1.0)
        condition = SourceCondition.lorentz_on_gaussian(1.0)
        result = deconvolve(narrow_gaussian_data, kernel, RegularizationConfig("tikhonov", 1e-3), condition)

        omega = default_grid.omega
        truth = grid_service.sample_symbol(default_grid, np.exp(-0.625 * omega**2 + np.abs(omega)))
        error = (result.f_alpha - truth).norm()
        assert result.psi_norm_Bf is not None and math.isfinite(result.psi_norm_Bf)
        assert result.bound is not None
        assert error <= result.bound

    def test_divergent_psi_norm_has_no_bound(self, default_grid, single_line):
        """Test que sin norma ψ finita no se reporta cota."""
        g = grid_service.broaden(single_line, KernelSpec.lorentz_unit(), default_grid)
        result = deconvolve(
            g,
            KernelSpec.lorentz_width(1.0),
            RegularizationConfig("tikhonov", 1e-3),
            SourceCondition.lorentz_on_gaussian(1.0),
        )
        assert result.bound is None

    def test_result_to_dict(self, unit_gaussian):
        """Test de la serialización del resultado."""
        result = deconvolve(unit_gaussian, KernelSpec.lorentz_width(1.0), RegularizationConfig("tikhonov", 0.1))
        data = result.to_dict()
        assert data["method"] == "tikhonov"
        assert data["alpha"] == 0.1
        assert data["bound"] is None


@pytest.mark.unit
class TestDiscrepancyPrinciple:
    """Tests de choose_alpha_discrepancy."""

    def test_tikhonov_hits_target(self, noisy_gaussian, unit_gaussian):
        """Test que el α elegido deja el residuo a ±1% de τδ."""
        kernel = KernelSpec.lorentz_width(2.0)
        delta = 0.05 * unit_gaussian.norm()
        alpha = choose_alpha_discrepancy(noisy_gaussian, kernel, delta, "tikhonov", tau=1.1)
        residual = deconvolve(noisy_gaussian, kernel, RegularizationConfig("tikhonov", alpha)).residual_epsilon
        assert 0.99 * 1.1 * delta <= residual <= 1.01 * 1.1 * delta

    def test_cutoff_never_exceeds_window(self, noisy_gaussian, unit_gaussian):
        """Test que con el corte escalonado el residuo no supera τδ(1 + tol)."""
        kernel = KernelSpec.lorentz_width(2.0)
        delta = 0.05 * unit_gaussian.norm()
        alpha = choose_alpha_discrepancy(noisy_gaussian, kernel, delta, "cutoff", tau=1.1)
        residual = deconvolve(noisy_gaussian, kernel, RegularizationConfig("cutoff", alpha)).residual_epsilon
        assert residual <= 1.01 * 1.1 * delta

    def test_incompatible_data(self, noisy_gaussian, unit_gaussian):
        """Test que un δ declarado muy pequeño hace los datos incompatibles."""
        with pytest.raises(DataIncompatibleError) as exc_info:
            choose_alpha_discrepancy(noisy_gaussian, KernelSpec.lorentz_width(4.0), 1e-6 * unit_gaussian.norm())
        assert exc_info.value.residual > exc_info.value.target

    @pytest.mark.parametrize("factor", [0.0, -1.0, 1.0, 2.0])
    def test_invalid_delta(self, noisy_gaussian, factor):
        """Test que δ debe estar en (0, ‖g_δ‖)."""
        delta = factor * noisy_gaussian.norm()
        with pytest.raises(ParameterDomainError):
            choose_alpha_discrepancy(noisy_gaussian, KernelSpec.lorentz_width(2.0), delta)
