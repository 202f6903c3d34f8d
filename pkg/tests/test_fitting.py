"""
Tests unitarios para el ajuste de líneas por proyección variable.
"""
import numpy as np
import pytest

from src.domain.exceptions import ParameterDomainError, RankDeficiencyError
from src.domain.models import (
    FitProblem,
    KernelSpec,
    LineSpectrum,
    RegularizationConfig,
)
from src.domain.services import grid as grid_service
from src.domain.services.enhance import choose_alpha_discrepancy, deconvolve
from src.domain.services.fitting import (
    design_matrix,
    fit_success_rate,
    solve_intensities,
    varpro_fit,
)

GAUSSIAN = KernelSpec.gaussian_unit()


@pytest.fixture(scope="module")
def two_lines(default_grid):
    """Dos líneas gaussianas bien separadas, sin ruido."""
    lines = LineSpectrum.from_pairs([(-3.0, 1.0), (3.0, 0.7)])
    return grid_service.broaden(lines, GAUSSIAN, default_grid)


@pytest.mark.unit
class TestFitProblem:
    """Tests de validación de FitProblem."""

    def test_locations_are_sorted(self, two_lines):
        """Test que las posiciones iniciales se guardan ordenadas."""
        problem = FitProblem(two_lines, GAUSSIAN, 2, [3.2, -2.9])
        np.testing.assert_array_equal(problem.initial_locations, [-2.9, 3.2])

    @pytest.mark.parametrize(
        "n_lines, locations",
        [
            (0, []),
            (2, [0.0]),
            (2, [0.0, np.nan]),
            (1, [40.0]),
            (2, [0.0, 0.01]),
        ],
    )
    def test_invalid(self, two_lines, n_lines, locations):
        """Test de problemas mal planteados."""
        with pytest.raises(ParameterDomainError):
            FitProblem(two_lines, GAUSSIAN, n_lines, locations)

    def test_line_shape_grid_must_match(self, two_lines, coarse_grid):
        """Test que una forma muestreada debe usar la malla de los datos."""
        shape = grid_service.sample_kernel(GAUSSIAN, coarse_grid)
        with pytest.raises(ParameterDomainError):
            FitProblem(two_lines, shape, 1, [0.0])


@pytest.mark.unit
class TestSolveIntensities:
    """Tests del paso lineal."""

    def test_design_matrix_columns(self, default_grid):
        """Test que cada columna es la línea unitaria ensanchada."""
        matrix = design_matrix(default_grid, GAUSSIAN, [-1.0, 2.5])
        assert matrix.shape == (default_grid.n, 2)
        column = grid_service.broaden(LineSpectrum.from_pairs([(2.5, 1.0)]), GAUSSIAN, default_grid)
        np.testing.assert_allclose(matrix[:, 1], column.values, atol=1e-12)

    def test_single_line_exact(self, default_grid):
        """Test que una línea de intensidad 3 se recupera exactamente."""
        data = grid_service.broaden(LineSpectrum.from_pairs([(0.0, 3.0)]), GAUSSIAN, default_grid)
        intensities, residual = solve_intensities(data, GAUSSIAN, [0.0])
        assert intensities[0] == pytest.approx(3.0, abs=1e-8)
        assert residual == pytest.approx(0.0, abs=1e-10)

    def test_separated_lines_match_independent_fits(self, two_lines):
        """Test que líneas lejanas se ajustan como si estuvieran solas."""
        joint, _ = solve_intensities(two_lines, GAUSSIAN, [-3.0, 3.0])
        first, _ = solve_intensities(two_lines, GAUSSIAN, [-3.0])
        second, _ = solve_intensities(two_lines, GAUSSIAN, [3.0])
        np.testing.assert_allclose(joint, [1.0, 0.7], atol=1e-10)
        np.testing.assert_allclose(joint, [first[0], second[0]], atol=1e-6)

    def test_linear_step_is_optimal(self, two_lines):
        """Test que perturbar una intensidad aumenta el residuo."""
        locations = [-3.1, 2.95]
        intensities, residual = solve_intensities(two_lines, GAUSSIAN, locations)
        matrix = design_matrix(two_lines.grid, GAUSSIAN, locations)
        dx = two_lines.grid.dx
        for index in range(2):
            for step in (-1e-3, 1e-3):
                perturbed = intensities.copy()
                perturbed[index] += step
                other = np.linalg.norm(matrix @ perturbed - two_lines.values) * np.sqrt(dx)
                assert other > residual

    def test_coincident_locations(self, two_lines):
        """Test que dos posiciones a menos de 2·dx pierden rango."""
        dx = two_lines.grid.dx
        with pytest.raises(RankDeficiencyError) as exc_info:
            solve_intensities(two_lines, GAUSSIAN, [0.0, dx / 2])
        assert {exc_info.value.first, exc_info.value.second} == {0, 1}

    def test_empty_locations(self, two_lines):
        """Test que se necesita al menos una posición."""
        with pytest.raises(ParameterDomainError):
            solve_intensities(two_lines, GAUSSIAN, [])


@pytest.mark.unit
class TestVarpro:
    """Tests de varpro_fit."""

    def test_exact_recovery(self, two_lines):
        """Test de recuperación exacta con inicialización a ±0.5."""
        result = varpro_fit(FitProblem(two_lines, GAUSSIAN, 2, [-3.4, 3.45]))
        np.testing.assert_allclose(result.locations, [-3.0, 3.0], atol=1e-4)
        np.testing.assert_allclose(result.intensities, [1.0, 0.7], atol=1e-4)
        assert result.converged
        assert result.residual_norm < result.initial_residual

    def test_sampled_line_shape(self, two_lines, default_grid):
        """Test que una forma muestreada da el mismo ajuste que el núcleo analítico."""
        shape = grid_service.sample_kernel(GAUSSIAN, default_grid)
        result = varpro_fit(FitProblem(two_lines, shape, 2, [-3.4, 3.45]))
        np.testing.assert_allclose(result.locations, [-3.0, 3.0], atol=1e-4)

    def test_order_invariance(self, two_lines):
        """Test que invertir el orden inicial no cambia el resultado."""
        forward = varpro_fit(FitProblem(two_lines, GAUSSIAN, 2, [-3.3, 2.8]))
        backward = varpro_fit(FitProblem(two_lines, GAUSSIAN, 2, [2.8, -3.3]))
        np.testing.assert_allclose(forward.locations, backward.locations, atol=1e-8)

    def test_stationary_start(self, default_grid):
        """Test que empezar en la solución no mueve nada."""
        data = grid_service.broaden(LineSpectrum.from_pairs([(0.5, 2.0)]), GAUSSIAN, default_grid)
        result = varpro_fit(FitProblem(data, GAUSSIAN, 1, [0.5]))
        assert result.iterations == 0
        assert result.residual_norm == result.initial_residual
        assert result.locations[0] == 0.5

    def test_pure_gauss_newton_never_worsens(self, two_lines):
        """Test que el mejor iterado nunca empeora el residuo inicial."""
        noisy = grid_service.add_noise(two_lines, 0.02, seed=5)
        result = varpro_fit(FitProblem(noisy, GAUSSIAN, 2, [-3.6, 2.4]), pure_gauss_newton=True)
        assert result.residual_norm <= result.initial_residual

    def test_near_rank_deficient_regime(self, default_grid):
        """Test que líneas a 0.5 de distancia se procesan sin excepción."""
        data = grid_service.broaden(LineSpectrum.from_pairs([(-0.25, 1.0), (0.25, 1.0)]), GAUSSIAN, default_grid)
        result = varpro_fit(FitProblem(data, GAUSSIAN, 2, [-0.5, 0.5]))
        assert result.residual_norm <= result.initial_residual
        assert result.condition_estimate >= 1.0

    def test_rows(self, two_lines):
        """Test de las filas numeradas desde 1."""
        result = varpro_fit(FitProblem(two_lines, GAUSSIAN, 2, [-3.1, 3.1]))
        rows = result.rows()
        assert [row[0] for row in rows] == [1, 2]
        assert rows[0][1] == pytest.approx(-3.0, abs=1e-4)
        assert set(result.to_dict()) >= {"locations", "intensities", "converged", "iterations"}

    def test_success_rate_well_separated(self, two_lines):
        """Test que todas las inicializaciones cercanas convergen."""
        rate = fit_success_rate(two_lines, GAUSSIAN, [-3.0, 3.0], [-0.3, 0.0, 0.3], tolerance=0.05)
        assert rate == 1.0


@pytest.mark.slow
class TestEnhancementHelpsFitting:
    """Tests del ajuste sobre el espectro realzado."""

    def test_enhanced_success_not_worse(self, default_grid):
        """Test que el realce no reduce la tasa de éxito del ajuste."""
        truth = [-0.75, 0.75]
        clean = grid_service.broaden(LineSpectrum.from_pairs([(-0.75, 1.0), (0.75, 1.0)]), GAUSSIAN, default_grid)
        noisy = grid_service.add_noise(clean, 0.01, seed=2009)
        kernel = KernelSpec.lorentz_width(2.0)
        alpha = choose_alpha_discrepancy(noisy, kernel, 0.01 * clean.norm())
        reg = RegularizationConfig("tikhonov", alpha)
        enhanced = deconvolve(noisy, kernel, reg).f_alpha
        enhanced_shape = deconvolve(grid_service.sample_kernel(GAUSSIAN, default_grid), kernel, reg).f_alpha

        offsets = np.linspace(-0.6, 0.6, 5)
        raw_rate = fit_success_rate(noisy, GAUSSIAN, truth, offsets, tolerance=0.1)
        enhanced_rate = fit_success_rate(enhanced, enhanced_shape, truth, offsets, tolerance=0.1)
        assert enhanced_rate >= raw_rate
