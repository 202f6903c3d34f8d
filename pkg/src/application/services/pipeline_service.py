"""
Servicio de aplicación para los comandos de la CLI: síntesis, realce,
tabla de cotas y ajuste de líneas.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

from src.domain.exceptions import (
    BoundInvalidError,
    ConfigurationError,
    DomainException,
    MeasurementError,
    PsiRangeError,
)
from src.domain.models import (
    FitProblem,
    FitResult,
    KernelSpec,
    LineSpectrum,
    SampledSpectrum,
    SourceCondition,
)
from src.domain.ports.spectrum_store_port import SpectrumStorePort
from src.domain.services import bounds, enhance, fitting, grid

if TYPE_CHECKING:
    from src.adapters.config.experiment_config import ExperimentConfig
    from src.adapters.config.settings import Settings

logger = logging.getLogger(__name__)

BOUND_COLUMNS = ("epsilon", "deficit", "exponent", "bound")
FIT_COLUMNS = ("line", "location", "intensity")


@dataclass(frozen=True)
class SynthesisOutput:
    """Datos sintéticos de una configuración."""
    truth: LineSpectrum
    clean: SampledSpectrum
    noisy: SampledSpectrum | None
    delta: float

    @property
    def data(self) -> SampledSpectrum:
        return self.noisy if self.noisy is not None else self.clean


def _finite_or_none(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return value


class SpectralPipelineService:
    """Casos de uso de una corrida: synth, enhance, bound y fit."""

    def __init__(self, store: SpectrumStorePort, settings: Settings):
        """
        Inicializar el servicio.

        Args:
            store: Implementación del almacenamiento de espectros
            settings: Configuración numérica (tolerancias, discrepancia)
        """
        self.store = store
        self.settings = settings

    # --- Síntesis ---

    def synthesize(self, config: ExperimentConfig) -> SynthesisOutput:
        """Construye g = Σ u_i a(x - x_i) y, si noise_level > 0, g_δ."""
        mesh = config.grid.to_domain()
        truth = config.line_spectrum()
        clean = grid.broaden(truth, config.broadening.to_domain(), mesh)
        if config.noise_level > 0:
            noisy = grid.add_noise(clean, config.noise_level, config.seed)
            delta = config.noise_level * clean.norm()
        else:
            noisy, delta = None, 0.0
        return SynthesisOutput(truth, clean, noisy, delta)

    def run_synth(self, config: ExperimentConfig, out_dir: Path) -> list[Path]:
        """Escribe truth.csv, spectrum.csv y noisy.csv (sólo con ruido)."""
        synthesis = self.synthesize(config)
        paths = [
            self.store.write_lines(out_dir / "truth.csv", synthesis.truth),
            self.store.write_spectrum(out_dir / "spectrum.csv", synthesis.clean),
        ]
        if synthesis.noisy is not None:
            paths.append(self.store.write_spectrum(out_dir / "noisy.csv", synthesis.noisy))
        logger.info(f"Síntesis: {len(synthesis.truth)} líneas, ‖g‖={synthesis.clean.norm():.4g}, δ={synthesis.delta:.3g}")
        return paths

    # --- Realce ---

    def resolve_alpha(self, config: ExperimentConfig, synthesis: SynthesisOutput) -> float:
        """α explícito, por discrepancia (con ruido) o el α mínimo (sin ruido)."""
        if not config.uses_discrepancy:
            return config.reg.alpha
        enhancement = config.enhancement.to_domain()
        if enhancement.is_identity:
            return 0.0
        if synthesis.noisy is None:
            logger.info(f"Sin ruido: se usa el α mínimo {self.settings.fig1_alpha:g}")
            return self.settings.fig1_alpha
        reg = config.reg.to_domain()
        return enhance.choose_alpha_discrepancy(
            synthesis.noisy,
            enhancement,
            synthesis.delta,
            method=reg.method,
            tau=reg.tau,
            condition=reg.condition,
            alpha_min=self.settings.alpha_min,
            alpha_max=self.settings.alpha_max,
            rel_tol=self.settings.discrepancy_rel_tol,
            max_iter=self.settings.discrepancy_max_iter,
        )

    def run_enhance(self, config: ExperimentConfig, out_dir: Path) -> dict[str, Any]:
        """Escribe enhanced.csv y report.json; devuelve el reporte."""
        synthesis = self.synthesize(config)
        broadening = config.broadening.to_domain()
        enhancement = config.enhancement.to_domain()
        alpha = self.resolve_alpha(config, synthesis)
        reg = config.reg.to_domain(alpha=alpha)
        condition = reg.condition or bounds.infer_source_condition(broadening, enhancement)

        result = enhance.deconvolve(synthesis.data, enhancement, reg, condition, synthesis.delta)

        fwhm_before = self._safe_fwhm(synthesis.data, "datos")
        fwhm_after = self._safe_fwhm(result.f_alpha, "realzado")
        ratio = fwhm_after / fwhm_before if fwhm_before and fwhm_after else None
        report: dict[str, Any] = {
            "alpha": result.alpha,
            "residual": result.residual_epsilon,
            "psi_norm": _finite_or_none(result.psi_norm_Bf),
            "psi_norm_divergent": result.psi_norm_Bf is not None and math.isinf(result.psi_norm_Bf),
            "bound": result.bound,
            "fwhm_before": fwhm_before,
            "fwhm_after": fwhm_after,
            "fwhm_ratio": ratio,
            "method": reg.method.value,
            "kernel": enhancement.to_dict(),
            "condition": condition.to_dict() if condition else None,
            "delta": synthesis.delta,
        }
        self.store.write_spectrum(out_dir / "enhanced.csv", result.f_alpha)
        self.store.write_json(out_dir / "report.json", report)
        ratio_text = f"{ratio:.3f}" if ratio is not None else "n/d"
        logger.info(f"Realce {enhancement.label}: α={alpha:.3g}, FWHM ratio={ratio_text}")
        return report

    @staticmethod
    def _safe_fwhm(spectrum: SampledSpectrum, label: str) -> float | None:
        try:
            return grid.fwhm(spectrum)
        except MeasurementError as exc:
            logger.warning(f"FWHM del espectro {label} no medible: {exc}")
            return None

    # --- Cotas ---

    def bound_rows(
        self, condition: SourceCondition, epsilons: Sequence[float], c_plus_gpsi: float
    ) -> list[tuple[float, float, float, float]]:
        """Filas (epsilon, deficit, exponent, bound); las de déficit ≥ 1 se marcan en el log."""
        rows = []
        for epsilon in epsilons:
            deficit = bounds.exponent_deficit(condition, epsilon)
            if deficit >= 1.0:
                logger.warning(f"⚠️ ε={epsilon:g}: déficit {deficit:.4g} ≥ 1, cota vacía para {condition.label}")
            try:
                value = bounds.theorem1_bound(epsilon, c_plus_gpsi, condition)
            except (BoundInvalidError, PsiRangeError) as exc:
                logger.warning(f"ε={epsilon:g}: {exc}")
                value = math.nan
            rows.append((float(epsilon), deficit, 1.0 - deficit, value))
        return rows

    def run_bound(
        self, condition: SourceCondition, epsilons: Sequence[float], c_plus_gpsi: float, out_dir: Path
    ) -> Path:
        rows = self.bound_rows(condition, epsilons, c_plus_gpsi)
        return self.store.write_table(out_dir / "bounds.csv", BOUND_COLUMNS, rows)

    # --- Ajuste ---

    def fit(
        self,
        data: SampledSpectrum,
        line_shape: KernelSpec | SampledSpectrum,
        initial_locations: Sequence[float],
        max_iter: int | None = None,
        gtol: float | None = None,
        pure_gauss_newton: bool = False,
    ) -> FitResult:
        problem = FitProblem(data, line_shape, len(initial_locations), initial_locations)
        return fitting.varpro_fit(
            problem,
            max_iter=max_iter if max_iter is not None else self.settings.fit_max_iter,
            gtol=gtol if gtol is not None else self.settings.fit_gtol,
            pure_gauss_newton=pure_gauss_newton,
            rtol=self.settings.rank_rtol,
        )

    def run_fit(
        self,
        data_path: Path,
        kernel: KernelSpec,
        initial_locations: Sequence[float],
        out_dir: Path,
        max_iter: int | None = None,
        gtol: float | None = None,
        pure_gauss_newton: bool = False,
    ) -> FitResult:
        """Escribe fit.csv y fit_report.json."""
        data = self.store.read_spectrum(data_path)
        result = self.fit(data, kernel, initial_locations, max_iter, gtol, pure_gauss_newton)
        self.store.write_table(out_dir / "fit.csv", FIT_COLUMNS, result.rows())
        self.store.write_json(out_dir / "fit_report.json", result.to_dict())
        return result

    def run_fit_batch(self, batch_path: Path, out_dir: Path) -> list[FitResult]:
        """
        Ajusta en paralelo un arreglo JSON de problemas
        {"data": csv, "kernel": {...}, "initial_locations": [...]}; escribe
        fit_000.csv, fit_001.csv, ... y un fit_report.json con la lista.
        """
        entries = self.store.read_json(batch_path)
        if not isinstance(entries, list):
            raise ConfigurationError(str(batch_path), "se esperaba un arreglo JSON de problemas")
        problems = [self._problem_from_entry(index, entry, Path(batch_path).parent) for index, entry in enumerate(entries)]

        def solve(problem: FitProblem) -> FitResult:
            return fitting.varpro_fit(
                problem,
                max_iter=self.settings.fit_max_iter,
                gtol=self.settings.fit_gtol,
                rtol=self.settings.rank_rtol,
            )

        with ThreadPoolExecutor(max_workers=self.settings.max_workers) as pool:
            results = list(pool.map(solve, problems))
        for index, result in enumerate(results):
            self.store.write_table(out_dir / f"fit_{index:03d}.csv", FIT_COLUMNS, result.rows())
        self.store.write_json(out_dir / "fit_report.json", [result.to_dict() for result in results])
        logger.info(f"Ajuste por lotes: {len(results)} problemas")
        return results

    def _problem_from_entry(self, index: int, entry: Any, base_dir: Path) -> FitProblem:
        try:
            data_path = Path(entry["data"])
            if not data_path.is_absolute():
                data_path = base_dir / data_path
            locations = [float(x) for x in entry["initial_locations"]]
            kernel = KernelSpec.from_dict(entry["kernel"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"batch[{index}]", f"entrada inválida: {exc}") from exc
        except DomainException as exc:
            raise ConfigurationError(f"batch[{index}]", str(exc)) from exc
        data = self.store.read_spectrum(data_path)
        return FitProblem(data, kernel, len(locations), locations)
