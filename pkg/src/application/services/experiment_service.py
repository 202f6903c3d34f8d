"""
Servicio de aplicación que reproduce los experimentos de realce:

- fig1: corrección lorentziana de una gaussiana sin ruido, κ ∈ {√2, 2, 3, 4}
- fig2: κ = 2 regularizado con la condición de fuente, escalera de α
- fig3: como fig2 con 5% de ruido
- rates: error medido frente a la cota y a ε^{1-d(ε)} por condición de fuente

Cada experimento escribe curvas y tablas en CSV y, opcionalmente, un SVG.
Los barridos se evalúan en paralelo y se recogen en orden.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Any, TypeVar

import numpy as np

from src.domain.exceptions import (
    BoundInvalidError,
    MeasurementError,
    ParameterDomainError,
    PsiRangeError,
)
from src.domain.models import (
    Grid,
    KernelSpec,
    LineSpectrum,
    RegularizationConfig,
    RegularizationMethod,
    SampledSpectrum,
    SourceCondition,
)
from src.domain.ports.plot_port import CurvePlotterPort
from src.domain.ports.spectrum_store_port import SpectrumStorePort
from src.domain.services import bounds, enhance, grid
from src.domain.services.kernels import compose_symbols, log_fourier_symbol

if TYPE_CHECKING:
    from src.adapters.config.settings import Settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

FIG1_KAPPAS = (math.sqrt(2.0), 2.0, 3.0, 4.0)
FIG2_KAPPA = 2.0
ALPHA_LADDER = (1e-1, 1e-2, 1e-3, 1e-4)
FIG3_NOISE = 0.05
OUTER_WIDTHS = 3.0
RATES_LINE_WIDTH = 0.5


class ExperimentName(str, Enum):
    """Experimentos disponibles."""
    FIG1 = "fig1"
    FIG2 = "fig2"
    FIG3 = "fig3"
    RATES = "rates"


def default_rate_conditions() -> list[SourceCondition]:
    """Una condición por familia, con parámetros de cota incondicional."""
    return [
        SourceCondition.eddington_gaussian(1),
        SourceCondition.gaussian_on_gaussian(0.8),
        SourceCondition.lorentz_on_gaussian(1.0),
        SourceCondition.lorentz_on_voigt(1.0, 0.5),
    ]


@dataclass
class ExperimentReport:
    """Tabla principal de un experimento y archivos generados."""
    name: str
    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]]
    paths: list[Path] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> list[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


@dataclass(frozen=True)
class _CurveSummary:
    label: str
    curve: SampledSpectrum
    fwhm: float
    min_value: float
    outer_amplitude: float


def _kappa_label(kappa: float) -> str:
    return f"kappa_{kappa:.4g}"


class ExperimentService:
    """Reproduce los experimentos y escribe sus resultados."""

    def __init__(
        self,
        store: SpectrumStorePort,
        settings: Settings,
        plotter: CurvePlotterPort | None = None,
    ):
        self.store = store
        self.settings = settings
        self.plotter = plotter

    @property
    def grid(self) -> Grid:
        return Grid(self.settings.grid_n, self.settings.grid_length)

    def _sweep(self, func: Callable[[T], R], items: Sequence[T]) -> list[R]:
        with ThreadPoolExecutor(max_workers=self.settings.max_workers) as pool:
            return list(pool.map(func, items))

    def run(self, name: ExperimentName | str, out_dir: Path, seed: int | None = None) -> ExperimentReport:
        try:
            experiment = ExperimentName(name)
        except ValueError as exc:
            raise ParameterDomainError("experiment", name, "experimento desconocido") from exc
        seed = self.settings.seed if seed is None else seed
        logger.info(f"Experimento {experiment.value} → {out_dir}")
        if experiment is ExperimentName.FIG1:
            return self.run_fig1(out_dir)
        if experiment is ExperimentName.FIG2:
            return self.run_fig2(out_dir)
        if experiment is ExperimentName.FIG3:
            return self.run_fig3(out_dir, seed)
        return self.run_rates(out_dir, seed)

    # --- utilidades ---

    def _unit_gaussian(self) -> SampledSpectrum:
        return grid.broaden(LineSpectrum.from_pairs([(0.0, 1.0)]), KernelSpec.gaussian_unit(), self.grid)

    def _summarize(self, label: str, curve: SampledSpectrum, outer_from: float) -> _CurveSummary:
        try:
            width = grid.fwhm(curve)
        except MeasurementError as exc:
            logger.warning(f"{label}: FWHM no medible ({exc})")
            width = math.nan
        outer = np.abs(curve.x) > outer_from
        return _CurveSummary(
            label=label,
            curve=curve,
            fwhm=width,
            min_value=float(np.min(curve.values)),
            outer_amplitude=float(np.max(np.abs(curve.values[outer]))) if np.any(outer) else 0.0,
        )

    def _write_curves(
        self, out_dir: Path, stem: str, base: SampledSpectrum, summaries: Sequence[_CurveSummary], title: str
    ) -> list[Path]:
        columns = ["x", "original", *[summary.label for summary in summaries]]
        values = [base.x, base.values, *[summary.curve.values for summary in summaries]]
        paths = [self.store.write_table(out_dir / f"{stem}_curves.csv", columns, zip(*values))]
        if self.plotter is not None:
            curves = {"original": base.values, **{s.label: s.curve.values for s in summaries}}
            svg = self.plotter.plot_curves(out_dir / f"{stem}.svg", base.x, curves, title)
            if svg is not None:
                paths.append(svg)
        return paths

    # --- fig1 ---

    def run_fig1(self, out_dir: Path, kappas: Sequence[float] = FIG1_KAPPAS) -> ExperimentReport:
        """Realce sin ruido con corte espectral de α mínimo."""
        g = self._unit_gaussian()
        g_width = grid.fwhm(g)
        reg = RegularizationConfig(RegularizationMethod.SPECTRAL_CUTOFF, alpha=self.settings.fig1_alpha)

        def enhance_one(kappa: float) -> _CurveSummary:
            result = enhance.deconvolve(g, KernelSpec.lorentz_width(kappa), reg)
            return self._summarize(_kappa_label(kappa), result.f_alpha, OUTER_WIDTHS * g_width)

        summaries = self._sweep(enhance_one, list(kappas))
        columns = ("kappa", "fwhm", "ratio", "min_value")
        rows = [
            (float(kappa), s.fwhm, s.fwhm / g_width, s.min_value)
            for kappa, s in zip(kappas, summaries)
        ]
        paths = self._write_curves(out_dir, "fig1", g, summaries, "Corrección lorentziana de una gaussiana")
        paths.append(self.store.write_table(out_dir / "fig1_widths.csv", columns, rows))
        for kappa, _, ratio, minimum in rows:
            logger.info(f"fig1 κ={kappa:.4g}: FWHM ratio={ratio:.3f}, mínimo={minimum:.3g}")
        return ExperimentReport("fig1", columns, rows, paths, {"fwhm_original": g_width})

    # --- fig2 / fig3 ---

    def _regularized_ladder(
        self, out_dir: Path, stem: str, data: SampledSpectrum, include_reference: bool, title: str
    ) -> ExperimentReport:
        g_width = grid.fwhm(self._unit_gaussian())
        kernel = KernelSpec.lorentz_width(FIG2_KAPPA)
        condition = SourceCondition.lorentz_on_gaussian(FIG2_KAPPA)
        settings_list: list[tuple[str, RegularizationConfig]] = [
            (
                f"alpha_{alpha:g}",
                RegularizationConfig(RegularizationMethod.SOURCE_PENALTY, alpha=alpha, condition=condition),
            )
            for alpha in ALPHA_LADDER
        ]
        if include_reference:
            settings_list.insert(
                0,
                (
                    "unregularized",
                    RegularizationConfig(RegularizationMethod.SPECTRAL_CUTOFF, alpha=self.settings.fig1_alpha),
                ),
            )

        def enhance_one(item: tuple[str, RegularizationConfig]) -> _CurveSummary:
            label, reg = item
            result = enhance.deconvolve(data, kernel, reg)
            return self._summarize(label, result.f_alpha, OUTER_WIDTHS * g_width)

        summaries = self._sweep(enhance_one, settings_list)
        columns = ("method", "alpha", "fwhm", "ratio", "min_value", "outer_amplitude")
        rows = [
            (reg.method.value, reg.alpha, s.fwhm, s.fwhm / g_width, s.min_value, s.outer_amplitude)
            for (_, reg), s in zip(settings_list, summaries)
        ]
        paths = self._write_curves(out_dir, stem, data, summaries, title)
        paths.append(self.store.write_table(out_dir / f"{stem}_widths.csv", columns, rows))
        return ExperimentReport(stem, columns, rows, paths)

    def run_fig2(self, out_dir: Path) -> ExperimentReport:
        """κ = 2 sin ruido, regularizado con la condición de fuente."""
        return self._regularized_ladder(
            out_dir, "fig2", self._unit_gaussian(), include_reference=True,
            title="Corrección lorentziana regularizada (κ=2)",
        )

    def run_fig3(self, out_dir: Path, seed: int) -> ExperimentReport:
        """Como fig2 con 5% de ruido; sin el caso no regularizado."""
        noisy = grid.add_noise(self._unit_gaussian(), FIG3_NOISE, seed)
        return self._regularized_ladder(
            out_dir, "fig3", noisy, include_reference=False,
            title="Corrección lorentziana regularizada con 5% de ruido (κ=2)",
        )

    # --- rates ---

    def _rate_problem(self, condition: SourceCondition) -> tuple[SampledSpectrum, SampledSpectrum]:
        """(g, f) exactos: g = a * u con u gaussiana angosta, f = B^{-1} g."""
        mesh = self.grid
        narrow = KernelSpec.gaussian_width(RATES_LINE_WIDTH)
        broadening = condition.broadening_kernel()
        enhancement = condition.enhancement_kernel()
        g = grid.sample_symbol(mesh, np.asarray(compose_symbols(broadening, narrow, mesh.omega)))
        log_f_hat = (
            np.asarray(log_fourier_symbol(broadening, mesh.omega))
            + np.asarray(log_fourier_symbol(narrow, mesh.omega))
            - np.asarray(log_fourier_symbol(enhancement, mesh.omega))
        )
        f = grid.sample_symbol(mesh, np.exp(log_f_hat))
        return g, f

    def _rate_row(
        self, condition: SourceCondition, epsilon: float, seed: int
    ) -> tuple[Any, ...]:
        g, f = self._rate_problem(condition)
        kernel = condition.enhancement_kernel()
        g_delta = grid.add_noise(g, epsilon / g.norm(), seed)
        alpha = enhance.choose_alpha_discrepancy(
            g_delta,
            kernel,
            epsilon,
            method=RegularizationMethod.SPECTRAL_CUTOFF,
            tau=self.settings.discrepancy_tau,
            alpha_min=self.settings.alpha_min,
            alpha_max=self.settings.alpha_max,
            rel_tol=self.settings.discrepancy_rel_tol,
            max_iter=self.settings.discrepancy_max_iter,
        )
        result = enhance.deconvolve(
            g_delta, kernel, RegularizationConfig(RegularizationMethod.SPECTRAL_CUTOFF, alpha=alpha)
        )
        blurred = grid.convolve(result.f_alpha, kernel)
        measured_eps = (blurred - g).norm()
        error = (f - result.f_alpha).norm()

        floor = self.settings.psi_spectral_floor
        ratio = self.settings.psi_divergence_ratio
        share = self.settings.psi_outer_share
        c_term = bounds.psi_norm(blurred, condition, kernel, floor, ratio, share)
        g_term = bounds.psi_norm(g, condition, kernel, floor, ratio, share)
        c_plus_gpsi = math.sqrt(c_term) + math.sqrt(g_term)
        try:
            bound = bounds.theorem1_bound(measured_eps, c_plus_gpsi, condition)
        except (BoundInvalidError, PsiRangeError, ParameterDomainError) as exc:
            logger.warning(f"rates {condition.label} ε={epsilon:g}: cota no disponible ({exc})")
            bound = math.nan
        deficit = bounds.exponent_deficit(condition, measured_eps)
        return (
            condition.label,
            epsilon,
            alpha,
            measured_eps,
            error,
            c_plus_gpsi,
            bound,
            deficit,
            measured_eps ** (1.0 - deficit),
            bool(error <= bound),
        )

    def run_rates(
        self,
        out_dir: Path,
        seed: int,
        conditions: Sequence[SourceCondition] | None = None,
        epsilons: Sequence[float] | None = None,
    ) -> ExperimentReport:
        """Barrido de ε por décadas para cada condición de fuente."""
        conditions = list(conditions) if conditions is not None else default_rate_conditions()
        epsilons = list(epsilons) if epsilons is not None else list(self.settings.rates_epsilons)
        cases = [
            (condition, epsilon, seed + index)
            for condition in conditions
            for index, epsilon in enumerate(epsilons)
        ]
        rows = self._sweep(lambda case: self._rate_row(*case), cases)
        columns = (
            "condition", "epsilon_target", "alpha", "epsilon", "error",
            "c_plus_gpsi", "bound", "deficit", "eps_power", "holds",
        )
        paths = [self.store.write_table(out_dir / "rates.csv", columns, rows)]

        slope_rows = []
        mid_target = float(np.exp(np.mean(np.log(epsilons))))
        for condition in conditions:
            selected = [row for row in rows if row[0] == condition.label]
            log_eps = np.log([row[3] for row in selected])
            log_err = np.log([row[4] for row in selected])
            slope = float(np.polyfit(log_eps, log_err, 1)[0]) if len(selected) > 1 else math.nan
            deficit_mid = bounds.exponent_deficit(condition, mid_target)
            slope_rows.append((condition.label, slope, deficit_mid, 1.0 - deficit_mid))
            logger.info(f"rates {condition.label}: pendiente={slope:.3f}, 1-d(ε_mid)={1.0 - deficit_mid:.3f}")
        slope_columns = ("condition", "slope", "deficit_mid", "exponent_mid")
        paths.append(self.store.write_table(out_dir / "rates_slopes.csv", slope_columns, slope_rows))

        if self.plotter is not None:
            for condition in conditions:
                selected = [row for row in rows if row[0] == condition.label]
                eps_axis = np.array([row[3] for row in selected])
                curves = {
                    "error": np.array([row[4] for row in selected]),
                    "bound": np.array([row[6] for row in selected]),
                    "eps_power": np.array([row[8] for row in selected]),
                }
                stem = condition.kind.value
                svg = self.plotter.plot_curves(
                    out_dir / f"rates_{stem}.svg", eps_axis, curves, condition.label, log_scale=True
                )
                if svg is not None:
                    paths.append(svg)

        return ExperimentReport("rates", columns, rows, paths, {"slopes": slope_rows})
