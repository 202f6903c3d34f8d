"""
CLI de realce de resolución espectral.

Verbos: synth, enhance, experiment, bound, fit. Las opciones globales
(--config, --out, --seed, --log-level, --quiet, --svg) se aceptan antes o
después del verbo.

Códigos de salida: 0 éxito, 2 configuración/parámetros, 3 fallo numérico.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from src.adapters.cli.exception_handlers import EXIT_OK, handle_exception
from src.adapters.config.experiment_config import ExperimentConfig
from src.adapters.config.settings import Settings
from src.adapters.dependencies import (
    get_experiment_service,
    get_pipeline_service,
    get_settings,
)
from src.application.services.experiment_service import ExperimentName
from src.domain.exceptions import ConfigurationError
from src.domain.models import KernelFamily, KernelSpec, RegularizationMethod, SourceCondition
from src.domain.services.bounds import infer_source_condition

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _common_options() -> argparse.ArgumentParser:
    # SUPPRESS: el valor dado antes del verbo no se pisa con el default del subcomando
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS,
                        help="Archivo JSON de configuración del experimento")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS,
                        help="Directorio de salida (default: outputs de la config)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="Semilla del ruido (default: la de la config)")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=argparse.SUPPRESS,
                        help="Nivel de logging (default: SPECENH_LOG_LEVEL o INFO)")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="Sólo avisos y errores")
    common.add_argument("--svg", action="store_true", default=argparse.SUPPRESS,
                        help="Guardar además un SVG estático de las curvas")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Construye el parser con todos los verbos."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="spectral-enhance",
        description="Realce de resolución espectral por deconvolución regularizada",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub.add_parser("synth", parents=[common], help="Sintetizar truth.csv, spectrum.csv y noisy.csv")

    enhance = sub.add_parser("enhance", parents=[common], help="Realzar el espectro sintetizado")
    enhance.add_argument("--kappa", type=float, help="Anchura κ del núcleo de realce (0 = sin realce)")
    enhance.add_argument("--method", choices=[method.value for method in RegularizationMethod],
                         help="Método de regularización")
    alpha_group = enhance.add_mutually_exclusive_group()
    alpha_group.add_argument("--alpha", type=float, help="Parámetro de regularización fijo")
    alpha_group.add_argument("--discrepancy", action="store_true",
                             help="Elegir α por el principio de discrepancia")

    experiment = sub.add_parser("experiment", parents=[common], help="Reproducir un experimento")
    experiment.add_argument("name", choices=[name.value for name in ExperimentName])

    bound = sub.add_parser("bound", parents=[common], help="Tabla epsilon,deficit,exponent,bound")
    bound.add_argument("--condition", required=True,
                       help='Condición de fuente en JSON, p. ej. \'{"kind": "LorentzOnGaussian", "kappa": 0.7}\'')
    bound.add_argument("--eps", type=float, nargs="*", default=[], help="Niveles de error ε")
    bound.add_argument("--c-plus-gpsi", type=float, default=1.0, help="C + ‖g‖_ψ (default: 1)")

    fit = sub.add_parser("fit", parents=[common], help="Ajuste de líneas por proyección variable")
    fit.add_argument("--data", type=Path, help="CSV del espectro (columnas x, value)")
    fit.add_argument("--kernel", default='{"family": "GaussianUnit"}', help="Forma de línea en JSON")
    fit.add_argument("--init", type=float, nargs="+", help="Posiciones iniciales")
    fit.add_argument("--max-iter", type=int, help="Máximo de iteraciones")
    fit.add_argument("--gtol", type=float, help="Tolerancia del gradiente")
    fit.add_argument("--pure-gauss-newton", action="store_true", help="Sin búsqueda lineal")
    fit.add_argument("--batch", type=Path, help="Arreglo JSON de problemas a ajustar en paralelo")
    return parser


def configure_logging(level: str, quiet: bool = False) -> None:
    """Configura el logging raíz una sola vez."""
    effective = "WARNING" if quiet else level.upper()
    logging.basicConfig(level=effective, format=LOG_FORMAT)
    logging.getLogger().setLevel(effective)


def _parse_json(text: str, field: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(field, f"JSON inválido: {exc.msg}") from exc


def load_config(options: dict[str, Any], app_settings: Settings) -> ExperimentConfig:
    """Config desde --config o desde Settings, con --seed/--out aplicados."""
    if "config" in options:
        config = ExperimentConfig.from_file(options["config"])
    else:
        config = ExperimentConfig.from_settings(app_settings)
    return config.with_overrides(
        seed=options.get("seed"),
        outputs=str(options["out"]) if "out" in options else None,
    )


def cmd_synth(args: argparse.Namespace, config: ExperimentConfig, app_settings: Settings) -> int:
    paths = get_pipeline_service(app_settings).run_synth(config, Path(config.outputs))
    print(f"✅ synth: {', '.join(path.name for path in paths)}")
    return EXIT_OK


def _enhancement_overrides(args: argparse.Namespace, config: ExperimentConfig) -> ExperimentConfig:
    enhancement = config.enhancement.model_dump(mode="json")
    reg = config.reg.model_dump(mode="json")
    if args.kappa is not None:
        if args.kappa == 0:
            enhancement = KernelSpec.identity().to_dict()
            reg["alpha"] = 0.0
        elif KernelFamily(enhancement["family"]) in (KernelFamily.GAUSSIAN_WIDTH, KernelFamily.LORENTZ_WIDTH):
            enhancement["kappa"] = args.kappa
        else:
            enhancement = KernelSpec.lorentz_width(args.kappa).to_dict()
    if args.method is not None:
        reg["method"] = args.method
    if args.alpha is not None:
        reg["alpha"] = args.alpha
    if args.discrepancy:
        reg["alpha"] = None

    if reg["method"] == RegularizationMethod.SOURCE_PENALTY.value:
        kernel = KernelSpec.from_dict(enhancement)
        current = SourceCondition.from_dict(reg["condition"]) if reg.get("condition") else None
        if current is None or not current.matches(kernel):
            inferred = infer_source_condition(config.broadening.to_domain(), kernel)
            if inferred is None:
                raise ConfigurationError(
                    "reg.condition", f"no hay condición de fuente para {kernel.label}"
                )
            reg["condition"] = inferred.to_dict()
    elif reg.get("condition"):
        kernel = KernelSpec.from_dict(enhancement)
        if not SourceCondition.from_dict(reg["condition"]).matches(kernel):
            reg["condition"] = None
    return config.with_overrides(enhancement=enhancement, reg=reg)


def cmd_enhance(args: argparse.Namespace, config: ExperimentConfig, app_settings: Settings) -> int:
    config = _enhancement_overrides(args, config)
    report = get_pipeline_service(app_settings).run_enhance(config, Path(config.outputs))
    ratio = report.get("fwhm_ratio")
    ratio_text = f"{ratio:.3f}" if ratio is not None else "n/d"
    print(f"✅ enhance: α={report['alpha']:.3g}, FWHM ratio={ratio_text}")
    return EXIT_OK


def _experiment_settings(config: ExperimentConfig, app_settings: Settings) -> Settings:
    return app_settings.model_copy(
        update={"grid_n": config.grid.n, "grid_length": config.grid.length, "seed": config.seed}
    )


def cmd_experiment(args: argparse.Namespace, config: ExperimentConfig, app_settings: Settings) -> int:
    service = get_experiment_service(
        _experiment_settings(config, app_settings), with_svg=getattr(args, "svg", False)
    )
    report = service.run(args.name, Path(config.outputs), seed=config.seed)
    print(f"✅ experiment {report.name}: {', '.join(path.name for path in report.paths)}")
    return EXIT_OK


def cmd_bound(args: argparse.Namespace, config: ExperimentConfig, app_settings: Settings) -> int:
    payload = _parse_json(args.condition, "--condition")
    if not isinstance(payload, dict):
        raise ConfigurationError("--condition", "se esperaba un objeto JSON")
    condition = SourceCondition.from_dict(payload)
    path = get_pipeline_service(app_settings).run_bound(
        condition, args.eps, args.c_plus_gpsi, Path(config.outputs)
    )
    print(f"✅ bound: {path}")
    return EXIT_OK


def cmd_fit(args: argparse.Namespace, config: ExperimentConfig, app_settings: Settings) -> int:
    service = get_pipeline_service(app_settings)
    out_dir = Path(config.outputs)
    if args.batch is not None:
        results = service.run_fit_batch(args.batch, out_dir)
        print(f"✅ fit: {len(results)} problemas")
        return EXIT_OK
    if args.data is None or not args.init:
        raise ConfigurationError("fit", "se requieren --data y --init (o --batch)")
    payload = _parse_json(args.kernel, "--kernel")
    if not isinstance(payload, dict):
        raise ConfigurationError("--kernel", "se esperaba un objeto JSON")
    result = service.run_fit(
        args.data,
        KernelSpec.from_dict(payload),
        args.init,
        out_dir,
        max_iter=args.max_iter,
        gtol=args.gtol,
        pure_gauss_newton=args.pure_gauss_newton,
    )
    print(f"✅ fit: residuo={result.residual_norm:.3g}, convergió={result.converged}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace, ExperimentConfig, Settings], int]] = {
    "synth": cmd_synth,
    "enhance": cmd_enhance,
    "experiment": cmd_experiment,
    "bound": cmd_bound,
    "fit": cmd_fit,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Punto de entrada; devuelve el código de salida."""
    parser = build_parser()
    args = parser.parse_args(argv)
    options = vars(args)
    app_settings = get_settings()
    configure_logging(options.get("log_level", app_settings.log_level), options.get("quiet", False))
    try:
        app_settings.log_startup_config()
        config = load_config(options, app_settings)
        return COMMANDS[args.command](args, config, app_settings)
    except Exception as exc:
        return handle_exception(exc)


def run() -> None:
    """Entrada del script de consola."""
    sys.exit(main())
