"""
Tests de configuración (Settings, ExperimentConfig) y del almacenamiento CSV/JSON.
"""
import json
import math

import numpy as np
import pytest

from src.adapters.config.experiment_config import ExperimentConfig
from src.adapters.config.settings import Settings
from src.adapters.storage.csv_store import CsvSpectrumStore
from src.domain.exceptions import ConfigurationError, SpectrumIOError
from src.domain.models import (
    KernelFamily,
    LineSpectrum,
    RegularizationMethod,
    SourceKind,
)
from src.domain.services import grid as grid_service


@pytest.fixture
def store():
    return CsvSpectrumStore()


@pytest.mark.unit
class TestSettings:
    """Tests de Settings."""

    def test_defaults(self):
        """Test de los valores por defecto."""
        app_settings = Settings(max_workers=4)
        assert app_settings.grid_n == 4096
        assert app_settings.grid_length == 64.0
        assert app_settings.discrepancy_tau == 1.1
        assert app_settings.rates_epsilons == [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
        assert app_settings.psi_outer_share == 1e-2
        assert app_settings.validate_consistency() == []

    def test_env_prefix(self, monkeypatch):
        """Test que las variables SPECENH_ se leen del entorno."""
        monkeypatch.setenv("SPECENH_GRID_N", "1024")
        monkeypatch.setenv("SPECENH_FIT_MAX_ITER", "7")
        app_settings = Settings()
        assert app_settings.grid_n == 1024
        assert app_settings.fit_max_iter == 7

    def test_consistency_issues(self):
        """Test que validate_consistency reporta valores incoherentes."""
        issues = Settings(grid_n=1000, discrepancy_tau=0.9, alpha_min=1.0, alpha_max=0.1).validate_consistency()
        assert len(issues) == 3
        assert any("grid_n" in issue for issue in issues)

    def test_log_startup_config(self, caplog):
        """Test que el arranque loguea los problemas de configuración."""
        with caplog.at_level("ERROR"):
            Settings(max_workers=0).log_startup_config()
        assert "max_workers" in caplog.text


@pytest.mark.unit
class TestExperimentConfig:
    """Tests de ExperimentConfig."""

    def test_defaults(self):
        """Test de la configuración por defecto."""
        config = ExperimentConfig()
        assert config.broadening.family is KernelFamily.GAUSSIAN_UNIT
        assert config.enhancement.to_domain().kappa == 2.0
        assert config.noise_level == 0.05
        assert config.uses_discrepancy
        assert len(config.line_spectrum()) == 1

    def test_from_json(self):
        """Test de lectura desde JSON con condición de fuente."""
        config = ExperimentConfig.from_json(
            json.dumps(
                {
                    "lines": [{"location": -1.0, "intensity": 1.0}, {"location": 1.0, "intensity": 0.5}],
                    "enhancement": {"family": "LorentzWidth", "kappa": 1.0},
                    "reg": {"method": "source", "alpha": 0.01, "condition": {"kind": "LorentzOnGaussian", "kappa": 1.0}},
                }
            )
        )
        reg = config.reg.to_domain()
        assert reg.method is RegularizationMethod.SOURCE_PENALTY
        assert reg.condition.kind is SourceKind.LORENTZ_ON_GAUSSIAN
        assert not config.uses_discrepancy

    @pytest.mark.parametrize(
        "payload",
        [
            {"grid": {"n": 1000}},
            {"lines": []},
            {"lines": [{"location": 50.0, "intensity": 1.0}]},
            {"enhancement": {"family": "LorentzWidth", "kappa": -1.0}},
            {"reg": {"method": "source", "alpha": 0.1}},
            {"reg": {"method": "source", "alpha": 0.1, "condition": {"kind": "LorentzOnGaussian", "kappa": 1.0}}},
            {"noise_level": -0.1},
            {"unknown_field": 1},
        ],
    )
    def test_invalid(self, payload):
        """Test que los errores de validación se reportan como ConfigurationError."""
        with pytest.raises(ConfigurationError):
            ExperimentConfig.parse(payload)

    def test_malformed_json(self):
        """Test de JSON mal formado."""
        with pytest.raises(ConfigurationError):
            ExperimentConfig.from_json("{not json")

    def test_missing_file(self, tmp_path):
        """Test de archivo inexistente."""
        with pytest.raises(ConfigurationError):
            ExperimentConfig.from_file(tmp_path / "missing.json")

    def test_from_settings_and_overrides(self, test_settings):
        """Test que la configuración base toma malla, semilla y salida de Settings."""
        config = ExperimentConfig.from_settings(test_settings)
        assert config.seed == test_settings.seed
        assert config.outputs == test_settings.output_dir
        updated = config.with_overrides(seed=7, noise_level=None)
        assert updated.seed == 7
        assert updated.noise_level == config.noise_level

    def test_json_roundtrip(self, tmp_path):
        """Test que to_json y from_file son inversas."""
        config = ExperimentConfig.parse({"noise_level": 0.0, "seed": 3})
        path = tmp_path / "config.json"
        path.write_text(config.to_json(), encoding="utf-8")
        assert ExperimentConfig.from_file(path) == config


@pytest.mark.integration
class TestCsvSpectrumStore:
    """Tests del almacenamiento en archivos."""

    def test_spectrum_roundtrip_is_exact(self, store, tmp_path, unit_gaussian):
        """Test que la relectura de un espectro es exacta."""
        path = store.write_spectrum(tmp_path / "g.csv", unit_gaussian)
        loaded = store.read_spectrum(path)
        assert loaded.grid == unit_gaussian.grid
        np.testing.assert_array_equal(loaded.values, unit_gaussian.values)

    def test_csv_format(self, store, tmp_path, unit_gaussian):
        """Test de cabecera, fin de línea LF y determinismo byte a byte."""
        first = store.write_spectrum(tmp_path / "a.csv", unit_gaussian).read_bytes()
        second = store.write_spectrum(tmp_path / "b.csv", unit_gaussian).read_bytes()
        assert first == second
        assert first.startswith(b"x,value\n")
        assert b"\r\n" not in first

    def test_lines_roundtrip(self, store, tmp_path):
        """Test de ida y vuelta de un espectro de líneas."""
        lines = LineSpectrum.from_pairs([(-1.5, 0.25), (2.0, 1.0)])
        loaded = store.read_lines(store.write_lines(tmp_path / "lines.csv", lines))
        assert loaded == lines

    def test_header_only_table(self, store, tmp_path):
        """Test que una tabla vacía escribe sólo la cabecera."""
        path = store.write_table(tmp_path / "empty.csv", ["epsilon", "deficit"], [])
        assert path.read_text(encoding="utf-8") == "epsilon,deficit\n"

    def test_missing_file(self, store, tmp_path):
        """Test que un archivo inexistente es un error de E/S."""
        with pytest.raises(SpectrumIOError):
            store.read_spectrum(tmp_path / "missing.csv")

    def test_missing_columns(self, store, tmp_path):
        """Test que faltar una columna es un error de E/S."""
        path = tmp_path / "bad.csv"
        path.write_text("x,other\n0,1\n1,2\n", encoding="utf-8")
        with pytest.raises(SpectrumIOError):
            store.read_spectrum(path)

    def test_non_uniform_grid(self, store, tmp_path):
        """Test que una columna x que no es la malla periódica se rechaza."""
        path = tmp_path / "bad_grid.csv"
        rows = "".join(f"{x},{0.0}\n" for x in np.linspace(0.0, 1.0, 8) ** 2)
        path.write_text("x,value\n" + rows, encoding="utf-8")
        with pytest.raises(SpectrumIOError):
            store.read_spectrum(path)

    def test_json_non_finite_values(self, store, tmp_path):
        """Test que inf y NaN se escriben como null."""
        path = store.write_json(tmp_path / "report.json", {"psi_norm": math.inf, "alpha": np.float64(0.5)})
        data = store.read_json(path)
        assert data == {"psi_norm": None, "alpha": 0.5}

    def test_reads_noisy_data(self, store, tmp_path, unit_gaussian):
        """Test que el espectro ruidoso escrito se relee sin pérdida."""
        noisy = grid_service.add_noise(unit_gaussian, 0.05, seed=1)
        loaded = store.read_spectrum(store.write_spectrum(tmp_path / "noisy.csv", noisy))
        np.testing.assert_array_equal(loaded.values, noisy.values)
