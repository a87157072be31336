"""Tests for TOML configuration loading and saving."""

from __future__ import annotations

from pathlib import Path

import pytest

from metric_graph_ops.config import (
    CONFIG_ENV_VAR,
    AppConfig,
    config_path,
    config_to_toml,
    load_config,
    reset_config,
    save_config,
)


class TestConfigPath:
    """Tests for config file resolution."""

    def test_explicit_path_wins(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(CONFIG_ENV_VAR, str(tmp_path / "env.toml"))

        assert config_path(tmp_path / "explicit.toml") == tmp_path / "explicit.toml"

    def test_environment_variable(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(CONFIG_ENV_VAR, str(tmp_path / "env.toml"))

        assert config_path() == tmp_path / "env.toml"


class TestLoadConfig:
    """Tests for load_config."""

    def test_missing_file_gives_defaults(self, tmp_path: Path) -> None:
        config = load_config(tmp_path / "absent.toml")

        assert config == AppConfig()
        assert config.numerics.grid_size == 256
        assert config.numerics.seed == 42
        assert config.tolerances.shift_bound == 10.0

    def test_save_then_load(self, tmp_path: Path) -> None:
        config = AppConfig()
        config.numerics.bands = 5
        config.tolerances.unitarity = 1e-4
        config.logging.level = "DEBUG"
        path = save_config(config, tmp_path / "nested" / "config.toml")

        assert load_config(path) == config

    def test_partial_file_keeps_other_defaults(self, tmp_path: Path) -> None:
        path = tmp_path / "config.toml"
        path.write_text("[numerics]\ngrid_size = 128\n")
        config = load_config(path)

        assert config.numerics.grid_size == 128
        assert config.numerics.tau_max == 2.0
        assert config.output.wave_frames_per_unit == 16

    def test_unknown_keys_ignored(self, tmp_path: Path) -> None:
        path = tmp_path / "config.toml"
        path.write_text('colour = "blue"\n[numerics]\nseed = 7\nshape = "round"\n')

        assert load_config(path).numerics.seed == 7

    def test_corrupt_file_falls_back(self, tmp_path: Path) -> None:
        """Should return defaults rather than fail on a broken file."""
        path = tmp_path / "config.toml"
        path.write_text("[numerics\ngrid_size = ")

        assert load_config(path) == AppConfig()

    def test_environment_variable_used(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        path = tmp_path / "env.toml"
        path.write_text("[output]\nwave_frames_per_unit = 4\n")
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))

        assert load_config().output.wave_frames_per_unit == 4


class TestResetConfig:
    """Tests for reset_config and config_to_toml."""

    def test_reset_writes_defaults(self, tmp_path: Path) -> None:
        path = tmp_path / "config.toml"
        path.write_text("[numerics]\nbands = 9\n")

        assert reset_config(path) == AppConfig()
        assert load_config(path).numerics.bands == 3

    def test_toml_sections(self) -> None:
        text = config_to_toml(AppConfig())

        for section in ("[numerics]", "[tolerances]", "[output]", "[logging]"):
            assert section in text
        assert "grid_size = 256" in text
