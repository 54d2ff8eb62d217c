"""
Tests de la configuration et du logger.
"""

import yaml
from loguru import logger

from src.config import Settings
from src.config.settings import DEFAULT_CONFIG
from src.utils.logger import COLOR_ENV_VAR, LoggerConfig, resolve_colorize


class TestSettings:

    def test_missing_file_uses_defaults(self, tmp_path):
        settings = Settings(config_dir=str(tmp_path))
        assert settings.config == DEFAULT_CONFIG
        assert settings.sweep_ns == [3125, 6250, 12500, 25000, 50000, 100000]
        assert settings.checker_config['unknown_membership'] == "warning"

    def test_partial_file_is_merged(self, tmp_path):
        (tmp_path / "config.yaml").write_text(yaml.safe_dump({
            'checker': {'acting_right_convention': True},
            'numeric': {'demos': {'unbounded': {'ns': [10, 20]}}},
        }), encoding="utf-8")
        settings = Settings(config_dir=str(tmp_path))
        assert settings.checker_config == {'acting_right_convention': True,
                                           'unknown_membership': "warning"}
        assert settings.get_demo_config("unbounded") == {'decay_q': 0.75, 'power_p': 1, 'ns': [10, 20]}
        assert settings.get_demo_config("hellinger")['power_p'] == 1
        assert DEFAULT_CONFIG['checker']['acting_right_convention'] is False

    def test_reload(self, tmp_path):
        settings = Settings(config_dir=str(tmp_path))
        (tmp_path / "config.yaml").write_text("cli:\n  seed: 7\n", encoding="utf-8")
        settings.reload()
        assert settings.cli_config['seed'] == 7

    def test_shipped_configuration(self, data_dir):
        settings = Settings(config_dir=str(data_dir.parent / "config"))
        assert settings.numeric_config['orthonormality_tolerance'] == 1e-10
        assert settings.get_demo_config("riesz")['max_dim'] == 8


class TestLoggerConfig:

    def teardown_method(self):
        logger.remove()

    def test_color_modes(self, monkeypatch):
        assert resolve_colorize("always") is True
        assert resolve_colorize("never") is False
        monkeypatch.setenv(COLOR_ENV_VAR, "never")
        assert resolve_colorize() is False

    def test_file_sink(self, tmp_path):
        log_file = tmp_path / "logs" / "repfree.log"
        LoggerConfig(level="INFO", log_file=str(log_file), color="never")
        logger.info("model loaded")
        logger.remove()
        assert "model loaded" in log_file.read_text(encoding="utf-8")

    def test_console_handler_replaced(self, mocker):
        add = mocker.spy(logger, "add")
        LoggerConfig(level="DEBUG", color="never")
        assert add.call_count == 1
        assert add.call_args.kwargs['level'] == "DEBUG"
