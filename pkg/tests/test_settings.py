"""Tests for environment-driven settings."""

import pytest

from core.errors import ConfigurationError
from core.settings import get_settings, load_settings


@pytest.mark.unit
class TestSettings:
    def test_defaults(self):
        settings = load_settings()
        assert settings.threads == 0
        assert settings.output_dir == "output"
        assert settings.log_level == "INFO"
        assert settings.eigensolver == "lapack"
        assert settings.density_eps == pytest.approx(1e-6)
        assert settings.worker_count() >= 1

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("ELLIPTIC_THREADS", "3")
        monkeypatch.setenv("ELLIPTIC_LOG_LEVEL", "debug")
        monkeypatch.setenv("ELLIPTIC_EIGENSOLVER", "JACOBI")
        settings = load_settings()
        assert settings.worker_count() == 3
        assert settings.log_level == "DEBUG"
        assert settings.eigensolver == "jacobi"

    def test_dotenv_file(self, tmp_path):
        (tmp_path / ".env").write_text("ELLIPTIC_DENSITY_EPS=1e-8\n")
        assert load_settings().density_eps == pytest.approx(1e-8)

    @pytest.mark.parametrize(
        "name,value",
        [("ELLIPTIC_THREADS", "-2"), ("ELLIPTIC_EIGENSOLVER", "qr"), ("ELLIPTIC_DENSITY_EPS", "0")],
    )
    def test_invalid_values(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigurationError, match=name):
            load_settings()

    def test_cached_accessor(self):
        assert get_settings() is get_settings()
