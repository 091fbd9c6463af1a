"""Shared fixtures for the test suite."""

import sys
from pathlib import Path

import numpy as np
import pytest

backend_src = Path(__file__).parent.parent / "backend" / "src"
if str(backend_src) not in sys.path:
    sys.path.insert(0, str(backend_src))

from core.momentrec import build_uv  # noqa: E402
from core.settings import get_settings  # noqa: E402

ELLIPTIC_ENV = (
    "ELLIPTIC_THREADS",
    "ELLIPTIC_OUTPUT_DIR",
    "ELLIPTIC_LOG_LEVEL",
    "ELLIPTIC_EIGENSOLVER",
    "ELLIPTIC_DENSITY_EPS",
)


@pytest.fixture(scope="session")
def moment_table():
    """U/V table deep enough for M_0..M_12."""
    return build_uv(24)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Clear ELLIPTIC_* variables and run from a scratch directory."""
    for name in ELLIPTIC_ENV:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "out"
    path.mkdir()
    return path
