"""Environment-driven settings."""

import logging
import os
from functools import lru_cache

from dotenv import find_dotenv, load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from core.errors import ConfigurationError

logger = logging.getLogger(__name__)

_ENV_FIELDS = {
    "threads": "ELLIPTIC_THREADS",
    "output_dir": "ELLIPTIC_OUTPUT_DIR",
    "log_level": "ELLIPTIC_LOG_LEVEL",
    "eigensolver": "ELLIPTIC_EIGENSOLVER",
    "density_eps": "ELLIPTIC_DENSITY_EPS",
}


class Settings(BaseModel):
    """Runtime settings read from the environment."""

    threads: int = Field(0, ge=0, description="Worker cap for trials, 0 = auto")
    output_dir: str = Field("output", min_length=1, description="Default output directory")
    log_level: str = Field("INFO", description="Root logging level")
    eigensolver: str = Field("lapack", description="Eigensolver: lapack or jacobi")
    density_eps: float = Field(1e-6, gt=0.0, description="Stieltjes inversion offset")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level is a standard logging level name."""
        allowed = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        v = v.upper()
        if v not in allowed:
            raise ValueError(f"log_level must be one of {allowed}")
        return v

    @field_validator("eigensolver")
    @classmethod
    def validate_eigensolver(cls, v: str) -> str:
        """Validate eigensolver is one of allowed values."""
        allowed = {"lapack", "jacobi"}
        v = v.lower()
        if v not in allowed:
            raise ValueError(f"eigensolver must be one of {allowed}")
        return v

    def worker_count(self) -> int:
        """Resolve the worker cap, mapping 0 to the CPU count."""
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1


def load_settings() -> Settings:
    """Build settings from the process environment (and a .env file if present).

    Returns:
        Validated Settings.

    Raises:
        ConfigurationError: If any variable fails validation.
    """
    load_dotenv(find_dotenv(usecwd=True))
    raw = {}
    for field_name, env_name in _ENV_FIELDS.items():
        value = os.getenv(env_name)
        if value is not None and value.strip() != "":
            raw[field_name] = value.strip()
    try:
        settings = Settings(**raw)
    except ValidationError as e:
        bad = ", ".join(_ENV_FIELDS[str(err["loc"][0])] for err in e.errors())
        raise ConfigurationError(f"invalid environment setting(s) {bad}: {e}") from e
    logger.debug(f"Loaded settings: {settings.model_dump()}")
    return settings


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Cached settings accessor."""
    return load_settings()
