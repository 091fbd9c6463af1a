"""Pydantic model for a parsed CLI invocation."""

from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

SUBCOMMANDS = (
    "moments", "cumulants", "identities", "diagrams",
    "ncpart", "density", "simulate", "verify",
)

# flags that must be strictly positive when present
_POSITIVE = ("n", "size", "trials", "points", "bins", "half_size")


class RunConfig(BaseModel):
    """Validated CLI configuration for one subcommand run."""

    command: str = Field(..., description="Subcommand name")
    output_format: str = Field("csv", description="csv or json")
    out: Optional[Path] = Field(None, description="Output file or directory")
    rho: Optional[float] = Field(None, ge=-1.0, le=1.0, description="Correlation parameter")
    seed: int = Field(0, ge=0, lt=2**64)
    options: Dict[str, Any] = Field(default_factory=dict, description="Remaining subcommand flags")

    @field_validator("command")
    @classmethod
    def validate_command(cls, v: str) -> str:
        """Validate command is one of allowed values."""
        if v not in SUBCOMMANDS:
            raise ValueError(f"command must be one of {SUBCOMMANDS}")
        return v

    @field_validator("output_format")
    @classmethod
    def validate_output_format(cls, v: str) -> str:
        """Validate output format is one of allowed values."""
        allowed = {"csv", "json"}
        if v not in allowed:
            raise ValueError(f"output_format must be one of {allowed}")
        return v

    @model_validator(mode="after")
    def validate_counts(self) -> "RunConfig":
        for key in _POSITIVE:
            value = self.options.get(key)
            if value is not None and value <= 0:
                raise ValueError(f"--{key.replace('_', '-')} must be positive, got {value}")
        for key in ("k", "kmax"):
            value = self.options.get(key)
            if value is not None and value < 0:
                raise ValueError(f"--{key} must be nonnegative, got {value}")
        return self

    def option(self, key: str, default: Any = None) -> Any:
        value = self.options.get(key)
        return default if value is None else value
