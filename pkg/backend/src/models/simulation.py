"""Pydantic models for Monte Carlo samples and summary statistics."""

from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

EIGENVALUE_FLOOR = -1e-8


def _check_diag_variance(v: str) -> str:
    allowed = {"unit", "one_plus_rho"}
    if v not in allowed:
        raise ValueError(f"diag_variance must be one of {allowed}")
    return v


class EllipticMatrixSample(BaseModel):
    """One realization of a real Gaussian elliptic matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    entries: np.ndarray = Field(..., description="N×N real matrix")
    n: int = Field(..., ge=1)
    rho: float = Field(..., ge=-1.0, le=1.0)
    seed: int = Field(..., ge=0, lt=2**64)
    trial: int = Field(0, ge=0)
    diag_variance: str = Field("unit")

    @field_validator("diag_variance")
    @classmethod
    def validate_diag_variance(cls, v: str) -> str:
        """Validate diag_variance is one of allowed values."""
        return _check_diag_variance(v)


class SpectrumSample(BaseModel):
    """Sorted eigenvalues of W = N⁻²·X²·(Xᵀ)² for one sample."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    eigenvalues: np.ndarray
    n: int = Field(..., ge=1)
    rho: float = Field(..., ge=-1.0, le=1.0)
    seed: int = Field(..., ge=0, lt=2**64)
    trial: int = Field(0, ge=0)
    diag_variance: str = Field("unit")

    @field_validator("eigenvalues")
    @classmethod
    def validate_eigenvalues(cls, v: np.ndarray) -> np.ndarray:
        """W is positive semidefinite up to roundoff."""
        if v.size and float(np.min(v)) < EIGENVALUE_FLOOR:
            raise ValueError(f"eigenvalue {float(np.min(v)):.3e} below {EIGENVALUE_FLOOR}")
        return v

    @field_validator("diag_variance")
    @classmethod
    def validate_diag_variance(cls, v: str) -> str:
        """Validate diag_variance is one of allowed values."""
        return _check_diag_variance(v)


class MomentEstimate(BaseModel):
    k: int = Field(..., ge=0)
    mean: float
    stderr: float = Field(..., ge=0.0)


class HistogramResult(BaseModel):
    """Histogram of pooled eigenvalues, heights normalized by total count × width."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    edges: np.ndarray = Field(..., description="bins + 1 increasing bin edges")
    counts: np.ndarray
    heights: np.ndarray
    total: int = Field(..., ge=0, description="Number of pooled eigenvalues, in or out of range")

    @property
    def bins(self) -> int:
        return len(self.counts)

    def mass_in_range(self) -> float:
        return float(np.sum(self.heights * np.diff(self.edges)))


class TrialSummary(BaseModel):
    """Per-run outcome of the concurrent trial executor."""

    trials: int = Field(..., ge=0)
    completed: int = Field(..., ge=0)
    failed: int = Field(..., ge=0)
    workers: int = Field(..., ge=1)
    seconds: float = Field(0.0, ge=0.0, description="Summed per-trial wall time")
    errors: List[str] = Field(default_factory=list)
