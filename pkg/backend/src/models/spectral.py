"""Pydantic models for Cauchy-transform evaluations and density curves."""

import logging
from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

logger = logging.getLogger(__name__)

# numpy >= 2.0 renamed trapz
_trapezoid = getattr(np, "trapezoid", None) or np.trapz


class CauchyEvaluation(BaseModel):
    """Branch-tracked value of the Cauchy transform of G at one point."""

    z: complex = Field(..., description="Evaluation point, Im(z) > 0")
    s: complex = Field(..., description="Physical root s_G(z)")
    residual: float = Field(..., ge=0.0, description="Relative defect of the squared equation at s")
    branch_id: int = Field(..., ge=0, description="Candidate-root index chosen at the target")
    rho: float = Field(..., ge=-1.0, le=1.0)


class CauchyBatch(BaseModel):
    """Vectorized continuation result; failed points are masked by ``ok``."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    z: np.ndarray
    s: np.ndarray
    residual: np.ndarray
    branch_id: np.ndarray
    ok: np.ndarray = Field(..., description="False where the continuation failed or the residual is too large")
    rho: float

    def evaluation(self, i: int) -> CauchyEvaluation:
        return CauchyEvaluation(
            z=complex(self.z[i]),
            s=complex(self.s[i]),
            residual=float(self.residual[i]),
            branch_id=int(self.branch_id[i]),
            rho=self.rho,
        )


class DensityCurve(BaseModel):
    """Density sampled on a grid, for F (squared singular values) or G (symmetrized)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    xs: np.ndarray
    values: np.ndarray = Field(..., description="Density values, NaN where the solver failed")
    dist: str = Field(..., description="F or G")
    eps: float = Field(..., gt=0.0, description="Imaginary offset of the inversion")
    rho: float = Field(..., ge=-1.0, le=1.0)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("dist")
    @classmethod
    def validate_dist(cls, v: str) -> str:
        """Validate dist is one of allowed values."""
        allowed = {"F", "G"}
        v = v.upper()
        if v not in allowed:
            raise ValueError(f"dist must be one of {allowed}")
        return v

    @property
    def missing(self) -> int:
        return int(np.count_nonzero(np.isnan(self.values)))

    def _inner_tail(self, power: int) -> float:
        """∫_0^{x0} x^power·d(x) dx under a power-law fit d ≈ C·x^(-α) on the first two points."""
        x0, x1 = float(self.xs[0]), float(self.xs[1])
        v0, v1 = float(self.values[0]), float(self.values[1])
        if x0 <= 0.0 or v0 <= 0.0 or v1 <= 0.0:
            return 0.0
        alpha = -np.log(v1 / v0) / np.log(x1 / x0)
        if alpha >= power + 1:
            logger.warning(f"Non-integrable power law at the inner cutoff (alpha={alpha:.3f})")
            return 0.0
        return v0 * x0 ** (power + 1) / (power + 1 - alpha)

    def moment(self, power: int = 0, extrapolate: bool = True) -> float:
        """Trapezoidal ∫ x^power·d(x) dx over the grid.

        For F curves whose grid starts above 0 the mass below the first point
        is added by power-law extrapolation (unless ``extrapolate`` is False)
        and flagged in ``metadata``.
        """
        if self.missing:
            return float("nan")
        integrand = self.values * self.xs ** power
        total = float(_trapezoid(integrand, self.xs))
        if extrapolate and self.dist == "F" and len(self.xs) >= 2 and self.xs[0] > 0.0:
            total += self._inner_tail(power)
            self.metadata["inner_mass_extrapolated"] = True
        return total

    def mass(self, extrapolate: bool = True) -> float:
        return self.moment(0, extrapolate)
