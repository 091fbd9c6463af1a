"""Pydantic models for verification reports."""

from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.polynomial import IntPolynomial


class IdentityFailure(BaseModel):
    """One failed polynomial identity."""

    identity_id: str = Field(..., description="Identity name, e.g. q_convolution or palindromy")
    n: int = Field(..., ge=0, description="Index at which the identity failed")
    difference: IntPolynomial = Field(..., description="Left-hand side minus right-hand side")


class IdentityReport(BaseModel):
    """Outcome of the Narayana identity suite."""

    n_max: int = Field(..., ge=1)
    checked: int = Field(..., ge=0, description="Number of identity instances evaluated")
    failures: List[IdentityFailure] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


class TraceComparison(BaseModel):
    """Exact finite-N trace against the three-bracket formula."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int = Field(..., ge=1, description="Matrix size N")
    rho: Fraction = Field(..., description="Correlation, as an exact rational")
    diag_variance: str = Field(..., description="Diagonal convention used by the exact value")
    exact: Fraction = Field(..., description="Brute-force (1/N) E Tr W")
    formula: Fraction = Field(..., description="Three-bracket formula value")

    @property
    def agrees(self) -> bool:
        return self.exact == self.formula

    @property
    def difference(self) -> Fraction:
        return self.exact - self.formula


class SeriesMomentRecord(BaseModel):
    """One moment recovered from the Cauchy transform."""

    m: int = Field(..., ge=0, description="Moment order in the symmetrized variable")
    estimate: float
    expected: float
    error: float = Field(..., ge=0.0)
    kind: str = Field(..., description="relative (even m) or absolute (odd m)")
    passed: bool

    @field_validator("kind")
    @classmethod
    def validate_kind(cls, v: str) -> str:
        """Validate kind is one of allowed values."""
        allowed = {"relative", "absolute"}
        if v not in allowed:
            raise ValueError(f"kind must be one of {allowed}")
        return v


class SeriesMomentReport(BaseModel):
    rho: float
    kmax: int
    radius: float
    records: List[SeriesMomentRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)


class CheckResult(BaseModel):
    """Result row of the verification suite."""

    name: str = Field(..., min_length=1)
    status: str = Field(..., description="pass, fail or error")
    seconds: float = Field(..., ge=0.0)
    detail: Optional[str] = Field(None, description="Failure or error description")

    @field_validator("status")
    @classmethod
    def validate_status(cls, v: str) -> str:
        """Validate status is one of allowed values."""
        allowed = {"pass", "fail", "error"}
        if v not in allowed:
            raise ValueError(f"status must be one of {allowed}")
        return v
