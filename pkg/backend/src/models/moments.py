"""Pydantic model for the U/V moment table."""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.polynomial import IntPolynomial


class MomentTable(BaseModel):
    """Exact U_k(ρ), V_k(ρ) for k = 0..kmax; moments are M_k = U_{2k}."""

    model_config = ConfigDict(frozen=True)

    u_polys: Tuple[IntPolynomial, ...] = Field(..., description="U_0..U_kmax")
    v_polys: Tuple[IntPolynomial, ...] = Field(..., description="V_0..V_kmax")
    kmax: int = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_shape(self) -> "MomentTable":
        """Check lengths and the initial conditions U_0 = V_0 = 1."""
        if len(self.u_polys) != self.kmax + 1 or len(self.v_polys) != self.kmax + 1:
            raise ValueError("u_polys and v_polys must hold kmax + 1 entries")
        one = IntPolynomial.one()
        if self.u_polys[0] != one or self.v_polys[0] != one:
            raise ValueError("U_0 and V_0 must equal 1")
        return self
