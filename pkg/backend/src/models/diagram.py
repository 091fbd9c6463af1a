"""Pydantic models for colored chord diagrams."""

from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ColoringRule(str, Enum):
    """Black/white vertex coloring of a chord diagram."""

    U = "u"
    V = "v"
    U_INVERTED = "u_inverted"
    V_INVERTED = "v_inverted"

    def is_black(self, j: int) -> bool:
        """Color of vertex j (1-based)."""
        if self in (ColoringRule.U, ColoringRule.U_INVERTED):
            black = j % 4 in (1, 2)
        else:
            black = j % 4 in (0, 1)
        if self in (ColoringRule.U_INVERTED, ColoringRule.V_INVERTED):
            return not black
        return black

    @property
    def inverted(self) -> "ColoringRule":
        return {
            ColoringRule.U: ColoringRule.U_INVERTED,
            ColoringRule.V: ColoringRule.V_INVERTED,
            ColoringRule.U_INVERTED: ColoringRule.U,
            ColoringRule.V_INVERTED: ColoringRule.V,
        }[self]


class ChordDiagram(BaseModel):
    """Perfect matching on vertices 1..2m, pairs stored as (left, right)."""

    model_config = ConfigDict(frozen=True)

    pairs: Tuple[Tuple[int, int], ...] = Field(..., description="Chords, sorted by left endpoint")
    m: int = Field(..., ge=0, description="Number of chords")

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data):
        """Orient each pair left-to-right and sort by left endpoint."""
        if isinstance(data, dict) and "pairs" in data:
            pairs = [tuple(sorted((int(a), int(b)))) for a, b in data["pairs"]]
            data = dict(data, pairs=tuple(sorted(pairs)))
        return data

    @model_validator(mode="after")
    def validate_matching(self) -> "ChordDiagram":
        """Every vertex 1..2m appears in exactly one pair."""
        seen = sorted(v for pair in self.pairs for v in pair)
        if seen != list(range(1, 2 * self.m + 1)):
            raise ValueError(f"pairs do not form a perfect matching on 1..{2 * self.m}")
        return self

    def is_planar(self) -> bool:
        """No two chords (a,b), (c,d) with a < c < b < d."""
        for i, (a, b) in enumerate(self.pairs):
            for c, d in self.pairs[i + 1:]:
                if a < c < b < d:
                    return False
        return True
