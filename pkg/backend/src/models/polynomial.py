"""Exact integer-coefficient polynomial in a single variable."""

from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

Scalar = Union[int, Fraction, float, complex]


def _trim(values: List[int]) -> Tuple[int, ...]:
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


class IntPolynomial(BaseModel):
    """Dense polynomial with arbitrary-precision integer coefficients.

    ``coeffs[i]`` is the coefficient of x^i. The zero polynomial stores an
    empty tuple; every other polynomial has a nonzero last coefficient.
    """

    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[int, ...] = Field(
        default=(), description="Coefficient of x^i at index i, trailing zeros trimmed"
    )

    @field_validator("coeffs", mode="before")
    @classmethod
    def normalize_coeffs(cls, v: Any) -> Tuple[int, ...]:
        """Convert to exact integers and trim trailing zeros."""
        values = []
        for c in v:
            if isinstance(c, bool):
                raise ValueError("coefficients must be integers, not booleans")
            if isinstance(c, float):
                if not c.is_integer():
                    raise ValueError(f"coefficient {c} is not integral")
                c = int(c)
            elif isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"coefficient {c} is not integral")
                c = c.numerator
            values.append(int(c))
        return _trim(values)

    @classmethod
    def _build(cls, values: Iterable[int]) -> "IntPolynomial":
        # values are already ints; skip field validation on hot paths
        return cls.model_construct(coeffs=_trim(list(values)))

    @classmethod
    def zero(cls) -> "IntPolynomial":
        return cls._build(())

    @classmethod
    def one(cls) -> "IntPolynomial":
        return cls._build((1,))

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls._build((int(c),))

    @classmethod
    def monomial(cls, power: int, coefficient: int = 1) -> "IntPolynomial":
        """Return coefficient·x^power."""
        if power < 0:
            raise ValueError(f"monomial power must be nonnegative, got {power}")
        return cls._build([0] * power + [int(coefficient)])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __add__(self, other: Any) -> "IntPolynomial":
        if isinstance(other, int):
            other = IntPolynomial.constant(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        values = list(a)
        for i, c in enumerate(b):
            values[i] += c
        return IntPolynomial._build(values)

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial._build(-c for c in self.coeffs)

    def __sub__(self, other: Any) -> "IntPolynomial":
        if isinstance(other, int):
            other = IntPolynomial.constant(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial.constant(other) - self
        return NotImplemented

    def __mul__(self, other: Any) -> "IntPolynomial":
        if isinstance(other, int) and not isinstance(other, bool):
            return IntPolynomial._build(c * other for c in self.coeffs)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return IntPolynomial.zero()
        values = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                values[i + j] += a * b
        return IntPolynomial._build(values)

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by x^k."""
        if k < 0:
            raise ValueError(f"shift must be nonnegative, got {k}")
        if not self.coeffs:
            return self
        return IntPolynomial._build([0] * k + list(self.coeffs))

    def reverse(self, n: int) -> "IntPolynomial":
        """Return x^n·p(1/x); requires degree ≤ n."""
        if self.degree > n:
            raise ValueError(f"degree {self.degree} exceeds reversal bound {n}")
        padded = list(self.coeffs) + [0] * (n + 1 - len(self.coeffs))
        return IntPolynomial._build(reversed(padded))

    def is_palindromic(self, n: Optional[int] = None) -> bool:
        """True when reversal with bound n (default: the degree) is the identity."""
        if n is None:
            n = max(self.degree, 0)
        return self.reverse(n) == self

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial._build(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def substitute_square(self) -> "IntPolynomial":
        """Return p(x²): coefficient of x^i moves to x^(2i)."""
        values = [0] * max(2 * len(self.coeffs) - 1, 0)
        for i, c in enumerate(self.coeffs):
            values[2 * i] = c
        return IntPolynomial._build(values)

    def evaluate(self, x: Scalar) -> Scalar:
        """Horner evaluation; exact for int and Fraction arguments."""
        result: Scalar = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def to_json(self) -> Dict[str, List[str]]:
        """Serialize with decimal-string coefficients."""
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "IntPolynomial":
        return cls(coeffs=data["coeffs"])

    def pretty(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            power = var if i == 1 else f"{var}^{i}"
            if c == 1:
                terms.append(power)
            elif c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(f"{c}{power}")
        return " + ".join(terms).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.pretty()

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"
