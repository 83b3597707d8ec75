"""
Finite Laurent polynomials in X = q^(-s) with cyclotomic coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .cyclo import CycNum

Coefficient = Union[CycNum, int, Fraction]


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    """
    Sum of c_k * X^k over finitely many integers k.

    Zero coefficients are never stored, so the empty map is the zero
    polynomial.

    Attributes:
        coeffs: Map from exponent of X to nonzero coefficient
    """

    coeffs: Mapping[int, CycNum] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coeffs", {k: c for k, c in self.coeffs.items() if not c.is_zero()}
        )

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls({})

    @classmethod
    def monomial(cls, coeff: CycNum, exponent: int = 0) -> LaurentPoly:
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, coeff: CycNum) -> LaurentPoly:
        return cls({0: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def degree(self) -> int:
        """Exponent of a monomial."""
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        return next(iter(self.coeffs))

    @property
    def leading(self) -> CycNum:
        """Coefficient of a monomial."""
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        return next(iter(self.coeffs.values()))

    def coefficient(self, exponent: int) -> CycNum | None:
        return self.coeffs.get(exponent)

    def constant_value(self, zero: CycNum) -> CycNum:
        """
        The value of a polynomial of degree 0.

        Args:
            zero: Zero of the coefficient field, returned for the zero polynomial

        Raises:
            ValueError: If X appears with a nonzero exponent
        """
        if any(k != 0 for k in self.coeffs):
            raise ValueError(f"{self} is not constant in X")
        return self.coeffs.get(0, zero)

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        raw = dict(self.coeffs)
        for k, c in other.coeffs.items():
            raw[k] = raw[k] + c if k in raw else c
        return LaurentPoly(raw)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly | Coefficient) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            raw: dict[int, CycNum] = {}
            for ka, ca in self.coeffs.items():
                for kb, cb in other.coeffs.items():
                    term = ca * cb
                    raw[ka + kb] = raw[ka + kb] + term if ka + kb in raw else term
            return LaurentPoly(raw)
        if isinstance(other, (CycNum, int, Fraction)):
            return LaurentPoly({k: c * other for k, c in self.coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: LaurentPoly | Coefficient) -> LaurentPoly:
        """
        Divide by a scalar or a monomial.

        Raises:
            ValueError: If the divisor has more than one term
        """
        if isinstance(other, LaurentPoly):
            if not other.is_monomial():
                raise ValueError(f"Division by non-monomial {other}")
            shift, coeff = other.degree, other.leading
            return LaurentPoly({k - shift: c / coeff for k, c in self.coeffs.items()})
        if isinstance(other, (CycNum, int, Fraction)):
            return LaurentPoly({k: c / other for k, c in self.coeffs.items()})
        return NotImplemented

    def reflect(self, q: int) -> LaurentPoly:
        """Substitute s -> 1 - s: c X^k -> c q^(-k) X^(-k)."""
        return LaurentPoly({-k: c * Fraction(q) ** (-k) for k, c in self.coeffs.items()})

    def negate_s(self) -> LaurentPoly:
        """Substitute s -> -s: c X^k -> c X^(-k)."""
        return LaurentPoly({-k: c for k, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return dict(self.coeffs) == dict(other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"({self.coeffs[k]})" + ("" if k == 0 else f"*X^{k}") for k in sorted(self.coeffs)
        )

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"
