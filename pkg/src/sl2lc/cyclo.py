"""
Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are sparse maps from exponents of zeta to rationals, kept in the
canonical remainder modulo the N-th cyclotomic polynomial. Orders used by
the verifier are large (p^7 and beyond) but every element stays sparse, so
reduction works term by term through the identity
Phi_N(z) = Phi_rad(N)(z^(N/rad(N))) instead of dense polynomial division.
"""

from __future__ import annotations

import cmath
import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Union

from sympy import (
    QQ,
    Poly,
    Rational as SympyRational,
    cyclotomic_poly,
    invert,
    primefactors,
    symbols,
    totient,
)

from .errors import DivisionByZero, IncompatibleContext

log = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

_z = symbols("z")


@dataclass(frozen=True)
class CyclotomicField:
    """
    The field Q(zeta_N) for a fixed order N.

    Attributes:
        order: The order N of the distinguished root of unity zeta
    """

    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"Cyclotomic order must be positive, got {self.order}")

    @cached_property
    def degree(self) -> int:
        """Degree phi(N) of the field over Q."""
        return int(totient(self.order))

    @cached_property
    def _relation(self) -> tuple[int, tuple[tuple[int, Fraction], ...]]:
        radical = 1
        for prime in primefactors(self.order):
            radical *= prime
        stride = self.order // radical
        coeffs = [int(c) for c in reversed(cyclotomic_poly(radical, _z, polys=True).all_coeffs())]
        top = (len(coeffs) - 1) * stride
        tail = tuple((i * stride, Fraction(-c)) for i, c in enumerate(coeffs[:-1]) if c)
        return top, tail

    @cached_property
    def polynomial(self) -> Poly:
        """Dense N-th cyclotomic polynomial; only built for general division."""
        return Poly(cyclotomic_poly(self.order, _z), _z, domain=QQ)

    def reduce(self, raw: Mapping[int, Scalar]) -> dict[int, Fraction]:
        """
        Reduce a polynomial in zeta to its canonical remainder.

        Args:
            raw: Map from any integer exponent to a rational coefficient

        Returns:
            Map from exponents in [0, phi(N)) to nonzero rationals
        """
        n = self.order
        half = n // 2 if n % 2 == 0 else None
        acc: dict[int, Fraction] = {}
        for exp, coeff in raw.items():
            if not coeff:
                continue
            exp %= n
            coeff = Fraction(coeff)
            # zeta^(N/2) = -1
            if half is not None and exp >= half:
                exp -= half
                coeff = -coeff
            acc[exp] = acc.get(exp, Fraction(0)) + coeff

        top, tail = self._relation
        heap = [-e for e in acc if e >= top]
        heapq.heapify(heap)
        while heap:
            exp = -heapq.heappop(heap)
            coeff = acc.pop(exp, None)
            if not coeff:
                continue
            base = exp - top
            for offset, factor in tail:
                k = base + offset
                if k >= top and k not in acc:
                    heapq.heappush(heap, -k)
                acc[k] = acc.get(k, Fraction(0)) + coeff * factor
        return {e: c for e, c in acc.items() if c}

    def element(self, raw: Mapping[int, Scalar]) -> CycNum:
        """Build a canonical element from a polynomial in zeta of any degree."""
        return CycNum(self, self.reduce(raw))

    @property
    def zero(self) -> CycNum:
        return CycNum(self, {})

    @property
    def one(self) -> CycNum:
        return CycNum(self, {0: Fraction(1)})

    def rational(self, value: Scalar) -> CycNum:
        """Embed a rational number."""
        value = Fraction(value)
        return CycNum(self, {0: value} if value else {})

    @cached_property
    def _roots(self) -> dict[int, CycNum]:
        # exponent mod N -> canonical zeta^exponent
        return {}

    def zeta(self, power: int = 1) -> CycNum:
        """Return zeta_N ** power."""
        power %= self.order
        root = self._roots.get(power)
        if root is None:
            root = self._roots[power] = self.element({power: 1})
        return root

    def root_of_unity(self, numerator: int, denominator: int) -> CycNum:
        """
        Return zeta_m ** k for m = denominator, k = numerator.

        Raises:
            IncompatibleContext: If m does not divide N
        """
        if self.order % denominator:
            raise IncompatibleContext(
                f"zeta_{denominator} is not in Q(zeta_{self.order})"
            )
        return self.zeta(numerator * (self.order // denominator))


def cyc_reduce(raw: Mapping[int, Scalar], order: int) -> CycNum:
    """Canonical element of Q(zeta_order) for a raw polynomial in zeta."""
    return CyclotomicField(order).element(raw)


@dataclass(frozen=True, eq=False)
class CycNum:
    """
    Element of Q(zeta_N) in canonical form.

    Construct through :meth:`CyclotomicField.element` or the field helpers;
    the coefficient map is never mutated after construction.

    Attributes:
        field: The cyclotomic field the element lives in
        coeffs: Map from exponent of zeta to nonzero rational coefficient
    """

    field: CyclotomicField
    coeffs: Mapping[int, Fraction]

    def _coerce(self, other: object) -> CycNum:
        if isinstance(other, CycNum):
            if other.field != self.field:
                raise IncompatibleContext(
                    f"Cannot mix Q(zeta_{self.field.order}) and Q(zeta_{other.field.order})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented  # type: ignore[return-value]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def rational_value(self) -> Fraction:
        """Return the element as a rational number.

        Raises:
            ValueError: If the element is irrational
        """
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs.get(0, Fraction(0))

    def __add__(self, other: object) -> CycNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        raw = dict(self.coeffs)
        for exp, coeff in other.coeffs.items():
            raw[exp] = raw.get(exp, Fraction(0)) + coeff
        return CycNum(self.field, {e: c for e, c in raw.items() if c})

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum(self.field, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: object) -> CycNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> CycNum:
        return (-self) + other

    def __mul__(self, other: object) -> CycNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            scale = other.rational_value()
            if not scale:
                return self.field.zero
            return CycNum(self.field, {e: c * scale for e, c in self.coeffs.items()})
        raw: dict[int, Fraction] = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                raw[ea + eb] = raw.get(ea + eb, Fraction(0)) + ca * cb
        return self.field.element(raw)

    __rmul__ = __mul__

    def inverse(self) -> CycNum:
        """
        Multiplicative inverse.

        Rational and single-term elements invert directly; anything else goes
        through the extended gcd with the dense cyclotomic polynomial, which
        is only practical for small orders.

        Raises:
            DivisionByZero: If the element is zero
        """
        if not self.coeffs:
            raise DivisionByZero(f"Division by zero in Q(zeta_{self.field.order})")
        if len(self.coeffs) == 1:
            ((exp, coeff),) = self.coeffs.items()
            return self.field.element({-exp: 1 / coeff})
        log.debug("General inversion in Q(zeta_%d) of %d terms", self.field.order, len(self.coeffs))
        poly = Poly.from_dict(
            {(e,): SympyRational(c.numerator, c.denominator) for e, c in self.coeffs.items()},
            _z,
            domain=QQ,
        )
        inv = invert(poly, self.field.polynomial)
        return self.field.element(
            {monom[0]: Fraction(int(c.p), int(c.q)) for monom, c in inv.terms()}
        )

    def __truediv__(self, other: object) -> CycNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> CycNum:
        return self.inverse() * other

    def __pow__(self, exponent: int) -> CycNum:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> CycNum:
        """Complex conjugation, zeta -> zeta^(N-1)."""
        return self.field.element({-e: c for e, c in self.coeffs.items()})

    def embed(self) -> complex:
        """Evaluate at zeta = exp(2 pi i / N). For display only."""
        n = self.field.order
        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * e / n) for e, c in self.coeffs.items()),
            0j,
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs.get(0, Fraction(0)) == other
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.field == other.field and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash((self.field.order, frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for exp in sorted(self.coeffs):
            coeff = self.coeffs[exp]
            parts.append(str(coeff) if exp == 0 else f"{coeff}*z^{exp}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CycNum(N={self.field.order}, {self})"


def cyc_embed(value: CycNum) -> complex:
    """Float approximation of a cyclotomic value for reports."""
    return value.embed()


def format_complex(value: complex, digits: int = 12) -> str:
    """Stable textual form of a float approximation."""
    re = round(value.real, digits) + 0.0
    im = round(value.imag, digits) + 0.0
    return f"{re:.{digits}g}{im:+.{digits}g}i"
