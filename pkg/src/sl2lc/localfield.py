"""
Capped-precision p-adic numbers over Q_p and the characters of Q_p.

A :class:`FieldContext` fixes the prime, the level of the character under
study, the principal-value shell depth and the derived working precision and
cyclotomic order. Every :class:`PadicNum` carries its context, so values from
different contexts cannot be combined by accident.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Union

from sympy import isprime, multiplicity, primitive_root, totient

from .cyclo import CyclotomicField, CycNum
from .errors import DivisionByZero, IncompatibleContext, NotAUnit, PrecisionExhausted

log = logging.getLogger(__name__)

INF = math.inf

# Extra relative digits on top of level + shell depth + 4
DEFAULT_GUARD = 8

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class FieldContext:
    """
    Shared parameters for one prime and one character level.

    Attributes:
        p: The residue characteristic; the residue field is F_p, so q = p
        level: Level of the character under study
        shell_depth: Principal-value truncation depth m
        prec: Relative precision of freshly constructed numbers
        field: Cyclotomic field holding every character value
    """

    p: int
    level: int
    shell_depth: int
    prec: int
    field: CyclotomicField

    @classmethod
    def create(
        cls,
        p: int,
        level: int,
        shell_depth: int | None = None,
        extra_guard: int = DEFAULT_GUARD,
    ) -> FieldContext:
        """
        Build a context with derived precision and cyclotomic order.

        Args:
            p: A prime
            level: Level n of the character (0 for unramified work)
            shell_depth: Shell depth m, defaults to level + 4
            extra_guard: Additional precision digits

        Returns:
            FieldContext instance

        Raises:
            ValueError: If p is not prime or the depths are out of range
        """
        if not isprime(p):
            raise ValueError(f"p must be prime, got {p}")
        if level < 0:
            raise ValueError(f"Level must be non-negative, got {level}")
        if shell_depth is None:
            shell_depth = level + 4
        if shell_depth < 1:
            raise ValueError(f"Shell depth must be positive, got {shell_depth}")
        prec = level + shell_depth + 4 + extra_guard
        order = math.lcm(p ** (shell_depth + 2), 2)
        log.debug("FieldContext p=%d level=%d m=%d prec=%d N=%d", p, level, shell_depth, prec, order)
        return cls(p, level, shell_depth, prec, CyclotomicField(order))

    @property
    def q(self) -> int:
        """Size of the residue field."""
        return self.p

    def num(self, value: Rational | str) -> PadicNum:
        """Embed a rational (or its string form, e.g. ``"-1/3"``)."""
        if isinstance(value, str):
            value = Fraction(value)
        return PadicNum.from_rational(self, value)

    def uniformizer(self, power: int = 1) -> PadicNum:
        """Return p ** power."""
        return PadicNum(self, power, 1, self.prec)

    def units(self, digits: int) -> list[int]:
        """Integer representatives of (Z/p^digits)^x."""
        if digits <= 0:
            return [1]
        return [u for u in range(1, self.p ** digits) if u % self.p]

    def scalar(self, value: Rational) -> CycNum:
        return self.field.rational(value)


def _small_rational(unit: int, modulus: int) -> Fraction:
    # half extended Euclid on (modulus, unit), stopped below the bound
    bound = math.isqrt(modulus // 2)
    r0, r1 = modulus, unit % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 != 0 and abs(s1) <= bound and math.gcd(s1, modulus) == 1:
        return Fraction(r1, s1)
    residue = unit % modulus
    return Fraction(residue - modulus if residue > modulus // 2 else residue)


@dataclass(frozen=True, eq=False)
class PadicNum:
    """
    Element of Q_p with capped relative precision.

    A nonzero value is p**valuation * unit, known modulo
    p**(valuation + precision). A zero has valuation INF and its
    ``precision`` field holds the absolute precision of the zero: INF for an
    exact zero, finite for a zero produced by cancellation.

    Attributes:
        ctx: Field context
        valuation: p-adic valuation, INF for zero
        unit: Unit residue modulo p**precision (0 for zero)
        precision: Relative precision, or absolute precision for zero
    """

    ctx: FieldContext
    valuation: int | float
    unit: int
    precision: int | float

    def __post_init__(self) -> None:
        if self.valuation != INF:
            if self.unit % self.ctx.p == 0:
                raise ValueError(f"Unit part {self.unit} is divisible by {self.ctx.p}")
            object.__setattr__(self, "unit", self.unit % self.ctx.p ** self.precision)

    @classmethod
    def from_rational(cls, ctx: FieldContext, value: Rational) -> PadicNum:
        value = Fraction(value)
        if not value:
            return cls.zero(ctx)
        p = ctx.p
        num_v = multiplicity(p, value.numerator)
        den_v = multiplicity(p, value.denominator)
        modulus = p ** ctx.prec
        num = value.numerator // p ** num_v
        den = value.denominator // p ** den_v
        return cls(ctx, num_v - den_v, num * pow(den, -1, modulus), ctx.prec)

    @classmethod
    def zero(cls, ctx: FieldContext, abs_precision: int | float = INF) -> PadicNum:
        return cls(ctx, INF, 0, abs_precision)

    @property
    def abs_precision(self) -> int | float:
        if self.is_zero():
            return self.precision
        return self.valuation + self.precision

    def is_zero(self) -> bool:
        return self.valuation == INF

    def is_exact_zero(self) -> bool:
        return self.is_zero() and self.precision == INF

    def _coerce(self, other: object) -> PadicNum:
        if isinstance(other, PadicNum):
            if other.ctx != self.ctx:
                raise IncompatibleContext("PadicNum values from different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNum.from_rational(self.ctx, other)
        return NotImplemented  # type: ignore[return-value]

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other: object) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_exact_zero():
            return self
        if self.is_exact_zero():
            return other
        p = self.ctx.p
        absprec = min(self.abs_precision, other.abs_precision)
        terms = [x for x in (self, other) if not x.is_zero()]
        if not terms:
            return PadicNum.zero(self.ctx, absprec)
        base = min(x.valuation for x in terms)
        if absprec <= base:
            return PadicNum.zero(self.ctx, absprec)
        width = int(absprec - base)
        total = sum(x.unit * p ** int(x.valuation - base) for x in terms) % p ** width
        if total == 0:
            return PadicNum.zero(self.ctx, absprec)
        shift = multiplicity(p, total)
        precision = width - shift
        if precision < self.ctx.level + 1:
            raise PrecisionExhausted(
                f"Cancellation left {precision} digits, need {self.ctx.level + 1}"
            )
        return PadicNum(self.ctx, int(base) + shift, total // p ** shift, precision)

    __radd__ = __add__

    def __neg__(self) -> PadicNum:
        if self.is_zero():
            return self
        return PadicNum(self.ctx, self.valuation, -self.unit, self.precision)

    def __sub__(self, other: object) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> PadicNum:
        return (-self) + other

    def __mul__(self, other: object) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            if self.is_exact_zero() or other.is_exact_zero():
                return PadicNum.zero(self.ctx)
            if self.is_zero() and other.is_zero():
                return PadicNum.zero(self.ctx, self.precision + other.precision)
            zero, nonzero = (self, other) if self.is_zero() else (other, self)
            return PadicNum.zero(self.ctx, zero.precision + nonzero.valuation)
        precision = min(self.precision, other.precision)
        return PadicNum(
            self.ctx,
            self.valuation + other.valuation,
            self.unit * other.unit,
            precision,
        )

    __rmul__ = __mul__

    def inverse(self) -> PadicNum:
        """
        Multiplicative inverse, exact to the same relative precision.

        Raises:
            DivisionByZero: If the value is zero
        """
        if self.is_zero():
            raise DivisionByZero("Inverse of a p-adic zero")
        modulus = self.ctx.p ** self.precision
        return PadicNum(self.ctx, -self.valuation, pow(self.unit, -1, modulus), self.precision)

    def __truediv__(self, other: object) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> PadicNum:
        return self.inverse() * other

    def __pow__(self, exponent: int) -> PadicNum:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = PadicNum.from_rational(self.ctx, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    # ------------------------------------------------------------------
    # valuation tests
    # ------------------------------------------------------------------

    def valuation_at_least(self, k: int | float) -> bool:
        """
        Decide v(x) >= k.

        Raises:
            PrecisionExhausted: If x is a zero known only below p**k
        """
        if not self.is_zero():
            return self.valuation >= k
        if self.precision >= k:
            return True
        raise PrecisionExhausted(f"Cannot decide v(x) >= {k}: zero known to O(p^{self.precision})")

    def is_integral(self) -> bool:
        return self.valuation_at_least(0)

    def is_unit(self) -> bool:
        if self.is_zero():
            self.valuation_at_least(1)
            return False
        return self.valuation == 0

    def unit_part(self) -> PadicNum:
        """The unit u with x = p**v(x) * u."""
        if self.is_zero():
            raise NotAUnit("Zero has no unit part")
        return PadicNum(self.ctx, 0, self.unit, self.precision)

    def residue(self, digits: int) -> int:
        """
        Integer representative of x modulo p**digits.

        Raises:
            ValueError: If x is not integral
            PrecisionExhausted: If x is not known modulo p**digits
        """
        if not self.is_integral():
            raise ValueError(f"Residue of a non-integral value {self}")
        if self.abs_precision < digits:
            raise PrecisionExhausted(f"{self} is not known modulo {self.ctx.p}^{digits}")
        if self.is_zero() or self.valuation >= digits:
            return 0
        p = self.ctx.p
        return (p ** int(self.valuation) * self.unit) % p ** digits

    def fractional_part(self) -> tuple[int, int]:
        """
        Fractional part as (a, k) with frac(x) = a / p**k.

        Raises:
            PrecisionExhausted: If the fractional digits are not known
        """
        if self.valuation_at_least(0):
            return 0, 0
        k = int(-self.valuation)
        if self.precision < k:
            raise PrecisionExhausted(f"Fractional part of {self} needs {k} digits")
        return self.unit % self.ctx.p ** k, k

    def to_fraction(self) -> Fraction:
        """
        A small rational congruent to x at the known precision.

        The unit part is recovered as a / b with |a|, |b| <= sqrt(p**precision / 2)
        when such a fraction exists, else as the balanced residue.
        """
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.ctx.p) ** int(self.valuation) * _small_rational(
            self.unit, self.ctx.p ** self.precision
        )

    def norm(self) -> Fraction:
        """|x| = q**(-v(x))."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.ctx.p) ** int(-self.valuation)

    def __str__(self) -> str:
        return f"{self.to_fraction()} + O({self.ctx.p}^{self.abs_precision})"

    def __repr__(self) -> str:
        return (
            f"PadicNum(p={self.ctx.p}, v={self.valuation}, unit={self.unit}, "
            f"prec={self.precision})"
        )


def unit_group_generators(p: int, digits: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """
    Fixed generators of (Z/p^digits)^x and their orders.

    A primitive root for odd p; the class of -1 for 4; the pair {-1, 5}
    for 2^k with k >= 3.
    """
    if digits <= 0 or (p == 2 and digits == 1):
        return (), ()
    modulus = p ** digits
    if p != 2:
        return (int(primitive_root(modulus)),), (int(totient(modulus)),)
    if digits == 2:
        return (modulus - 1,), (2,)
    return (modulus - 1, 5), (2, 2 ** (digits - 2))


@dataclass(frozen=True)
class MultCharacter:
    """
    Character of the unit group of Z_p that factors through (Z/p^level)^x.

    The value at generator ``generators[i]`` is
    exp(2 pi i * exponents[i] / orders[i]).

    Attributes:
        p: The prime
        level: Exponent of the modulus the character is read at
        generators: Fixed generators from :func:`unit_group_generators`
        orders: Orders of the generators
        exponents: Exponent of each generator's value
    """

    p: int
    level: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    exponents: tuple[int, ...]

    @classmethod
    def trivial(cls, p: int) -> MultCharacter:
        return cls(p, 0, (), (), ())

    @classmethod
    def from_exponents(cls, p: int, level: int, exponents: tuple[int, ...]) -> MultCharacter:
        generators, orders = unit_group_generators(p, level)
        if len(exponents) != len(generators):
            raise ValueError(
                f"Expected {len(generators)} exponents for (Z/{p}^{level})^x, got {len(exponents)}"
            )
        return cls(p, level, generators, orders, tuple(e % o for e, o in zip(exponents, orders)))

    @cached_property
    def _table(self) -> dict[int, Fraction]:
        """Residue mod p**level -> value as a fraction of a full turn."""
        modulus = self.p ** self.level
        table: dict[int, Fraction] = {}
        for powers in product(*(range(o) for o in self.orders)):
            residue = 1
            turn = Fraction(0)
            for g, k, e, o in zip(self.generators, powers, self.exponents, self.orders):
                residue = residue * pow(g, k, modulus) % modulus
                turn += Fraction(e * k, o)
            table[residue % modulus] = turn - math.floor(turn)
        return table

    def turn_at(self, residue: int) -> Fraction:
        """Value at an integer unit as a fraction of a full turn."""
        if residue % self.p == 0:
            raise NotAUnit(f"{residue} is not a unit mod {self.p}")
        if self.level == 0:
            return Fraction(0)
        return self._table[residue % self.p ** self.level]

    def value_in(self, field: CyclotomicField, residue: int) -> CycNum:
        turn = self.turn_at(residue)
        return field.root_of_unity(turn.numerator, turn.denominator)

    def __call__(self, x: PadicNum) -> CycNum:
        """
        Evaluate at a unit.

        Raises:
            NotAUnit: If x is not a unit
            PrecisionExhausted: If x is not known modulo p**level
        """
        if not x.is_unit():
            raise NotAUnit(f"Character evaluated at non-unit {x}")
        return self.value_in(x.ctx.field, x.residue(self.level))

    def inverse(self) -> MultCharacter:
        return MultCharacter(
            self.p,
            self.level,
            self.generators,
            self.orders,
            tuple((-e) % o for e, o in zip(self.exponents, self.orders)),
        )

    def is_quadratic(self) -> bool:
        return all((2 * e) % o == 0 for e, o in zip(self.exponents, self.orders))

    def conductor(self) -> int:
        """Least n with 1 + p^n in the kernel (0 for the trivial character)."""
        modulus = self.p ** self.level
        for n in range(self.level + 1):
            step = self.p ** n
            if all(
                self.turn_at(r) == 0
                for r in range(1, modulus + 1, step)
                if r % self.p
            ):
                return n
        return self.level

    def restricted(self, level: int) -> MultCharacter:
        """The same character read at a smaller modulus p**level."""
        generators, orders = unit_group_generators(self.p, level)
        exponents = []
        for g, o in zip(generators, orders):
            turn = self.turn_at(g) * o
            if turn.denominator != 1:
                raise ValueError(f"Character does not factor through level {level}")
            exponents.append(int(turn))
        return MultCharacter(self.p, level, generators, orders, tuple(exponents))

    @property
    def sign(self) -> int:
        """eta(-1) as +1 or -1."""
        return 1 if self.turn_at(self.p ** max(self.level, 1) - 1) == 0 else -1

    @property
    def label(self) -> str:
        if self.level == 0:
            return f"trivial_{self.p}"
        if self.p == 2:
            return f"chi_{self.sign * 2 ** self.level}"
        if self.is_quadratic():
            return f"legendre_{self.p}"
        return f"eta_{self.p}^{self.level}{list(self.exponents)}"


def ramified_quadratic_chars(p: int) -> list[MultCharacter]:
    """
    All ramified characters of order 2 of the units of Z_p, at minimal level.

    Each one extends to Q_p^x in two ways, see :meth:`ExtChar.extensions`.

    Raises:
        ValueError: If p is not prime
    """
    if not isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    # every quadratic character factors through (Z/8)^x or (Z/p)^x
    top = 3 if p == 2 else 1
    found = []
    for exponents in product(*(range(o) for o in unit_group_generators(p, top)[1])):
        candidate = MultCharacter.from_exponents(p, top, exponents)
        if not candidate.is_quadratic():
            continue
        level = candidate.conductor()
        if level == 0:
            continue
        found.append(candidate.restricted(level))
    found.sort(key=lambda eta: (eta.level, eta.sign, eta.exponents))
    log.debug("Ramified quadratic characters for p=%d: %s", p, [eta.label for eta in found])
    return found


@dataclass(frozen=True)
class ExtChar:
    """
    Extension of a unit character to Q_p^x: p**k * u -> w_pi**k * eta(u).

    Attributes:
        unit_part: Restriction to the units
        w_pi: Value at the uniformizer, +1 or -1
    """

    unit_part: MultCharacter
    w_pi: int = 1

    def __post_init__(self) -> None:
        if self.w_pi not in (1, -1):
            raise ValueError(f"w_pi must be +1 or -1, got {self.w_pi}")

    @classmethod
    def extensions(cls, eta: MultCharacter) -> list[ExtChar]:
        return [cls(eta, 1), cls(eta, -1)]

    @property
    def level(self) -> int:
        return self.unit_part.level

    @property
    def epsilon(self) -> int:
        """The sign eta~(-1) = eta(-1)."""
        return self.unit_part.sign

    def inverse(self) -> ExtChar:
        return ExtChar(self.unit_part.inverse(), self.w_pi)

    def __call__(self, x: PadicNum) -> CycNum:
        if x.is_zero():
            raise NotAUnit("Character evaluated at zero")
        sign = self.w_pi ** (int(x.valuation) % 2)
        return self.unit_part(x.unit_part()) * sign

    @property
    def label(self) -> str:
        return f"{self.unit_part.label}/w={self.w_pi:+d}"


@dataclass(frozen=True)
class AddChar:
    """
    The additive character x -> exp(2 pi i * frac(twist * x)).

    Trivial on Z_p and nontrivial on p^-1 Z_p for a unit twist. The default
    twist 1 is the canonical character; twist -1 is its inverse.

    Attributes:
        twist: Unit integer scaling the argument
    """

    twist: int = 1

    def inverse(self) -> AddChar:
        return AddChar(-self.twist)

    def __call__(self, x: PadicNum) -> CycNum:
        """
        Raises:
            NotAUnit: If the twist is divisible by p
            PrecisionExhausted: If the fractional part of x is not known
        """
        if self.twist % x.ctx.p == 0:
            raise NotAUnit(f"Additive twist {self.twist} is not a unit at {x.ctx.p}")
        if self.twist != 1:
            x = x * self.twist
        numerator, digits = x.fractional_part()
        return x.ctx.field.root_of_unity(numerator, x.ctx.p ** digits)
