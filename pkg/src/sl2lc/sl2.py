"""
Elements of SL2(Q_p), the subgroup J of level n and its double cosets.

J is the group of integral matrices with unit diagonal and lower-left entry
in p^n Z_p, where n is the level of the context. Every factorization here is
computed by column elimination on the actual matrix entries.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .cyclo import CycNum
from .errors import NotInSubgroup, PrecisionExhausted
from .localfield import FieldContext, MultCharacter, PadicNum

log = logging.getLogger(__name__)

Entry = Union[PadicNum, int, Fraction]


def _num(ctx: FieldContext, value: Entry) -> PadicNum:
    if isinstance(value, PadicNum):
        return value
    return ctx.num(value)


@dataclass(frozen=True, eq=False)
class GroupElem:
    """
    A matrix [[a, b], [c, d]] of determinant 1 over Q_p.

    Attributes:
        a: Upper-left entry
        b: Upper-right entry
        c: Lower-left entry
        d: Lower-right entry
    """

    a: PadicNum
    b: PadicNum
    c: PadicNum
    d: PadicNum

    @property
    def ctx(self) -> FieldContext:
        return self.a.ctx

    @classmethod
    def of(cls, ctx: FieldContext, a: Entry, b: Entry, c: Entry, d: Entry) -> GroupElem:
        """
        Build from four entries.

        Raises:
            ValueError: If the determinant is not 1 to available precision
        """
        g = cls(_num(ctx, a), _num(ctx, b), _num(ctx, c), _num(ctx, d))
        if not g.det() == 1:
            raise ValueError(f"Determinant of {g} is not 1")
        return g

    @classmethod
    def identity(cls, ctx: FieldContext) -> GroupElem:
        return cls.of(ctx, 1, 0, 0, 1)

    @classmethod
    def w0(cls, ctx: FieldContext) -> GroupElem:
        """The Weyl element [[0, -1], [1, 0]]."""
        return cls.of(ctx, 0, -1, 1, 0)

    @classmethod
    def w0_inverse(cls, ctx: FieldContext) -> GroupElem:
        return cls.of(ctx, 0, 1, -1, 0)

    @classmethod
    def u(cls, ctx: FieldContext, x: Entry) -> GroupElem:
        """Upper unipotent [[1, x], [0, 1]]."""
        return cls.of(ctx, 1, x, 0, 1)

    @classmethod
    def ubar(cls, ctx: FieldContext, x: Entry) -> GroupElem:
        """Lower unipotent [[1, 0], [x, 1]]."""
        return cls.of(ctx, 1, 0, x, 1)

    @classmethod
    def torus(cls, ctx: FieldContext, t: Entry) -> GroupElem:
        """diag(t, 1/t)."""
        t = _num(ctx, t)
        return cls(t, ctx.num(0), ctx.num(0), t.inverse())

    def det(self) -> PadicNum:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other: GroupElem) -> GroupElem:
        return GroupElem(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> GroupElem:
        return GroupElem(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> GroupElem:
        return GroupElem(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElem):
            return NotImplemented
        return (
            self.a == other.a and self.b == other.b
            and self.c == other.c and self.d == other.d
        )

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        entries = [e.to_fraction() for e in (self.a, self.b, self.c, self.d)]
        return f"[[{entries[0]}, {entries[1]}], [{entries[2]}, {entries[3]}]]"


@dataclass(frozen=True, eq=False)
class TorusElem:
    """
    The diagonal element diag(a, 1/a).

    Attributes:
        a: Nonzero upper-left entry
    """

    a: PadicNum

    @property
    def valuation(self) -> int:
        return int(self.a.valuation)

    def matrix(self) -> GroupElem:
        return GroupElem.torus(self.a.ctx, self.a)

    def delta_half(self) -> Fraction:
        """Square root of the modulus character, |a|."""
        return self.a.norm()

    def is_unit(self) -> bool:
        return self.a.is_unit()


class Subgroup(Enum):
    """Subgroups with a membership test."""

    J = "J"
    K = "K"
    U = "U"
    UBAR = "Ubar"
    T_UNITS = "T(o)"


class Cell(Enum):
    """Which basis-function support an element lies in."""

    BJ = "BJ"
    BW0J = "Bw0J"
    NEITHER = "neither"


class DoubleCoset(Enum):
    """Position of an element of K relative to J."""

    J = "J"
    JW0J = "Jw0J"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True, eq=False)
class CellDecomp:
    """
    Factorization g = t * u(x) * j or g = t * u(x) * w0 * j with j in J.

    For cell NEITHER the factor fields are None.

    Attributes:
        cell: The cell containing g
        torus_part: Torus factor t
        unipotent_b_part: Upper unipotent coordinate x of the Borel factor
        j_part: Factor in J
    """

    cell: Cell
    torus_part: TorusElem | None = None
    unipotent_b_part: PadicNum | None = None
    j_part: GroupElem | None = None

    def borel(self) -> GroupElem:
        if self.torus_part is None or self.unipotent_b_part is None:
            raise ValueError("Element lies in neither cell")
        ctx = self.torus_part.a.ctx
        return self.torus_part.matrix() * GroupElem.u(ctx, self.unipotent_b_part)

    def reassemble(self) -> GroupElem:
        """Multiply the factors back together."""
        b = self.borel()
        assert self.j_part is not None
        if self.cell is Cell.BJ:
            return b * self.j_part
        return b * GroupElem.w0(b.ctx) * self.j_part


def in_subgroup(g: GroupElem, which: Subgroup) -> bool:
    """
    Decide membership of g in one of the named subgroups.

    Raises:
        PrecisionExhausted: If a valuation test is undecidable
    """
    level = g.ctx.level
    match which:
        case Subgroup.K:
            return all(e.is_integral() for e in (g.a, g.b, g.c, g.d))
        case Subgroup.J:
            return (
                in_subgroup(g, Subgroup.K)
                and g.a.is_unit()
                and g.d.is_unit()
                and g.c.valuation_at_least(level)
            )
        case Subgroup.U:
            return g.c.is_zero() and g.a == 1 and g.d == 1
        case Subgroup.UBAR:
            return g.b.is_zero() and g.a == 1 and g.d == 1
        case Subgroup.T_UNITS:
            return g.b.is_zero() and g.c.is_zero() and g.a.is_unit()
    raise ValueError(f"Unknown subgroup {which}")


def lambda_eval(g: GroupElem, eta: MultCharacter) -> CycNum:
    """
    The character j -> eta(a11) of J.

    Raises:
        NotInSubgroup: If g is not in J
    """
    if not in_subgroup(g, Subgroup.J):
        raise NotInSubgroup(f"{g} is not in J (level {g.ctx.level})")
    return eta(g.a)


def iwahori_factor(j: GroupElem) -> tuple[PadicNum, TorusElem, PadicNum]:
    """
    Factor j = ubar(y) * diag(t, 1/t) * u(x).

    Returns:
        Tuple (y, t, x) with y in p^n, t a unit and x integral

    Raises:
        NotInSubgroup: If j is not in J
    """
    if not in_subgroup(j, Subgroup.J):
        raise NotInSubgroup(f"{j} is not in J (level {j.ctx.level})")
    t = j.a
    return j.c / t, TorusElem(t), j.b / t


def cell_decompose(g: GroupElem) -> CellDecomp:
    """
    Locate g in BJ, Bw0J or neither.

    With v the valuation and n the level, g is in BJ iff
    v(c) >= v(d) + n and in Bw0J iff v(c) <= v(d). For n >= 2 the band
    between the two conditions belongs to neither cell.

    Raises:
        PrecisionExhausted: If the valuation comparison is undecidable
    """
    ctx = g.ctx
    level = ctx.level
    a, b, c, d = g.a, g.b, g.c, g.d
    if c.is_zero():
        if d.is_zero():
            raise PrecisionExhausted(f"Both bottom entries of {g!r} vanish to precision")
        c.valuation_at_least(d.valuation + level)
        cell = Cell.BJ
    elif d.is_zero():
        d.valuation_at_least(c.valuation)
        cell = Cell.BW0J
    else:
        gap = c.valuation - d.valuation
        if gap >= level:
            cell = Cell.BJ
        elif gap <= 0:
            cell = Cell.BW0J
        else:
            cell = Cell.NEITHER

    match cell:
        case Cell.BJ:
            return CellDecomp(cell, TorusElem(d.inverse()), b * d, GroupElem.ubar(ctx, c / d))
        case Cell.BW0J:
            return CellDecomp(cell, TorusElem(c.inverse()), a * c, GroupElem.u(ctx, d / c))
    return CellDecomp(cell)


def classify_in_k(g: GroupElem) -> DoubleCoset:
    """
    Position of an element of K: in J, in Jw0J, or in a double coset between.

    Raises:
        NotInSubgroup: If g is not in K
    """
    if not in_subgroup(g, Subgroup.K):
        raise NotInSubgroup(f"{g} is not in K")
    decomp = cell_decompose(g)
    if decomp.cell is Cell.NEITHER or not decomp.torus_part.is_unit():
        return DoubleCoset.INTERMEDIATE
    if decomp.cell is Cell.BJ:
        return DoubleCoset.J
    return DoubleCoset.JW0J


def coset_reps_Jw0J(ctx: FieldContext) -> list[GroupElem]:
    """
    Right J-coset representatives u(t) * w0 of J w0 J, t in 0 .. p^n - 1.
    """
    w0 = GroupElem.w0(ctx)
    return [GroupElem.u(ctx, t) * w0 for t in range(ctx.p ** ctx.level)]


def bruhat_lower(ctx: FieldContext, x: Entry) -> GroupElem:
    """diag(1/x, x) * u(x) * w0 * u(1/x), which equals ubar(x)."""
    x = _num(ctx, x)
    return (
        GroupElem.torus(ctx, x.inverse())
        * GroupElem.u(ctx, x)
        * GroupElem.w0(ctx)
        * GroupElem.u(ctx, x.inverse())
    )


def _random_unit(ctx: FieldContext, rng: random.Random) -> int:
    modulus = ctx.p ** (ctx.level + 3)
    while True:
        value = rng.randrange(1, modulus)
        if value % ctx.p:
            return value


def random_j(ctx: FieldContext, rng: random.Random, length: int = 4) -> GroupElem:
    """A random word of J generators: ubar(p^n y), diag(unit), u(x)."""
    modulus = ctx.p ** (ctx.level + 3)
    g = GroupElem.identity(ctx)
    for _ in range(length):
        match rng.randrange(3):
            case 0:
                g = g * GroupElem.ubar(ctx, ctx.p ** ctx.level * rng.randrange(modulus))
            case 1:
                g = g * GroupElem.torus(ctx, _random_unit(ctx, rng))
            case _:
                g = g * GroupElem.u(ctx, rng.randrange(modulus))
    return g


def random_k(ctx: FieldContext, rng: random.Random) -> tuple[GroupElem, DoubleCoset]:
    """
    A random element of K with its expected double coset.

    Elements are j * w * j' with w in {I, w0}, or for level >= 2 also
    j * ubar(p^k u) * j' with 0 < k < level.
    """
    choices = [DoubleCoset.J, DoubleCoset.JW0J]
    if ctx.level >= 2:
        choices.append(DoubleCoset.INTERMEDIATE)
    kind = rng.choice(choices)
    match kind:
        case DoubleCoset.J:
            middle = GroupElem.identity(ctx)
        case DoubleCoset.JW0J:
            middle = GroupElem.w0(ctx)
        case _:
            k = rng.randrange(1, ctx.level)
            middle = GroupElem.ubar(ctx, ctx.p ** k * _random_unit(ctx, rng))
    return random_j(ctx, rng) * middle * random_j(ctx, rng), kind
