"""
Finite-sum evaluation of p-adic integrals on the induced space.

Every integral over Q_p is split into shells p^r Z_p^x for -m <= r <= m
plus the ball p^(m+1) Z_p. On a shell the integrand is frozen on cosets of
p^(r + depth); an additive character factor is integrated exactly on each
coset, contributing its value times the coset volume when it is trivial on
the coset radius and zero otherwise. Integrands are always evaluated through
:func:`~sl2lc.sl2.cell_decompose` on the actual group element.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Callable, Union

from .cyclo import CycNum
from .errors import BasisResolutionFailure, MismatchWithClosedForm, UnstablePrincipalValue
from .laurent import LaurentPoly
from .localfield import AddChar, ExtChar, FieldContext, MultCharacter, PadicNum
from .sl2 import Cell, GroupElem, cell_decompose, lambda_eval

log = logging.getLogger(__name__)

Integrand = Callable[[PadicNum], LaurentPoly]

# coset depth, either fixed or per shell valuation
Constancy = Union[int, Callable[[int], int]]


class Weyl(Enum):
    """Representatives of the Weyl group used by the integrals."""

    I2 = "I2"
    W0 = "w0"
    W0_INVERSE = "w0^-1"

    def matrix(self, ctx: FieldContext) -> GroupElem:
        match self:
            case Weyl.I2:
                return GroupElem.identity(ctx)
            case Weyl.W0:
                return GroupElem.w0(ctx)
        return GroupElem.w0_inverse(ctx)


@dataclass(frozen=True, eq=False)
class InducedVec:
    """
    Vector coeff_I2 * f_I2 + coeff_w0 * f_w0 of the isotypic induced space.

    ``side`` +1 is the space induced from the character with nu_s, side -1 is
    the space induced from its inverse with nu_(-s).

    Attributes:
        ctx: Field context
        coeff_I2: Coefficient of the function supported on BJ
        coeff_w0: Coefficient of the function supported on Bw0J
        character: The character on the +1 side
        side: +1 or -1
    """

    ctx: FieldContext
    coeff_I2: CycNum
    coeff_w0: CycNum
    character: ExtChar
    side: int = 1

    @classmethod
    def basis(cls, ctx: FieldContext, character: ExtChar, which: Weyl, side: int = 1) -> InducedVec:
        one, zero = ctx.field.one, ctx.field.zero
        if which is Weyl.I2:
            return cls(ctx, one, zero, character, side)
        return cls(ctx, zero, one, character, side)

    @property
    def inducing(self) -> ExtChar:
        """The character the space is induced from."""
        return self.character if self.side > 0 else self.character.inverse()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InducedVec):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.coeff_I2 == other.coeff_I2
            and self.coeff_w0 == other.coeff_w0
            and self.character == other.character
            and self.side == other.side
        )

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return f"({self.coeff_I2})*f_I2 + ({self.coeff_w0})*f_w0 [side {self.side:+d}]"


def induced_eval(v: InducedVec, g: GroupElem) -> LaurentPoly:
    """
    Evaluate an induced vector at g.

    On the Borel factor diag(t, 1/t) * u(x) the value is
    chi(t) * q^(-v(t)) * X^(side * v(t)), times lambda of the J factor.
    """
    decomp = cell_decompose(g)
    if decomp.cell is Cell.NEITHER:
        return LaurentPoly.zero()
    coeff = v.coeff_I2 if decomp.cell is Cell.BJ else v.coeff_w0
    if coeff.is_zero():
        return LaurentPoly.zero()
    chi = v.inducing
    t = decomp.torus_part.a
    k = int(t.valuation)
    value = coeff * chi(t) * lambda_eval(decomp.j_part, chi.unit_part) * Fraction(v.ctx.q) ** (-k)
    return LaurentPoly.monomial(value, v.side * k)


def shell_integral(
    ctx: FieldContext,
    integrand: Integrand,
    r: int,
    depth: int,
    *,
    twist: PadicNum | None = None,
) -> LaurentPoly:
    """
    Integrate over the shell p^r Z_p^x with vol(Z_p) = 1.

    Args:
        ctx: Field context
        integrand: Function constant on cosets of p^(r + depth) in the shell
        r: Valuation of the shell
        depth: Constancy depth relative to the shell
        twist: If given, integrate integrand(x) * psi(twist * x)

    Returns:
        The integral as a Laurent polynomial
    """
    psi = AddChar()
    if twist is not None:
        radius = twist * ctx.uniformizer(r + depth)
        if not radius.valuation_at_least(0):
            return LaurentPoly.zero()
    origin = ctx.uniformizer(r)
    total = LaurentPoly.zero()
    for u in ctx.units(depth):
        x = origin * u
        value = integrand(x)
        if value.is_zero():
            continue
        if twist is not None:
            value = value * psi(twist * x)
        total = total + value
    return total * Fraction(ctx.q) ** (-(r + depth))


def truncated_integral(
    ctx: FieldContext,
    integrand: Integrand,
    depth_m: int,
    *,
    twist: PadicNum | None = None,
    constancy: Constancy | None = None,
) -> LaurentPoly:
    """Integral over Q_p truncated to shells -depth_m .. depth_m plus the ball."""
    if constancy is None:
        constancy = max(ctx.level, 1)
    total = LaurentPoly.zero()
    for r in range(-depth_m, depth_m + 1):
        local = constancy(r) if callable(constancy) else constancy
        total = total + shell_integral(ctx, integrand, r, local, twist=twist)
    ball = integrand(ctx.num(0)) * Fraction(ctx.q) ** (-(depth_m + 1))
    return total + ball


def principal_value(
    ctx: FieldContext,
    integrand: Integrand,
    depth_m: int,
    *,
    twist: PadicNum | None = None,
    constancy: Constancy | None = None,
    validate: bool = True,
) -> LaurentPoly:
    """
    Truncated integral checked for stability in the truncation and coset depths.

    Raises:
        UnstablePrincipalValue: If depth_m + 2 or a finer coset depth changes the value
    """
    local = constancy if constancy is not None else max(ctx.level, 1)
    value = truncated_integral(ctx, integrand, depth_m, twist=twist, constancy=local)
    if not validate:
        return value
    deeper = truncated_integral(ctx, integrand, depth_m + 2, twist=twist, constancy=local)
    if deeper != value:
        raise UnstablePrincipalValue(f"Depth {depth_m}: {value}; depth {depth_m + 2}: {deeper}")
    finer_local = (lambda r: local(r) + 1) if callable(local) else local + 1
    finer = truncated_integral(ctx, integrand, depth_m, twist=twist, constancy=finer_local)
    if finer != value:
        raise UnstablePrincipalValue(f"Finer cosets change {value} to {finer}")
    return value


def gauss_sum(eta: MultCharacter, psi: AddChar, c: PadicNum) -> CycNum:
    """
    tau(eta, psi, c): integral over Z_p^x of eta(1/x) * psi(-c x) dx.

    Summed over units modulo p^M with M = max(level, -v(c), 1), each with
    weight q^(-M).
    """
    ctx = c.ctx
    digits = max(eta.level, 1, 0 if c.valuation_at_least(0) else int(-c.valuation))
    inverse = eta.inverse()
    total = ctx.field.zero
    for u in ctx.units(digits):
        x = ctx.num(u)
        total = total + inverse.value_in(ctx.field, u) * psi(-(c * x))
    return total * Fraction(1, ctx.q ** digits)


def _omega_integrand(v: InducedVec) -> Integrand:
    w0 = GroupElem.w0(v.ctx)

    def integrand(x: PadicNum) -> LaurentPoly:
        return induced_eval(v, w0 * GroupElem.u(v.ctx, x))

    return integrand


def omega_shells(v: InducedVec, depth_m: int, psi: AddChar = AddChar()) -> dict[int, LaurentPoly]:
    """Contribution of each shell -depth_m .. depth_m to the Whittaker functional."""
    ctx = v.ctx
    twist = ctx.num(-psi.twist)
    integrand = _omega_integrand(v)
    local = max(ctx.level, 1)
    return {
        r: shell_integral(ctx, integrand, r, local, twist=twist)
        for r in range(-depth_m, depth_m + 1)
    }


def _depth(ctx: FieldContext, depth_m: int | None) -> int:
    depth_m = ctx.shell_depth if depth_m is None else depth_m
    if depth_m < ctx.level + 2:
        raise ValueError(f"Depth must be at least level + 2 = {ctx.level + 2}, got {depth_m}")
    return depth_m


def whittaker_omega(
    v: InducedVec,
    depth_m: int | None = None,
    psi: AddChar = AddChar(),
    *,
    validate: bool = True,
) -> LaurentPoly:
    """
    The Whittaker functional: integral over U of f(w0 u(x)) psi^-1(x) dx.

    The same functional serves both sides of the intertwining operator.

    Raises:
        ValueError: If depth_m is below level + 2
        UnstablePrincipalValue: If the truncation is not stable
    """
    ctx = v.ctx
    depth_m = _depth(ctx, depth_m)
    value = principal_value(
        ctx, _omega_integrand(v), depth_m, twist=ctx.num(-psi.twist), validate=validate
    )
    log.debug("Omega(%s) = %s", v, value)
    return value


def intertwine(v: InducedVec, w: Weyl = Weyl.W0, depth_m: int | None = None) -> InducedVec:
    """
    Apply A(w)(f)(g) = integral over U of f(w u(x) g) dx.

    The image lies on the opposite side; its coordinates are its values at
    I2 and w0.

    Raises:
        ValueError: If w is I2 or depth_m is below level + 2
        BasisResolutionFailure: If a value depends on s
        UnstablePrincipalValue: If the truncation is not stable
    """
    if w is Weyl.I2:
        raise ValueError("Intertwining operator needs w0 or its inverse")
    ctx = v.ctx
    depth_m = _depth(ctx, depth_m)
    wm = w.matrix(ctx)

    def value_at(g: GroupElem) -> CycNum:
        def integrand(x: PadicNum) -> LaurentPoly:
            return induced_eval(v, wm * GroupElem.u(ctx, x) * g)

        total = principal_value(ctx, integrand, depth_m)
        try:
            return total.constant_value(ctx.field.zero)
        except ValueError as e:
            raise BasisResolutionFailure(f"A({w.value})({v}) at {g}: {e}") from e

    image = InducedVec(
        ctx,
        value_at(GroupElem.identity(ctx)),
        value_at(GroupElem.w0(ctx)),
        v.character,
        -v.side,
    )
    log.debug("A(%s)(%s) = %s", w.value, v, image)
    return image


@dataclass(frozen=True)
class IntertwiningCoefficients:
    """
    Coordinates of the two intertwining images.

    a_* are the coordinates of A(w0)(f_I2), b_* those of A(w0^-1)(f_w0).
    ``b_w0_from_f_I2`` is the f_w0 coordinate of A(w0^-1)(f_I2), the value
    obtained if f_I2 is substituted for f_w0 in the second integral.
    """

    a_I2: CycNum
    a_w0: CycNum
    b_I2: CycNum
    b_w0: CycNum
    b_w0_from_f_I2: CycNum


class IntertwiningImages:
    """
    A(w0) and A(w0^-1) on the basis of one character.

    Each image is integrated on first use and shared afterwards.
    """

    def __init__(self, ctx: FieldContext, ext: ExtChar, depth_m: int | None = None) -> None:
        self.ctx = ctx
        self.ext = ext
        self.depth_m = _depth(ctx, depth_m)

    def _image(self, which: Weyl, w: Weyl) -> InducedVec:
        return intertwine(InducedVec.basis(self.ctx, self.ext, which), w, self.depth_m)

    @cached_property
    def forward_i2(self) -> InducedVec:
        """A(w0) f_I2."""
        return self._image(Weyl.I2, Weyl.W0)

    @cached_property
    def forward_w0(self) -> InducedVec:
        """A(w0) f_w0."""
        return self._image(Weyl.W0, Weyl.W0)

    @cached_property
    def backward_i2(self) -> InducedVec:
        """A(w0^-1) f_I2."""
        return self._image(Weyl.I2, Weyl.W0_INVERSE)

    @cached_property
    def backward_w0(self) -> InducedVec:
        """A(w0^-1) f_w0."""
        return self._image(Weyl.W0, Weyl.W0_INVERSE)

    def coefficients(self) -> IntertwiningCoefficients:
        forward, backward = self.forward_i2, self.backward_w0
        return IntertwiningCoefficients(
            forward.coeff_I2,
            forward.coeff_w0,
            backward.coeff_I2,
            backward.coeff_w0,
            self.backward_i2.coeff_w0,
        )

    @cached_property
    def composition(self) -> tuple[InducedVec, InducedVec]:
        """A(w0^-1) after A(w0), on f_I2 and on f_w0."""
        return (
            intertwine(self.forward_i2, Weyl.W0_INVERSE, self.depth_m),
            intertwine(self.forward_w0, Weyl.W0_INVERSE, self.depth_m),
        )


def intertwining_coefficients(
    ctx: FieldContext, ext: ExtChar, depth_m: int | None = None
) -> IntertwiningCoefficients:
    return IntertwiningImages(ctx, ext, depth_m).coefficients()


def plancherel_composition(
    ctx: FieldContext, ext: ExtChar, depth_m: int | None = None
) -> tuple[InducedVec, InducedVec]:
    """A(w0^-1) after A(w0), applied to f_I2 and to f_w0."""
    return IntertwiningImages(ctx, ext, depth_m).composition


def closed_form_local_coefficient(
    ctx: FieldContext, ext: ExtChar, psi: AddChar = AddChar()
) -> LaurentPoly:
    """ext(-p^n) * tau(eta, psi, p^-n) * q^n * X^n."""
    n = ext.level
    tau = gauss_sum(ext.unit_part, psi, ctx.uniformizer(-n))
    return LaurentPoly.monomial(ext(-ctx.uniformizer(n)) * tau * ctx.q ** n, n)


def local_coefficient(
    ctx: FieldContext,
    ext: ExtChar,
    psi: AddChar = AddChar(),
    depth_m: int | None = None,
    *,
    transported: InducedVec | None = None,
) -> LaurentPoly:
    """
    The local coefficient as Omega(f_I2) / Omega'(A(w0) f_I2).

    Args:
        transported: A(w0) f_I2 if already integrated; it does not depend on psi

    Raises:
        ValueError: If ``transported`` belongs to another character or side
        MismatchWithClosedForm: If the ratio is not a monomial or differs
            from :func:`closed_form_local_coefficient`
    """
    f = InducedVec.basis(ctx, ext, Weyl.I2)
    if transported is None:
        transported = intertwine(f, Weyl.W0, depth_m)
    elif transported.character != ext or transported.side != -f.side:
        raise ValueError(f"{transported} is not an image of A(w0) for {ext.label}")
    numerator = whittaker_omega(f, depth_m, psi)
    denominator = whittaker_omega(transported, depth_m, psi)
    if not denominator.is_monomial():
        raise MismatchWithClosedForm(f"Transported functional {denominator} is not a monomial")
    ratio = numerator / denominator
    expected = closed_form_local_coefficient(ctx, ext, psi)
    if ratio != expected:
        raise MismatchWithClosedForm(
            f"Local coefficient {ratio} differs from closed form {expected}"
        )
    log.info("C(%s, psi_%d) = %s", ext.label, psi.twist, ratio)
    return ratio


@dataclass(frozen=True)
class LocalFactors:
    """
    Local factors and the identities between them.

    Attributes:
        L: The L-factor, identically 1
        epsilon_factor: The local coefficient
        fe_product: C(s) * C(1 - s) for the inverse character
        plancherel: Inverse of the intertwining composition scalar
        square_root_product: C_psi(s) * C_psi^-1(-s) for the inverse character
        intertwining: Coordinates of the intertwining images
    """

    L: LaurentPoly
    epsilon_factor: LaurentPoly
    fe_product: CycNum
    plancherel: LaurentPoly
    square_root_product: CycNum
    intertwining: IntertwiningCoefficients


def factors_and_equations(
    ctx: FieldContext,
    ext: ExtChar,
    depth_m: int | None = None,
    *,
    images: IntertwiningImages | None = None,
) -> LocalFactors:
    """
    Compute the local factors and check the composition is a scalar.

    For a self-dual character the dual coefficient and images are reused.

    Raises:
        MismatchWithClosedForm: If a product is not constant in X or the
            intertwining composition is not scalar
    """
    zero = ctx.field.zero
    psi = AddChar()
    if images is None:
        images = IntertwiningImages(ctx, ext, depth_m)
    coefficient = local_coefficient(ctx, ext, psi, depth_m, transported=images.forward_i2)

    dual_ext = ext.inverse()
    if dual_ext == ext:
        dual_images, dual = images, coefficient
    else:
        dual_images = IntertwiningImages(ctx, dual_ext, depth_m)
        dual = local_coefficient(ctx, dual_ext, psi, depth_m, transported=dual_images.forward_i2)
    dual_psi = local_coefficient(
        ctx, dual_ext, psi.inverse(), depth_m, transported=dual_images.forward_i2
    )
    try:
        fe_product = (coefficient * dual.reflect(ctx.q)).constant_value(zero)
        square_root = (coefficient * dual_psi.negate_s()).constant_value(zero)
    except ValueError as e:
        raise MismatchWithClosedForm(str(e)) from e

    on_i2, on_w0 = images.composition
    scalar = on_i2.coeff_I2
    if not (on_i2.coeff_w0.is_zero() and on_w0.coeff_I2.is_zero() and on_w0.coeff_w0 == scalar):
        raise MismatchWithClosedForm(f"Intertwining composition is not scalar: {on_i2}, {on_w0}")

    return LocalFactors(
        L=LaurentPoly.constant(ctx.field.one),
        epsilon_factor=coefficient,
        fe_product=fe_product,
        plancherel=LaurentPoly.constant(scalar.inverse()),
        square_root_product=square_root,
        intertwining=images.coefficients(),
    )
