"""
The Hecke algebra of (K, lambda) and its action on the Gelfand-Graev space.

Both the algebra and the isotypic Whittaker space are two dimensional.
Convolutions and actions are brute-force sums over the right J-cosets
{I} and u(t) w0 of J and J w0 J, resolved in the basis by evaluating at
I2 and w0 and then confirmed at further check points.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Union

from .cyclo import CycNum
from .errors import BasisResolutionFailure, NotInK, UnstablePrincipalValue
from .integrate import gauss_sum, shell_integral, truncated_integral
from .laurent import LaurentPoly
from .localfield import AddChar, ExtChar, FieldContext, MultCharacter, PadicNum
from .sl2 import (
    Cell,
    DoubleCoset,
    GroupElem,
    Subgroup,
    cell_decompose,
    classify_in_k,
    coset_reps_Jw0J,
    in_subgroup,
    lambda_eval,
    random_k,
)

log = logging.getLogger(__name__)

Scalar = Union[CycNum, int, Fraction]


@dataclass(frozen=True, eq=False)
class HeckeOp:
    """
    coeff_I2 * T_I2 + coeff_w0 * T_w0 in the Hecke algebra of (K, lambda).

    Attributes:
        ctx: Field context
        eta: Unit character defining lambda on J
        coeff_I2: Coordinate on the operator supported on J
        coeff_w0: Coordinate on the operator supported on J w0 J
    """

    ctx: FieldContext
    eta: MultCharacter
    coeff_I2: CycNum
    coeff_w0: CycNum

    @classmethod
    def t_i2(cls, ctx: FieldContext, eta: MultCharacter) -> HeckeOp:
        return cls(ctx, eta, ctx.field.one, ctx.field.zero)

    @classmethod
    def t_w0(cls, ctx: FieldContext, eta: MultCharacter) -> HeckeOp:
        return cls(ctx, eta, ctx.field.zero, ctx.field.one)

    def __add__(self, other: HeckeOp) -> HeckeOp:
        return HeckeOp(
            self.ctx, self.eta, self.coeff_I2 + other.coeff_I2, self.coeff_w0 + other.coeff_w0
        )

    def __mul__(self, scalar: Scalar) -> HeckeOp:
        return HeckeOp(self.ctx, self.eta, self.coeff_I2 * scalar, self.coeff_w0 * scalar)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeOp):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.eta == other.eta
            and self.coeff_I2 == other.coeff_I2
            and self.coeff_w0 == other.coeff_w0
        )

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return f"({self.coeff_I2})*T_I2 + ({self.coeff_w0})*T_w0"


@dataclass(frozen=True, eq=False)
class WhittakerVec:
    """
    coeff_I2 * phi_I2 + coeff_w0 * phi_w0 in the isotypic Gelfand-Graev space.

    Attributes:
        ctx: Field context
        eta: Unit character defining lambda on J
        coeff_I2: Coordinate on the function supported on U J
        coeff_w0: Coordinate on the function supported on U w0 J
        psi: Additive character of U
    """

    ctx: FieldContext
    eta: MultCharacter
    coeff_I2: CycNum
    coeff_w0: CycNum
    psi: AddChar = AddChar()

    @classmethod
    def phi_i2(cls, ctx: FieldContext, eta: MultCharacter, psi: AddChar = AddChar()) -> WhittakerVec:
        return cls(ctx, eta, ctx.field.one, ctx.field.zero, psi)

    @classmethod
    def phi_w0(cls, ctx: FieldContext, eta: MultCharacter, psi: AddChar = AddChar()) -> WhittakerVec:
        return cls(ctx, eta, ctx.field.zero, ctx.field.one, psi)

    def __add__(self, other: WhittakerVec) -> WhittakerVec:
        return WhittakerVec(
            self.ctx,
            self.eta,
            self.coeff_I2 + other.coeff_I2,
            self.coeff_w0 + other.coeff_w0,
            self.psi,
        )

    def __mul__(self, scalar: Scalar) -> WhittakerVec:
        return WhittakerVec(
            self.ctx, self.eta, self.coeff_I2 * scalar, self.coeff_w0 * scalar, self.psi
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WhittakerVec):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.eta == other.eta
            and self.psi == other.psi
            and self.coeff_I2 == other.coeff_I2
            and self.coeff_w0 == other.coeff_w0
        )

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return f"({self.coeff_I2})*phi_I2 + ({self.coeff_w0})*phi_w0"


@dataclass(frozen=True, eq=False)
class TorusFn:
    """
    Finitely supported function on the torus, keyed by t = diag(p^k u, .).

    Attributes:
        ctx: Field context
        values: Map from (k, unit residue u mod p^n) to nonzero value
    """

    ctx: FieldContext
    values: Mapping[tuple[int, int], CycNum] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", {key: v for key, v in self.values.items() if not v.is_zero()}
        )

    def __getitem__(self, key: tuple[int, int]) -> CycNum:
        return self.values.get(key, self.ctx.field.zero)

    def support(self) -> set[int]:
        """Torus valuations k carrying a nonzero value."""
        return {k for k, _ in self.values}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TorusFn):
            return NotImplemented
        return self.ctx == other.ctx and dict(self.values) == dict(other.values)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.values:
            return "0"
        return ", ".join(f"t(p^{k}*{u}): {self.values[(k, u)]}" for k, u in sorted(self.values))


@dataclass(frozen=True)
class RadicalScalar:
    """
    a + b * sigma with sigma^2 = radicand, for exact normalized operators.

    Attributes:
        a: Rational part
        b: Coefficient of sigma
        radicand: The square of sigma
    """

    a: CycNum
    b: CycNum
    radicand: CycNum

    @classmethod
    def of(cls, value: CycNum, radicand: CycNum) -> RadicalScalar:
        return cls(value, value.field.zero, radicand)

    @classmethod
    def sigma(cls, radicand: CycNum) -> RadicalScalar:
        return cls(radicand.field.zero, radicand.field.one, radicand)

    def __add__(self, other: RadicalScalar) -> RadicalScalar:
        return RadicalScalar(self.a + other.a, self.b + other.b, self.radicand)

    def __neg__(self) -> RadicalScalar:
        return RadicalScalar(-self.a, -self.b, self.radicand)

    def __mul__(self, other: RadicalScalar | Scalar) -> RadicalScalar:
        if not isinstance(other, RadicalScalar):
            return RadicalScalar(self.a * other, self.b * other, self.radicand)
        return RadicalScalar(
            self.a * other.a + self.b * other.b * self.radicand,
            self.a * other.b + self.b * other.a,
            self.radicand,
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RadicalScalar):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.radicand == other.radicand

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.radicand))

    def __str__(self) -> str:
        return f"({self.a}) + ({self.b})*sqrt({self.radicand})"


def hecke_eval(T: HeckeOp, g: GroupElem) -> CycNum:
    """
    Value of a Hecke operator at g in K.

    T_I2(j) = lambda(j)^-1 on J; T_w0(u(t) w0 j) = lambda(j)^-1 on J w0 J;
    both vanish on the intermediate double cosets.

    Raises:
        NotInK: If g is not integral
    """
    ctx = g.ctx
    if not in_subgroup(g, Subgroup.K):
        raise NotInK(f"{g} is not in K")
    inverse = T.eta.inverse()
    match classify_in_k(g):
        case DoubleCoset.J:
            if T.coeff_I2.is_zero():
                return ctx.field.zero
            return T.coeff_I2 * inverse(g.a)
        case DoubleCoset.JW0J:
            if T.coeff_w0.is_zero():
                return ctx.field.zero
            t = (g.a / g.c).residue(ctx.level)
            j = (GroupElem.u(ctx, t) * GroupElem.w0(ctx)).inverse() * g
            if not in_subgroup(j, Subgroup.J):
                raise BasisResolutionFailure(f"{g} is not in u({t}) w0 J")
            return T.coeff_w0 * inverse(j.a)
    return ctx.field.zero


def _all_reps(ctx: FieldContext) -> list[GroupElem]:
    return [GroupElem.identity(ctx)] + coset_reps_Jw0J(ctx)


def _check_points(ctx: FieldContext) -> list[GroupElem]:
    """Fixed elements used to confirm a basis resolution."""
    n = ctx.level
    p = ctx.p
    unit = p - 1 if p > 2 else 3
    points = [
        GroupElem.torus(ctx, unit) * GroupElem.ubar(ctx, p ** n),
        GroupElem.u(ctx, 1) * GroupElem.w0(ctx) * GroupElem.ubar(ctx, p ** n * unit),
        -GroupElem.w0(ctx),
    ]
    if n >= 2:
        points.append(GroupElem.ubar(ctx, p))
    return points


def _whittaker_check_points(ctx: FieldContext) -> list[GroupElem]:
    p = ctx.p
    points = _check_points(ctx)
    points.extend(
        [
            GroupElem.u(ctx, Fraction(1, p)) * GroupElem.torus(ctx, p - 1 if p > 2 else 3),
            GroupElem.u(ctx, Fraction(1, p)) * GroupElem.w0(ctx) * GroupElem.u(ctx, 1),
            GroupElem.torus(ctx, p),
            GroupElem.torus(ctx, Fraction(1, p)) * GroupElem.w0(ctx),
        ]
    )
    return points


def _confirm(
    name: str,
    resolved: Callable[[GroupElem], CycNum],
    brute: Callable[[GroupElem], CycNum],
    points: list[GroupElem],
) -> None:
    for g in points:
        if resolved(g) != brute(g):
            raise BasisResolutionFailure(
                f"{name} at {g}: basis gives {resolved(g)}, coset sum gives {brute(g)}"
            )


def convolve(A: HeckeOp, B: HeckeOp) -> HeckeOp:
    """
    (A * B)(y) = sum over right J-coset reps r of A(r) B(r^-1 y), vol(J) = 1.

    Raises:
        BasisResolutionFailure: If the result leaves the two-dimensional span
    """
    ctx = A.ctx
    reps = _all_reps(ctx)

    def brute(y: GroupElem) -> CycNum:
        total = ctx.field.zero
        for r in reps:
            left = hecke_eval(A, r)
            if not left.is_zero():
                total = total + left * hecke_eval(B, r.inverse() * y)
        return total

    result = HeckeOp(
        ctx, A.eta, brute(GroupElem.identity(ctx)), brute(GroupElem.w0(ctx))
    )
    _confirm(f"({A}) * ({B})", lambda g: hecke_eval(result, g), brute, _check_points(ctx))
    log.debug("(%s) * (%s) = %s", A, B, result)
    return result


def whittaker_eval(v: WhittakerVec, g: GroupElem) -> CycNum:
    """
    Value of a Gelfand-Graev vector at g.

    g is in U J (resp. U w0 J) exactly when it is in BJ (resp. Bw0J) with a
    unit torus part. Writing g = t u(x) j or t u(x) w0 j, the values are
    psi(t^2 x) eta(t) lambda(j) and psi(t^2 x) eta(1/t) lambda(j).
    """
    ctx = g.ctx
    decomp = cell_decompose(g)
    if decomp.cell is Cell.NEITHER or not decomp.torus_part.is_unit():
        return ctx.field.zero
    coeff = v.coeff_I2 if decomp.cell is Cell.BJ else v.coeff_w0
    if coeff.is_zero():
        return coeff
    t = decomp.torus_part.a
    shift = v.psi(t * t * decomp.unipotent_b_part)
    torus = v.eta(t) if decomp.cell is Cell.BJ else v.eta(t.inverse())
    return coeff * shift * torus * lambda_eval(decomp.j_part, v.eta)


def in_whittaker_support(g: GroupElem) -> bool:
    """Whether g lies in U J or U w0 J, the support of every Gelfand-Graev vector."""
    decomp = cell_decompose(g)
    return decomp.cell is not Cell.NEITHER and decomp.torus_part.is_unit()


def random_outside_support(ctx: FieldContext, rng: random.Random, count: int) -> list[GroupElem]:
    """
    Random elements t u(x) k of G off U J and U w0 J.

    A torus part of nonzero valuation leaves U K; for level >= 2 the
    intermediate double cosets of K give samples inside U K as well.
    """
    p = ctx.p
    found: list[GroupElem] = []
    while len(found) < count:
        k, _kind = random_k(ctx, rng)
        t = ctx.uniformizer(rng.randint(-2, 2)) * rng.choice(ctx.units(1))
        x = Fraction(rng.randrange(p ** 2), p ** rng.randint(0, 2))
        g = GroupElem.torus(ctx, t) * GroupElem.u(ctx, x) * k
        if not in_whittaker_support(g):
            found.append(g)
    return found


def action_sum(T: HeckeOp, v: WhittakerVec) -> Callable[[GroupElem], CycNum]:
    """g -> sum over right J-coset reps r of T(r) phi(g r), vol(J) = 1."""
    ctx = v.ctx
    weights = []
    for r in _all_reps(ctx):
        weight = hecke_eval(T, r)
        if not weight.is_zero():
            weights.append((r, weight))

    def total(g: GroupElem) -> CycNum:
        value = ctx.field.zero
        for r, weight in weights:
            value = value + weight * whittaker_eval(v, g * r)
        return value

    return total


def act(T: HeckeOp, v: WhittakerVec) -> WhittakerVec:
    """
    T * phi through :func:`action_sum`, resolved in the basis at I2 and w0.

    Raises:
        BasisResolutionFailure: If the result leaves the two-dimensional span
    """
    ctx = v.ctx
    brute = action_sum(T, v)
    result = WhittakerVec(
        ctx, v.eta, brute(GroupElem.identity(ctx)), brute(GroupElem.w0(ctx)), v.psi
    )
    _confirm(
        f"({T}) * ({v})", lambda g: whittaker_eval(result, g), brute, _whittaker_check_points(ctx)
    )
    log.debug("(%s) * (%s) = %s", T, v, result)
    return result


@dataclass(frozen=True)
class Identity:
    """One checked identity with both sides rendered."""

    name: str
    lhs: str
    rhs: str
    holds: bool


@dataclass
class SignActionResult:
    """Outcome of :func:`verify_sign_action`."""

    identities: list[Identity] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.holds for i in self.identities)

    def record(
        self, name: str, lhs: object, rhs: object, show: Callable[[object], str] = str
    ) -> None:
        holds = lhs == rhs
        if not holds:
            log.error("%s fails: %s != %s", name, show(lhs), show(rhs))
        self.identities.append(Identity(name, show(lhs), show(rhs), holds))


def verify_sign_action(
    ctx: FieldContext, ext: ExtChar, seed: int = 0, samples: int = 3
) -> SignActionResult:
    """
    Check the unnormalized action identities and their normalized consequences.

    With sigma^2 = eps * q^-n, the normalized operator sigma * T_w0 squares
    to T_I2 and scales the generator phi_I2 - eps * sigma * phi_w0 by -1.
    sigma is kept symbolic, so no branch of the square root is chosen.
    Seeded random operators A, B, C and vectors v also check
    (A * B) * v = A * (B * v) and (A * B) * C = A * (B * C).
    """
    eta = ext.unit_part
    eps = ext.epsilon
    qn = ctx.q ** ctx.level
    t_i2 = HeckeOp.t_i2(ctx, eta)
    t_w0 = HeckeOp.t_w0(ctx, eta)
    phi_i2 = WhittakerVec.phi_i2(ctx, eta)
    phi_w0 = WhittakerVec.phi_w0(ctx, eta)
    result = SignActionResult()

    on_i2 = act(t_w0, phi_i2)
    on_w0 = act(t_w0, phi_w0)
    square = convolve(t_w0, t_w0)
    result.record("T_w0 * phi_I2 = eps * phi_w0", on_i2, phi_w0 * eps)
    result.record("T_w0 * phi_w0 = q^n * phi_I2", on_w0, phi_i2 * qn)
    result.record("T_w0 * T_w0 = eps * q^n * T_I2", square, t_i2 * (eps * qn))

    rng = random.Random(seed)

    def random_op() -> HeckeOp:
        return t_i2 * rng.randint(-9, 9) + t_w0 * rng.randint(-9, 9)

    for i in range(samples):
        v = phi_i2 * rng.randint(-9, 9) + phi_w0 * rng.randint(-9, 9)
        result.record(
            f"T_w0 * (T_w0 * v{i}) = eps * q^n * v{i}", act(t_w0, act(t_w0, v)), v * (eps * qn)
        )
        a, b, c = random_op(), random_op(), random_op()
        ab = convolve(a, b)
        result.record(
            f"(A{i} * B{i}) * v{i} = A{i} * (B{i} * v{i})", act(ab, v), act(a, act(b, v))
        )
        result.record(
            f"(A{i} * B{i}) * C{i} = A{i} * (B{i} * C{i})",
            convolve(ab, c),
            convolve(a, convolve(b, c)),
        )

    radicand = ctx.scalar(Fraction(eps, qn))
    sigma = RadicalScalar.sigma(radicand)

    def lift(x: CycNum) -> RadicalScalar:
        return RadicalScalar.of(x, radicand)

    # columns of T_w0 in the basis (phi_I2, phi_w0)
    matrix = (
        (lift(on_i2.coeff_I2), lift(on_w0.coeff_I2)),
        (lift(on_i2.coeff_w0), lift(on_w0.coeff_w0)),
    )
    generator = (lift(ctx.field.one), sigma * (-eps))
    image = tuple(sigma * (row[0] * generator[0] + row[1] * generator[1]) for row in matrix)
    result.record(
        "T*_w0 * v* = -v*",
        image,
        tuple(-x for x in generator),
        show=lambda vec: f"({vec[0]})*phi_I2 + ({vec[1]})*phi_w0",
    )
    sigma_sq = sigma * sigma
    result.record(
        "T*_w0 * T*_w0 = T*_I2",
        (sigma_sq * lift(square.coeff_I2), sigma_sq * lift(square.coeff_w0)),
        (lift(ctx.field.one), lift(ctx.field.zero)),
        show=lambda vec: f"({vec[0]})*T_I2 + ({vec[1]})*T_w0",
    )
    result.record("T_I2 * phi_w0 = phi_w0", act(t_i2, phi_w0), phi_w0)
    return result


def s_delta_project(
    v: WhittakerVec,
    torus_range: int = 3,
    depth: int | None = None,
) -> TorusFn:
    """
    t -> delta^(1/2)(t) * integral over Ubar of phi(t ubar(x)) dx.

    Evaluated at t = diag(p^k u, .) for |k| <= torus_range and u over units mod
    p^n. The integral is truncated at span = max(depth, torus_range) and
    confirmed at span + 2, which only adds the shells of valuation
    +-(span + 1), +-(span + 2) and shrinks the ball around 0.

    Raises:
        UnstablePrincipalValue: If the two depths disagree
    """
    ctx = v.ctx
    depth = ctx.shell_depth if depth is None else depth
    if torus_range < 2:
        raise ValueError(f"Torus range must be at least 2, got {torus_range}")
    if depth < ctx.level + 2:
        raise ValueError(f"Depth must be at least level + 2 = {ctx.level + 2}, got {depth}")
    span = max(depth, torus_range)
    outer = (-span - 2, -span - 1, span + 1, span + 2)
    q = Fraction(ctx.q)
    # only the shell v(x) = k needs cosets finer than p^(r + n)
    coarse = max(ctx.level, 1)

    values: dict[tuple[int, int], CycNum] = {}
    for k in range(-torus_range, torus_range + 1):
        fine = max(ctx.level, -k, 1)

        def local(r: int, k: int = k) -> int:
            return fine if r == k else coarse

        for u in ctx.units(ctx.level):
            t = GroupElem.torus(ctx, ctx.uniformizer(k) * u)

            def integrand(x: PadicNum, t: GroupElem = t) -> LaurentPoly:
                return LaurentPoly.constant(whittaker_eval(v, t * GroupElem.ubar(ctx, x)))

            total = truncated_integral(ctx, integrand, span, constancy=local)
            drift = integrand(ctx.num(0)) * (q ** (-span - 3) - q ** (-span - 1))
            for r in outer:
                drift = drift + shell_integral(ctx, integrand, r, local(r))
            if not drift.is_zero():
                raise UnstablePrincipalValue(
                    f"Projection at t(p^{k}*{u}) changed by {drift} between depths "
                    f"{span} and {span + 2}"
                )
            values[(k, u)] = total.constant_value(ctx.field.zero) * q ** (-k)

    result = TorusFn(ctx, values)
    log.debug("Projection of %s: %s", v, result)
    return result


def reference_ch(ctx: FieldContext, eta: MultCharacter) -> TorusFn:
    """vol(Ubar meet J) * eta(t) on the unit torus, zero elsewhere."""
    volume = Fraction(1, ctx.q ** ctx.level)
    return TorusFn(
        ctx, {(0, u): eta.value_in(ctx.field, u) * volume for u in ctx.units(ctx.level)}
    )


def w0_projection_closed_form(
    ctx: FieldContext, eta: MultCharacter, torus_range: int = 3, psi: AddChar = AddChar()
) -> TorusFn:
    """
    Closed form of the projection of phi_w0: q^(-2k) * eta(u) * tau(eta, psi, -p^k)
    at t = diag(p^k u, .) for k <= 0.
    """
    values = {}
    for k in range(-torus_range, 1):
        tau = gauss_sum(eta, psi, -ctx.uniformizer(k))
        for u in ctx.units(ctx.level):
            values[(k, u)] = tau * eta.value_in(ctx.field, u) * Fraction(ctx.q) ** (-2 * k)
    return TorusFn(ctx, values)
