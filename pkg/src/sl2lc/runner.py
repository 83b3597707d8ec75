"""
Suite runner.

Each configuration (prime, ramified quadratic character, extension) is an
independent task that runs its checks in order and returns a
:class:`~sl2lc.report.ConfigResult`. A single collector assembles the
report in a fixed order, so the output does not depend on scheduling.
"""

from __future__ import annotations

import asyncio
import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable

from sympy import multiplicity

from . import anchors
from .config import RunConfig
from .cyclo import CyclotomicField, CycNum, cyc_reduce
from .errors import ConfigurationError
from .hecke import (
    HeckeOp,
    WhittakerVec,
    action_sum,
    convolve,
    hecke_eval,
    random_outside_support,
    reference_ch,
    s_delta_project,
    verify_sign_action,
    w0_projection_closed_form,
    whittaker_eval,
)
from .integrate import (
    InducedVec,
    IntertwiningImages,
    LocalFactors,
    Weyl,
    closed_form_local_coefficient,
    factors_and_equations,
    gauss_sum,
    induced_eval,
    omega_shells,
    whittaker_omega,
)
from .laurent import LaurentPoly
from .localfield import AddChar, ExtChar, FieldContext, ramified_quadratic_chars
from .report import CheckRecord, ConfigResult, Report, Status, Value
from .sl2 import (
    Cell,
    DoubleCoset,
    GroupElem,
    bruhat_lower,
    cell_decompose,
    classify_in_k,
    random_k,
)

log = logging.getLogger(__name__)

PROPERTY_CASES = 100
IOTA_SAMPLES = 50
SUPPORT_SAMPLES = 30
K_PARTITION_SAMPLES = 200


@dataclass(frozen=True)
class Outcome:
    """Both sides of a check and whether it holds."""

    lhs: object
    rhs: object
    holds: bool

    @classmethod
    def compare(cls, lhs: object, rhs: object) -> Outcome:
        return cls(lhs, rhs, lhs == rhs)

    @classmethod
    def count(cls, passed: int, total: int) -> Outcome:
        return cls(f"{passed}/{total} cases", f"{total}/{total} cases", passed == total)


def _show(values: dict[str, object]) -> str:
    return ", ".join(f"{k}={v}" for k, v in values.items())


class Workspace:
    """
    Shared state of one configuration.

    Results used by several checks are computed once.
    """

    def __init__(self, cfg: RunConfig, p: int, ext: ExtChar) -> None:
        self.cfg = cfg
        self.ext = ext
        self.eta = ext.unit_part
        self.ctx = FieldContext.create(p, ext.level, cfg.shell_depth)
        self.eps = ext.epsilon
        self.qn = self.ctx.q ** self.ctx.level
        self.psi = AddChar()

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.cfg.seed}:{self.ctx.p}:{self.ext.label}:{salt}")

    def scalar(self, value: int | Fraction) -> CycNum:
        return self.ctx.scalar(value)

    def basis(self, which: Weyl) -> InducedVec:
        return InducedVec.basis(self.ctx, self.ext, which)

    @cached_property
    def images(self) -> IntertwiningImages:
        return IntertwiningImages(self.ctx, self.ext)

    @cached_property
    def factors(self) -> LocalFactors:
        return factors_and_equations(self.ctx, self.ext, images=self.images)

    @cached_property
    def tau(self) -> CycNum:
        return gauss_sum(self.eta, self.psi, self.ctx.uniformizer(-self.ctx.level))

    @cached_property
    def t_i2(self) -> HeckeOp:
        return HeckeOp.t_i2(self.ctx, self.eta)

    @cached_property
    def t_w0(self) -> HeckeOp:
        return HeckeOp.t_w0(self.ctx, self.eta)


# -----------------------------------------------------------------------------
# Local coefficient
# -----------------------------------------------------------------------------


def check_local_coefficient(ws: Workspace) -> Outcome:
    return Outcome.compare(
        ws.factors.epsilon_factor, closed_form_local_coefficient(ws.ctx, ws.ext, ws.psi)
    )


def check_whittaker_denominator(ws: Workspace) -> Outcome:
    return Outcome.compare(
        whittaker_omega(ws.images.forward_i2, psi=ws.psi),
        LaurentPoly.constant(ws.scalar(Fraction(ws.eps, ws.qn))),
    )


def check_shell_vanishing(ws: Workspace) -> Outcome:
    shells = omega_shells(ws.basis(Weyl.I2), ws.ctx.level + 4, ws.psi)
    support = sorted(r for r, value in shells.items() if not value.is_zero())
    return Outcome.compare(support, [-ws.ctx.level])


def check_principal_value_stability(ws: Workspace) -> Outcome:
    """Random combinations of the basis at random depths agree with depth m."""
    ctx = ws.ctx
    rng = ws.rng("principal-value")
    base = {
        which: whittaker_omega(ws.basis(which), psi=ws.psi, validate=False)
        for which in (Weyl.I2, Weyl.W0)
    }
    passed = 0
    for _ in range(PROPERTY_CASES):
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        v = InducedVec(ctx, ws.scalar(a), ws.scalar(b), ws.ext)
        depth = ctx.shell_depth + rng.randrange(3)
        value = whittaker_omega(v, depth, ws.psi, validate=False)
        passed += value == base[Weyl.I2] * a + base[Weyl.W0] * b
    return Outcome.count(passed, PROPERTY_CASES)


# -----------------------------------------------------------------------------
# Intertwining and functional equations
# -----------------------------------------------------------------------------


def check_intertwining(ws: Workspace) -> Outcome:
    c = ws.factors.intertwining
    zero = ws.ctx.field.zero
    lhs = {
        "a_I2": c.a_I2,
        "a_w0": c.a_w0,
        "b_I2": c.b_I2,
        "b_w0": c.b_w0,
        "b_w0[f_I2]": c.b_w0_from_f_I2,
    }
    rhs = {
        "a_I2": zero,
        "a_w0": ws.scalar(Fraction(ws.eps, ws.qn)),
        "b_I2": ws.scalar(ws.eps),
        "b_w0": zero,
        "b_w0[f_I2]": ws.scalar(Fraction(1, ws.qn)),
    }
    return Outcome(_show(lhs), _show(rhs), lhs == rhs)


def check_plancherel(ws: Workspace) -> Outcome:
    return Outcome.compare(ws.factors.plancherel, LaurentPoly.constant(ws.scalar(ws.qn)))


def check_functional_equation(ws: Workspace) -> Outcome:
    return Outcome.compare(ws.factors.fe_product, ws.scalar(ws.eps))


def check_square_root(ws: Workspace) -> Outcome:
    ctx = ws.ctx
    dual = gauss_sum(ws.eta.inverse(), ws.psi.inverse(), ctx.uniformizer(-ctx.level))
    product = ws.tau * dual
    expected = ws.scalar(Fraction(1, ws.qn))
    modulus = abs(ws.factors.epsilon_factor.leading.embed()) ** 2
    holds = (
        product == expected
        and ws.factors.square_root_product == ws.scalar(ws.qn)
        and math.isclose(modulus, ws.qn, abs_tol=1e-9)
    )
    return Outcome(product, expected, holds)


# -----------------------------------------------------------------------------
# Gauss sums
# -----------------------------------------------------------------------------


def check_gauss_sum_modulus(ws: Workspace) -> Outcome:
    return Outcome.compare(ws.tau * ws.tau.conjugate(), ws.scalar(Fraction(1, ws.qn)))


def check_gauss_sum_support(ws: Workspace) -> Outcome:
    n = ws.ctx.level
    values = {
        f"v(c)={k}": gauss_sum(ws.eta, ws.psi, ws.ctx.uniformizer(k))
        for k in (-n - 2, -n - 1, -n + 1)
    }
    zero = ws.ctx.field.zero
    holds = all(v.is_zero() for v in values.values())
    return Outcome(_show(values), _show({k: zero for k in values}), holds)


# -----------------------------------------------------------------------------
# Hecke algebra
# -----------------------------------------------------------------------------


def check_hecke_square(ws: Workspace) -> Outcome:
    return Outcome.compare(convolve(ws.t_w0, ws.t_w0), ws.t_i2 * (ws.eps * ws.qn))


def check_hecke_basis_closure(ws: Workspace) -> Outcome:
    lhs = (convolve(ws.t_i2, ws.t_i2), convolve(ws.t_i2, ws.t_w0), convolve(ws.t_w0, ws.t_i2))
    rhs = (ws.t_i2, ws.t_w0, ws.t_w0)
    return Outcome("; ".join(map(str, lhs)), "; ".join(map(str, rhs)), lhs == rhs)


def check_iota_compatibility(ws: Workspace) -> Outcome:
    """Restricted to K, each induced basis vector is a Hecke basis operator."""
    ctx = ws.ctx
    rng = ws.rng("iota")
    dual = ws.eta.inverse()
    operators = {Weyl.I2: HeckeOp.t_i2(ctx, dual), Weyl.W0: HeckeOp.t_w0(ctx, dual)}
    passed = total = 0
    for _ in range(IOTA_SAMPLES):
        k, _kind = random_k(ctx, rng)
        for which, op in operators.items():
            total += 1
            passed += induced_eval(ws.basis(which), k) == LaurentPoly.constant(hecke_eval(op, k))
    return Outcome.count(passed, total)


# -----------------------------------------------------------------------------
# Gelfand-Graev space
# -----------------------------------------------------------------------------


def check_sign_action(ws: Workspace) -> Outcome:
    result = verify_sign_action(ws.ctx, ws.ext, seed=ws.cfg.seed)
    failed = [i.name for i in result.identities if not i.holds]
    total = len(result.identities)
    lhs = f"{total - len(failed)}/{total} identities"
    if failed:
        lhs += f" (failed: {', '.join(failed)})"
    return Outcome(lhs, f"{total}/{total} identities", result.passed)


def check_s_delta(ws: Workspace) -> Outcome:
    ctx, r = ws.ctx, ws.cfg.torus_range
    on_i2 = s_delta_project(WhittakerVec.phi_i2(ctx, ws.eta, ws.psi), r)
    on_w0 = s_delta_project(WhittakerVec.phi_w0(ctx, ws.eta, ws.psi), r)
    expected_i2 = reference_ch(ctx, ws.eta)
    expected_w0 = w0_projection_closed_form(ctx, ws.eta, r, ws.psi)
    return Outcome(
        f"phi_I2 -> {on_i2}; phi_w0 -> {on_w0}",
        f"phi_I2 -> {expected_i2}; phi_w0 -> {expected_w0}",
        on_i2 == expected_i2 and on_w0 == expected_w0,
    )


def check_whittaker_support(ws: Workspace) -> Outcome:
    """T_w0 * phi vanishes off U J and U w0 J; -I2 acts on every phi by eps."""
    ctx = ws.ctx
    rng = ws.rng("whittaker-support")
    basis = (
        WhittakerVec.phi_i2(ctx, ws.eta, ws.psi),
        WhittakerVec.phi_w0(ctx, ws.eta, ws.psi),
    )
    images = [action_sum(ws.t_w0, phi) for phi in basis]
    passed = total = 0
    for g in random_outside_support(ctx, rng, SUPPORT_SAMPLES):
        total += 1
        passed += all(image(g).is_zero() for image in images)

    minus = -GroupElem.identity(ctx)
    for _ in range(SUPPORT_SAMPLES):
        v = basis[0] * rng.randint(-9, 9) + basis[1] * rng.randint(-9, 9)
        k, _kind = random_k(ctx, rng)
        g = GroupElem.u(ctx, Fraction(rng.randrange(ctx.p ** 2), ctx.p)) * k
        total += 1
        passed += whittaker_eval(v, g * minus) == whittaker_eval(v, g) * ws.eps
    return Outcome.count(passed, total)


# -----------------------------------------------------------------------------
# Randomized properties
# -----------------------------------------------------------------------------


def _random_cyc(field: CyclotomicField, rng: random.Random, terms: int = 3) -> CycNum:
    return field.element(
        {
            rng.randrange(field.order): Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            for _ in range(terms)
        }
    )


def check_cyclotomic_axioms(ws: Workspace) -> Outcome:
    """Ring and conjugation laws in the working field, inverses in a small one."""
    rng = ws.rng("cyclotomic")
    big = ws.ctx.field
    small = CyclotomicField(math.lcm(ws.ctx.p, 4))
    passed = 0
    for _ in range(PROPERTY_CASES):
        a, b, c = (_random_cyc(big, rng) for _ in range(3))
        ring = (
            (a + b) + c == a + (b + c)
            and (a * b) * c == a * (b * c)
            and a * b == b * a
            and a * (b + c) == a * b + a * c
            and (a - a).is_zero()
            and a * big.one == a
        )
        norm = (a * a.conjugate()).embed()
        conjugation = a.conjugate().conjugate() == a and math.isclose(
            norm.imag, 0.0, abs_tol=1e-9 * max(1.0, abs(norm))
        )
        raw = {
            rng.randrange(-2 * big.order, 2 * big.order): Fraction(rng.randint(-5, 5))
            for _ in range(4)
        }
        once = cyc_reduce(raw, big.order)
        canonical = cyc_reduce(once.coeffs, big.order) == once
        x = _random_cyc(small, rng)
        if x.is_zero():
            x = small.one
        inverse = (x * x.inverse()) == small.one
        passed += ring and conjugation and canonical and inverse
    return Outcome.count(passed, PROPERTY_CASES)


def _valuation(p: int, value: Fraction) -> int:
    return multiplicity(p, abs(value.numerator)) - multiplicity(p, value.denominator)


def _random_rational(p: int, rng: random.Random) -> Fraction:
    while True:
        value = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
        value *= Fraction(p) ** rng.randint(-2, 2)
        if value:
            return value


def check_padic_laws(ws: Workspace) -> Outcome:
    ctx = ws.ctx
    p = ctx.p
    rng = ws.rng("padic")
    passed = 0
    for _ in range(PROPERTY_CASES):
        fx, fy = _random_rational(p, rng), _random_rational(p, rng)
        if fx + fy == 0:
            fy *= 2
        x, y = ctx.num(fx), ctx.num(fy)
        vx, vy = _valuation(p, fx), _valuation(p, fy)
        ok = x.valuation == vx and (x * y).valuation == vx + vy
        total = x + y
        ok = ok and total.valuation >= min(vx, vy)
        if vx != vy:
            ok = ok and total.valuation == min(vx, vy)
        ok = ok and total.valuation == _valuation(p, fx + fy)
        ok = ok and x * x.inverse() == ctx.num(1) and (x + y) - y == x
        passed += ok
    return Outcome.count(passed, PROPERTY_CASES)


def check_character_laws(ws: Workspace) -> Outcome:
    ctx = ws.ctx
    p, n, m = ctx.p, ctx.level, ctx.shell_depth
    rng = ws.rng("character")
    modulus = p ** (n + 3)
    passed = 0
    for _ in range(PROPERTY_CASES):
        ux, uy = (rng.choice([u for u in range(1, 4 * p) if u % p]) for _ in range(2))
        x, y = ctx.num(ux), ctx.num(uy)
        eta = ws.eta
        ok = eta(x * y) == eta(x) * eta(y) and eta(x) * eta(x) == ctx.field.one
        ok = ok and eta(ctx.num(ux + p ** n * rng.randrange(modulus))) == eta(x)
        tx, ty = ctx.uniformizer(rng.randint(-2, 2)) * x, ctx.uniformizer(rng.randint(-2, 2)) * y
        ok = ok and ws.ext(tx * ty) == ws.ext(tx) * ws.ext(ty)
        ax = ctx.num(Fraction(rng.randrange(modulus), p ** rng.randint(0, m)))
        ay = ctx.num(Fraction(rng.randrange(modulus), p ** rng.randint(0, m)))
        psi = ws.psi
        ok = ok and psi(ax + ay) == psi(ax) * psi(ay)
        ok = ok and psi(ctx.num(rng.randrange(modulus))) == ctx.field.one
        passed += ok
    return Outcome.count(passed, PROPERTY_CASES)


def check_cell_round_trip(ws: Workspace) -> Outcome:
    """t u(x) k lands in the cell of the double coset of k and reassembles to itself."""
    ctx = ws.ctx
    p = ctx.p
    rng = ws.rng("cells")
    expected_cell = {
        DoubleCoset.J: Cell.BJ,
        DoubleCoset.JW0J: Cell.BW0J,
        DoubleCoset.INTERMEDIATE: Cell.NEITHER,
    }
    passed = 0
    for _ in range(PROPERTY_CASES):
        k, kind = random_k(ctx, rng)
        unit = rng.choice([u for u in range(1, 4 * p) if u % p])
        t = ctx.uniformizer(rng.randint(-3, 3)) * unit
        x = Fraction(rng.randrange(p ** 3), p ** rng.randint(0, 3))
        g = GroupElem.torus(ctx, t) * GroupElem.u(ctx, x) * k
        decomp = cell_decompose(g)
        ok = decomp.cell is expected_cell[kind]
        if ok and decomp.cell is not Cell.NEITHER:
            ok = decomp.reassemble() == g
        y = _random_rational(p, rng)
        ok = ok and bruhat_lower(ctx, y) == GroupElem.ubar(ctx, y)
        passed += ok
    return Outcome.count(passed, PROPERTY_CASES)


def check_k_partition(ws: Workspace) -> Outcome:
    rng = ws.rng("k-partition")
    passed = 0
    for _ in range(K_PARTITION_SAMPLES):
        k, kind = random_k(ws.ctx, rng)
        passed += classify_in_k(k) is kind
    return Outcome.count(passed, K_PARTITION_SAMPLES)


CHECKS: dict[str, Callable[[Workspace], Outcome]] = {
    anchors.LOCAL_COEFFICIENT: check_local_coefficient,
    anchors.WHITTAKER_DENOMINATOR: check_whittaker_denominator,
    anchors.SHELL_VANISHING: check_shell_vanishing,
    anchors.PRINCIPAL_VALUE_STABILITY: check_principal_value_stability,
    anchors.INTERTWINING: check_intertwining,
    anchors.PLANCHEREL: check_plancherel,
    anchors.FUNCTIONAL_EQUATION: check_functional_equation,
    anchors.SQUARE_ROOT: check_square_root,
    anchors.GAUSS_SUM_MODULUS: check_gauss_sum_modulus,
    anchors.GAUSS_SUM_SUPPORT: check_gauss_sum_support,
    anchors.HECKE_SQUARE: check_hecke_square,
    anchors.HECKE_BASIS_CLOSURE: check_hecke_basis_closure,
    anchors.IOTA_COMPATIBILITY: check_iota_compatibility,
    anchors.SIGN_ACTION: check_sign_action,
    anchors.S_DELTA: check_s_delta,
    anchors.WHITTAKER_SUPPORT: check_whittaker_support,
    anchors.CYCLOTOMIC_AXIOMS: check_cyclotomic_axioms,
    anchors.PADIC_LAWS: check_padic_laws,
    anchors.CHARACTER_LAWS: check_character_laws,
    anchors.CELL_ROUND_TRIP: check_cell_round_trip,
    anchors.K_PARTITION: check_k_partition,
}


def unregistered_checks() -> list[str]:
    """Check names listed in a suite but missing from the registry."""
    return [name for name in anchors.get_suite_checks("all") if name not in CHECKS]


def selected_checks(cfg: RunConfig) -> list[str]:
    names: list[str] = []
    for suite in cfg.suites:
        names.extend(n for n in anchors.get_suite_checks(suite) if n not in names)
    return names


def configurations(cfg: RunConfig) -> list[tuple[int, ExtChar]]:
    """(p, extended character) pairs in report order."""
    return [
        (p, ExtChar(eta, w))
        for p in cfg.primes
        for eta in ramified_quadratic_chars(p)
        for w in cfg.w_pi
    ]


def run_check(ws: Workspace, name: str) -> CheckRecord:
    """
    Run one check; a failure is recorded, never raised.
    """
    start = time.perf_counter()
    try:
        outcome = CHECKS[name](ws)
        status = Status.PASS if outcome.holds else Status.FAIL
        lhs, rhs = Value.of(outcome.lhs), Value.of(outcome.rhs)
    except Exception as e:
        log.error("%s at p=%d %s raised %s: %s", name, ws.ctx.p, ws.ext.label, type(e).__name__, e)
        status = Status.FAIL
        lhs, rhs = Value("error"), Value(f"{type(e).__name__}: {e}")
    elapsed = 0 if ws.cfg.reproducible else round((time.perf_counter() - start) * 1000)
    if status is Status.FAIL:
        log.error(
            "%s failed at p=%d %s: %s != %s", name, ws.ctx.p, ws.ext.label, lhs.exact, rhs.exact
        )
    else:
        log.debug("%s passed at p=%d %s in %d ms", name, ws.ctx.p, ws.ext.label, elapsed)
    return CheckRecord(name, status, lhs, rhs, anchors.get_anchor(name), elapsed)


def run_configuration(cfg: RunConfig, p: int, ext: ExtChar) -> ConfigResult:
    """Run the selected checks for one configuration, sequentially."""
    log.info("Verifying p=%d %s", p, ext.label)
    ws = Workspace(cfg, p, ext)
    checks = tuple(run_check(ws, name) for name in selected_checks(cfg))
    return ConfigResult(p, ext.level, ext.w_pi, ext.label, checks)


async def run_suite(cfg: RunConfig) -> Report:
    """
    Validate the configuration, then run every configuration.

    With ``cfg.jobs > 1`` configurations run in a process pool.

    Raises:
        ConfigurationError: If the configuration is invalid
    """
    cfg.validate()
    missing = unregistered_checks() + anchors.missing_statements()
    if missing:
        raise RuntimeError(f"Statements or checks without an implementation: {missing}")
    loop = asyncio.get_running_loop()
    todo = configurations(cfg)
    log.info("Running %d configurations with %d job(s)", len(todo), cfg.jobs)
    if cfg.jobs == 1:
        results = [await asyncio.to_thread(run_configuration, cfg, p, ext) for p, ext in todo]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = await asyncio.gather(
                *(loop.run_in_executor(pool, run_configuration, cfg, p, ext) for p, ext in todo)
            )
    return Report(config=cfg.to_dict(), results=tuple(results))


def compute_gauss_sum(p: int, c: Fraction, level_index: int = 0) -> CycNum:
    """
    tau(eta, psi, c) for the ``level_index``-th ramified quadratic character.

    Raises:
        ConfigurationError: If the index is out of range
    """
    chars = ramified_quadratic_chars(p)
    if not 0 <= level_index < len(chars):
        raise ConfigurationError(f"Character index {level_index} out of range for p={p}")
    eta = chars[level_index]
    depth = max(eta.level + 4, -_valuation(p, c)) if c else eta.level + 4
    ctx = FieldContext.create(p, eta.level, depth)
    return gauss_sum(eta, AddChar(), ctx.num(c))
