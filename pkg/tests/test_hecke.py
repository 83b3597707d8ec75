"""Tests for hecke.py - Hecke algebra and the Gelfand-Graev space."""

import random
from fractions import Fraction

import pytest

from sl2lc import hecke
from sl2lc.errors import NotInK, UnstablePrincipalValue
from sl2lc.hecke import (
    HeckeOp,
    RadicalScalar,
    TorusFn,
    WhittakerVec,
    act,
    action_sum,
    convolve,
    hecke_eval,
    in_whittaker_support,
    random_outside_support,
    reference_ch,
    s_delta_project,
    verify_sign_action,
    w0_projection_closed_form,
    whittaker_eval,
)
from sl2lc.laurent import LaurentPoly
from sl2lc.localfield import ExtChar, FieldContext, ramified_quadratic_chars
from sl2lc.sl2 import GroupElem


@pytest.fixture
def ctx():
    """Context for p = 3 at level 1."""
    return FieldContext.create(3, 1)


@pytest.fixture
def eta():
    """The Legendre symbol at 3."""
    return ramified_quadratic_chars(3)[0]


class TestHeckeEval:
    """Tests for hecke_eval."""

    def test_t_i2(self, ctx, eta):
        """Test T_I2 is lambda^-1 on J and zero on J w0 J."""
        t_i2 = HeckeOp.t_i2(ctx, eta)
        assert hecke_eval(t_i2, GroupElem.identity(ctx)) == 1
        assert hecke_eval(t_i2, GroupElem.torus(ctx, 2)) == -1
        assert hecke_eval(t_i2, GroupElem.w0(ctx)).is_zero()

    def test_t_w0(self, ctx, eta):
        """Test T_w0 on the representatives u(t) w0."""
        t_w0 = HeckeOp.t_w0(ctx, eta)
        assert hecke_eval(t_w0, GroupElem.w0(ctx)) == 1
        assert hecke_eval(t_w0, GroupElem.u(ctx, 2) * GroupElem.w0(ctx)) == 1
        assert hecke_eval(t_w0, GroupElem.w0(ctx) * GroupElem.torus(ctx, 2)) == -1
        assert hecke_eval(t_w0, GroupElem.identity(ctx)).is_zero()

    def test_not_in_k(self, ctx, eta):
        """Test evaluation outside K is rejected."""
        with pytest.raises(NotInK):
            hecke_eval(HeckeOp.t_i2(ctx, eta), GroupElem.torus(ctx, 3))

    def test_linear_combination(self, ctx, eta):
        """Test sums and scalar multiples."""
        op = HeckeOp.t_i2(ctx, eta) * 2 + HeckeOp.t_w0(ctx, eta) * Fraction(1, 3)
        assert hecke_eval(op, GroupElem.identity(ctx)) == 2
        assert hecke_eval(op, GroupElem.w0(ctx)) == Fraction(1, 3)


class TestConvolve:
    """Tests for convolve."""

    def test_t_w0_squared(self, ctx, eta):
        """Test T_w0 * T_w0 = eps q^n T_I2."""
        t_w0 = HeckeOp.t_w0(ctx, eta)
        assert convolve(t_w0, t_w0) == HeckeOp.t_i2(ctx, eta) * -3

    def test_unit(self, ctx, eta):
        """Test T_I2 is the unit of the algebra."""
        t_i2 = HeckeOp.t_i2(ctx, eta)
        t_w0 = HeckeOp.t_w0(ctx, eta)
        assert convolve(t_i2, t_w0) == t_w0
        assert convolve(t_w0, t_i2) == t_w0
        assert convolve(t_i2, t_i2) == t_i2

    def test_associative(self, ctx, eta):
        """Test (A * B) * C = A * (B * C) on seeded random operators."""
        rng = random.Random(0)
        t_i2, t_w0 = HeckeOp.t_i2(ctx, eta), HeckeOp.t_w0(ctx, eta)
        for _ in range(5):
            a, b, c = (t_i2 * rng.randint(-9, 9) + t_w0 * rng.randint(-9, 9) for _ in range(3))
            assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))

    def test_even_prime(self):
        """Test the quadratic relation for the character of conductor 8."""
        chi = ramified_quadratic_chars(2)[2]
        ctx = FieldContext.create(2, chi.level)
        t_w0 = HeckeOp.t_w0(ctx, chi)
        assert convolve(t_w0, t_w0) == HeckeOp.t_i2(ctx, chi) * 8


class TestWhittakerVec:
    """Tests for whittaker_eval and act."""

    def test_values(self, ctx, eta):
        """Test basis values at I, w0 and u(1/3)."""
        phi_i2 = WhittakerVec.phi_i2(ctx, eta)
        phi_w0 = WhittakerVec.phi_w0(ctx, eta)
        assert whittaker_eval(phi_i2, GroupElem.identity(ctx)) == 1
        assert whittaker_eval(phi_w0, GroupElem.w0(ctx)) == 1
        assert whittaker_eval(phi_w0, GroupElem.identity(ctx)).is_zero()
        zeta3 = ctx.field.root_of_unity(1, 3)
        assert whittaker_eval(phi_i2, GroupElem.u(ctx, Fraction(1, 3))) == zeta3

    def test_vanishes_off_support(self, ctx, eta):
        """Test phi vanishes when the torus part is not a unit."""
        phi_i2 = WhittakerVec.phi_i2(ctx, eta)
        assert whittaker_eval(phi_i2, GroupElem.torus(ctx, 3)).is_zero()

    def test_act(self, ctx, eta):
        """Test T_w0 phi_I2 = eps phi_w0 and T_w0 phi_w0 = q^n phi_I2."""
        t_w0 = HeckeOp.t_w0(ctx, eta)
        phi_i2 = WhittakerVec.phi_i2(ctx, eta)
        phi_w0 = WhittakerVec.phi_w0(ctx, eta)
        assert act(t_w0, phi_i2) == phi_w0 * -1
        assert act(t_w0, phi_w0) == phi_i2 * 3
        assert act(HeckeOp.t_i2(ctx, eta), phi_i2) == phi_i2

    def test_module_law(self, ctx, eta):
        """Test (A * B) * v = A * (B * v) on seeded random inputs."""
        rng = random.Random(1)
        t_i2, t_w0 = HeckeOp.t_i2(ctx, eta), HeckeOp.t_w0(ctx, eta)
        phi_i2, phi_w0 = WhittakerVec.phi_i2(ctx, eta), WhittakerVec.phi_w0(ctx, eta)
        for _ in range(5):
            a, b = (t_i2 * rng.randint(-9, 9) + t_w0 * rng.randint(-9, 9) for _ in range(2))
            v = phi_i2 * rng.randint(-9, 9) + phi_w0 * rng.randint(-9, 9)
            assert act(convolve(a, b), v) == act(a, act(b, v))

    @pytest.mark.parametrize("p, index", [(3, 0), (2, 2)])
    def test_action_vanishes_off_support(self, p, index):
        """Test T_w0 * phi is zero at random elements off U J and U w0 J."""
        eta = ramified_quadratic_chars(p)[index]
        ctx = FieldContext.create(p, eta.level)
        t_w0 = HeckeOp.t_w0(ctx, eta)
        images = [
            action_sum(t_w0, WhittakerVec.phi_i2(ctx, eta)),
            action_sum(t_w0, WhittakerVec.phi_w0(ctx, eta)),
        ]
        outside = random_outside_support(ctx, random.Random(2), 30)
        assert len(outside) == 30
        for g in outside:
            assert not in_whittaker_support(g)
            assert all(image(g).is_zero() for image in images)

    def test_support(self, ctx):
        """Test membership in U J and U w0 J."""
        assert in_whittaker_support(GroupElem.u(ctx, Fraction(1, 3)) * GroupElem.w0(ctx))
        assert in_whittaker_support(GroupElem.torus(ctx, 2))
        assert not in_whittaker_support(GroupElem.torus(ctx, 3))

    @pytest.mark.parametrize("p", [3, 5])
    def test_minus_identity_acts_by_eps(self, p):
        """Test phi(-g) = eps * phi(g)."""
        eta = ramified_quadratic_chars(p)[0]
        ctx = FieldContext.create(p, 1)
        v = WhittakerVec.phi_i2(ctx, eta) * 2 + WhittakerVec.phi_w0(ctx, eta) * -5
        points = [
            GroupElem.u(ctx, Fraction(1, p)) * GroupElem.torus(ctx, 2),
            GroupElem.u(ctx, Fraction(2, p)) * GroupElem.w0(ctx) * GroupElem.u(ctx, 1),
        ]
        for g in points:
            assert not whittaker_eval(v, g).is_zero()
            assert whittaker_eval(v, -g) == whittaker_eval(v, g) * eta.sign

    @pytest.mark.parametrize("w_pi", [1, -1])
    def test_sign_action(self, ctx, eta, w_pi):
        """Test the normalized operator acts by -1."""
        result = verify_sign_action(ctx, ExtChar(eta, w_pi))
        assert result.passed
        assert len(result.identities) == 15

    def test_sign_action_p5(self):
        """Test the sign action for eps = +1."""
        eta = ramified_quadratic_chars(5)[0]
        ctx = FieldContext.create(5, 1)
        assert verify_sign_action(ctx, ExtChar(eta, 1), samples=1).passed


class TestRadicalScalar:
    """Tests for RadicalScalar."""

    def test_sigma_squared(self, ctx):
        """Test sigma^2 is the radicand."""
        radicand = ctx.scalar(Fraction(-1, 3))
        sigma = RadicalScalar.sigma(radicand)
        assert sigma * sigma == RadicalScalar.of(radicand, radicand)

    def test_arithmetic(self, ctx):
        """Test (1 + sigma)(1 - sigma) = 1 - radicand."""
        radicand = ctx.scalar(5)
        one = RadicalScalar.of(ctx.field.one, radicand)
        sigma = RadicalScalar.sigma(radicand)
        assert (one + sigma) * (one + -sigma) == RadicalScalar.of(ctx.scalar(-4), radicand)
        assert 2 * sigma == sigma + sigma


class TestSDelta:
    """Tests for s_delta_project."""

    def test_phi_i2(self, ctx, eta):
        """Test the projection of phi_I2 is the reference character."""
        phi_i2 = WhittakerVec.phi_i2(ctx, eta)
        projection = s_delta_project(phi_i2)
        assert projection == reference_ch(ctx, eta)
        assert projection.support() == {0}
        assert projection[(0, 2)] == Fraction(-1, 3)

    def test_phi_w0(self, ctx, eta):
        """Test the projection of phi_w0 is supported at k = -n."""
        phi_w0 = WhittakerVec.phi_w0(ctx, eta)
        projection = s_delta_project(phi_w0)
        assert projection == w0_projection_closed_form(ctx, eta)
        assert projection.support() == {-1}

    def test_deeper_truncation_agrees(self, eta):
        """Test a context with a deeper truncation gives the same closed form."""
        deep = FieldContext.create(3, 1, 7)
        projection = s_delta_project(WhittakerVec.phi_w0(deep, eta))
        assert projection == w0_projection_closed_form(deep, eta)

    def test_outer_shells_must_vanish(self, ctx, eta, monkeypatch):
        """Test mass on the shells added by the second depth is reported."""
        original = hecke.shell_integral

        def leaky(ctx, integrand, r, depth, **kwargs):
            if abs(r) > ctx.shell_depth:
                return LaurentPoly.constant(ctx.field.one)
            return original(ctx, integrand, r, depth, **kwargs)

        monkeypatch.setattr(hecke, "shell_integral", leaky)
        with pytest.raises(UnstablePrincipalValue, match="between depths 5 and 7"):
            s_delta_project(WhittakerVec.phi_i2(ctx, eta))

    def test_torus_range(self, ctx, eta):
        """Test a torus range below 2 is rejected."""
        with pytest.raises(ValueError, match="Torus range"):
            s_delta_project(WhittakerVec.phi_i2(ctx, eta), torus_range=1)

    def test_depth(self, ctx, eta):
        """Test a depth below level + 2 is rejected."""
        with pytest.raises(ValueError, match="Depth"):
            s_delta_project(WhittakerVec.phi_i2(ctx, eta), depth=2)


class TestTorusFn:
    """Tests for TorusFn."""

    def test_zeros_dropped(self, ctx):
        """Test zero values are not stored."""
        fn = TorusFn(ctx, {(0, 1): ctx.field.zero, (1, 2): ctx.field.one})
        assert fn.support() == {1}
        assert fn[(0, 1)].is_zero()
        assert str(fn) == "t(p^1*2): 1"
