"""Tests for localfield.py - p-adic numbers and characters."""

import math
from fractions import Fraction

import pytest

from sl2lc.errors import DivisionByZero, NotAUnit, PrecisionExhausted
from sl2lc.localfield import (
    INF,
    AddChar,
    ExtChar,
    FieldContext,
    MultCharacter,
    PadicNum,
    ramified_quadratic_chars,
    unit_group_generators,
)


@pytest.fixture
def ctx3():
    """Context for p = 3 at level 1."""
    return FieldContext.create(3, 1)


@pytest.fixture
def ctx2():
    """Context for p = 2 at level 3."""
    return FieldContext.create(2, 3)


class TestFieldContext:
    """Tests for FieldContext."""

    def test_create_defaults(self, ctx3):
        """Test derived depth, precision and cyclotomic order."""
        assert ctx3.shell_depth == 5
        assert ctx3.prec == 1 + 5 + 4 + 8
        assert ctx3.field.order == math.lcm(3**7, 2)
        assert ctx3.q == 3

    def test_create_even_prime(self, ctx2):
        """Test the order for p = 2 is a power of 2."""
        assert ctx2.field.order == 2 ** (7 + 2)

    def test_create_not_prime(self):
        """Test a composite p is rejected."""
        with pytest.raises(ValueError, match="prime"):
            FieldContext.create(9, 1)

    def test_units(self, ctx3):
        """Test unit representatives."""
        assert ctx3.units(1) == [1, 2]
        assert len(ctx3.units(2)) == 6
        assert ctx3.units(0) == [1]

    def test_num_from_string(self, ctx3):
        """Test rationals given as strings."""
        assert ctx3.num("-1/3") == ctx3.num(Fraction(-1, 3))


class TestPadicNum:
    """Tests for PadicNum arithmetic."""

    def test_valuation(self, ctx3):
        """Test valuations of rationals."""
        assert ctx3.num(Fraction(9, 2)).valuation == 2
        assert ctx3.num(Fraction(1, 3)).valuation == -1
        assert ctx3.num(0).valuation == INF

    def test_exact_zero(self, ctx3):
        """Test the exact zero."""
        zero = PadicNum.zero(ctx3)
        assert zero.is_exact_zero()
        assert ctx3.num(5) + zero == 5

    def test_add_and_multiply(self, ctx3):
        """Test arithmetic agrees with rational arithmetic."""
        x, y = ctx3.num(Fraction(2, 3)), ctx3.num(Fraction(7, 5))
        assert x + y == Fraction(2, 3) + Fraction(7, 5)
        assert x * y == Fraction(14, 15)
        assert x - y == Fraction(2, 3) - Fraction(7, 5)
        assert x / y == Fraction(10, 21)

    def test_ultrametric(self, ctx3):
        """Test v(x + y) = min(v(x), v(y)) for distinct valuations."""
        x, y = ctx3.num(9), ctx3.num(Fraction(1, 3))
        assert (x + y).valuation == -1

    def test_cancellation_raises_valuation(self, ctx3):
        """Test cancellation moves the valuation up."""
        assert (ctx3.num(10) - ctx3.num(1)).valuation == 2

    def test_inverse(self, ctx3):
        """Test inverse and its valuation."""
        x = ctx3.num(Fraction(18, 5))
        assert x.inverse() == Fraction(5, 18)
        assert x.inverse().valuation == -2

    def test_inverse_of_zero(self, ctx3):
        """Test the inverse of zero raises DivisionByZero."""
        with pytest.raises(DivisionByZero):
            ctx3.num(0).inverse()

    def test_precision_exhausted(self, ctx3):
        """Test cancellation below the level is reported."""
        x = PadicNum(ctx3, 0, 1, 3)
        y = PadicNum(ctx3, 0, 10, 3)
        with pytest.raises(PrecisionExhausted, match="Cancellation"):
            x - y

    def test_power(self, ctx3):
        """Test integer powers."""
        assert ctx3.num(3) ** 3 == 27
        assert ctx3.num(3) ** -2 == Fraction(1, 9)

    def test_residue(self, ctx3):
        """Test residues of integral values."""
        assert ctx3.num(-1).residue(2) == 8
        assert ctx3.num(Fraction(1, 2)).residue(1) == 2
        with pytest.raises(ValueError, match="non-integral"):
            ctx3.num(Fraction(1, 3)).residue(1)

    def test_fractional_part(self, ctx3):
        """Test the fractional part a / p^k."""
        assert ctx3.num(Fraction(1, 3)).fractional_part() == (1, 1)
        assert ctx3.num(Fraction(5, 3)).fractional_part() == (2, 1)
        assert ctx3.num(Fraction(2, 9)).fractional_part() == (2, 2)
        assert ctx3.num(4).fractional_part() == (0, 0)

    def test_norm(self, ctx3):
        """Test |x| = q^-v(x)."""
        assert ctx3.num(Fraction(2, 9)).norm() == 9
        assert ctx3.num(6).norm() == Fraction(1, 3)

    def test_unit_part(self, ctx3):
        """Test the unit part."""
        assert ctx3.num(Fraction(18, 1)).unit_part() == 2
        with pytest.raises(NotAUnit):
            ctx3.num(0).unit_part()

    def test_to_fraction(self, ctx3):
        """Test negative and fractional values print as small rationals."""
        assert ctx3.num(-1).to_fraction() == -1
        assert ctx3.num(Fraction(1, 2)).to_fraction() == Fraction(1, 2)
        assert ctx3.num(Fraction(-5, 63)).to_fraction() == Fraction(-5, 63)
        assert str(ctx3.num(-1)).startswith("-1 + O(3^")

    def test_hash_disabled(self, ctx3):
        """Test p-adic numbers are unhashable."""
        with pytest.raises(TypeError):
            hash(ctx3.num(1))


class TestUnitGroupGenerators:
    """Tests for unit_group_generators."""

    def test_odd_prime(self):
        """Test a primitive root is used for odd p."""
        assert unit_group_generators(3, 1) == ((2,), (2,))
        assert unit_group_generators(5, 2)[1] == (20,)

    def test_two(self):
        """Test the generators of (Z/2^k)^x."""
        assert unit_group_generators(2, 1) == ((), ())
        assert unit_group_generators(2, 2) == ((3,), (2,))
        assert unit_group_generators(2, 3) == ((7, 5), (2, 2))


class TestMultCharacter:
    """Tests for MultCharacter and ramified_quadratic_chars."""

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_odd_prime_has_one_character(self, p):
        """Test the Legendre symbol is the only ramified quadratic character."""
        chars = ramified_quadratic_chars(p)
        assert len(chars) == 1
        assert chars[0].level == 1
        assert chars[0].label == f"legendre_{p}"
        assert chars[0].sign == (-1) ** ((p - 1) // 2)

    def test_two_has_three_characters(self):
        """Test the characters of conductor 4 and 8."""
        chars = ramified_quadratic_chars(2)
        assert [c.level for c in chars] == [2, 3, 3]
        assert [c.label for c in chars] == ["chi_-4", "chi_-8", "chi_8"]
        assert [c.sign for c in chars] == [-1, -1, 1]

    def test_not_prime(self):
        """Test a composite p is rejected."""
        with pytest.raises(ValueError, match="prime"):
            ramified_quadratic_chars(6)

    def test_legendre_values(self, ctx3):
        """Test eta(2) = -1 and eta(4) = 1 at p = 3."""
        eta = ramified_quadratic_chars(3)[0]
        assert eta(ctx3.num(2)) == -1
        assert eta(ctx3.num(4)) == 1
        assert eta(ctx3.num(Fraction(1, 2))) == -1

    def test_two_adic_values(self, ctx2):
        """Test values of the 2-adic characters."""
        chi_m4, chi_m8, chi_8 = ramified_quadratic_chars(2)
        assert chi_m4(ctx2.num(3)) == -1
        assert chi_m4(ctx2.num(5)) == 1
        assert chi_8(ctx2.num(3)) == -1
        assert chi_8(ctx2.num(7)) == 1
        assert chi_m8(ctx2.num(3)) == 1
        assert chi_m8(ctx2.num(5)) == -1

    def test_non_unit(self, ctx3):
        """Test evaluation at a non-unit raises NotAUnit."""
        eta = ramified_quadratic_chars(3)[0]
        with pytest.raises(NotAUnit):
            eta(ctx3.num(3))

    def test_quadratic_is_self_inverse(self):
        """Test a quadratic character equals its inverse."""
        for eta in ramified_quadratic_chars(2):
            assert eta.inverse() == eta
            assert eta.is_quadratic()

    def test_trivial(self):
        """Test the trivial character."""
        trivial = MultCharacter.trivial(5)
        assert trivial.conductor() == 0
        assert trivial.turn_at(3) == 0
        assert trivial.label == "trivial_5"

    def test_conductor_of_lifted_character(self):
        """Test a character read at a larger modulus keeps its conductor."""
        lifted = MultCharacter.from_exponents(5, 2, (10,))
        assert lifted.conductor() == 1
        assert lifted.restricted(1) == ramified_quadratic_chars(5)[0]

    def test_wrong_exponent_count(self):
        """Test the exponent tuple must match the generators."""
        with pytest.raises(ValueError, match="exponents"):
            MultCharacter.from_exponents(2, 3, (1,))


class TestExtChar:
    """Tests for ExtChar."""

    def test_value_at_uniformizer(self, ctx3):
        """Test the extension is w_pi at p."""
        eta = ramified_quadratic_chars(3)[0]
        assert ExtChar(eta, -1)(ctx3.num(3)) == -1
        assert ExtChar(eta, -1)(ctx3.num(36)) == 1
        assert ExtChar(eta, 1)(ctx3.num(Fraction(2, 3))) == -1

    def test_epsilon_and_extensions(self):
        """Test both extensions share eps = eta(-1)."""
        eta = ramified_quadratic_chars(5)[0]
        exts = ExtChar.extensions(eta)
        assert [e.w_pi for e in exts] == [1, -1]
        assert all(e.epsilon == 1 for e in exts)
        assert exts[1].label == "legendre_5/w=-1"

    def test_invalid_w_pi(self):
        """Test w_pi must be a sign."""
        with pytest.raises(ValueError, match="w_pi"):
            ExtChar(ramified_quadratic_chars(3)[0], 2)


class TestAddChar:
    """Tests for AddChar."""

    def test_value(self, ctx3):
        """Test psi(1/3) = zeta_3 and psi is trivial on Z_3."""
        psi = AddChar()
        assert psi(ctx3.num(Fraction(1, 3))) == ctx3.field.root_of_unity(1, 3)
        assert psi(ctx3.num(Fraction(4, 9))) == ctx3.field.root_of_unity(4, 9)
        assert psi(ctx3.num(7)) == 1

    def test_inverse(self, ctx3):
        """Test psi^-1(x) = psi(-x)."""
        psi = AddChar()
        x = ctx3.num(Fraction(2, 27))
        assert psi.inverse()(x) == psi(-x)
        assert psi.inverse()(x) * psi(x) == 1

    def test_additive(self, ctx3):
        """Test psi(x + y) = psi(x) psi(y)."""
        psi = AddChar()
        x, y = ctx3.num(Fraction(5, 9)), ctx3.num(Fraction(7, 3))
        assert psi(x + y) == psi(x) * psi(y)

    def test_twist_must_be_unit(self, ctx3):
        """Test a twist divisible by p is rejected."""
        with pytest.raises(NotAUnit, match="not a unit"):
            AddChar(3)(ctx3.num(Fraction(1, 3)))
