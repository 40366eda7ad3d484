"""Tests for src.core.polynomial and polynomial parsing."""
import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import FieldMismatchError, ParseError, UsageError
from src.core.polynomial import GREVLEX, LEX, MonomialOrder, PolynomialRing, rational_ring
from src.core.scalars import PrimeField


def _small_poly(ring):
    """Hypothesis strategy for polynomials of degree <= 3 with small coefficients."""
    monos = st.tuples(*[st.integers(0, 3) for _ in range(ring.nvars)])
    return st.dictionaries(monos, st.integers(-4, 4), max_size=5).map(
        lambda d: ring.zero() + sum((ring.monomial(m, c) for m, c in d.items() if c), ring.zero())
    )


R = rational_ring("x", "y")


class TestOrders(unittest.TestCase):
    def test_lex_prefers_first_variable(self) -> None:
        self.assertEqual(R.parse("x + y^5").leading_monomial(LEX), (1, 0))

    def test_grevlex_prefers_degree(self) -> None:
        self.assertEqual(R.parse("x + y^5").leading_monomial(GREVLEX), (0, 5))

    def test_block_order(self) -> None:
        order = MonomialOrder.from_name("block:1")
        self.assertEqual(order.name, "block:1")
        self.assertEqual(R.parse("x + y^5").leading_monomial(order), (1, 0))

    def test_unknown_order(self) -> None:
        with self.assertRaises(UsageError):
            MonomialOrder("deglex")


class TestPolynomial(unittest.TestCase):
    def test_format(self) -> None:
        self.assertEqual(str(R.parse("(x - 1)*(x + 1)")), "x^2 - 1")
        self.assertEqual(str(R.parse("3*x^2*y - y/2")), "3*x^2*y - 1/2*y")
        self.assertEqual(str(R.zero()), "0")

    def test_prime_field_format_has_no_sign(self) -> None:
        ring = PolynomialRing(PrimeField(3), ("x",))
        self.assertEqual(str(ring.parse("-x")), "2*x")

    def test_constant_equality(self) -> None:
        self.assertEqual(R.parse("2/4"), Fraction(1, 2))
        self.assertNotEqual(R.parse("x"), 0)

    def test_exact_div(self) -> None:
        p = R.parse("x^2 - y^2")
        self.assertEqual(p.exact_div(R.parse("x - y")), R.parse("x + y"))
        self.assertIsNone(p.exact_div(R.parse("x")))

    def test_substitute_and_evaluate(self) -> None:
        p = R.parse("x^2 + y")
        q = p.substitute([R.parse("y"), R.parse("x")])
        self.assertEqual(q, R.parse("y^2 + x"))
        self.assertEqual(p.evaluate([2, 3]), 7)

    def test_coefficients_roundtrip(self) -> None:
        p = R.parse("x^2*y + 3*x + y - 1")
        coeffs = p.coefficients_in(0)
        self.assertEqual(coeffs[2], R.parse("y"))
        self.assertEqual(type(p).from_coefficients_in(R, 0, coeffs), p)

    def test_mixed_rings(self) -> None:
        other = rational_ring("x", "z")
        with self.assertRaises(FieldMismatchError):
            R.parse("x") + other.parse("x")

    def test_duplicate_variables(self) -> None:
        with self.assertRaises(UsageError):
            rational_ring("x", "x")

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_division_identity(self, data) -> None:
        f = data.draw(_small_poly(R))
        d1 = data.draw(_small_poly(R))
        d2 = data.draw(_small_poly(R))
        divisors = [d for d in (d1, d2) if d]
        if not divisors:
            return
        quotients, r = f.divide(divisors)
        total = r
        for q, d in zip(quotients, divisors):
            total = total + q * d
        self.assertEqual(total, f)


class TestParsing(unittest.TestCase):
    def test_negative_exponent(self) -> None:
        with self.assertRaises(ParseError) as ctx:
            R.parse("x^-1")
        self.assertIn("exponent must be a non-negative integer", str(ctx.exception))

    def test_unknown_variable(self) -> None:
        with self.assertRaises(ParseError):
            R.parse("x + z")

    def test_division_by_polynomial(self) -> None:
        with self.assertRaises(ParseError):
            R.parse("1/x")

    def test_unbalanced(self) -> None:
        with self.assertRaises(ParseError):
            R.parse("(x + 1")


if __name__ == "__main__":
    unittest.main()
