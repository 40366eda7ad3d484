"""Tests for src.core.scalars."""
import unittest
from fractions import Fraction

from src.core.errors import FieldMismatchError, ParseError, ScalarDivisionError, UsageError
from src.core.scalars import QQ, PrimeField, field_from_name


class TestRationals(unittest.TestCase):
    def test_parse_fraction_and_unicode_minus(self) -> None:
        self.assertEqual(QQ.parse("-3/7"), Fraction(-3, 7))
        self.assertEqual(QQ.parse("−2"), Fraction(-2))

    def test_parse_rejects_garbage(self) -> None:
        with self.assertRaises(ParseError):
            QQ.parse("1.5")

    def test_zero_denominator(self) -> None:
        with self.assertRaises(ScalarDivisionError):
            QQ.parse("1/0")
        with self.assertRaises(ScalarDivisionError):
            QQ.inv(Fraction(0))

    def test_prime_element_is_not_rational(self) -> None:
        with self.assertRaises(FieldMismatchError):
            QQ.convert(PrimeField(3)(1))


class TestPrimeField(unittest.TestCase):
    def test_singleton(self) -> None:
        self.assertIs(PrimeField(5), PrimeField(5))

    def test_composite_modulus_rejected(self) -> None:
        with self.assertRaises(UsageError):
            PrimeField(4)

    def test_arithmetic_wraps(self) -> None:
        F5 = PrimeField(5)
        a, b = F5(3), F5(4)
        self.assertEqual(a + b, 2)
        self.assertEqual(a * b, 2)
        self.assertEqual(a - b, 4)
        self.assertEqual(a / b, 2)
        self.assertEqual(a ** -1, 2)

    def test_every_nonzero_element_is_invertible(self) -> None:
        F7 = PrimeField(7)
        for a in F7.elements():
            if a:
                self.assertEqual(a * a.inverse(), 1)

    def test_inverse_of_zero(self) -> None:
        with self.assertRaises(ScalarDivisionError):
            PrimeField(3)(0).inverse()

    def test_rational_literal_reduces(self) -> None:
        F7 = PrimeField(7)
        self.assertEqual(F7.parse("1/2"), 4)
        self.assertEqual(F7.parse("-1"), 6)

    def test_tagged_literal(self) -> None:
        self.assertEqual(PrimeField(7).parse("7:3"), 3)
        with self.assertRaises(FieldMismatchError):
            PrimeField(7).parse("5:3")

    def test_mixed_fields_rejected(self) -> None:
        with self.assertRaises(FieldMismatchError):
            PrimeField(3)(1) + PrimeField(5)(1)

    def test_immutable(self) -> None:
        a = PrimeField(3)(2)
        with self.assertRaises(AttributeError):
            a.value = 1


class TestFieldFromName(unittest.TestCase):
    def test_names(self) -> None:
        self.assertIs(field_from_name("Q"), QQ)
        self.assertIs(field_from_name("GF3"), PrimeField(3))
        self.assertIs(field_from_name("F5"), PrimeField(5))

    def test_unknown(self) -> None:
        with self.assertRaises(ParseError):
            field_from_name("R")


if __name__ == "__main__":
    unittest.main()
