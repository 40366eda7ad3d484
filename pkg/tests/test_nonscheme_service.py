"""Tests for src.services.nonscheme_service."""
import random
import unittest

from src.core.constants import NONSCHEME_SAMPLES
from src.core.errors import ParseError, UsageError
from src.core.polynomial import PolynomialRing, rational_ring
from src.core.scalars import PrimeField
from src.services.nonscheme_service import (
    classify,
    default_samples,
    is_irreducible,
    intersection_is_fraction_ring,
    irreducible_factors,
    member_partial_localization,
    parse_factored_fraction,
    random_factored_fraction,
)

R = rational_ring("x", "y")
F = R.parse("x")


def verdict(text: str, side: str, f=F) -> bool:
    return member_partial_localization(parse_factored_fraction(text, R), f, side)


class TestFactoredFractions(unittest.TestCase):
    def test_parse_product_denominator(self) -> None:
        g = parse_factored_fraction("1/(x*(y-1))", R)
        self.assertEqual([str(p) for p, _ in g.factors], ["x", "y - 1"])

    def test_parse_power(self) -> None:
        g = parse_factored_fraction("(x+y)/x^2", R)
        self.assertEqual(g.factors, ((R.parse("x"), 2),))
        self.assertEqual(g.numerator, R.parse("x + y"))

    def test_sum_denominator_is_one_factor(self) -> None:
        g = parse_factored_fraction("1/(x*y+1)", R)
        self.assertEqual(g.factors, ((R.parse("x*y + 1"), 1),))

    def test_reducible_factor_rejected(self) -> None:
        with self.assertRaises(UsageError):
            parse_factored_fraction("1/(x^2-1)", R)
        with self.assertRaises(UsageError):
            parse_factored_fraction("1/(x*y+x)", R)

    def test_unreduced_fraction_rejected(self) -> None:
        with self.assertRaises(UsageError):
            parse_factored_fraction("x/x", R)

    def test_two_slashes(self) -> None:
        with self.assertRaises(ParseError):
            parse_factored_fraction("1/x/y", R)

    def test_classify(self) -> None:
        self.assertEqual(classify(R.parse("x - 1")), "x")
        self.assertEqual(classify(R.parse("y^2 + 1")), "y")
        self.assertEqual(classify(R.parse("x + y")), "xy")
        self.assertEqual(classify(R.parse("3")), "const")

    def test_bivariate_factor_must_be_irreducible(self) -> None:
        F3 = PolynomialRing(PrimeField(3), ("x", "y"))
        for ring in (R, F3):
            with self.assertRaises(UsageError):
                parse_factored_fraction("1/(x^2-y^2)", ring)
            with self.assertRaises(UsageError):
                parse_factored_fraction("1/(x*y+x)", ring)
            self.assertEqual(parse_factored_fraction("1/(x*y+1)", ring).factors, ((ring.parse("x*y + 1"), 1),))

    def test_is_irreducible(self) -> None:
        self.assertTrue(is_irreducible(R.parse("x*y + 1")))
        self.assertTrue(is_irreducible(R.parse("x^2 + y^3")))
        self.assertFalse(is_irreducible(R.parse("x^2 - y^2")))
        self.assertFalse(is_irreducible(R.parse("(x + y)^2")))

    def test_bivariate_factors_over_f3(self) -> None:
        ring = PolynomialRing(PrimeField(3), ("x", "y"))
        factors = irreducible_factors(ring.parse("x^2 - y^2"))
        self.assertEqual(sorted(str(g) for g, _ in factors), ["x + 2*y", "x + y"])
        self.assertEqual(irreducible_factors(ring.parse("(x*y + 1)^2")), [(ring.parse("x*y + 1"), 2)])
        self.assertFalse(is_irreducible(ring.parse("x^2*y + x*y")))

    def test_irreducible_factors_over_f3(self) -> None:
        ring = PolynomialRing(PrimeField(3), ("x", "y"))
        factors = irreducible_factors(ring.parse("x^2 - 1"))
        self.assertEqual(sorted(str(g) for g, _ in factors), ["x + 1", "x + 2"])


class TestMembership(unittest.TestCase):
    def test_sides(self) -> None:
        self.assertTrue(verdict("1/(x-1)", "S"))
        self.assertFalse(verdict("1/(x-1)", "T"))
        self.assertFalse(verdict("1/(x+y)", "S"))
        self.assertFalse(verdict("1/(x+y)", "T"))
        self.assertTrue(verdict("(x+y)/x^2", "f"))

    def test_unknown_side(self) -> None:
        with self.assertRaises(UsageError):
            verdict("1/x", "Z")

    def test_intersection_is_the_f_localization(self) -> None:
        outcome = intersection_is_fraction_ring(F, default_samples(R, NONSCHEME_SAMPLES))
        self.assertTrue(outcome.consistent)
        self.assertEqual(outcome.intersection(), ["1/x", "(x+y)/x^2"])
        self.assertEqual(outcome.members("f"), ["1/x", "(x+y)/x^2"])

    def test_random_fractions_agree(self) -> None:
        rng = random.Random(11)
        for ring in (R, PolynomialRing(PrimeField(3), ("x", "y"))):
            f = ring.parse("x")
            samples = [random_factored_fraction(rng, f) for _ in range(40)]
            self.assertTrue(intersection_is_fraction_ring(f, samples).consistent)


if __name__ == "__main__":
    unittest.main()
