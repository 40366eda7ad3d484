"""Tests for src.services.fraction_service."""
import unittest
from unittest import mock

from src.core.errors import UsageError, VerificationFailure
from src.core.polynomial import rational_ring
from src.services.fraction_service import (
    FractionPresentation,
    InvertibleModule,
    MultiExponent,
    base_change,
    extend_contract,
    extended_ideal,
    finite_subset_reduce,
    localized_quotient_dimension,
    map_element,
    quotient_dimension,
    universal_factorization,
)
from src.services.ideal_service import Ideal, QuotientRing, RingMap

R = rational_ring("x", "y")
S = MultiExponent.of(s=1)


def invert_x(base=R) -> FractionPresentation:
    return FractionPresentation(base).with_section("s", "x")


class TestMultiExponent(unittest.TestCase):
    def test_arithmetic(self) -> None:
        a = MultiExponent.of(s=2, t=1)
        b = MultiExponent.of(s=1, u=3)
        self.assertEqual(str(a + b), "s^3*t*u^3")
        self.assertEqual(a.sup(b), MultiExponent.of(s=2, t=1, u=3))
        self.assertEqual(a - MultiExponent.of(s=1), MultiExponent.of(s=1, t=1))

    def test_negative_and_underflow(self) -> None:
        with self.assertRaises(UsageError):
            MultiExponent.of(s=-1)
        with self.assertRaises(UsageError):
            MultiExponent.of(s=1) - MultiExponent.of(s=2)


class TestFractionElements(unittest.TestCase):
    def test_inverse_times_section_is_one(self) -> None:
        U = invert_x()
        self.assertEqual(U.inverse_of("s") * U("x"), U.one())
        self.assertEqual(U.unit("s"), 1)

    def test_equality_by_cross_multiplication(self) -> None:
        U = invert_x()
        self.assertEqual(U.element("x*y", MultiExponent.of(s=2)), U.element("y", S))
        self.assertNotEqual(U.element("y", S), U("y"))

    def test_sum(self) -> None:
        U = invert_x()
        total = U.element(1, S) + U("1")
        self.assertEqual(total, U.element("1 + x", S))

    def test_torsion_kills_annihilated_elements(self) -> None:
        base = QuotientRing(R, Ideal(R, ["x*y"]))
        U = invert_x(base)
        self.assertTrue(U.torsion.equals(Ideal(R, ["y"])))
        self.assertEqual(U("y"), 0)
        self.assertFalse(U.is_zero_ring())

    def test_inverting_a_nilpotent_gives_zero_ring(self) -> None:
        base = QuotientRing(R, Ideal(R, ["x^2"]))
        self.assertTrue(invert_x(base).is_zero_ring())

    def test_duplicate_names(self) -> None:
        with self.assertRaises(UsageError):
            invert_x().with_section("s", "y")


class TestInvertibleModules(unittest.TestCase):
    def setUp(self) -> None:
        self.curve = QuotientRing(R, Ideal(R, ["y^2 - x^3 + x"]))

    def test_point_on_smooth_curve_is_invertible(self) -> None:
        module = InvertibleModule(self.curve, ["x", "y"])
        self.assertFalse(module.is_principal)
        U = FractionPresentation(self.curve).with_section("s", "x", module)
        expected = Ideal(R, ["x", "y", "y^2 - x^3 + x"])
        self.assertTrue(U.vanishing_ideal("s").equals(expected))

    def test_cusp_maximal_ideal_is_not_invertible(self) -> None:
        cusp = QuotientRing(R, Ideal(R, ["y^2 - x^3"]))
        with self.assertRaises(UsageError):
            InvertibleModule(cusp, ["x", "y"])

    def test_section_must_lie_in_module(self) -> None:
        module = InvertibleModule(self.curve, ["x", "y"])
        with self.assertRaises(UsageError):
            FractionPresentation(self.curve).with_section("s", "1", module)

    def test_zero_denominator(self) -> None:
        with self.assertRaises(UsageError):
            InvertibleModule(R, ["x"], 0)


class TestUniversalProperty(unittest.TestCase):
    def test_factors_through_localization(self) -> None:
        Rx = rational_ring("x")
        A = QuotientRing(rational_ring("x", "t"), Ideal(rational_ring("x", "t"), ["x*t - 1"]))
        U = FractionPresentation(Rx).with_section("s", "x")
        result = universal_factorization(U, RingMap(Rx, A, ["x"]))
        self.assertTrue(result.factors)
        self.assertTrue(A.equal(result.image(U.inverse_of("s")), "t"))
        self.assertTrue(A.equal(result.image(U.element("x + 1", MultiExponent.of(s=1))), "1 + t"))

    def test_map_killing_a_section_does_not_factor(self) -> None:
        Rx = rational_ring("x")
        A = QuotientRing(Rx, Ideal(Rx, ["x"]))
        U = FractionPresentation(Rx).with_section("s", "x")
        result = universal_factorization(U, RingMap(Rx, A, ["x"]))
        self.assertFalse(result.factors)
        self.assertEqual(result.failing, ["s"])
        with self.assertRaises(UsageError):
            result.image(U.one())

    def test_base_change_keeps_exponents(self) -> None:
        Rt = rational_ring("t")
        phi = RingMap(R, Rt, ["t^2", "t"])
        U = invert_x()
        V = base_change(U, phi)
        u = map_element(U.element("y", S), V, phi)
        self.assertEqual(u, V.element("t^3", MultiExponent.of(s=2)))


class TestContraction(unittest.TestCase):
    def test_fraction_generator_contracts_to_numerator(self) -> None:
        U = invert_x()
        result = extend_contract(U, [U.element("y", S)])
        self.assertTrue(result.ideal.equals(Ideal(R, ["y"])))
        self.assertFalse(result.isomorphism)
        self.assertEqual(result.failing, ["s"])

    def test_ideal_away_from_the_section(self) -> None:
        U = invert_x()
        result = extend_contract(U, [U("x - 1"), U("y")])
        self.assertTrue(result.isomorphism)
        self.assertEqual(quotient_dimension(U, result.ideal), 1)
        self.assertEqual(localized_quotient_dimension(U, result.ideal), 1)

    def test_localization_drops_points(self) -> None:
        U = invert_x()
        ideal = Ideal(R, ["x^2 - x", "y"])
        self.assertEqual(quotient_dimension(U, ideal), 2)
        self.assertEqual(localized_quotient_dimension(U, ideal), 1)

    def test_extended_ideal_clears_denominators(self) -> None:
        U = invert_x()
        by_fraction = extended_ideal(U, [U.element("y", S)])
        self.assertTrue(by_fraction.equals(extended_ideal(U, [U("y")])))
        self.assertTrue(extended_ideal(U, [U.inverse_of("s")]).is_unit())
        self.assertFalse(extended_ideal(U, [U("y")]).is_unit())
        self.assertTrue(extended_ideal(U, [U("x")]).is_unit())

    def test_extended_ideal_needs_free_sections(self) -> None:
        curve = QuotientRing(R, Ideal(R, ["y^2 - x^3 + x"]))
        U = FractionPresentation(curve).with_section("s", "x", InvertibleModule(curve, ["x", "y"]))
        with self.assertRaises(UsageError):
            extended_ideal(U, [U.one()])

    def test_failed_step_down_is_reported(self) -> None:
        curve = QuotientRing(R, Ideal(R, ["y^2 - x^3 + x"]))
        U = FractionPresentation(curve).with_section("s", "x", InvertibleModule(curve, ["x", "y"]))
        u = U.element("x", S)
        with mock.patch.object(QuotientRing, "divide", return_value=None):
            with self.assertRaises(VerificationFailure):
                extend_contract(U, [u])

    def test_finite_subset(self) -> None:
        U = invert_x().with_section("t", "y")
        pair = finite_subset_reduce(U, ["s", "t"])
        self.assertEqual(pair.name, "s*t")
        self.assertEqual(pair.section, R.parse("x*y"))
        self.assertEqual(finite_subset_reduce(U, []).section, 1)


if __name__ == "__main__":
    unittest.main()
