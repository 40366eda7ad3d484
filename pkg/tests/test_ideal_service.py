"""Tests for src.services.ideal_service."""
import unittest
from unittest import mock

from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import BoundExceeded, UsageError, VerificationFailure
from src.core.polynomial import LEX, Polynomial, PolynomialRing, rational_ring
from src.core.scalars import PrimeField
from src.services.ideal_service import (
    EngineBounds,
    Ideal,
    QuotientRing,
    RingMap,
    buchberger,
    colength,
    eliminate,
    intersection,
    quotient,
    quotient_by_element,
    saturate,
    saturate_by_quotients,
)

R = rational_ring("x", "y")


def I(*gens: str) -> Ideal:
    return Ideal(R, gens)


class TestGroebner(unittest.TestCase):
    def test_reduced_basis_is_monic_and_canonical(self) -> None:
        a = I("x^2 - 1", "2*x - 2")
        self.assertEqual(a.groebner(), (R.parse("x - 1"),))
        self.assertTrue(a.equals(I("x - 1")))

    def test_unit_ideal(self) -> None:
        self.assertTrue(I("x", "x + 1").is_unit())
        self.assertFalse(I("x*y").is_unit())

    def test_membership(self) -> None:
        a = I("x^2", "y^2")
        self.assertTrue(a.contains("x^2*y + y^3"))
        self.assertFalse(a.contains("x*y"))

    def test_lex_basis_triangular(self) -> None:
        gb = I("x^2 + y^2 - 1", "x - y").groebner(LEX)
        self.assertEqual(gb[-1], R.parse("y^2 - 1/2"))

    def test_bound_exceeded(self) -> None:
        gens = [R.parse("x^3 - y^2"), R.parse("x*y^2 - x - 1")]
        with self.assertRaises(BoundExceeded):
            buchberger(gens, bounds=EngineBounds(max_pairs=1, max_degree=2))

    def test_lift_cofactors(self) -> None:
        a = I("x", "y")
        f = R.parse("x^2 + x*y + y")
        cof = a.lift(f)
        self.assertIsNotNone(cof)
        self.assertEqual(cof[0] * R.parse("x") + cof[1] * R.parse("y"), f)
        self.assertIsNone(a.lift("1"))

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), min_size=1, max_size=4))
    def test_generators_lie_in_basis_ideal(self, terms) -> None:
        f = sum((R.monomial((a, b), c) for a, b, c in terms if c), R.zero())
        a = I("x^2 - y", "x*y - 1").with_generators([f])
        reduced = a.reduced()
        for g in a.generators:
            self.assertTrue(reduced.contains(g))


class TestIdealOperations(unittest.TestCase):
    def test_intersection_of_coordinate_axes(self) -> None:
        self.assertTrue(intersection(I("x"), I("y")).equals(I("x*y")))

    def test_quotient(self) -> None:
        self.assertTrue(quotient(I("x^2*y"), I("x")).equals(I("x*y")))

    def test_broken_division_is_reported(self) -> None:
        with mock.patch.object(Polynomial, "exact_div", return_value=None):
            with self.assertRaises(VerificationFailure):
                quotient_by_element(I("x^2*y"), "x")

    def test_saturation_routes_agree(self) -> None:
        a = I("x^3*y", "x^2*y^2")
        self.assertTrue(saturate(a, "x").equals(I("y")))
        self.assertTrue(saturate_by_quotients(a, "x").equals(I("y")))

    def test_saturation_by_zero(self) -> None:
        with self.assertRaises(UsageError):
            saturate(I("x"), "0")

    def test_eliminate_lands_in_smaller_ring(self) -> None:
        out = eliminate(I("x - y^2", "y - 2"), ["y"])
        self.assertEqual(out.ring.variables, ("x",))
        self.assertTrue(out.contains(out.ring.parse("x - 4")))


class TestColength(unittest.TestCase):
    def test_finite(self) -> None:
        basis = colength(I("x^2", "y"))
        self.assertEqual(basis.dimension, 2)
        self.assertEqual(basis.labels(), ["1", "x"])

    def test_infinite(self) -> None:
        self.assertIsNone(colength(I("x")))

    def test_unit_has_colength_zero(self) -> None:
        self.assertEqual(colength(I("1")).dimension, 0)

    def test_points_over_f3(self) -> None:
        F3 = PolynomialRing(PrimeField(3), ("x",))
        self.assertEqual(colength(Ideal(F3, ["x^3 - x"])).dimension, 3)


class TestQuotientRing(unittest.TestCase):
    def test_inverse_modulo(self) -> None:
        Q = QuotientRing(rational_ring("x"), Ideal(rational_ring("x"), ["x^2 - 2"]))
        inv = Q.inverse("x")
        self.assertTrue(Q.equal(inv * Q.ring.parse("x"), "1"))
        self.assertIsNone(QuotientRing(R, I("x*y")).inverse("x"))

    def test_ring_map_well_defined(self) -> None:
        S = rational_ring("t")
        source = QuotientRing(R, I("y - x^2"))
        good = RingMap(source, S, ["t", "t^2"]).check_well_defined()
        self.assertEqual(good("y + x"), S.parse("t^2 + t"))
        with self.assertRaises(UsageError):
            RingMap(source, S, ["t", "t"]).check_well_defined()

    def test_image_count_checked(self) -> None:
        with self.assertRaises(UsageError):
            RingMap(R, R, ["x"])


if __name__ == "__main__":
    unittest.main()
