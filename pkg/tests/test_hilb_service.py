"""Tests for src.services.hilb_service."""
import unittest

from src.core.errors import BoundExceeded, UsageError, VerificationFailure
from src.core.scalars import PrimeField
from src.services.hilb_service import (
    VerificationResult,
    enumerate_points,
    localized_hilb,
    monic_irreducibles,
    norm_of_section,
    stalk_hilb,
    univ_family,
    verify_section_intersection,
    verify_double_count,
)


class TestUniversalFamily(unittest.TestCase):
    def test_monic_signs(self) -> None:
        F = univ_family(2)
        self.assertEqual(F.monic, F.ambient.parse("x^2 - e1*x + e2"))
        self.assertTrue(F.verify())

    def test_norms(self) -> None:
        self.assertEqual(norm_of_section(univ_family(1), "x"), univ_family(1).base.parse("e1"))
        F = univ_family(2)
        self.assertEqual(norm_of_section(F, "x"), F.base.parse("e2"))
        self.assertEqual(norm_of_section(F, "x - 1"), F.base.parse("1 - e1 + e2"))

    def test_norm_of_zero(self) -> None:
        with self.assertRaises(UsageError):
            norm_of_section(univ_family(2), "0")

    def test_needs_positive_n(self) -> None:
        with self.assertRaises(UsageError):
            univ_family(0)

    def test_monic_at_point(self) -> None:
        F = univ_family(2, PrimeField(3))
        self.assertEqual(str(F.monic_at([1, 2])), "x^2 + 2*x + 2")


class TestLocalizedHilb(unittest.TestCase):
    def test_coordinate_ring_inverts_the_norm(self) -> None:
        H = localized_hilb(2, ["x"])
        ring = H.coordinate_ring()
        self.assertTrue(ring.is_unit("e2"))
        self.assertFalse(ring.is_unit("e1"))

    def test_universal_family_restricts(self) -> None:
        H = localized_hilb(2, ["x"])
        self.assertEqual(H.universal_family().rank, 2)

    def test_point_count(self) -> None:
        self.assertEqual(localized_hilb(2, ["x"], PrimeField(3)).count_points(3), 6)


class TestEnumeration(unittest.TestCase):
    def test_line(self) -> None:
        self.assertEqual(len(enumerate_points(3, 2)), 9)
        self.assertEqual(len(enumerate_points(3, 2, ["x"])), 6)

    def test_plane_matches_cell_count(self) -> None:
        for q in (2, 3):
            self.assertEqual(len(enumerate_points(q, 2, plane=True)), q ** 4 + q ** 3)
        self.assertEqual(len(enumerate_points(2, 1, plane=True)), 4)

    def test_plane_ideals_have_colength_two(self) -> None:
        for point in enumerate_points(2, 2, plane=True):
            self.assertEqual(point.ideal.colength().dimension, 2)

    def test_bounds(self) -> None:
        with self.assertRaises(BoundExceeded):
            enumerate_points(4, 2)
        with self.assertRaises(BoundExceeded):
            enumerate_points(2, 4)
        with self.assertRaises(BoundExceeded):
            enumerate_points(2, 3, plane=True)


class TestVerification(unittest.TestCase):
    def test_double_count(self) -> None:
        result = verify_double_count(2, ["x"], 3).require()
        self.assertEqual(result.counts, {"count_ideal": 6, "count_norm": 6, "closed": 6})

    def test_several_sections(self) -> None:
        result = verify_section_intersection(2, ["x", "x - 1"], 3).require()
        self.assertEqual(result.counts, {"count": 4, "count_intersection": 4, "count_empty": 9})

    def test_require_raises(self) -> None:
        with self.assertRaises(VerificationFailure):
            VerificationResult("demo", {"a": 1}, False, ["broken"]).require()

    def test_irreducibles_over_f2(self) -> None:
        found = [str(f) for f in monic_irreducibles(PrimeField(2), 2)]
        self.assertEqual(found, ["x", "x + 1", "x^2 + x + 1"])

    def test_stalk(self) -> None:
        for q in (2, 3):
            result = stalk_hilb(2, q)
            self.assertTrue(result.match)
            self.assertEqual(result.count_ideal, 1)


if __name__ == "__main__":
    unittest.main()
