"""Tests for src.services.check_service."""
import random
import unittest
from fractions import Fraction
from unittest import mock

from src.core.errors import UsageError, VerificationFailure
from src.core.polynomial import PolynomialRing, rational_ring
from src.core.scalars import PrimeField
from src.services.check_service import (
    CheckResult,
    brute_force_plane_count,
    equality_laws_sweep,
    graded_membership,
    membership_sweep,
    monic_resultant_grid,
    monomials_of_degree,
    nonscheme_sweep,
    resultant_by_roots,
    resultant_sweep,
    roundtrip_sweep,
    run_checks,
    sigma_cases,
    sigma_table_check,
)
from src.services import finite_flat_service, fraction_service
from src.services.ideal_service import Ideal


class TestOracles(unittest.TestCase):
    def test_monomial_count(self) -> None:
        self.assertEqual(len(monomials_of_degree(3, 2)), 6)
        self.assertEqual(monomials_of_degree(0, 0), [()])

    def test_graded_membership_agrees_with_groebner(self) -> None:
        ring = PolynomialRing(PrimeField(2), ("x", "y", "z"))
        gens = [ring.parse("x*y + z^2"), ring.parse("x^2")]
        for text in ("x^2*y + y*z^2", "x*y*z", "x^3 + x*z^2 + x^2*y"):
            f = ring.parse(text)
            self.assertEqual(graded_membership(f, gens), Ideal(ring, gens).contains(f), text)

    def test_graded_membership_needs_homogeneous(self) -> None:
        ring = rational_ring("x")
        with self.assertRaises(ValueError):
            graded_membership(ring.parse("x + 1"), [ring.parse("x")])

    def test_resultant_by_roots(self) -> None:
        ring = rational_ring("x")
        self.assertEqual(resultant_by_roots([Fraction(1), Fraction(1, 2)], ring.parse("x + 1")), Fraction(3))

    def test_plane_subspace_oracle(self) -> None:
        self.assertEqual(brute_force_plane_count(2), 24)


class TestSweeps(unittest.TestCase):
    def test_record(self) -> None:
        result = CheckResult("demo")
        result.record(True)
        result.record(False, "broken")
        self.assertEqual((result.trials, result.failures, result.details), (2, 1, ["broken"]))
        self.assertFalse(result.ok)

    def test_small_sweeps_pass(self) -> None:
        self.assertTrue(resultant_sweep(random.Random(3), trials=5).ok)
        self.assertTrue(monic_resultant_grid(random.Random(1), 2).ok)
        self.assertTrue(nonscheme_sweep(random.Random(5), trials=20).ok)

    def test_monic_grid_draws_twenty_seeded_samples(self) -> None:
        result = monic_resultant_grid(random.Random(2), max_degree=1)
        self.assertEqual(result.trials, 3 * 20)
        self.assertTrue(result.ok)
        again = monic_resultant_grid(random.Random(2), max_degree=1)
        self.assertEqual(again.details, result.details)

    def test_membership_sweep_covers_affine_input(self) -> None:
        result = membership_sweep(random.Random(11), trials=30)
        self.assertTrue(result.ok, result.details)
        self.assertGreater(result.trials, 30)

    def test_roundtrip_passes(self) -> None:
        self.assertTrue(roundtrip_sweep(random.Random(4), trials=8).ok)

    def test_roundtrip_catches_wrong_contraction(self) -> None:
        def unit_contraction(U, generators):
            return fraction_service.ContractionResult(Ideal.unit(U.ring), True, [])

        with mock.patch.object(fraction_service, "extend_contract", side_effect=unit_contraction):
            result = roundtrip_sweep(random.Random(4), trials=20)
        self.assertGreater(result.failures, 0)

    def test_equality_laws(self) -> None:
        result = equality_laws_sweep(random.Random(6), trials=30)
        self.assertEqual(result.name, "equality_laws")
        self.assertEqual(result.trials, 30 * 5)
        self.assertTrue(result.ok, result.details)

    def test_sigma_table(self) -> None:
        cases = sigma_cases()
        self.assertEqual(len(cases), 10)
        self.assertEqual(sum(case.expected for case in cases), 6)
        result = sigma_table_check()
        self.assertEqual(result.trials, 10)
        self.assertTrue(result.ok, result.details)

    def test_sigma_table_reports_disagreement(self) -> None:
        with mock.patch.object(finite_flat_service, "_invertible_over", return_value=True):
            with self.assertRaises(VerificationFailure):
                finite_flat_service.sigma_inverting_equiv(
                    sigma_cases()[1].algebra, ["x"], sigma_cases()[1].phi
                )
            result = sigma_table_check()
        self.assertEqual(result.failures, 4)

    def test_run_checks_is_seeded(self) -> None:
        first = run_checks(7, ["membership"])[0]
        second = run_checks(7, ["membership"])[0]
        self.assertEqual((first.trials, first.failures), (second.trials, second.failures))
        self.assertTrue(first.ok)

    def test_unknown_check(self) -> None:
        with self.assertRaises(UsageError):
            run_checks(0, ["nope"])


if __name__ == "__main__":
    unittest.main()
