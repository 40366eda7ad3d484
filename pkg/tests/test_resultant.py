"""Tests for src.core.resultant and src.utils.linalg."""
import unittest
from itertools import product

from src.core.errors import UsageError
from src.core.polynomial import Polynomial, PolynomialRing, rational_ring
from src.core.resultant import sylvester_matrix, sylvester_resultant
from src.core.scalars import PrimeField
from src.services.ideal_service import Ideal
from src.utils.linalg import determinant, minors, rank, solve


class TestResultant(unittest.TestCase):
    def test_monic_resultant_is_product_of_values(self) -> None:
        R = rational_ring("x")
        m = R.parse("(x - 1)*(x - 2)")
        f = R.parse("x^2 + 1")
        # f(1) * f(2) = 2 * 5
        self.assertEqual(sylvester_resultant(m, f, "x"), 10)

    def test_common_root_gives_zero(self) -> None:
        R = rational_ring("x")
        self.assertEqual(sylvester_resultant(R.parse("x^2 - 1"), R.parse("x - 1"), "x"), 0)

    def test_norm_of_x_is_last_coefficient(self) -> None:
        R = rational_ring("x", "e1", "e2")
        m = R.parse("x^2 - e1*x + e2")
        self.assertEqual(sylvester_resultant(m, R.parse("x"), "x"), R.parse("e2"))
        self.assertEqual(sylvester_resultant(m, R.parse("x - 1"), "x"), R.parse("1 - e1 + e2"))

    def test_multiplicative_in_second_argument(self) -> None:
        R = rational_ring("x")
        m = R.parse("x^3 - 2*x + 5")
        f, g = R.parse("x^2 + 3"), R.parse("2*x - 1")
        self.assertEqual(sylvester_resultant(m, f * g, "x"), sylvester_resultant(m, f, "x") * sylvester_resultant(m, g, "x"))

    def test_vanishes_exactly_on_common_factor_over_f3(self) -> None:
        F3 = PrimeField(3)
        R = PolynomialRing(F3, ("x",))
        x = R.var("x")
        values = list(F3.elements())
        others = [Polynomial(R, {(i,): c for i, c in enumerate(cs)}) for cs in product(values, repeat=3)]
        for d in (1, 2):
            for tail in product(values, repeat=d):
                m = x ** d + Polynomial(R, {(i,): c for i, c in enumerate(tail)})
                for g in others:
                    if not g:
                        continue
                    coprime = Ideal(R, [m, g]).is_unit()
                    self.assertEqual(bool(sylvester_resultant(m, g, "x")), coprime, f"{m}, {g}")

    def test_matrix_shape(self) -> None:
        R = rational_ring("x")
        rows = sylvester_matrix(R.parse("x^3 + 1"), R.parse("x^2"), 0)
        self.assertEqual(len(rows), 5)
        self.assertTrue(all(len(r) == 5 for r in rows))

    def test_both_zero(self) -> None:
        R = rational_ring("x")
        with self.assertRaises(UsageError):
            sylvester_resultant(R.zero(), R.zero(), "x")


class TestLinalg(unittest.TestCase):
    def test_symbolic_determinant(self) -> None:
        R = rational_ring("a", "b")
        a, b = R.gens()
        self.assertEqual(determinant([[a, b], [b, a]], R), a * a - b * b)

    def test_determinant_is_multiplicative(self) -> None:
        R = rational_ring("a", "b")
        s = [[R.parse(v) for v in row] for row in (("a", "b", "1"), ("0", "a*b", "2"), ("b", "1", "a"))]
        t = [[R.parse(v) for v in row] for row in (("1", "a", "0"), ("b", "1", "a"), ("2", "0", "b"))]
        st = [[sum((s[i][k] * t[k][j] for k in range(3)), R.zero()) for j in range(3)] for i in range(3)]
        self.assertEqual(determinant(st, R), determinant(s, R) * determinant(t, R))

    def test_minors(self) -> None:
        R = rational_ring("a")
        a = R.var("a")
        self.assertEqual(minors([[a, R.zero()], [R.zero(), R.zero()]], 1, R), [a, R.zero(), R.zero(), R.zero()])
        self.assertEqual(minors([[a]], 2, R), [])

    def test_rank_and_solve_over_f3(self) -> None:
        F3 = PrimeField(3)
        rows = [[F3(1), F3(2)], [F3(2), F3(1)]]
        # second row is 2 * first row mod 3
        self.assertEqual(rank(rows, F3), 1)
        self.assertIsNone(solve(rows, [F3(1), F3(1)], F3))

    def test_non_square(self) -> None:
        R = PolynomialRing(PrimeField(2), ("a",))
        with self.assertRaises(UsageError):
            determinant([[R.one(), R.one()]], R)


if __name__ == "__main__":
    unittest.main()
