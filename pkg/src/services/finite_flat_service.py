"""Finite free algebras by structure constants, multiplication operators and norm sections.

Basis b_0..b_{n-1}; ``table[i][j]`` holds the coordinates of b_i·b_j over the base.
A section of a free rank-1 module L is identified with an algebra element through
a chosen generator of L, so its norm det(s) is the determinant of multiplication
by that element.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from ..core.errors import FieldMismatchError, UsageError, VerificationFailure
from ..core.polynomial import Polynomial, PolynomialRing, block_order
from ..utils.linalg import Matrix, determinant, minors
from .ideal_service import Ideal, PolyLike, QuotientRing, RingMap, as_quotient, colength

logger = logging.getLogger(__name__)

Coordinates = Tuple[Polynomial, ...]


class FiniteFlatAlgebra:
    """Commutative algebra free of rank n over ``base`` with a fixed basis."""

    def __init__(
        self,
        base: Union[PolynomialRing, QuotientRing],
        labels: Sequence[str],
        table: Sequence[Sequence[Sequence[PolyLike]]],
        unit: Sequence[PolyLike],
        coordinates: Optional[Callable[[Polynomial], Coordinates]] = None,
        ambient: Optional[PolynomialRing] = None,
        monic: Optional[Polynomial] = None,
    ):
        self.base = as_quotient(base)
        ring = self.base.ring
        self.labels = tuple(labels)
        self.rank = len(self.labels)
        n = self.rank
        if len(table) != n or any(len(row) != n for row in table):
            raise UsageError(f"structure table must be {n}x{n}")
        self.table: Tuple[Tuple[Coordinates, ...], ...] = tuple(
            tuple(self._coords([ring(v) for v in entry]) for entry in row) for row in table
        )
        self.unit: Coordinates = self._coords([ring(v) for v in unit])
        self._to_coordinates = coordinates
        self.ambient = ambient
        self.monic = monic
        self.var_index: Optional[int] = None
        self.monic_coefficients: Tuple[Polynomial, ...] = ()

    def _coords(self, values: Sequence[Polynomial]) -> Coordinates:
        if len(values) != self.rank:
            raise UsageError(f"expected {self.rank} coordinates, got {len(values)}")
        return tuple(self.base.reduce(v) for v in values)

    # -- constructors ----------------------------------------------------------------

    @classmethod
    def from_monic(cls, base: Union[PolynomialRing, QuotientRing], m: Polynomial, var: Union[int, str]) -> "FiniteFlatAlgebra":
        """base[x]/(m) for m monic in x; m lives in a ring whose other variables are the base's."""
        base = as_quotient(base)
        ambient = m.ring
        i = ambient.index(var) if isinstance(var, str) else var
        others = [j for j in range(ambient.nvars) if j != i]
        if [ambient.variables[j] for j in others] != list(base.ring.variables):
            raise FieldMismatchError(f"{m} must be in {base.ring!r} plus the variable {ambient.variables[i]}")
        back = [0] * ambient.nvars
        for pos, j in enumerate(others):
            back[j] = pos
        coeffs = [c.to_ring(base.ring, back) for c in m.coefficients_in(i)]
        n = len(coeffs) - 1
        if n < 1:
            raise UsageError(f"{m} has degree < 1 in {ambient.variables[i]}")
        if not base.equal(coeffs[n], 1):
            raise UsageError(f"{m} is not monic in {ambient.variables[i]}")
        powers = _CompanionPowers(base, coeffs)
        table = [[powers[a + b] for b in range(n)] for a in range(n)]
        name = ambient.variables[i]
        labels = ["1"] + [name if k == 1 else f"{name}^{k}" for k in range(1, n)]

        def coordinates(f: Polynomial) -> Coordinates:
            out = [base.ring.zero()] * n
            for k, c in enumerate(f.coefficients_in(i)):
                if not c:
                    continue
                c = c.to_ring(base.ring, back)
                out = [o + c * p for o, p in zip(out, powers[k])]
            return tuple(base.reduce(o) for o in out)

        algebra = cls(base, labels, table, powers[0], coordinates, ambient, m)
        algebra.var_index = i
        algebra.monic_coefficients = tuple(coeffs)
        return algebra

    @classmethod
    def from_quotient(cls, ideal: Ideal) -> "FiniteFlatAlgebra":
        """k[x]/I over the field k, in the staircase basis of I."""
        basis = colength(ideal)
        if basis is None:
            raise UsageError(f"{ideal} does not have finite colength")
        ring = ideal.ring
        point = PolynomialRing(ring.field, ())
        monos = basis.monomials()

        def coordinates(f: Polynomial) -> Coordinates:
            return tuple(point.constant(c) for c in basis.coordinates(ideal.normal_form(ring(f))))

        table = [[coordinates(a * b) for b in monos] for a in monos]
        return cls(point, basis.labels(), table, coordinates(ring.one()), coordinates, ring)

    # -- elements ----------------------------------------------------------------------

    def element(self, f: PolyLike) -> Coordinates:
        if self._to_coordinates is None or self.ambient is None:
            raise UsageError("this algebra was given by a table; pass coordinates instead")
        return self._to_coordinates(self.ambient(f))

    def coerce(self, value: Union[PolyLike, Sequence[PolyLike]]) -> Coordinates:
        if isinstance(value, (list, tuple)):
            return self._coords([self.base.ring(v) for v in value])
        return self.element(value)

    def multiply(self, u: Sequence[Polynomial], v: Sequence[Polynomial]) -> Coordinates:
        n = self.rank
        out = [self.base.ring.zero()] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if not v[j]:
                    continue
                uv = u[i] * v[j]
                entry = self.table[i][j]
                for k in range(n):
                    if entry[k]:
                        out[k] = out[k] + uv * entry[k]
        return self._coords(out)

    def basis_vector(self, k: int) -> Coordinates:
        ring = self.base.ring
        return tuple(ring.one() if j == k else ring.zero() for j in range(self.rank))

    def verify(self) -> List[str]:
        """Commutativity, associativity and unit law; returns the violations found."""
        problems: List[str] = []
        n = self.rank

        def same(a: Sequence[Polynomial], b: Sequence[Polynomial]) -> bool:
            return all(self.base.equal(x, y) for x, y in zip(a, b))

        for i in range(n):
            e_i = self.basis_vector(i)
            if not same(self.multiply(self.unit, e_i), e_i):
                problems.append(f"unit law fails on {self.labels[i]}")
            for j in range(i + 1, n):
                if not same(self.table[i][j], self.table[j][i]):
                    problems.append(f"{self.labels[i]}*{self.labels[j]} != {self.labels[j]}*{self.labels[i]}")
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    left = self.multiply(self.table[i][j], self.basis_vector(l))
                    right = self.multiply(self.basis_vector(i), self.table[j][l])
                    if not same(left, right):
                        problems.append(f"associativity fails on ({self.labels[i]}, {self.labels[j]}, {self.labels[l]})")
        return problems

    def check(self) -> "FiniteFlatAlgebra":
        problems = self.verify()
        if problems:
            raise UsageError("invalid structure constants: " + "; ".join(problems[:3]))
        return self

    def base_change(self, phi: RingMap) -> "FiniteFlatAlgebra":
        """E ⊗_A B along φ: A -> B."""
        if phi.source.ring != self.base.ring:
            raise FieldMismatchError(f"map starts at {phi.source!r}, algebra lives over {self.base!r}")
        phi.check_well_defined()
        if self.monic is not None and self.ambient is not None:
            name = self.ambient.variables[self.var_index]
            B = phi.target
            big = B.ring.with_variables(suffix=(B.ring.fresh_name(name),))
            shift = list(range(B.ring.nvars))
            coeffs = [phi(c).to_ring(big, shift) for c in self.monic_coefficients]
            m = Polynomial.from_coefficients_in(big, big.nvars - 1, coeffs)
            return FiniteFlatAlgebra.from_monic(B, m, big.nvars - 1)
        table = [[[phi(c) for c in entry] for entry in row] for row in self.table]
        unit = [phi(c) for c in self.unit]
        return FiniteFlatAlgebra(phi.target, self.labels, table, unit)

    def __repr__(self) -> str:
        return f"FiniteFlatAlgebra(rank {self.rank} over {self.base!r}, basis {list(self.labels)})"


class _CompanionPowers:
    """Coordinates of x^k in base[x]/(m), extended on demand."""

    def __init__(self, base: QuotientRing, coeffs: Sequence[Polynomial]):
        self.base = base
        self.coeffs = list(coeffs)
        n = len(coeffs) - 1
        zero, one = base.ring.zero(), base.ring.one()
        self.n = n
        self.rows: List[Coordinates] = [tuple(one if j == k else zero for j in range(n)) for k in range(n)]

    def __getitem__(self, k: int) -> Coordinates:
        n = self.n
        while len(self.rows) <= k:
            prev = self.rows[-1]
            top = prev[n - 1]
            shifted = (self.base.ring.zero(),) + prev[: n - 1]
            self.rows.append(tuple(self.base.reduce(shifted[j] - top * self.coeffs[j]) for j in range(n)))
        return self.rows[k]


@dataclass(frozen=True)
class ModuleSection:
    """s: E -> L with L free of rank one over E, given by s = f·ℓ for a generator ℓ."""

    algebra: FiniteFlatAlgebra
    coordinates: Coordinates
    name: str = "s"

    @classmethod
    def of(cls, algebra: FiniteFlatAlgebra, value: Union[PolyLike, Sequence[PolyLike]], name: Optional[str] = None) -> "ModuleSection":
        coords = algebra.coerce(value)
        return cls(algebra, coords, name or str(value))


@dataclass(frozen=True)
class NormSection:
    """det(s) as an element of the base ring (against the chosen generators)."""

    base: QuotientRing
    value: Polynomial

    def is_unit(self) -> bool:
        return self.base.is_unit(self.value)

    def is_nowhere_vanishing(self) -> bool:
        return self.is_unit()

    def evaluate(self, point: Sequence) -> object:
        return self.value.evaluate(point)

    def __eq__(self, other) -> bool:
        if isinstance(other, NormSection):
            return self.base.ring == other.base.ring and self.base.equal(self.value, other.value)
        if isinstance(other, (Polynomial, int)):
            return self.base.equal(self.value, self.base.ring(other))
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return str(self.value)


def mult_operator(E: FiniteFlatAlgebra, s: Union[ModuleSection, Sequence[PolyLike], PolyLike]) -> Matrix:
    """Matrix of multiplication by s; column j holds the coordinates of s·b_j."""
    coords = s.coordinates if isinstance(s, ModuleSection) else E.coerce(s)
    cols = [E.multiply(coords, E.basis_vector(j)) for j in range(E.rank)]
    return [[cols[j][i] for j in range(E.rank)] for i in range(E.rank)]


def det_section(E: FiniteFlatAlgebra, s: Union[ModuleSection, Sequence[PolyLike], PolyLike]) -> NormSection:
    value = determinant(mult_operator(E, s), E.base.ring)
    return NormSection(E.base, E.base.reduce(value))


def base_change_det(E: FiniteFlatAlgebra, s: Union[ModuleSection, Sequence[PolyLike], PolyLike], phi: RingMap) -> NormSection:
    """det of s ⊗ 1 on E ⊗ B, checked against φ(det s)."""
    coords = s.coordinates if isinstance(s, ModuleSection) else E.coerce(s)
    EB = E.base_change(phi)
    moved = NormSection(phi.target, phi.target.reduce(determinant(mult_operator(EB, [phi(c) for c in coords]), phi.target.ring)))
    expected = phi(det_section(E, coords).value)
    if not phi.target.equal(moved.value, expected):
        raise VerificationFailure(f"det does not commute with base change: {moved.value} vs {expected}")
    return moved


def fitting_ideal(matrix: Sequence[Sequence[PolyLike]], j: int, base: Union[PolynomialRing, QuotientRing]) -> Ideal:
    """Fitt_j of the cokernel of ``matrix`` (rows = generators): ideal of (rows - j)-minors."""
    base = as_quotient(base)
    ring = base.ring
    m = [[ring(v) for v in row] for row in matrix]
    rows = len(m)
    size = rows - j
    if size <= 0:
        return Ideal.unit(ring)
    if j < 0:
        return Ideal(ring, list(base.ideal.generators))
    return Ideal(ring, minors(m, size, ring) + list(base.ideal.generators))


def check_locally_free(matrix: Sequence[Sequence[PolyLike]], n: int, base: Union[PolynomialRing, QuotientRing]) -> bool:
    """Locally free of rank n iff Fitt_{n-1} = 0 and Fitt_n = (1)."""
    base = as_quotient(base)
    lower = fitting_ideal(matrix, n - 1, base)
    upper = fitting_ideal(matrix, n, base)
    return lower.equals(base.ideal) and upper.is_unit()


def locally_free_rank(matrix: Sequence[Sequence[PolyLike]], base: Union[PolynomialRing, QuotientRing]) -> Optional[int]:
    for n in range(len(matrix) + 1):
        if check_locally_free(matrix, n, base):
            return n
    return None


def _invertible_over(matrix: Matrix, B: QuotientRing) -> bool:
    """Solve M z = e_j for every column by elimination; M is invertible iff each solution is unique and exists."""
    if B.is_zero_ring():
        return True
    n = len(matrix)
    if n == 0:
        return True
    names = [B.ring.fresh_name(f"z{k}_") for k in range(n)]
    big = B.ring.with_variables(prefix=names)
    shift = [n + i for i in range(B.ring.nvars)]
    lifted = [[c.to_ring(big, shift) for c in row] for row in matrix]
    relations = [g.to_ring(big, shift) for g in B.ideal.generators]
    order = block_order(n)
    for j in range(n):
        eqs = []
        for i in range(n):
            lhs = big.zero()
            for k in range(n):
                if lifted[i][k]:
                    lhs = lhs + lifted[i][k] * big.gen(k)
            eqs.append(lhs - (1 if i == j else 0))
        gb = Ideal(big, eqs + relations).groebner(order)
        for k in range(n):
            var = big.gen(k).leading_monomial()
            solved = any(
                g.leading_monomial(order) == var and all(not any(m[:n]) for m in (g - big.gen(k)).terms)
                for g in gb
            )
            if not solved:
                return False
        free = [g for g in gb if all(not any(m[:n]) for m in g.terms)]
        contracted = Ideal(B.ring, [g.to_ring(B.ring, [0] * n + list(range(B.ring.nvars))) for g in free])
        if not contracted.equals(B.ideal):
            return False
    return True


def sigma_inverting_equiv(
    E: FiniteFlatAlgebra,
    sections: Sequence[Union[ModuleSection, Sequence[PolyLike], PolyLike]],
    phi: RingMap,
) -> Tuple[bool, bool]:
    """(every φ(det s) is a unit of B, every s ⊗ B acts invertibly on E ⊗ B).

    The two verdicts always agree; a disagreement raises VerificationFailure.
    """
    if phi.source.ring != E.base.ring:
        raise FieldMismatchError(f"map starts at {phi.source!r}, algebra lives over {E.base!r}")
    phi.check_well_defined()
    B = phi.target
    verdict_norm = True
    verdict_operator = True
    for s in sections:
        coords = s.coordinates if isinstance(s, ModuleSection) else E.coerce(s)
        if not B.is_unit(phi(det_section(E, coords).value)):
            verdict_norm = False
        moved = [[phi(c) for c in row] for row in mult_operator(E, coords)]
        if not _invertible_over(moved, B):
            verdict_operator = False
    if verdict_norm != verdict_operator:
        raise VerificationFailure(
            f"norm verdict {verdict_norm} and operator verdict {verdict_operator} disagree for {E} over {B!r}"
        )
    logger.debug("sigma-inverting verdict over %r: %s", B, verdict_norm)
    return verdict_norm, verdict_operator
