"""Exact linear algebra over fields and over polynomial rings, on sympy's DomainMatrix."""
from __future__ import annotations

from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from ..core.errors import UsageError
from ..core.polynomial import Polynomial, PolynomialRing
from ..core.scalars import Field, Scalar
from .symbolic import from_domain, from_scalar, poly_domain, scalar_domain, to_domain, to_scalar

Matrix = List[List[Polynomial]]


def _poly_matrix(matrix: Sequence[Sequence[Polynomial]], ring: PolynomialRing) -> DomainMatrix:
    K = poly_domain(ring)
    rows = [[to_domain(ring(e), K) for e in row] for row in matrix]
    cols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), cols), K)


def determinant(matrix: Sequence[Sequence[Polynomial]], ring: PolynomialRing) -> Polynomial:
    """Fraction-free (Bareiss) determinant over k[vars]."""
    n = len(matrix)
    if n == 0:
        return ring.one()
    if any(len(row) != n for row in matrix):
        raise UsageError("determinant of a non-square matrix")
    return from_domain(_poly_matrix(matrix, ring).det(), ring)


def minors(matrix: Sequence[Sequence[Polynomial]], size: int, ring: PolynomialRing) -> List[Polynomial]:
    """All size x size minors, in row/column combination order."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if size == 0:
        return [ring.one()]
    if size > rows or size > cols:
        return []
    dm = _poly_matrix(matrix, ring)
    return [
        from_domain(dm.extract(list(rs), list(cs)).det(), ring)
        for rs in combinations(range(rows), size)
        for cs in combinations(range(cols), size)
    ]


# -- field linear algebra ---------------------------------------------------------------


def row_reduce(rows: Sequence[Sequence[Scalar]], field: Field) -> Tuple[List[List[Scalar]], List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if not rows:
        return [], []
    K = scalar_domain(field)
    dm = DomainMatrix([[to_scalar(v, field) for v in row] for row in rows], (len(rows), len(rows[0])), K)
    reduced, pivots = dm.rref()
    nonzero = reduced.to_list()[: len(pivots)]
    return [[from_scalar(v, field) for v in row] for row in nonzero], list(pivots)


def rank(rows: Sequence[Sequence[Scalar]], field: Field) -> int:
    return len(row_reduce(rows, field)[1])


def in_row_span(vector: Sequence[Scalar], rows: Sequence[Sequence[Scalar]], field: Field) -> bool:
    if not rows:
        return not any(field.convert(v) for v in vector)
    return rank(list(rows) + [list(vector)], field) == rank(rows, field)


def solve(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], field: Field) -> Optional[List[Scalar]]:
    """One solution x of matrix * x = rhs, or None."""
    n = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = row_reduce(aug, field)
    if n in pivots:
        return None
    x = [field.zero] * n
    for row, c in zip(red, pivots):
        x[c] = row[n]
    return x
