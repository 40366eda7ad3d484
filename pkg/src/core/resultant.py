"""Sylvester matrices and resultants of polynomials viewed as univariate in one variable.

Sign convention: for monic m with roots b_1..b_n, res(m, f) = f(b_1)...f(b_n).
That is exactly det(Sylvester(m, f)) with the rows of m first, which is also
the convention of ``sympy.resultant``.
"""
from __future__ import annotations

from typing import Union

import sympy
from sympy.polys.subresultants_qq_zz import sylvester

from .errors import UsageError
from .polynomial import Polynomial
from ..utils.linalg import Matrix
from ..utils.symbolic import from_expr, symbols_of, sympy_options, to_expr


def _var_index(p: Polynomial, var: Union[int, str]) -> int:
    return p.ring.index(var) if isinstance(var, str) else var


def sylvester_matrix(f: Polynomial, g: Polynomial, var: Union[int, str]) -> Matrix:
    if f.ring != g.ring:
        raise UsageError(f"resultant of polynomials from {f.ring!r} and {g.ring!r}")
    ring = f.ring
    symbols = symbols_of(ring)
    x = symbols[_var_index(f, var)]
    rows = sylvester(to_expr(f, symbols), to_expr(g, symbols), x, method=1)
    return [[from_expr(rows[i, j], ring) for j in range(rows.cols)] for i in range(rows.rows)]


def sylvester_resultant(f: Polynomial, g: Polynomial, var: Union[int, str]) -> Polynomial:
    """Resultant of (f, g) in ``var``; coefficients may involve other variables."""
    if f.ring != g.ring:
        raise UsageError(f"resultant of polynomials from {f.ring!r} and {g.ring!r}")
    if not f and not g:
        raise UsageError("resultant of two zero polynomials is undefined")
    ring = f.ring
    if not f or not g:
        return ring.zero()
    i = _var_index(f, var)
    df, dg = f.degree_in(i), g.degree_in(i)
    # a constant in ``var`` fills the diagonal of the Sylvester matrix
    if df == 0:
        return f ** dg
    if dg == 0:
        return g ** df
    symbols = symbols_of(ring)
    gens = [symbols[i]] + [s for k, s in enumerate(symbols) if k != i]
    res = sympy.resultant(to_expr(f, symbols), to_expr(g, symbols), *gens, **sympy_options(ring))
    return from_expr(res, ring)
