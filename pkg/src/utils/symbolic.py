"""Conversions between hilbloc polynomials and sympy.

Two views are offered: plain expressions (for factoring, gcds and resultants
through the sympy front end) and elements of sympy's exact polynomial domains
``QQ[...]`` / ``GF(p)[...]`` (for DomainMatrix linear algebra).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, List, Optional, Sequence

import sympy

from ..core.polynomial import Polynomial, PolynomialRing
from ..core.scalars import Field, PrimeField, PrimeFieldElement, Scalar


def symbols_of(ring: PolynomialRing) -> List[sympy.Symbol]:
    return [sympy.Symbol(v) for v in ring.variables]


def sympy_options(ring: PolynomialRing) -> dict:
    if isinstance(ring.field, PrimeField):
        return {"modulus": ring.field.p}
    return {"domain": "QQ"}


def to_expr(p: Polynomial, symbols: Optional[Sequence[sympy.Symbol]] = None) -> sympy.Expr:
    symbols = symbols or symbols_of(p.ring)
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        coeff = sympy.Integer(int(c)) if isinstance(c, PrimeFieldElement) else sympy.Rational(c.numerator, c.denominator)
        term = coeff
        for s, e in zip(symbols, m):
            if e:
                term = term * s ** e
        expr = expr + term
    return expr


def from_expr(expr: sympy.Expr, ring: PolynomialRing) -> Polynomial:
    poly = sympy.Poly(expr, *symbols_of(ring), **sympy_options(ring))
    terms = {}
    for mono, c in poly.terms():
        if isinstance(ring.field, PrimeField):
            value: Any = int(c)
        else:
            r = sympy.Rational(c)
            value = Fraction(int(r.p), int(r.q))
        terms[tuple(mono)] = ring.field.convert(value)
    return Polynomial(ring, terms)


# -- domain elements --------------------------------------------------------------------


def scalar_domain(field: Field):
    if isinstance(field, PrimeField):
        return sympy.GF(field.p)
    return sympy.QQ


def to_scalar(c: Scalar, field: Field):
    K = scalar_domain(field)
    c = field.convert(c)
    if isinstance(field, PrimeField):
        return K(int(c))
    return K(c.numerator, c.denominator)


def from_scalar(c, field: Field) -> Scalar:
    if isinstance(field, PrimeField):
        return field.convert(int(c))
    return field.convert(Fraction(int(c.numerator), int(c.denominator)))


def poly_domain(ring: PolynomialRing):
    """``K[vars]``, or K itself for a ring without variables."""
    K = scalar_domain(ring.field)
    if not ring.variables:
        return K
    return K.poly_ring(*symbols_of(ring))


def to_domain(p: Polynomial, K) -> Any:
    ring = p.ring
    if not ring.variables:
        return to_scalar(p.constant_value(), ring.field)
    return K.ring.from_dict({m: to_scalar(c, ring.field) for m, c in p.terms.items()})


def from_domain(e, ring: PolynomialRing) -> Polynomial:
    if not ring.variables:
        return ring.constant(from_scalar(e, ring.field))
    return Polynomial(ring, {tuple(m): from_scalar(c, ring.field) for m, c in e.items()})
