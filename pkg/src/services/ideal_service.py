"""Gröbner engine: reduced bases, normal forms, elimination, saturation, ideal
operations, staircases, coordinate rings and ring maps.

Every later service reduces its questions to calls in this module.
"""
from __future__ import annotations

import heapq
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ..core.constants import DEFAULT_MAX_DEGREE, DEFAULT_MAX_PAIRS, INVERSE_VARIABLE
from ..core.errors import BoundExceeded, FieldMismatchError, UsageError, VerificationFailure
from ..core.polynomial import (
    GREVLEX,
    Monomial,
    MonomialOrder,
    Polynomial,
    PolynomialRing,
    block_order,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)
from ..core.scalars import Scalar
from ..utils.cache import GroebnerCache

logger = logging.getLogger(__name__)

PolyLike = Union[Polynomial, str, int]


@dataclass
class EngineBounds:
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_degree: int = DEFAULT_MAX_DEGREE


@dataclass
class EngineSettings:
    """Process-wide engine state: bounds, default order, cache and counters."""

    bounds: EngineBounds = field(default_factory=EngineBounds)
    order: MonomialOrder = GREVLEX
    cache: Optional[GroebnerCache] = None
    pairs_processed: int = 0
    bases_computed: int = 0


ENGINE = EngineSettings()


@contextmanager
def configured(
    bounds: Optional[EngineBounds] = None,
    cache: Optional[GroebnerCache] = None,
    order: Optional[MonomialOrder] = None,
) -> Iterator[EngineSettings]:
    """Temporarily swap engine bounds, cache and default order."""
    saved = (ENGINE.bounds, ENGINE.cache, ENGINE.order)
    if bounds is not None:
        ENGINE.bounds = bounds
    if cache is not None:
        ENGINE.cache = cache
    if order is not None:
        ENGINE.order = order
    try:
        yield ENGINE
    finally:
        ENGINE.bounds, ENGINE.cache, ENGINE.order = saved


# -- Buchberger -----------------------------------------------------------------------


class _Row:
    __slots__ = ("lm", "terms")

    def __init__(self, lm: Monomial, terms: Dict[Monomial, Scalar]):
        self.lm = lm
        self.terms = terms


class _UnitIdeal(Exception):
    pass


def _reduce_terms(terms: Dict[Monomial, Scalar], rows: Sequence[_Row], key) -> Dict[Monomial, Scalar]:
    """Full reduction against monic rows."""
    p = dict(terms)
    out: Dict[Monomial, Scalar] = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for g in rows:
            if mono_divides(g.lm, m):
                q = mono_div(m, g.lm)
                for gm, gc in g.terms.items():
                    mm = mono_mul(gm, q)
                    v = p.get(mm)
                    v = -c * gc if v is None else v - c * gc
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            out[m] = c
            del p[m]
    return out


def _spoly(a: _Row, b: _Row) -> Dict[Monomial, Scalar]:
    lcm = mono_lcm(a.lm, b.lm)
    qa, qb = mono_div(lcm, a.lm), mono_div(lcm, b.lm)
    out: Dict[Monomial, Scalar] = {}
    for m, c in a.terms.items():
        out[mono_mul(m, qa)] = c
    for m, c in b.terms.items():
        mm = mono_mul(m, qb)
        v = out.get(mm)
        v = -c if v is None else v - c
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def buchberger(
    generators: Sequence[Polynomial],
    order: MonomialOrder = GREVLEX,
    bounds: Optional[EngineBounds] = None,
) -> List[Polynomial]:
    """Reduced monic Gröbner basis, sorted by descending leading monomial.

    Pairs are processed smallest lcm degree first, ties broken by the order key
    of the lcm and then by the pair indices, so output and work are deterministic.
    """
    bounds = bounds or ENGINE.bounds
    gens = [g for g in generators if g]
    if not gens:
        return []
    ring = gens[0].ring
    key = order.key
    field_ = ring.field
    rows: List[_Row] = []
    heap: List[tuple] = []
    pending = set()

    def add(terms: Dict[Monomial, Scalar]) -> None:
        lm = max(terms, key=key)
        if not any(lm):
            raise _UnitIdeal
        inv = field_.inv(terms[lm])
        monic = {m: c * inv for m, c in terms.items()}
        idx = len(rows)
        rows.append(_Row(lm, monic))
        for i in range(idx):
            lcm = mono_lcm(rows[i].lm, lm)
            heapq.heappush(heap, (sum(lcm), key(lcm), i, idx))
            pending.add((i, idx))

    processed = 0
    try:
        for g in gens:
            add(dict(g.terms))
        while heap:
            _, _, i, j = heapq.heappop(heap)
            pending.discard((i, j))
            a, b = rows[i], rows[j]
            if mono_coprime(a.lm, b.lm):
                continue
            lcm = mono_lcm(a.lm, b.lm)
            if _chain_skips(rows, pending, i, j, lcm):
                continue
            processed += 1
            if processed > bounds.max_pairs:
                raise BoundExceeded(f"Gröbner basis needed more than {bounds.max_pairs} S-pairs")
            r = _reduce_terms(_spoly(a, b), rows, key)
            if r:
                degree = max(sum(m) for m in r)
                if degree > bounds.max_degree:
                    raise BoundExceeded(f"Gröbner basis element of degree {degree} exceeds bound {bounds.max_degree}")
                add(r)
    except _UnitIdeal:
        ENGINE.pairs_processed += processed
        return [ring.one()]
    ENGINE.pairs_processed += processed
    logger.debug("buchberger: %d generators, %d pairs reduced, %d rows", len(gens), processed, len(rows))
    return _interreduce(rows, ring, key)


def _chain_skips(rows: Sequence[_Row], pending: set, i: int, j: int, lcm: Monomial) -> bool:
    for k, row in enumerate(rows):
        if k == i or k == j or not mono_divides(row.lm, lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _interreduce(rows: List[_Row], ring: PolynomialRing, key) -> List[Polynomial]:
    minimal: List[_Row] = []
    for idx, r in enumerate(rows):
        dominated = False
        for jdx, s in enumerate(rows):
            if jdx == idx or not mono_divides(s.lm, r.lm):
                continue
            if s.lm != r.lm or jdx < idx:
                dominated = True
                break
        if not dominated:
            minimal.append(r)
    reduced = []
    for r in minimal:
        others = [s for s in minimal if s is not r]
        reduced.append(Polynomial._trusted(ring, _reduce_terms(r.terms, others, key)))
    reduced.sort(key=lambda p: key(max(p.terms, key=key)), reverse=True)
    return reduced


def _tracked_basis(
    generators: Sequence[Polynomial], order: MonomialOrder, bounds: EngineBounds
) -> List[Tuple[Polynomial, List[Polynomial]]]:
    """Gröbner basis where each element carries cofactors over the input generators."""
    ring = generators[0].ring
    n = len(generators)
    zero = ring.zero()
    basis: List[Tuple[Polynomial, List[Polynomial]]] = []
    heap: List[tuple] = []
    key = order.key

    def add(p: Polynomial, rep: List[Polynomial]) -> bool:
        lc = p.leading_coefficient(order)
        inv = ring.field.inv(lc)
        p, rep = p.scale(inv), [c.scale(inv) for c in rep]
        if p.is_constant():
            basis[:] = [(p, rep)]
            return True
        idx = len(basis)
        basis.append((p, rep))
        lm = p.leading_monomial(order)
        for i in range(idx):
            lcm = mono_lcm(basis[i][0].leading_monomial(order), lm)
            heapq.heappush(heap, (sum(lcm), key(lcm), i, idx))
        return False

    for idx, g in enumerate(generators):
        if g:
            rep = [zero] * n
            rep[idx] = ring.one()
            if add(g, rep):
                return basis
    processed = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        (a, ra), (b, rb) = basis[i], basis[j]
        la, lb = a.leading_monomial(order), b.leading_monomial(order)
        if mono_coprime(la, lb):
            continue
        processed += 1
        if processed > bounds.max_pairs:
            raise BoundExceeded(f"cofactor lifting needed more than {bounds.max_pairs} S-pairs")
        lcm = mono_lcm(la, lb)
        one = ring.field.one
        qa, qb = mono_div(lcm, la), mono_div(lcm, lb)
        s = a.mul_term(qa, one) - b.mul_term(qb, one)
        rep = [x.mul_term(qa, one) - y.mul_term(qb, one) for x, y in zip(ra, rb)]
        quotients, r = s.divide([p for p, _ in basis], order)
        if not r:
            continue
        for q, (_, rk) in zip(quotients, basis):
            if q:
                rep = [c - q * d for c, d in zip(rep, rk)]
        if add(r, rep):
            return basis
    return basis


# -- ideals ---------------------------------------------------------------------------


class Ideal:
    """Finitely generated ideal with reduced Gröbner bases cached per order."""

    def __init__(self, ring: PolynomialRing, generators: Iterable[PolyLike] = ()):
        self.ring = ring
        gens = []
        for g in generators:
            p = ring(g)
            if p:
                gens.append(p)
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self._bases: Dict[str, Tuple[Polynomial, ...]] = {}

    @classmethod
    def unit(cls, ring: PolynomialRing) -> "Ideal":
        return cls(ring, [ring.one()])

    @classmethod
    def zero(cls, ring: PolynomialRing) -> "Ideal":
        return cls(ring, [])

    def _check(self, other: "Ideal") -> None:
        if other.ring != self.ring:
            raise FieldMismatchError(f"ideals from {self.ring!r} and {other.ring!r}")

    def groebner(self, order: Optional[MonomialOrder] = None) -> Tuple[Polynomial, ...]:
        order = order or ENGINE.order
        found = self._bases.get(order.name)
        if found is not None:
            return found
        cache = ENGINE.cache
        if cache is not None and self.generators:
            found = cache.get(self.ring, self.generators, order)
        if found is None:
            found = tuple(buchberger(self.generators, order))
            ENGINE.bases_computed += 1
            if cache is not None and self.generators:
                cache.put(self.ring, self.generators, order, found)
        self._bases[order.name] = found
        return found

    def reduced(self, order: Optional[MonomialOrder] = None) -> "Ideal":
        """Same ideal, generated by its reduced Gröbner basis."""
        order = order or ENGINE.order
        gb = self.groebner(order)
        out = Ideal(self.ring, gb)
        out._bases[order.name] = gb
        return out

    def normal_form(self, f: PolyLike, order: Optional[MonomialOrder] = None) -> Polynomial:
        order = order or ENGINE.order
        p = self.ring(f)
        gb = self.groebner(order)
        if not gb or not p:
            return p
        return p.divide(gb, order)[1]

    def contains(self, f: PolyLike) -> bool:
        return not self.normal_form(f)

    __contains__ = contains

    def contains_ideal(self, other: "Ideal") -> bool:
        self._check(other)
        return all(self.contains(g) for g in other.generators)

    def equals(self, other: "Ideal") -> bool:
        self._check(other)
        return self.groebner() == other.groebner()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner() == other.groebner()

    __hash__ = None  # type: ignore[assignment]

    def is_unit(self) -> bool:
        return self.groebner() == (self.ring.one(),)

    def is_zero(self) -> bool:
        return not self.generators

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __and__(self, other: "Ideal") -> "Ideal":
        return intersection(self, other)

    def __truediv__(self, other: "Ideal") -> "Ideal":
        return quotient(self, other)

    def with_generators(self, extra: Iterable[PolyLike]) -> "Ideal":
        return Ideal(self.ring, list(self.generators) + [self.ring(g) for g in extra])

    def power(self, k: int) -> "Ideal":
        result = Ideal.unit(self.ring)
        for _ in range(k):
            result = ideal_product(result, self)
        return result

    def lift(self, f: PolyLike) -> Optional[List[Polynomial]]:
        """Cofactors c with f = sum c_i g_i over ``generators``; ``None`` if f is not in the ideal."""
        p = self.ring(f)
        zero = self.ring.zero()
        if not p:
            return [zero] * len(self.generators)
        if not self.generators:
            return None
        order = ENGINE.order
        basis = _tracked_basis(self.generators, order, ENGINE.bounds)
        quotients, r = p.divide([b for b, _ in basis], order)
        if r:
            return None
        out = [zero] * len(self.generators)
        for q, (_, rep) in zip(quotients, basis):
            if q:
                out = [c + q * d for c, d in zip(out, rep)]
        return out

    def colength(self) -> Optional["QuotientBasis"]:
        return colength(self)

    def to_ring(self, target: PolynomialRing, positions: Sequence[int]) -> "Ideal":
        return Ideal(target, [g.to_ring(target, positions) for g in self.generators])

    def __str__(self) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self) -> str:
        return f"Ideal({self.ring!r}, {self})"


def groebner(ideal: Ideal, order: Optional[MonomialOrder] = None) -> Tuple[Polynomial, ...]:
    return ideal.groebner(order)


def normal_form(f: PolyLike, ideal: Ideal) -> Polynomial:
    return ideal.normal_form(f)


def _rehome(polys: Iterable[Polynomial], ring: PolynomialRing) -> List[Polynomial]:
    return [p.to_ring(ring, list(range(ring.nvars))) for p in polys]


def eliminate(ideal: Ideal, variables: Sequence[Union[int, str]]) -> Ideal:
    """I ∩ k[remaining variables], as an ideal of the ring on the remaining variables."""
    ring = ideal.ring
    block = sorted({ring.index(v) if isinstance(v, str) else int(v) for v in variables})
    if not block:
        return ideal
    rest = [i for i in range(ring.nvars) if i not in block]
    names = ring.variables
    work = PolynomialRing(ring.field, [names[i] for i in block] + [names[i] for i in rest])
    positions = [block.index(i) if i in block else len(block) + rest.index(i) for i in range(ring.nvars)]
    gb = Ideal(work, [g.to_ring(work, positions) for g in ideal.generators]).groebner(block_order(len(block)))
    k = len(block)
    sub = PolynomialRing(ring.field, [names[i] for i in rest])
    back = [0] * k + list(range(len(rest)))
    kept = [g.to_ring(sub, back) for g in gb if all(not any(m[:k]) for m in g.terms)]
    logger.debug("eliminate %s: %d of %d basis elements survive", [names[i] for i in block], len(kept), len(gb))
    return Ideal(sub, kept)


def _with_inverse(ring: PolynomialRing) -> Tuple[PolynomialRing, List[int]]:
    ext = ring.with_variables(prefix=(ring.fresh_name(INVERSE_VARIABLE),))
    return ext, [i + 1 for i in range(ring.nvars)]


def saturate(ideal: Ideal, f: PolyLike) -> Ideal:
    """(I : f^∞) by the Rabinowitsch route: eliminate t from I + (t f - 1)."""
    ring = ideal.ring
    f = ring(f)
    if not f:
        raise UsageError("saturation by the zero polynomial")
    if f.is_constant():
        return ideal
    ext, shift = _with_inverse(ring)
    gens = [g.to_ring(ext, shift) for g in ideal.generators]
    gens.append(ext.gen(0) * f.to_ring(ext, shift) - 1)
    contracted = eliminate(Ideal(ext, gens), [0])
    return Ideal(ring, _rehome(contracted.generators, ring))


def saturate_by_quotients(ideal: Ideal, f: PolyLike) -> Ideal:
    """The stable limit of I : f^k, found by iterating I : f until it stops growing."""
    f = ideal.ring(f)
    if not f:
        raise UsageError("saturation by the zero polynomial")
    current = ideal
    for _ in range(ENGINE.bounds.max_degree + 1):
        nxt = quotient_by_element(current, f)
        if current.contains_ideal(nxt):
            return current
        current = nxt
    raise BoundExceeded(f"quotient chain for saturation by {f} did not stabilize")


def saturate_by_ideal(ideal: Ideal, by: Ideal) -> Ideal:
    """(I : T^∞) as the intersection of I : t^∞ over the generators t of T."""
    ideal._check(by)
    gens = by.generators
    if not gens:
        return Ideal.unit(ideal.ring)
    result = saturate(ideal, gens[0])
    for t in gens[1:]:
        result = intersection(result, saturate(ideal, t))
    return result


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    a._check(b)
    return Ideal(a.ring, a.generators + b.generators)


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    a._check(b)
    return Ideal(a.ring, [g * h for g in a.generators for h in b.generators])


def intersection(a: Ideal, b: Ideal) -> Ideal:
    """I ∩ J = (t I + (1 - t) J) ∩ k[x]."""
    a._check(b)
    ring = a.ring
    if a.is_zero() or b.is_zero():
        return Ideal.zero(ring)
    ext, shift = _with_inverse(ring)
    t = ext.gen(0)
    gens = [t * g.to_ring(ext, shift) for g in a.generators]
    gens += [(1 - t) * g.to_ring(ext, shift) for g in b.generators]
    contracted = eliminate(Ideal(ext, gens), [0])
    return Ideal(ring, _rehome(contracted.generators, ring))


def quotient_by_element(ideal: Ideal, g: PolyLike) -> Ideal:
    """I : g = (I ∩ (g)) / g."""
    ring = ideal.ring
    g = ring(g)
    if not g:
        return Ideal.unit(ring)
    meet = intersection(ideal, Ideal(ring, [g]))
    gens = []
    for h in meet.generators:
        q = h.exact_div(g)
        if q is None:
            raise VerificationFailure(f"{h} is in ({g}) but not divisible by it")
        gens.append(q)
    return Ideal(ring, gens)


def quotient(ideal: Ideal, by: Ideal) -> Ideal:
    """I : J as the intersection of I : g over the generators g of J."""
    ideal._check(by)
    result = Ideal.unit(ideal.ring)
    for g in by.generators:
        part = quotient_by_element(ideal, g)
        result = part if result.is_unit() else intersection(result, part)
    return result


# -- staircases -----------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientBasis:
    """Monomials outside the leading-term ideal, ascending in ``order``."""

    ring: PolynomialRing
    staircase: Tuple[Monomial, ...]
    order: MonomialOrder = GREVLEX

    @property
    def dimension(self) -> int:
        return len(self.staircase)

    def monomials(self) -> List[Polynomial]:
        return [self.ring.monomial(m) for m in self.staircase]

    def coordinates(self, reduced: Polynomial) -> List[Scalar]:
        """Coordinates of a normal form against the staircase."""
        field_ = self.ring.field
        index = {m: i for i, m in enumerate(self.staircase)}
        out = [field_.zero] * len(self.staircase)
        for m, c in reduced.terms.items():
            if m not in index:
                raise UsageError(f"{reduced} is not reduced against the staircase")
            out[index[m]] = c
        return out

    def labels(self) -> List[str]:
        return [str(p) for p in self.monomials()]


def colength(ideal: Ideal, order: Optional[MonomialOrder] = None) -> Optional[QuotientBasis]:
    """Staircase basis of ring/I, or ``None`` when the quotient is infinite-dimensional."""
    order = order or ENGINE.order
    ring = ideal.ring
    gb = ideal.groebner(order)
    leads = [g.leading_monomial(order) for g in gb]
    if any(not any(m) for m in leads):
        return QuotientBasis(ring, (), order)
    for i in range(ring.nvars):
        if not any(m[i] > 0 and sum(m) == m[i] for m in leads):
            return None
    seen = set()
    frontier = [ring.zero_monomial]
    while frontier:
        m = frontier.pop()
        if m in seen or any(mono_divides(l, m) for l in leads):
            continue
        seen.add(m)
        for i in range(ring.nvars):
            nxt = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nxt not in seen:
                frontier.append(nxt)
    staircase = tuple(sorted(seen, key=order.key))
    return QuotientBasis(ring, staircase, order)


# -- coordinate rings and maps ---------------------------------------------------------


class QuotientRing:
    """k[x]/J with arithmetic by normal forms modulo a fixed Gröbner basis of J."""

    def __init__(self, ring: PolynomialRing, ideal: Optional[Ideal] = None):
        self.ring = ring
        self.ideal = ideal if ideal is not None else Ideal.zero(ring)
        if self.ideal.ring != ring:
            raise FieldMismatchError(f"defining ideal lives in {self.ideal.ring!r}, not {ring!r}")

    @property
    def field(self):
        return self.ring.field

    def reduce(self, f: PolyLike) -> Polynomial:
        return self.ideal.normal_form(self.ring(f))

    __call__ = reduce

    def equal(self, a: PolyLike, b: PolyLike) -> bool:
        return not self.reduce(self.ring(a) - self.ring(b))

    def is_zero(self, a: PolyLike) -> bool:
        return not self.reduce(a)

    def is_zero_ring(self) -> bool:
        return self.ideal.is_unit()

    def is_unit(self, a: PolyLike) -> bool:
        return self.ideal.with_generators([a]).is_unit()

    def divide(self, a: PolyLike, b: PolyLike) -> Optional[Polynomial]:
        """Some c with b c = a modulo J, or ``None``."""
        b = self.ring(b)
        if not b:
            return self.ring.zero() if self.is_zero(a) else None
        cof = Ideal(self.ring, [b] + list(self.ideal.generators)).lift(a)
        if cof is None:
            return None
        return self.reduce(cof[0])

    def inverse(self, a: PolyLike) -> Optional[Polynomial]:
        return self.divide(self.ring.one(), a)

    def basis(self) -> Optional[QuotientBasis]:
        return colength(self.ideal)

    def extend(self, prefix: Sequence[str] = (), suffix: Sequence[str] = (), relations: Iterable[PolyLike] = ()) -> "QuotientRing":
        """Adjoin variables (and relations written in the bigger ring)."""
        big = self.ring.with_variables(prefix, suffix)
        shift = [len(prefix) + i for i in range(self.ring.nvars)]
        gens = [g.to_ring(big, shift) for g in self.ideal.generators]
        gens += [big(r) for r in relations]
        return QuotientRing(big, Ideal(big, gens))

    def inclusion_into(self, bigger: "QuotientRing", offset: int = 0) -> "RingMap":
        images = [bigger.ring.gen(offset + i) for i in range(self.ring.nvars)]
        return RingMap(self, bigger, images)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuotientRing):
            return NotImplemented
        return self.ring == other.ring and self.ideal.equals(other.ideal)

    def __hash__(self) -> int:
        return hash(self.ring)

    def __repr__(self) -> str:
        if self.ideal.is_zero():
            return repr(self.ring)
        return f"{self.ring!r}/{self.ideal}"


def as_quotient(ring: Union[PolynomialRing, QuotientRing]) -> QuotientRing:
    return ring if isinstance(ring, QuotientRing) else QuotientRing(ring)


class RingMap:
    """Homomorphism source -> target given by the images of the source variables."""

    def __init__(
        self,
        source: Union[PolynomialRing, QuotientRing],
        target: Union[PolynomialRing, QuotientRing],
        images: Sequence[PolyLike],
    ):
        self.source = as_quotient(source)
        self.target = as_quotient(target)
        if len(images) != self.source.ring.nvars:
            raise UsageError(f"ring map needs {self.source.ring.nvars} images, got {len(images)}")
        if self.source.field != self.target.field:
            raise FieldMismatchError(f"ring map from {self.source!r} to {self.target!r} changes the field")
        self.images: Tuple[Polynomial, ...] = tuple(self.target.reduce(self.target.ring(img)) for img in images)

    @classmethod
    def identity(cls, ring: Union[PolynomialRing, QuotientRing]) -> "RingMap":
        q = as_quotient(ring)
        return cls(q, q, q.ring.gens())

    def __call__(self, f: PolyLike) -> Polynomial:
        p = self.source.ring(f)
        return self.target.reduce(p.substitute(list(self.images), self.target.ring))

    def check_well_defined(self) -> "RingMap":
        for g in self.source.ideal.generators:
            image = self(g)
            if image:
                raise UsageError(f"ring map is not well defined: relation {g} maps to {image}")
        return self

    def compose(self, inner: "RingMap") -> "RingMap":
        """self ∘ inner."""
        return RingMap(inner.source, self.target, [self(img) for img in inner.images])

    def image_ideal(self, ideal: Ideal) -> Ideal:
        """φ(I)·B + J_B as an ideal of the target polynomial ring."""
        return Ideal(self.target.ring, [self(g) for g in ideal.generators] + list(self.target.ideal.generators))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{v} -> {img}" for v, img in zip(self.source.ring.variables, self.images))
        return f"RingMap({self.source!r} -> {self.target!r}: {pairs})"
