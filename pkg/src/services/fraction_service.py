"""Generalized fraction rings R_U as lazy colimits.

An invertible module is a fractional ideal N/d of the base ring, N an ideal and d
a nonzero denominator. A section s = σ/d with σ ∈ N. An element x/s^a with
x ∈ L^a is stored by its numerator n (x = n/d^a), so its value is n/σ^a in the
fraction field; every query reduces to Gröbner calls on the base ring.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..core.errors import FieldMismatchError, UsageError, VerificationFailure
from ..core.polynomial import Polynomial, PolynomialRing, product
from ..core.constants import INVERSE_VARIABLE
from .ideal_service import (
    Ideal,
    PolyLike,
    QuotientRing,
    RingMap,
    as_quotient,
    colength,
    quotient,
    saturate,
    saturate_by_ideal,
)

logger = logging.getLogger(__name__)


def _saturate_mod(ideal: Ideal, f: Polynomial) -> Ideal:
    """I : f^∞, where f in I makes the answer the unit ideal."""
    if ideal.contains(f):
        return Ideal.unit(ideal.ring)
    return saturate(ideal, f)


# -- invertible modules ----------------------------------------------------------------


class InvertibleModule:
    """Fractional ideal N/d over a coordinate ring, checked invertible on construction."""

    def __init__(
        self,
        base: Union[PolynomialRing, QuotientRing],
        numerator: Union[Ideal, Sequence[PolyLike]],
        denominator: PolyLike = 1,
        generator: Optional[PolyLike] = None,
        check: bool = True,
    ):
        self.base = as_quotient(base)
        ring = self.base.ring
        if not isinstance(numerator, Ideal):
            numerator = Ideal(ring, numerator)
        if numerator.ring != ring:
            raise FieldMismatchError(f"module numerator lives in {numerator.ring!r}, not {ring!r}")
        self.numerator = numerator
        self.denominator = ring(denominator)
        if self.base.is_zero(self.denominator) and not self.base.is_zero_ring():
            raise UsageError("fractional ideal with zero denominator")
        if generator is None and len(numerator.generators) == 1:
            generator = numerator.generators[0]
        self.generator: Optional[Polynomial] = ring(generator) if generator is not None else None
        if check and not self.is_principal:
            self.witness()

    @classmethod
    def free(cls, base: Union[PolynomialRing, QuotientRing]) -> "InvertibleModule":
        q = as_quotient(base)
        return cls(q, [q.ring.one()], 1, generator=q.ring.one(), check=False)

    @property
    def is_principal(self) -> bool:
        return self.generator is not None

    @property
    def is_free(self) -> bool:
        """Principal with a unit numerator generator: the module R itself up to scaling."""
        return self.generator is not None and self.generator.is_constant() and bool(self.generator)

    @cached_property
    def _defining(self) -> Ideal:
        return self.numerator.with_generators(self.base.ideal.generators)

    def contains(self, numerator: PolyLike) -> bool:
        """Is numerator/d an element of the module?"""
        return self._defining.contains(numerator)

    @cached_property
    def anchor(self) -> Polynomial:
        """A numerator generator that is nonzero in the base ring."""
        for g in self.generators():
            if not self.base.is_zero(g):
                return g
        raise UsageError(f"module {self} is zero, hence not invertible")

    def generators(self) -> Tuple[Polynomial, ...]:
        if self.generator is not None:
            return (self.generator,)
        return self.numerator.generators

    @cached_property
    def colon(self) -> Ideal:
        """Q = ((n0) + J) : N, so that the inverse module is d·Q/n0."""
        ring = self.base.ring
        if self.generator is not None:
            return Ideal.unit(ring)
        principal = Ideal(ring, [self.anchor]).with_generators(self.base.ideal.generators)
        return quotient(principal, self._defining)

    def witness(self) -> Ideal:
        """Check N·Q + J = (n0) + J; raise UsageError otherwise."""
        ring = self.base.ring
        principal = Ideal(ring, [self.anchor]).with_generators(self.base.ideal.generators)
        prod = (self._defining * self.colon).with_generators(self.base.ideal.generators)
        if not prod.equals(principal):
            raise UsageError(f"module {self} is not invertible over {self.base!r}")
        return self.colon

    def tensor(self, other: "InvertibleModule") -> "InvertibleModule":
        if self.base.ring != other.base.ring:
            raise FieldMismatchError("tensor product of modules over different rings")
        gen = None
        if self.generator is not None and other.generator is not None:
            gen = self.generator * other.generator
        num = Ideal(self.base.ring, [g * h for g in self.generators() for h in other.generators()])
        return InvertibleModule(self.base, num, self.denominator * other.denominator, gen, check=False)

    def power(self, k: int) -> "InvertibleModule":
        result = InvertibleModule.free(self.base)
        for _ in range(k):
            result = result.tensor(self)
        return result

    def vanishing_ideal(self, section: PolyLike) -> Ideal:
        """s·L^{-1} ⊆ R for s = section/d: the ideal where s generates the module."""
        ring = self.base.ring
        sigma = ring(section)
        if self.generator is not None:
            if self.base.is_zero(self.generator):
                return Ideal.unit(ring)
            q = self.base.divide(sigma, self.generator)
            if q is None:
                raise UsageError(f"section {sigma} is not in the module ({self.generator})")
            return Ideal(ring, [q]).with_generators(self.base.ideal.generators)
        moved = Ideal(ring, [sigma * g for g in self.colon.generators]).with_generators(self.base.ideal.generators)
        return quotient(moved, Ideal(ring, [self.anchor]))

    def equals(self, other: "InvertibleModule") -> bool:
        """Equality as fractional ideals: d'·N + J = d·N' + J."""
        ring = self.base.ring
        left = Ideal(ring, [other.denominator * g for g in self.generators()]).with_generators(self.base.ideal.generators)
        right = Ideal(ring, [self.denominator * g for g in other.generators()]).with_generators(self.base.ideal.generators)
        return left.equals(right)

    def __str__(self) -> str:
        body = "(" + ", ".join(str(g) for g in self.generators()) + ")"
        if self.denominator == 1:
            return body
        return f"{body} / ({self.denominator})"

    __repr__ = __str__


# -- exponents, sections, presentations -------------------------------------------------


@dataclass(frozen=True)
class MultiExponent:
    """Finitely supported map from section names to non-negative integers."""

    entries: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def of(cls, mapping: Optional[Mapping[str, int]] = None, **kwargs: int) -> "MultiExponent":
        merged: Dict[str, int] = dict(mapping or {})
        merged.update(kwargs)
        for k, v in merged.items():
            if v < 0:
                raise UsageError(f"negative exponent {v} for {k}")
        return cls(tuple(sorted((k, int(v)) for k, v in merged.items() if v)))

    def __getitem__(self, name: str) -> int:
        return dict(self.entries).get(name, 0)

    def __iter__(self):
        return iter(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def names(self) -> List[str]:
        return [k for k, _ in self.entries]

    def __add__(self, other: "MultiExponent") -> "MultiExponent":
        out = dict(self.entries)
        for k, v in other.entries:
            out[k] = out.get(k, 0) + v
        return MultiExponent.of(out)

    def __sub__(self, other: "MultiExponent") -> "MultiExponent":
        if not other <= self:
            raise UsageError(f"{other} is not below {self}")
        out = dict(self.entries)
        for k, v in other.entries:
            out[k] -= v
        return MultiExponent.of(out)

    def sup(self, other: "MultiExponent") -> "MultiExponent":
        out = dict(self.entries)
        for k, v in other.entries:
            out[k] = max(out.get(k, 0), v)
        return MultiExponent.of(out)

    def __le__(self, other: "MultiExponent") -> bool:
        return all(v <= other[k] for k, v in self.entries)

    def __str__(self) -> str:
        if not self.entries:
            return "1"
        return "*".join(k if v == 1 else f"{k}^{v}" for k, v in self.entries)


@dataclass(frozen=True)
class SectionPair:
    name: str
    section: Polynomial
    module: InvertibleModule

    def __str__(self) -> str:
        if self.module.is_free:
            return f"{self.name}: {self.section}"
        return f"{self.name}: {self.section} in {self.module}"


class FractionPresentation:
    """A base coordinate ring plus a finite collection U of (section, module) pairs."""

    def __init__(self, base: Union[PolynomialRing, QuotientRing], pairs: Iterable[SectionPair] = ()):
        self.base = as_quotient(base)
        self.pairs: Tuple[SectionPair, ...] = tuple(pairs)
        names = [p.name for p in self.pairs]
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate section names in {names}")
        for p in self.pairs:
            if p.module.base.ring != self.base.ring:
                raise FieldMismatchError(f"section {p.name} lives over {p.module.base!r}")
            if not p.module.contains(p.section):
                raise UsageError(f"section {p.section} does not lie in the module {p.module}")
        self._index = {p.name: p for p in self.pairs}
        self._vanishing: Dict[str, Ideal] = {}

    @property
    def ring(self) -> PolynomialRing:
        return self.base.ring

    def with_section(
        self,
        name: str,
        section: PolyLike,
        module: Optional[InvertibleModule] = None,
    ) -> "FractionPresentation":
        module = module or InvertibleModule.free(self.base)
        pair = SectionPair(name, self.ring(section), module)
        return FractionPresentation(self.base, self.pairs + (pair,))

    def pair(self, name: str) -> SectionPair:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"no section named {name!r}") from None

    def names(self) -> List[str]:
        return [p.name for p in self.pairs]

    def sigma(self, a: MultiExponent) -> Polynomial:
        return product((self.pair(k).section ** v for k, v in a), self.ring)

    def sigma_all(self) -> Polynomial:
        return product((p.section for p in self.pairs), self.ring)

    def vanishing_ideal(self, name: str) -> Ideal:
        if name not in self._vanishing:
            p = self.pair(name)
            self._vanishing[name] = p.module.vanishing_ideal(p.section)
        return self._vanishing[name]

    @cached_property
    def torsion(self) -> Ideal:
        """J : (∏σ)^∞, the kernel of R → R_U."""
        return _saturate_mod(self.base.ideal, self.sigma_all())

    def is_zero_ring(self) -> bool:
        return self.torsion.is_unit()

    # elements
    def element(self, numerator: PolyLike, exponent: Optional[MultiExponent] = None, check: bool = True) -> "FractionElement":
        exponent = exponent or MultiExponent()
        n = self.ring(numerator)
        for k in exponent.names():
            self.pair(k)
        if check and exponent and not tensor_power(self, exponent).contains(n):
            raise UsageError(f"numerator {n} is not in L^{exponent}")
        return FractionElement(self, self.base.reduce(n), exponent)

    def __call__(self, value: PolyLike) -> "FractionElement":
        return self.element(value)

    def one(self) -> "FractionElement":
        return self.element(1)

    def zero(self) -> "FractionElement":
        return self.element(0)

    def unit(self, name: str) -> "FractionElement":
        """s_α / s_α."""
        p = self.pair(name)
        return FractionElement(self, self.base.reduce(p.section), MultiExponent.of({name: 1}))

    def inverse_of(self, name: str) -> "FractionElement":
        """1/s_α for a free module with unit generator."""
        p = self.pair(name)
        if not p.module.is_free:
            raise UsageError(f"1/{name} needs a free module")
        g = p.module.generator
        return FractionElement(self, self.base.reduce(g), MultiExponent.of({name: 1}))

    def __str__(self) -> str:
        if not self.pairs:
            return f"{self.base!r}"
        return f"{self.base!r}[" + "; ".join(str(p) for p in self.pairs) + "]^-1"

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class FractionElement:
    """x/s^a, stored by the numerator n of x (x = n/d^a) and the exponent a."""

    presentation: FractionPresentation
    numerator: Polynomial
    exponent: MultiExponent = field(default_factory=MultiExponent)

    def _coerce(self, other) -> "FractionElement":
        if isinstance(other, FractionElement):
            if other.presentation is not self.presentation:
                raise UsageError("fraction elements from different presentations")
            return other
        return self.presentation.element(other)

    def lift_to(self, c: MultiExponent) -> "FractionElement":
        """Same class with exponent c ≥ a (multiply numerator by σ^{c-a})."""
        extra = c - self.exponent
        U = self.presentation
        return FractionElement(U, U.base.reduce(self.numerator * U.sigma(extra)), c)

    def __add__(self, other) -> "FractionElement":
        o = self._coerce(other)
        c = self.exponent.sup(o.exponent)
        a, b = self.lift_to(c), o.lift_to(c)
        return FractionElement(self.presentation, self.presentation.base.reduce(a.numerator + b.numerator), c)

    __radd__ = __add__

    def __neg__(self) -> "FractionElement":
        return FractionElement(self.presentation, -self.numerator, self.exponent)

    def __sub__(self, other) -> "FractionElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FractionElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "FractionElement":
        o = self._coerce(other)
        U = self.presentation
        return FractionElement(U, U.base.reduce(self.numerator * o.numerator), self.exponent + o.exponent)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, (FractionElement, Polynomial, int)):
            return NotImplemented
        return fraction_eq(self, self._coerce(other))

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.exponent:
            return str(self.numerator)
        return f"[{self.numerator} | {self.exponent}]"


# -- operations -------------------------------------------------------------------------


def tensor_power(U: FractionPresentation, a: MultiExponent) -> InvertibleModule:
    """⊗ L_α^{a_α} as a fractional ideal; L^0 = R."""
    result = InvertibleModule.free(U.base)
    for name, k in a:
        result = result.tensor(U.pair(name).module.power(k))
    return result


def fraction_eq(u: FractionElement, v: FractionElement) -> bool:
    """x/s^a = y/s^b iff σ^b n - σ^a m dies after multiplying by a power of every section."""
    if u.presentation is not v.presentation:
        raise UsageError("comparing elements of different presentations")
    U = u.presentation
    diff = u.numerator * U.sigma(v.exponent) - v.numerator * U.sigma(u.exponent)
    return U.torsion.contains(diff)


def fraction_sum(u: FractionElement, v: FractionElement) -> FractionElement:
    return u + v


def fraction_product(u: FractionElement, v: FractionElement) -> FractionElement:
    return u * v


@dataclass
class _LocalUnit:
    """Generators h_i of the vanishing ideal of s with h_i n0 = σ q_i mod J."""

    pair: SectionPair
    generators: List[Polynomial]
    numerators: List[Polynomial]


def _local_units(U: FractionPresentation, name: str) -> _LocalUnit:
    p = U.pair(name)
    module = p.module
    base = U.base
    if module.generator is not None:
        q = base.divide(p.section, module.generator)
        return _LocalUnit(p, [q], [base.ring.one()])
    sigma_q = [p.section * q for q in module.colon.generators]
    target = Ideal(U.ring, sigma_q + list(base.ideal.generators))
    hs, qs = [], []
    for h in U.vanishing_ideal(name).generators:
        if base.is_zero(h):
            continue
        cof = target.lift(h * module.anchor)
        if cof is None:
            raise VerificationFailure(f"{h} is in the vanishing ideal of {name} but has no witness")
        qs.append(sum((c * g for c, g in zip(cof, module.colon.generators)), U.ring.zero()))
        hs.append(h)
    return _LocalUnit(p, hs, qs)


def _step_down(U: FractionPresentation, unit: _LocalUnit, n: Polynomial, i: int) -> Polynomial:
    """Numerator of (n/σ^a)·h_i at exponent a - e_α."""
    anchor = unit.pair.module.anchor
    if anchor == 1:
        return n * unit.numerators[i]
    m = U.base.divide(n * unit.numerators[i], anchor)
    if m is None:
        raise VerificationFailure(f"{n}·{unit.numerators[i]} is not divisible by {anchor}")
    return m


@dataclass
class FactorizationResult:
    """Outcome of factoring φ: R -> A through R -> R_U."""

    factors: bool
    failing: List[str]
    phi: RingMap
    presentation: FractionPresentation
    cofactors: Dict[str, List[Polynomial]] = field(default_factory=dict)
    units: Dict[str, _LocalUnit] = field(default_factory=dict)

    def image(self, u: FractionElement) -> Polynomial:
        """Image of u in A under the factored map."""
        if not self.factors:
            raise UsageError(f"map does not factor; failing sections {self.failing}")
        return self._image(u.numerator, dict(u.exponent.entries))

    def _image(self, n: Polynomial, exps: Dict[str, int]) -> Polynomial:
        target = self.phi.target
        name = next((k for k, v in exps.items() if v), None)
        if name is None:
            return self.phi(n)
        rest = dict(exps)
        rest[name] -= 1
        unit = self.units[name]
        total = target.ring.zero()
        for i, b in enumerate(self.cofactors[name]):
            if b:
                total = total + b * self._image(_step_down(self.presentation, unit, n, i), rest)
        return target.reduce(total)


def universal_factorization(U: FractionPresentation, phi: RingMap) -> FactorizationResult:
    """Does φ: R -> A send every section to a nowhere vanishing one? If so, build R_U -> A."""
    if phi.source.ring != U.ring:
        raise FieldMismatchError(f"map starts at {phi.source!r}, presentation lives over {U.base!r}")
    phi.check_well_defined()
    failing: List[str] = []
    cofactors: Dict[str, List[Polynomial]] = {}
    units: Dict[str, _LocalUnit] = {}
    target = phi.target
    for p in U.pairs:
        unit = _local_units(U, p.name)
        images = [phi(h) for h in unit.generators]
        lifted = Ideal(target.ring, images + list(target.ideal.generators)).lift(target.ring.one())
        if lifted is None:
            failing.append(p.name)
            continue
        units[p.name] = unit
        # Ideal drops generators that are zero in A; realign cofactors with the kept ones
        kept = [i for i, img in enumerate(images) if img]
        aligned = [target.ring.zero()] * len(images)
        for pos, i in enumerate(kept):
            aligned[i] = target.reduce(lifted[pos])
        cofactors[p.name] = aligned
    logger.debug("universal factorization: %d sections, failing %s", len(U.pairs), failing)
    return FactorizationResult(not failing, failing, phi, U, cofactors, units)


def _clear(U: FractionPresentation, n: Polynomial, a: MultiExponent, units: Dict[str, _LocalUnit]) -> List[Polynomial]:
    """Numerators of (n/σ^a)·r for r ranging over products of vanishing-ideal generators."""
    current = [n]
    for name, k in a:
        unit = units[name]
        for _ in range(k):
            current = [_step_down(U, unit, m, i) for m in current for i in range(len(unit.generators))]
    return current


@dataclass
class ContractionResult:
    ideal: Ideal
    isomorphism: bool
    failing: List[str]


def extend_contract(U: FractionPresentation, generators: Sequence[FractionElement]) -> ContractionResult:
    """Contraction I ⊆ R of the ideal of R_U generated by fractions, and whether R/I -> R_U/I_U is bijective."""
    ring = U.ring
    J = U.base.ideal
    units = {p.name: _local_units(U, p.name) for p in U.pairs}
    gens: List[Polynomial] = []
    for g in generators:
        if g.presentation is not U:
            raise UsageError("generator from a different presentation")
        if not g.exponent:
            gens.append(g.numerator)
            continue
        for m in _clear(U, g.numerator, g.exponent, units):
            gens.append(m)
    cleared = Ideal(ring, gens).with_generators(J.generators)
    if U.pairs:
        support = [ring.one()]
        for name, unit in units.items():
            support = [a * h for a in support for h in unit.generators]
        contraction = saturate_by_ideal(cleared, Ideal(ring, support))
    else:
        contraction = cleared
    contraction = contraction.reduced()
    failing = [p.name for p in U.pairs if not contraction.with_generators(U.vanishing_ideal(p.name).generators).is_unit()]
    logger.debug("extend_contract: %d generators -> %s, failing %s", len(generators), contraction, failing)
    return ContractionResult(contraction, not failing, failing)


def finite_subset_reduce(U: FractionPresentation, names: Iterable[str]) -> SectionPair:
    """(⊗ s_α, ⊗ L_α) over a finite index set; the empty set gives (1, R)."""
    chosen = list(names)
    module = InvertibleModule.free(U.base)
    section = U.ring.one()
    for name in chosen:
        p = U.pair(name)
        module = module.tensor(p.module)
        section = section * p.section
    return SectionPair("*".join(chosen) if chosen else "1", section, module)


def base_change(U: FractionPresentation, phi: RingMap) -> FractionPresentation:
    """Pull U back along φ: R -> B (sections and module numerators mapped through φ)."""
    if phi.source.ring != U.ring:
        raise FieldMismatchError(f"map starts at {phi.source!r}, presentation lives over {U.base!r}")
    phi.check_well_defined()
    B = phi.target
    pairs = []
    for p in U.pairs:
        if p.module.is_free:
            module = InvertibleModule.free(B)
        else:
            num = Ideal(B.ring, [phi(g) for g in p.module.generators()])
            module = InvertibleModule(B, num, phi(p.module.denominator))
        pairs.append(SectionPair(p.name, phi(p.section), module))
    return FractionPresentation(B, pairs)


def map_element(u: FractionElement, image: FractionPresentation, phi: RingMap) -> FractionElement:
    """The element φ(n)/s_B^a of the base-changed presentation."""
    return FractionElement(image, phi(u.numerator), u.exponent)


def _free_sections_only(U: FractionPresentation) -> None:
    for p in U.pairs:
        if not p.module.is_free:
            raise UsageError(f"section {p.name} has a non-free module; use extend_contract")


def extended_ideal(U: FractionPresentation, elements: Sequence[FractionElement]) -> Ideal:
    """The ideal of R_U generated by fractions, written in R[t] with t∏σ = 1; free sections only.

    1/σ_α becomes t times the other sections, so no contraction is involved.
    """
    _free_sections_only(U)
    ring = U.ring
    t = ring.fresh_name(INVERSE_VARIABLE)
    big = ring.with_variables(prefix=(t,))
    shift = [i + 1 for i in range(ring.nvars)]
    inverse = big.gen(0)
    sections = {p.name: p.section.to_ring(big, shift) for p in U.pairs}
    gens = [g.to_ring(big, shift) for g in U.base.ideal.generators]
    gens.append(inverse * product(sections.values(), big) - 1)
    for u in elements:
        if u.presentation is not U:
            raise UsageError("generator from a different presentation")
        value = u.numerator.to_ring(big, shift)
        for name, k in u.exponent:
            others = product((s for other, s in sections.items() if other != name), big)
            value = value * (inverse * others) ** k
        gens.append(value)
    return Ideal(big, gens)


def localized_quotient_dimension(U: FractionPresentation, ideal: Ideal) -> Optional[int]:
    """dim_k of (R/I)_U through R[t]/(J + I + (t∏σ - 1)); free sections only."""
    _free_sections_only(U)
    basis = colength(extended_ideal(U, [U.element(g) for g in ideal.generators]))
    return None if basis is None else basis.dimension


def quotient_dimension(U: FractionPresentation, ideal: Ideal) -> Optional[int]:
    basis = colength(ideal.with_generators(U.base.ideal.generators))
    return None if basis is None else basis.dimension
