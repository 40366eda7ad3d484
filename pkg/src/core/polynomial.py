"""Sparse multivariate polynomials over exact fields.

A polynomial is a map monomial -> nonzero coefficient, where a monomial is a
tuple of exponents indexed by variable position in its ``PolynomialRing``.
Variable names are for display only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import FieldMismatchError, UsageError
from .scalars import QQ, Field, PrimeFieldElement, Scalar

Monomial = Tuple[int, ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if a | b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _grevlex(exps: Monomial) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class MonomialOrder:
    """lex, grevlex, or block elimination with the first ``split`` variables in the first block.

    ``key(m)`` is larger for larger monomials. The block order compares the degree
    in the first block first, so any monomial involving a first-block variable beats
    every monomial free of them.
    """

    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise UsageError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.split < 1:
            raise UsageError("block order needs a split index >= 1")

    @cached_property
    def key(self) -> Callable[[Monomial], tuple]:
        if self.kind == "lex":
            return lambda m: m
        if self.kind == "grevlex":
            return _grevlex
        k = self.split
        return lambda m: (sum(m[:k]), _grevlex(m[:k]), _grevlex(m[k:]))

    @property
    def name(self) -> str:
        return f"block:{self.split}" if self.kind == "block" else self.kind

    @classmethod
    def from_name(cls, name: str) -> "MonomialOrder":
        if name.startswith("block:"):
            return cls("block", int(name.split(":", 1)[1]))
        return cls(name)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


class PolynomialRing:
    """k[x_1..x_n]: a field plus an ordered tuple of variable names."""

    def __init__(self, field: Field, variables: Sequence[str]):
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate variable names in {names}")
        self.field = field
        self.variables = names
        self.nvars = len(names)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolynomialRing)
            and self.field == other.field
            and self.variables == other.variables
        )

    def __hash__(self) -> int:
        return hash((self.field, self.variables))

    def __repr__(self) -> str:
        return f"{self.field.name}[{','.join(self.variables)}]"

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UsageError(f"{name!r} is not a variable of {self!r}") from None

    @property
    def zero_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {self.zero_monomial: self.field.convert(c)})

    def monomial(self, exps: Monomial, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): self.field.convert(coeff)})

    def gen(self, i: int) -> "Polynomial":
        exps = [0] * self.nvars
        exps[i] = 1
        return self.monomial(tuple(exps))

    def var(self, name: str) -> "Polynomial":
        return self.gen(self.index(name))

    def gens(self) -> List["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def with_variables(self, prefix: Sequence[str] = (), suffix: Sequence[str] = ()) -> "PolynomialRing":
        return PolynomialRing(self.field, tuple(prefix) + self.variables + tuple(suffix))

    def fresh_name(self, stem: str) -> str:
        name, k = stem, 0
        while name in self.variables:
            k += 1
            name = f"{stem}{k}"
        return name

    def parse(self, text: str) -> "Polynomial":
        from ..utils.parsing import parse_polynomial

        return parse_polynomial(text, self)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise FieldMismatchError(f"polynomial from {value.ring!r} used in {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.constant(value)


class Polynomial:
    """Immutable sparse polynomial. No zero coefficients are ever stored."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Optional[Mapping[Monomial, Scalar]] = None):
        self.ring = ring
        clean: Dict[Monomial, Scalar] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _trusted(cls, ring: PolynomialRing, terms: Dict[Monomial, Scalar]) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection -----------------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return self._terms

    def items(self, order: MonomialOrder = GREVLEX) -> List[Tuple[Monomial, Scalar]]:
        """Terms sorted from the largest monomial down."""
        key = order.key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __iter__(self) -> Iterator[Tuple[Monomial, Scalar]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self.ring.zero_monomial in self._terms)

    def constant_value(self) -> Scalar:
        return self._terms.get(self.ring.zero_monomial, self.ring.field.zero)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self._terms:
            raise UsageError("zero polynomial has no leading monomial")
        return max(self._terms, key=order.key)

    def leading_term(self, order: MonomialOrder = GREVLEX) -> Tuple[Monomial, Scalar]:
        m = self.leading_monomial(order)
        return m, self._terms[m]

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Scalar:
        return self.leading_term(order)[1]

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def degree_in(self, i: int) -> int:
        if not self._terms:
            return -1
        return max(m[i] for m in self._terms)

    def variables_used(self) -> List[int]:
        return [i for i in range(self.ring.nvars) if any(m[i] for m in self._terms)]

    def involves(self, i: int) -> bool:
        return any(m[i] for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    # -- arithmetic -----------------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise FieldMismatchError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.constant(other)

    def __add__(self, other) -> "Polynomial":
        o = self._coerce(other)
        out = dict(self._terms)
        for m, c in o._terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._trusted(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._trusted(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        o = self._coerce(other)
        out: Dict[Monomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = self.ring.field.convert(c)
        if not c:
            return self.ring.zero()
        return Polynomial._trusted(self.ring, {m: v * c for m, v in self._terms.items()})

    def mul_term(self, mono: Monomial, c) -> "Polynomial":
        if not c:
            return self.ring.zero()
        return Polynomial._trusted(self.ring, {mono_mul(m, mono): v * c for m, v in self._terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise UsageError("negative powers of polynomials are not polynomials")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    def divide(self, divisors: Sequence["Polynomial"], order: MonomialOrder = GREVLEX) -> Tuple[List["Polynomial"], "Polynomial"]:
        """Multivariate division: returns (quotients, remainder) with self = sum q_i d_i + r."""
        ring = self.ring
        divs = [self._coerce(d) for d in divisors]
        leads = [d.leading_term(order) if d else None for d in divs]
        quotients: List[Dict[Monomial, Scalar]] = [{} for _ in divs]
        remainder: Dict[Monomial, Scalar] = {}
        p = dict(self._terms)
        key = order.key
        while p:
            m = max(p, key=key)
            c = p[m]
            for idx, lead in enumerate(leads):
                if lead is not None and mono_divides(lead[0], m):
                    q = mono_div(m, lead[0])
                    factor = c / lead[1]
                    quotients[idx][q] = quotients[idx].get(q, ring.field.zero) + factor
                    for gm, gc in divs[idx]._terms.items():
                        mm = mono_mul(gm, q)
                        v = p.get(mm, ring.field.zero) - factor * gc
                        if v:
                            p[mm] = v
                        else:
                            p.pop(mm, None)
                    break
            else:
                remainder[m] = c
                del p[m]
        return [Polynomial(ring, q) for q in quotients], Polynomial._trusted(ring, remainder)

    def exact_div(self, other) -> Optional["Polynomial"]:
        """Quotient if ``other`` divides ``self`` exactly, else ``None``."""
        o = self._coerce(other)
        if not o:
            raise UsageError("division by the zero polynomial")
        (q,), r = self.divide([o])
        return q if not r else None

    # -- evaluation and maps ---------------------------------------------------------

    def evaluate(self, point: Sequence) -> Scalar:
        field = self.ring.field
        values = [field.convert(v) for v in point]
        if len(values) != self.ring.nvars:
            raise UsageError(f"point has {len(values)} coordinates, ring has {self.ring.nvars} variables")
        total = field.zero
        for m, c in self._terms.items():
            term = c
            for v, e in zip(values, m):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def substitute(self, images: Sequence["Polynomial"], target: Optional[PolynomialRing] = None) -> "Polynomial":
        """Ring map k[x] -> target sending x_i to images[i]."""
        if len(images) != self.ring.nvars:
            raise UsageError(f"need {self.ring.nvars} images, got {len(images)}")
        target = target or (images[0].ring if images else self.ring)
        imgs = [target(img) for img in images]
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in powers:
                powers[key] = imgs[i] ** e
            return powers[key]

        total = target.zero()
        for m, c in self._terms.items():
            term = target.constant(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def to_ring(self, target: PolynomialRing, positions: Sequence[int]) -> "Polynomial":
        """Re-index variables: variable i of self becomes variable positions[i] of target."""
        if target.field != self.ring.field:
            raise FieldMismatchError("re-indexing across fields")
        out: Dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            exps = [0] * target.nvars
            for i, e in enumerate(m):
                if e:
                    exps[positions[i]] += e
            out[tuple(exps)] = c
        return Polynomial._trusted(target, out)

    def coefficients_in(self, i: int) -> List["Polynomial"]:
        """Coefficients c_k (free of variable i) with self = sum c_k x_i^k."""
        deg = self.degree_in(i)
        buckets: List[Dict[Monomial, Scalar]] = [{} for _ in range(deg + 1)]
        for m, c in self._terms.items():
            k = m[i]
            rest = m[:i] + (0,) + m[i + 1:]
            buckets[k][rest] = c
        return [Polynomial._trusted(self.ring, b) for b in buckets]

    @classmethod
    def from_coefficients_in(cls, ring: PolynomialRing, i: int, coeffs: Sequence["Polynomial"]) -> "Polynomial":
        total = ring.zero()
        x = ring.gen(i)
        for k, c in enumerate(coeffs):
            if c:
                total = total + c * x ** k
        return total

    # -- comparison and display -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction, PrimeFieldElement)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset((m, _coeff_key(c)) for m, c in self._terms.items())))
        return self._hash

    def sort_key(self, order: MonomialOrder = GREVLEX) -> tuple:
        """Total order on polynomials for canonical sorting of result lists."""
        return tuple((order.key(m), _coeff_key(c)) for m, c in self.items(order))

    def format(self, order: MonomialOrder = GREVLEX) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for m, c in self.items(order):
            mono = _format_monomial(m, self.ring.variables)
            neg, mag = _split_sign(c)
            if mono == "1":
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.ring!r}, {self.format()!r})"


def _coeff_key(c: Scalar):
    if isinstance(c, PrimeFieldElement):
        return c.value
    return (c.numerator, c.denominator)


def _split_sign(c: Scalar) -> Tuple[bool, str]:
    if isinstance(c, PrimeFieldElement):
        return False, str(c.value)
    if c < 0:
        return True, str(-c)
    return False, str(c)


def _format_monomial(m: Monomial, names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, m):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


def product(polys: Iterable[Polynomial], ring: PolynomialRing) -> Polynomial:
    result = ring.one()
    for p in polys:
        result = result * p
    return result


def rational_ring(*variables: str) -> PolynomialRing:
    return PolynomialRing(QQ, variables)
