"""Exact coefficient fields: the rationals and prime fields F_p.

Rationals are plain ``fractions.Fraction`` values (always canonical: reduced,
positive denominator, zero is 0/1). Prime-field values are ``PrimeFieldElement``
instances bound to a ``PrimeField`` descriptor. Both are immutable.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Union

from .errors import FieldMismatchError, ParseError, ScalarDivisionError, UsageError

Scalar = Union[Fraction, "PrimeFieldElement"]

_PRIME_LITERAL = re.compile(r"^\s*(\d+)\s*:\s*(-?\d+)\s*$")


def is_prime(n: int) -> bool:
    """Deterministic trial division; field moduli are small."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _normalize_minus(text: str) -> str:
    return text.replace("−", "-")


class RationalField:
    """The field Q. Elements are ``Fraction`` instances."""

    characteristic = 0
    name = "Q"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __call__(self, value) -> Fraction:
        return self.convert(value)

    def convert(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise UsageError("booleans are not field elements")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, PrimeFieldElement):
            raise FieldMismatchError(f"cannot use {value} as a rational")
        if isinstance(value, str):
            return self.parse(value)
        raise UsageError(f"cannot convert {value!r} to a rational")

    def parse(self, text: str) -> Fraction:
        """Parse ``-3/7`` style decimal rationals (Unicode minus accepted)."""
        cleaned = _normalize_minus(text).strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", cleaned):
            raise ParseError(f"invalid rational literal {text!r}")
        num, _, den = cleaned.partition("/")
        if den and int(den) == 0:
            raise ScalarDivisionError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den) if den else 1)

    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise ScalarDivisionError("inverse of zero in Q")
        return 1 / a

    def format(self, a: Fraction) -> str:
        return str(a)

    def is_finite(self) -> bool:
        return False

    def elements(self) -> Iterator[Fraction]:
        raise UsageError("Q has no finite element list")

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "Q"


QQ = RationalField()


class PrimeField:
    """The field F_p. Primality is checked at construction."""

    _instances: dict = {}

    def __new__(cls, p: int):
        p = int(p)
        cached = cls._instances.get(p)
        if cached is not None:
            return cached
        if not is_prime(p):
            raise UsageError(f"{p} is not prime; F_p needs a prime modulus")
        inst = super().__new__(cls)
        inst.p = p
        cls._instances[p] = inst
        return inst

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return f"F{self.p}"

    @property
    def zero(self) -> "PrimeFieldElement":
        return PrimeFieldElement(0, self)

    @property
    def one(self) -> "PrimeFieldElement":
        return PrimeFieldElement(1, self)

    def __call__(self, value) -> "PrimeFieldElement":
        return self.convert(value)

    def convert(self, value) -> "PrimeFieldElement":
        if isinstance(value, PrimeFieldElement):
            if value.field is not self:
                raise FieldMismatchError(f"{value} is not in {self.name}")
            return value
        if isinstance(value, bool):
            raise UsageError("booleans are not field elements")
        if isinstance(value, int):
            return PrimeFieldElement(value, self)
        if isinstance(value, Fraction):
            return PrimeFieldElement(value.numerator, self) / PrimeFieldElement(value.denominator, self)
        if isinstance(value, str):
            return self.parse(value)
        raise UsageError(f"cannot convert {value!r} to {self.name}")

    def parse(self, text: str) -> "PrimeFieldElement":
        """Accepts integers, ``a/b`` rationals reduced mod p, and ``p:k`` literals."""
        cleaned = _normalize_minus(text).strip()
        m = _PRIME_LITERAL.match(cleaned)
        if m:
            modulus, value = int(m.group(1)), int(m.group(2))
            if modulus != self.p:
                raise FieldMismatchError(f"literal {text!r} lives in F{modulus}, not {self.name}")
            return PrimeFieldElement(value, self)
        return self.convert(QQ.parse(cleaned))

    def inv(self, a: "PrimeFieldElement") -> "PrimeFieldElement":
        return self.convert(a).inverse()

    def format(self, a: "PrimeFieldElement") -> str:
        return str(a.value)

    def is_finite(self) -> bool:
        return True

    def elements(self) -> Iterator["PrimeFieldElement"]:
        for v in range(self.p):
            yield PrimeFieldElement(v, self)

    def __reduce__(self):
        return (PrimeField, (self.p,))

    def __repr__(self) -> str:
        return f"F{self.p}"


class PrimeFieldElement:
    """Element of F_p, value kept in [0, p)."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", int(value) % field.p)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeFieldElement is immutable")

    def _coerce(self, other) -> "PrimeFieldElement":
        if isinstance(other, PrimeFieldElement):
            if other.field is not self.field:
                raise FieldMismatchError(f"mixed fields: {self.field.name} and {other.field.name}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return PrimeFieldElement(other, self.field)
        raise FieldMismatchError(f"cannot combine {self.field.name} element with {other!r}")

    def __add__(self, other):
        if not _combinable(other):
            return NotImplemented
        o = self._coerce(other)
        return PrimeFieldElement(self.value + o.value, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        if not _combinable(other):
            return NotImplemented
        o = self._coerce(other)
        return PrimeFieldElement(self.value - o.value, self.field)

    def __rsub__(self, other):
        if not _combinable(other):
            return NotImplemented
        o = self._coerce(other)
        return PrimeFieldElement(o.value - self.value, self.field)

    def __mul__(self, other):
        if not _combinable(other):
            return NotImplemented
        o = self._coerce(other)
        return PrimeFieldElement(self.value * o.value, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _combinable(other):
            return NotImplemented
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.field)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return PrimeFieldElement(pow(self.value, exponent, self.field.p), self.field)

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ScalarDivisionError(f"inverse of zero in {self.field.name}")
        return PrimeFieldElement(pow(self.value, -1, self.field.p), self.field)

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, PrimeFieldElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value}:F{self.field.p}"

    def __str__(self) -> str:
        return str(self.value)


def _combinable(other) -> bool:
    """Operands handled here (Fractions only to reject them); anything else is deferred."""
    return isinstance(other, (PrimeFieldElement, int, Fraction))


Field = Union[RationalField, PrimeField]


def field_from_name(name: str) -> Field:
    """``Q``/``QQ`` or ``F5``/``GF5``."""
    cleaned = name.strip()
    if cleaned in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"G?F(\d+)", cleaned)
    if not m:
        raise ParseError(f"unknown coefficient field {name!r}")
    return PrimeField(int(m.group(1)))
