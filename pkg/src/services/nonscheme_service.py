"""Partial localizations of k[x, y] with factored denominators.

k[x,y]_{f,S} allows denominators built from factors of f and polynomials in x
alone; k[x,y]_{f,T} the same with y. Their intersection is k[x,y]_f, because the
only units common to both multiplicative sets are constants.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy

from ..core.constants import KRONECKER_MAX_SUBSETS
from ..core.errors import BoundExceeded, UsageError
from ..core.polynomial import Polynomial, PolynomialRing
from ..utils.parsing import SourceSpan, parse_polynomial, split_top_level, strip_brackets
from ..utils.symbolic import from_expr, symbols_of, sympy_options, to_expr

logger = logging.getLogger(__name__)

SIDES = ("S", "T", "f")

TOPOLOGY_NOTE = (
    "Y = U_S ∪ U_T glued along U_f. The two charts' rings meet in k[x,y]_f, so every "
    "function regular on Y already lives on U_f; a scheme structure would force Y to "
    "retract onto Spec k[x,y]_f, while the open sets of Y are exactly Y ∩ U_f for "
    "principal opens U_f. This topological step is argued, not computed; the checks "
    "below verify the ring identity it rests on."
)


def irreducible_factors(p: Polynomial) -> List[Tuple[Polynomial, int]]:
    """Irreducible factors of p with multiplicity, constants dropped."""
    if p.is_constant():
        return []
    symbols = symbols_of(p.ring)
    used = [symbols[i] for i in p.variables_used()]
    try:
        _, factors = sympy.factor_list(to_expr(p, symbols), *used, **sympy_options(p.ring))
    except NotImplementedError:
        # sympy has no multivariate factoring over F_p
        return _kronecker_factors(p)
    return [(from_expr(g, p.ring), k) for g, k in factors]


def _kronecker_divisor(p: Polynomial) -> Optional[Polynomial]:
    """A proper divisor of a bivariate p over F_p, or None when p is irreducible.

    With D > deg_x p, g(x, y) -> g(x, x^D) is injective on polynomials of x-degree
    below D, so every divisor of p shows up as a product of univariate factors of
    p(x, x^D).
    """
    i, j = p.variables_used()
    D = p.degree_in(i) + 1
    symbols = symbols_of(p.ring)
    x = symbols[i]
    image = sympy.Poly(to_expr(p, symbols).subs(symbols[j], x ** D), x, **sympy_options(p.ring))
    _, factors = image.factor_list()
    choices = list(product(*(range(k + 1) for _, k in factors)))
    if len(choices) > KRONECKER_MAX_SUBSETS:
        raise BoundExceeded(f"deciding irreducibility of {p} needs {len(choices)} divisor trials")
    full = tuple(k for _, k in factors)
    for exps in sorted(choices, key=sum):
        if not any(exps) or exps == full:
            continue
        h = sympy.Poly(1, x, **sympy_options(p.ring))
        for (g, _), e in zip(factors, exps):
            h = h * g ** e
        terms = {}
        for (n,), c in h.terms():
            mono = [0] * p.ring.nvars
            mono[i], mono[j] = n % D, n // D
            terms[tuple(mono)] = p.ring.field.convert(int(c))
        candidate = Polynomial(p.ring, terms)
        if not candidate.is_constant() and p.exact_div(candidate) is not None:
            return candidate
    return None


def _kronecker_factors(p: Polynomial) -> List[Tuple[Polynomial, int]]:
    used = p.variables_used()
    if len(used) < 2:
        return irreducible_factors(p)
    if len(used) > 2:
        raise UsageError(f"cannot factor {p} over {p.ring.field.name}: more than two variables")
    divisor = _kronecker_divisor(p)
    if divisor is None:
        return [(p.monic(), 1)]
    merged: List[Tuple[Polynomial, int]] = []
    for g, k in irreducible_factors(divisor) + irreducible_factors(p.exact_div(divisor)):
        for n, (h, m) in enumerate(merged):
            if h == g:
                merged[n] = (h, m + k)
                break
        else:
            merged.append((g, k))
    logger.debug("kronecker split of %s over %s: %d factors", p, p.ring.field.name, len(merged))
    return merged


def is_irreducible(p: Polynomial) -> bool:
    """Irreducible in k[vars]: exactly one factor, of multiplicity one."""
    factors = irreducible_factors(p)
    return len(factors) == 1 and factors[0][1] == 1


def classify(p: Polynomial) -> str:
    """'x', 'y' (univariate in that variable), 'xy' (bivariate) or 'const'."""
    used = p.variables_used()
    if not used:
        return "const"
    if len(used) == 2:
        return "xy"
    return p.ring.variables[used[0]]


def is_irreducible_univariate(p: Polynomial) -> bool:
    used = p.variables_used()
    if len(used) != 1:
        raise UsageError(f"{p} is not univariate")
    symbol = sympy.Symbol(p.ring.variables[used[0]])
    symbols = symbols_of(p.ring)
    poly = sympy.Poly(to_expr(p, symbols), symbol, **sympy_options(p.ring))
    return bool(poly.is_irreducible)


@dataclass(frozen=True)
class FactoredFraction:
    """numerator / ∏ factor^multiplicity with the denominator given factored."""

    numerator: Polynomial
    factors: Tuple[Tuple[Polynomial, int], ...] = ()
    text: str = field(default="", compare=False)

    @property
    def ring(self) -> PolynomialRing:
        return self.numerator.ring

    def validate(self) -> "FactoredFraction":
        seen: List[Polynomial] = []
        for factor, mult in self.factors:
            if mult < 1:
                raise UsageError(f"multiplicity {mult} of {factor} must be positive")
            kind = classify(factor)
            if kind == "const":
                raise UsageError(f"constant {factor} is not a denominator factor")
            monic = factor.monic()
            if any(monic == other for other in seen):
                raise UsageError(f"factor {factor} is declared twice (up to a constant)")
            seen.append(monic)
            if kind == "xy":
                if not is_irreducible(factor):
                    raise UsageError(f"declared irreducible factor {factor} is reducible")
            elif not is_irreducible_univariate(factor):
                raise UsageError(f"declared irreducible factor {factor} is reducible")
            if self.numerator and self.numerator.exact_div(factor) is not None:
                raise UsageError(f"numerator {self.numerator} shares the factor {factor}; reduce the fraction first")
        return self

    def __mul__(self, other: "FactoredFraction") -> "FactoredFraction":
        merged: List[Tuple[Polynomial, int]] = list(self.factors)
        for factor, mult in other.factors:
            for k, (g, m) in enumerate(merged):
                if g.monic() == factor.monic():
                    merged[k] = (g, m + mult)
                    break
            else:
                merged.append((factor, mult))
        return FactoredFraction(self.numerator * other.numerator, tuple(merged))

    def __str__(self) -> str:
        if self.text:
            return self.text
        if not self.factors:
            return str(self.numerator)
        den = "*".join(f"({g})" if m == 1 else f"({g})^{m}" for g, m in self.factors)
        return f"({self.numerator})/{den}"


def parse_factored_fraction(text: str, ring: PolynomialRing, span: Optional[SourceSpan] = None) -> FactoredFraction:
    """``num / f1^k1 * (f2) ...``; a denominator that is a sum is a single factor."""
    span = span or SourceSpan(text, 0)
    pieces = split_top_level(text, "/")
    if len(pieces) > 2:
        raise span.error("only one top-level '/' is allowed in a factored fraction", pieces[2][1] - 1)
    numerator = parse_polynomial(pieces[0][0], ring, SourceSpan(span.source, span.offset + pieces[0][1]))
    factors: List[Tuple[Polynomial, int]] = []
    if len(pieces) == 2:
        den, base = pieces[1]
        stripped = den.strip()
        if stripped.startswith("(") and stripped.endswith(")") and _balanced(stripped[1:-1]):
            den, inner = strip_brackets(den, SourceSpan(span.source, span.offset + base))
            base += inner
        parts = [(den, 0)] if _has_top_level_sum(den) else split_top_level(den, "*")
        for piece, off in parts:
            body, mult = _split_power(piece)
            factor = parse_polynomial(body, ring, SourceSpan(span.source, span.offset + base + off))
            factors.append((factor, mult))
    return FactoredFraction(numerator, tuple(factors), text.strip()).validate()


def _balanced(text: str) -> bool:
    depth = 0
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def _has_top_level_sum(text: str) -> bool:
    depth = 0
    body = text.strip()
    for k, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-−" and depth == 0 and k > 0:
            return True
    return False


def _split_power(piece: str) -> Tuple[str, int]:
    """``(g)^k`` or ``x^k`` -> (g, k); anything else has multiplicity one."""
    body, sep, exp = piece.strip().rpartition("^")
    if not sep or not exp.strip().isdigit() or not _balanced(body) or _has_top_level_sum(body):
        return piece, 1
    if "*" in body and not body.strip().startswith("("):
        return piece, 1
    return body, int(exp)


def member_partial_localization(g: FactoredFraction, f: Polynomial, side: str) -> bool:
    """Is g in k[x,y]_{f,S} (side 'S'), k[x,y]_{f,T} ('T') or k[x,y]_f ('f')?"""
    if side not in SIDES:
        raise UsageError(f"side must be one of {SIDES}, got {side!r}")
    if not f:
        raise UsageError("f must be nonzero")
    allowed = {"S": "x", "T": "y", "f": None}[side]
    for factor, _ in g.factors:
        if f.exact_div(factor) is not None:
            continue
        if allowed is not None and classify(factor) == allowed:
            continue
        return False
    return True


@dataclass
class SampleVerdict:
    sample: FactoredFraction
    side_s: bool
    side_t: bool
    side_f: bool

    @property
    def consistent(self) -> bool:
        return (self.side_s and self.side_t) == self.side_f


@dataclass
class IntersectionReport:
    f: Polynomial
    verdicts: List[SampleVerdict]

    @property
    def violations(self) -> List[SampleVerdict]:
        return [v for v in self.verdicts if not v.consistent]

    @property
    def consistent(self) -> bool:
        return not self.violations

    def members(self, side: str) -> List[str]:
        attr = {"S": "side_s", "T": "side_t", "f": "side_f"}[side]
        return [str(v.sample) for v in self.verdicts if getattr(v, attr)]

    def intersection(self) -> List[str]:
        return [str(v.sample) for v in self.verdicts if v.side_s and v.side_t]


def intersection_is_fraction_ring(f: Polynomial, samples: Iterable[FactoredFraction]) -> IntersectionReport:
    verdicts = []
    for g in samples:
        verdicts.append(
            SampleVerdict(
                g,
                member_partial_localization(g, f, "S"),
                member_partial_localization(g, f, "T"),
                member_partial_localization(g, f, "f"),
            )
        )
    report = IntersectionReport(f, verdicts)
    logger.debug("intersection check for f=%s: %d samples, %d violations", f, len(verdicts), len(report.violations))
    return report


def factor_pools(f: Polynomial) -> dict:
    ring = f.ring
    x, y = ring.gens()[:2]
    # over small fields some of these collapse or split
    return {
        "x": [g for g in (x - 1, x + 1, x ** 2 + 1, x - 2) if is_irreducible_univariate(g)],
        "y": [g for g in (y - 1, y + 1, y ** 2 + 1, y + 2) if is_irreducible_univariate(g)],
        "f": [g for g, _ in irreducible_factors(f)],
        "xy": [x + y, x * y + 1],
    }


def random_factored_fraction(rng: random.Random, f: Polynomial) -> FactoredFraction:
    """A reduced fraction whose denominator mixes the x, y, f and bivariate pools."""
    ring = f.ring
    x, y = ring.gens()[:2]
    pools = factor_pools(f)
    candidates = [g for pool in pools.values() for g in pool]
    chosen: List[Tuple[Polynomial, int]] = []
    for g in rng.sample(candidates, rng.randint(0, 3)):
        if any(g.monic() == h.monic() for h, _ in chosen):
            continue
        chosen.append((g, rng.randint(1, 3)))
    numerators = [ring.one(), ring.constant(-1), ring.constant(2), x * y - 3]
    numerators = [n for n in numerators if all(n.exact_div(g) is None for g, _ in chosen)]
    numerator = rng.choice(numerators)
    return FactoredFraction(numerator, tuple(chosen)).validate()


def default_samples(ring: PolynomialRing, texts: Iterable[str]) -> List[FactoredFraction]:
    return [parse_factored_fraction(t, ring) for t in texts]
