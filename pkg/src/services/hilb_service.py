"""Hilbert schemes of n points: the explicit Hilb^n of the line, norm sections of
pulled-back sections, localized Hilbert schemes and F_q-point enumeration.

Points of Hilb^n(A^1) are monic m = x^n - e_1 x^(n-1) + ... + (-1)^n e_n, so the
norm of a section f is Res(m, f) and the norm of x is e_n.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from ..core.constants import (
    ELEMENTARY_PREFIX,
    ENUM_FIELD_SIZES,
    ENUM_MAX_N_LINE,
    ENUM_MAX_N_PLANE,
    INVERSE_VARIABLE,
    LINE_VARIABLE,
)
from ..core.errors import BoundExceeded, UsageError, VerificationFailure
from ..core.polynomial import Polynomial, PolynomialRing, product
from ..core.resultant import sylvester_resultant
from ..core.scalars import QQ, Field, PrimeField, Scalar
from .finite_flat_service import FiniteFlatAlgebra, check_locally_free, det_section
from .fraction_service import FractionPresentation, extend_contract
from .ideal_service import Ideal, PolyLike, QuotientRing, RingMap, saturate

logger = logging.getLogger(__name__)

PLANE_VARIABLES = ("x", "y")


@dataclass
class UnivFamilyA1:
    """k[e_1..e_n][x]/(m) with m the universal monic of degree n."""

    n: int
    field: Field
    base: PolynomialRing
    ambient: PolynomialRing
    monic: Polynomial
    algebra: FiniteFlatAlgebra

    @property
    def line(self) -> PolynomialRing:
        return PolynomialRing(self.field, (LINE_VARIABLE,))

    def lift_section(self, f: PolyLike) -> Polynomial:
        """A section of A^1 (a polynomial in x) pulled back to k[e][x]."""
        p = self.line(f)
        return p.to_ring(self.ambient, [self.n])

    def monic_at(self, point: Sequence[Scalar]) -> Polynomial:
        """The specialization of m at e = point, in k[x]."""
        images = [self.line.constant(v) for v in point] + [self.line.gen(0)]
        return self.monic.substitute(images, self.line)

    def verify(self) -> bool:
        zero_presentation = [[self.base.zero()] for _ in range(self.n)]
        return check_locally_free(zero_presentation, self.n, self.base) and not self.algebra.verify()


def univ_family(n: int, field_: Field = QQ) -> UnivFamilyA1:
    if n < 1:
        raise UsageError("the universal family needs n >= 1")
    names = [f"{ELEMENTARY_PREFIX}{i}" for i in range(1, n + 1)]
    base = PolynomialRing(field_, names)
    ambient = base.with_variables(suffix=(LINE_VARIABLE,))
    x = ambient.gen(n)
    m = x ** n
    for i in range(1, n + 1):
        term = ambient.gen(i - 1) * x ** (n - i)
        m = m - term if i % 2 else m + term
    algebra = FiniteFlatAlgebra.from_monic(base, m, n)
    return UnivFamilyA1(n, field_, base, ambient, m, algebra)


def norm_of_section(F: UnivFamilyA1, f: PolyLike) -> Polynomial:
    """det of multiplication by f on the universal algebra, checked against Res(m, f)."""
    lifted = F.lift_section(f)
    if not lifted:
        raise UsageError("norm of the zero section")
    norm = det_section(F.algebra, F.algebra.element(lifted)).value
    res = sylvester_resultant(F.monic, lifted, F.n)
    res = res.to_ring(F.base, list(range(F.n)) + [0])
    if norm != res:
        raise VerificationFailure(f"norm {norm} differs from resultant {res}")
    return norm


# -- localized Hilbert scheme ------------------------------------------------------------


@dataclass
class LocalizedHilb:
    """Hilb^n(A^1) with the norms of the sections S inverted."""

    family: UnivFamilyA1
    sections: Tuple[Polynomial, ...]
    norms: Tuple[Polynomial, ...]
    presentation: FractionPresentation

    def contains(self, point: Sequence[Scalar]) -> bool:
        return all(norm.evaluate(point) for norm in self.norms)

    def coordinate_ring(self) -> QuotientRing:
        """k[e, t]/(t·∏N(s) - 1)."""
        base = self.family.base
        t = base.fresh_name(INVERSE_VARIABLE)
        big = base.with_variables(suffix=(t,))
        shift = list(range(base.nvars))
        relation = big.gen(base.nvars) * product(self.norms, base).to_ring(big, shift) - 1
        return QuotientRing(big, Ideal(big, [relation]))

    def universal_family(self) -> FiniteFlatAlgebra:
        """The universal algebra pulled back along the localization map."""
        ring = self.coordinate_ring()
        include = RingMap(self.family.base, ring, ring.ring.gens()[: self.family.base.nvars])
        return self.family.algebra.base_change(include)

    def count_points(self, q: int) -> int:
        field_ = PrimeField(q)
        return sum(1 for e in itertools.product(list(field_.elements()), repeat=self.family.n) if self.contains(e))


def localized_hilb(n: int, sections: Iterable[PolyLike], field_: Field = QQ) -> LocalizedHilb:
    F = univ_family(n, field_)
    polys = tuple(F.line(s) for s in sections)
    if any(not s for s in polys):
        raise UsageError("sections must be nonzero polynomials")
    norms = tuple(norm_of_section(F, s) for s in polys)
    U = FractionPresentation(F.base)
    for s, norm in zip(polys, norms):
        U = U.with_section(f"N({s})", norm)
    return LocalizedHilb(F, polys, norms, U)


# -- point enumeration -------------------------------------------------------------------


@dataclass(frozen=True)
class HilbPoint:
    """A colength-n ideal over F_q; ``coordinates`` are its Gröbner cell parameters."""

    base_field: Field
    ideal: Ideal = field(compare=False)
    n: int
    coordinates: Tuple[int, ...]
    cell: str = "line"

    def __str__(self) -> str:
        return str(self.ideal)


def _check_bounds(q: int, n: int, plane: bool) -> None:
    if q not in ENUM_FIELD_SIZES:
        raise BoundExceeded(f"point enumeration supports q in {ENUM_FIELD_SIZES}, got {q}")
    limit = ENUM_MAX_N_PLANE if plane else ENUM_MAX_N_LINE
    if not 1 <= n <= limit:
        raise BoundExceeded(f"point enumeration supports 1 <= n <= {limit} on {'A^2' if plane else 'A^1'}, got {n}")


def _avoids(ideal: Ideal, sections: Sequence[Polynomial]) -> bool:
    return all(ideal.with_generators([s]).is_unit() for s in sections)


def line_points(q: int, n: int) -> List[HilbPoint]:
    """All monic degree-n polynomials over F_q, as ideals of F_q[x]."""
    F = univ_family(n, PrimeField(q))
    out = []
    for e in itertools.product(list(F.field.elements()), repeat=n):
        ideal = Ideal(F.line, [F.monic_at(e)])
        out.append(HilbPoint(F.field, ideal, n, tuple(int(v) for v in e)))
    return out


def plane_points(q: int, n: int) -> List[HilbPoint]:
    """Colength-n ideals of F_q[x, y] for n <= 2, one reduced lex Gröbner cell at a time."""
    field_ = PrimeField(q)
    ring = PolynomialRing(field_, PLANE_VARIABLES)
    x, y = ring.gens()
    values = list(field_.elements())
    out: List[HilbPoint] = []
    if n == 1:
        for a, b in itertools.product(values, repeat=2):
            out.append(HilbPoint(field_, Ideal(ring, [x - a, y - b]), 1, (int(a), int(b)), "1"))
        return out
    for a, b, c, d in itertools.product(values, repeat=4):
        ideal = Ideal(ring, [x - a - b * y, y ** 2 - c - d * y])
        out.append(HilbPoint(field_, ideal, 2, (int(a), int(b), int(c), int(d)), "1,y"))
    for a, c, d in itertools.product(values, repeat=3):
        ideal = Ideal(ring, [y - a, x ** 2 - c - d * x])
        out.append(HilbPoint(field_, ideal, 2, (int(a), int(c), int(d)), "1,x"))
    return out


def enumerate_points(q: int, n: int, sections: Iterable[PolyLike] = (), plane: bool = False) -> List[HilbPoint]:
    """F_q-points of Hilb^n of the open set where every section is invertible."""
    _check_bounds(q, n, plane)
    points = plane_points(q, n) if plane else line_points(q, n)
    if not points:
        return []
    ring = points[0].ideal.ring
    polys = [ring(s) for s in sections]
    kept = [p for p in points if _avoids(p.ideal, polys)]
    logger.debug("enumerate_points q=%d n=%d plane=%s: %d of %d", q, n, plane, len(kept), len(points))
    return sorted(kept, key=lambda p: (p.cell, p.coordinates))


# -- verification ------------------------------------------------------------------------


@dataclass
class VerificationResult:
    name: str
    counts: Dict[str, int]
    match: bool
    details: List[str] = field(default_factory=list)

    def require(self) -> "VerificationResult":
        if not self.match:
            raise VerificationFailure(f"{self.name}: {self.counts} " + "; ".join(self.details[:3]))
        return self


def verify_double_count(n: int, sections: Sequence[PolyLike], q: int) -> VerificationResult:
    """Count points of Hilb^n(S^-1 A^1) as ideals and as norm-nonvanishing coefficient tuples."""
    _check_bounds(q, n, plane=False)
    field_ = PrimeField(q)
    H = localized_hilb(n, sections, field_)
    ideal_points = enumerate_points(q, n, H.sections)
    norm_points = [e for e in itertools.product(list(field_.elements()), repeat=n) if H.contains(e)]
    details: List[str] = []
    by_ideal = {p.coordinates for p in ideal_points}
    by_norm = {tuple(int(v) for v in e) for e in norm_points}
    if by_ideal != by_norm:
        details.append(f"point sets differ: {sorted(by_ideal ^ by_norm)[:5]}")
    closed = 0
    U = FractionPresentation(H.family.line)
    for k, s in enumerate(H.sections):
        U = U.with_section(f"s{k}", s)
    for p in ideal_points:
        result = extend_contract(U, [U.element(g) for g in p.ideal.generators])
        if result.isomorphism and result.ideal.equals(p.ideal):
            closed += 1
        else:
            details.append(f"{p} is not closed in A^1 x T")
    counts = {"count_ideal": len(ideal_points), "count_norm": len(norm_points), "closed": closed}
    match = not details and len(ideal_points) == len(norm_points) == closed
    return VerificationResult("double_count", counts, match, details)


def point_set(q: int, n: int, sections: Sequence[PolyLike]) -> set:
    return {p.coordinates for p in enumerate_points(q, n, sections)}


def verify_section_intersection(n: int, sections: Sequence[PolyLike], q: int) -> VerificationResult:
    """The points for S are the intersection of the points for each single section,
    counts never grow as sections are added, and S = ∅ gives q^n."""
    _check_bounds(q, n, plane=False)
    whole = point_set(q, n, sections)
    details: List[str] = []
    everything = point_set(q, n, ())
    if len(everything) != q ** n:
        details.append(f"|Hilb^{n}(A^1)(F_{q})| = {len(everything)}, expected {q ** n}")
    meet = set(everything)
    for s in sections:
        meet &= point_set(q, n, [s])
    if meet != whole:
        details.append("point set differs from the intersection of single-section point sets")
    previous = len(everything)
    for k in range(1, len(sections) + 1):
        size = len(point_set(q, n, sections[:k]))
        if size > previous:
            details.append(f"adding section {k} increased the count to {size}")
        previous = size
    counts = {"count": len(whole), "count_intersection": len(meet), "count_empty": len(everything)}
    return VerificationResult("section_intersection", counts, not details, details)


def monic_irreducibles(field_: PrimeField, max_degree: int) -> List[Polynomial]:
    """Monic irreducibles of degree <= max_degree in F_p[x], by sieve."""
    ring = PolynomialRing(field_, (LINE_VARIABLE,))
    x = ring.gen(0)
    values = list(field_.elements())
    found: List[Polynomial] = []
    for d in range(1, max_degree + 1):
        for tail in itertools.product(values, repeat=d):
            f = x ** d + sum((ring.constant(c) * x ** k for k, c in enumerate(tail)), ring.zero())
            if any(2 * g.total_degree() <= d and f.exact_div(g) is not None for g in found):
                continue
            found.append(f)
    return found


@dataclass
class StalkResult:
    n: int
    q: int
    count_ideal: int
    count_norm: int
    sections_used: int
    remark: str = (
        "the stalk at the origin is the colimit over all D(f) with f(0) != 0; "
        "that family is infinite, so this localized Hilbert scheme is not of finite type in general"
    )

    @property
    def match(self) -> bool:
        return self.count_ideal == self.count_norm == 1


def stalk_hilb(n: int, q: int) -> StalkResult:
    """F_q-points of Hilb^n of the local ring of A^1 at 0, counted two ways."""
    _check_bounds(q, n, plane=False)
    field_ = PrimeField(q)
    ring = PolynomialRing(field_, (LINE_VARIABLE,))
    x = ring.gen(0)
    # route (a): only ideals supported at the origin survive
    count_ideal = sum(1 for p in line_points(q, n) if saturate(p.ideal, x).is_unit())
    # route (b): norms against every monic irreducible with nonzero constant term
    sections = [f for f in monic_irreducibles(field_, n) if f.constant_value()]
    H = localized_hilb(n, sections, field_)
    count_norm = H.count_points(q)
    return StalkResult(n, q, count_ideal, count_norm, len(sections))
