"""Independent oracles and seeded property sweeps.

The oracles avoid Gröbner bases where they can: membership by linear algebra on
graded pieces, resultants through chosen roots, and colength-2 ideals of the
plane by enumerating subspaces of the polynomials of degree at most two.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from ..core.errors import UsageError, VerificationFailure
from ..core.polynomial import Monomial, Polynomial, PolynomialRing, product
from ..core.resultant import sylvester_resultant
from ..core.scalars import QQ, Field, PrimeField
from ..utils.linalg import in_row_span, rank
from . import finite_flat_service as flat
from . import fraction_service as frac
from . import hilb_service as hilb
from . import nonscheme_service as nonscheme
from .ideal_service import Ideal, QuotientRing, RingMap, colength

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    trials: int = 0
    failures: int = 0
    details: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, passed: bool, detail: str = "") -> None:
        self.trials += 1
        if not passed:
            self.failures += 1
            if detail and len(self.details) < 5:
                self.details.append(detail)


# -- oracles ----------------------------------------------------------------------------


def monomials_of_degree(nvars: int, d: int) -> List[Monomial]:
    """Exponent vectors of total degree d, in a fixed order."""
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            out.append((first,) + rest)
    return out


def graded_membership(f: Polynomial, generators: Sequence[Polynomial]) -> bool:
    """f ∈ (generators) for homogeneous input, decided in the degree of f alone.

    Only homogeneous ideals are decided here; membership_sweep covers affine input
    by dehomogenizing and checking the engine's cofactors.
    """
    ring = f.ring
    if not f:
        return True
    if not f.is_homogeneous() or any(not g.is_homogeneous() for g in generators):
        raise ValueError("graded membership needs homogeneous polynomials")
    d = f.total_degree()
    basis = monomials_of_degree(ring.nvars, d)
    rows = []
    for g in generators:
        if not g or g.total_degree() > d:
            continue
        for m in monomials_of_degree(ring.nvars, d - g.total_degree()):
            shifted = g.mul_term(m, ring.field.one)
            rows.append([shifted.terms.get(b, ring.field.zero) for b in basis])
    vector = [f.terms.get(b, ring.field.zero) for b in basis]
    return in_row_span(vector, rows, ring.field)


def resultant_by_roots(roots: Sequence[Fraction], g: Polynomial) -> Fraction:
    """g(r_1)...g(r_n), the resultant of ∏(x - r_i) and g."""
    value = Fraction(1)
    for r in roots:
        value *= g.evaluate([r])
    return value


def _rref_subspaces(field_: Field, dim: int, k: int) -> Iterator[List[List[object]]]:
    """Every k-dimensional subspace of field^dim, once, as a reduced row echelon basis."""
    values = list(field_.elements())
    zero, one = field_.zero, field_.one
    for pivots in itertools.combinations(range(dim), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, dim) if c not in pivots]
        for fill in itertools.product(values, repeat=len(free)):
            rows = [[zero] * dim for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = one
            for (r, c), v in zip(free, fill):
                rows[r][c] = v
            yield rows


def brute_force_plane_count(q: int, sections: Sequence[str] = ()) -> int:
    """Colength-2 ideals of F_q[x,y] (avoiding the sections), via subspaces of degree <= 2.

    Such an ideal is generated by its 4-dimensional intersection W with the polynomials
    of degree <= 2, and W, xW, yW span at most 8 dimensions in degree <= 3.
    """
    field_ = PrimeField(q)
    ring = PolynomialRing(field_, ("x", "y"))
    low = [m for d in range(3) for m in monomials_of_degree(2, d)]
    high = [m for d in range(4) for m in monomials_of_degree(2, d)]
    polys = [ring(s) for s in sections]
    count = 0
    for rows in _rref_subspaces(field_, len(low), 4):
        W = [Polynomial(ring, {m: c for m, c in zip(low, row) if c}) for row in rows]
        spread = [w * v for w in W for v in (ring.one(), ring.var("x"), ring.var("y"))]
        if rank([[p.terms.get(m, field_.zero) for m in high] for p in spread], field_) > 8:
            continue
        ideal = Ideal(ring, W)
        basis = colength(ideal)
        if basis is None or basis.dimension != 2:
            continue
        if all(ideal.with_generators([s]).is_unit() for s in polys):
            count += 1
    return count


# -- sweeps -----------------------------------------------------------------------------


def _random_homogeneous(rng: random.Random, ring: PolynomialRing, d: int, terms: int) -> Polynomial:
    values = [c for c in ring.field.elements() if c]
    monos = monomials_of_degree(ring.nvars, d)
    chosen = rng.sample(monos, min(terms, len(monos)))
    return Polynomial(ring, {m: rng.choice(values) for m in chosen})


def _dehomogenize(p: Polynomial, affine: PolynomialRing) -> Polynomial:
    """Set the last variable to 1."""
    return p.substitute(list(affine.gens()) + [affine.one()], affine)


def membership_sweep(rng: random.Random, trials: int = 500) -> CheckResult:
    """Gröbner membership against graded linear algebra over F_2 and F_3, degree <= 4.

    Each trial also sets the last variable to 1: a graded member stays a member, and
    every affine member must be rebuilt exactly from the engine's cofactors.
    """
    result = CheckResult("membership")
    for k in range(trials):
        field_ = PrimeField(rng.choice((2, 3)))
        ring = PolynomialRing(field_, ("x", "y", "z")[: rng.randint(1, 3)])
        gens = [_random_homogeneous(rng, ring, rng.randint(1, 2), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
        d = rng.randint(2, 4)
        if rng.random() < 0.5:
            f = ring.zero()
            for g in gens:
                if g.total_degree() <= d:
                    f = f + g * _random_homogeneous(rng, ring, d - g.total_degree(), 2)
            if not f:
                f = _random_homogeneous(rng, ring, d, 3)
        else:
            f = _random_homogeneous(rng, ring, d, 3)
        expected = graded_membership(f, gens)
        found = Ideal(ring, gens).contains(f)
        result.record(found == expected, f"trial {k}: {f} in {gens}: engine {found}, oracle {expected}")
        if ring.nvars < 2:
            continue
        affine = PolynomialRing(field_, ring.variables[:-1])
        ideal = Ideal(affine, [_dehomogenize(g, affine) for g in gens])
        target = _dehomogenize(f, affine)
        cofactors = ideal.lift(target)
        if expected:
            result.record(cofactors is not None, f"trial {k}: affine {target} dropped out of {ideal}")
        if cofactors is not None:
            rebuilt = sum((c * g for c, g in zip(cofactors, ideal.generators)), affine.zero())
            result.record(rebuilt == target, f"trial {k}: cofactors of {target} give {rebuilt}")
    return result


def resultant_sweep(rng: random.Random, trials: int = 20) -> CheckResult:
    """det of multiplication by g on Q[x]/(m) = Res(m, g) = ∏ g(r) for m with chosen roots."""
    result = CheckResult("norm_resultant")
    ring = PolynomialRing(QQ, ("x",))
    point = PolynomialRing(QQ, ())
    x = ring.var("x")
    for k in range(trials):
        roots = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
        m = product((x - r for r in roots), ring)
        g = ring.zero()
        while not g:
            g = sum((ring.constant(rng.randint(-3, 3)) * x ** i for i in range(rng.randint(0, 3) + 1)), ring.zero())
        algebra = flat.FiniteFlatAlgebra.from_monic(point, m, "x")
        norm = flat.det_section(algebra, algebra.element(g)).value.constant_value()
        res_value = sylvester_resultant(m, g, 0).constant_value()
        expected = resultant_by_roots(roots, g)
        result.record(norm == res_value == expected, f"trial {k}: m={m} g={g}: {norm}, {res_value}, {expected}")
    return result


def monic_resultant_grid(rng: random.Random, max_degree: int = 4, tests: int = 20) -> CheckResult:
    """Every monic m over F_3 of degree <= max_degree against seeded random g: det_section = resultant."""
    result = CheckResult("norm_resultant_f3")
    field_ = PrimeField(3)
    ring = PolynomialRing(field_, ("x",))
    point = PolynomialRing(field_, ())
    x = ring.var("x")
    values = list(field_.elements())
    samples = []
    while len(samples) < tests:
        g = Polynomial(ring, {(i,): rng.choice(values) for i in range(rng.randint(0, 3) + 1)})
        if g:
            samples.append(g)
    for d in range(1, max_degree + 1):
        for tail in itertools.product(values, repeat=d):
            m = x ** d + sum((ring.constant(c) * x ** i for i, c in enumerate(tail)), ring.zero())
            algebra = flat.FiniteFlatAlgebra.from_monic(point, m, "x")
            for g in samples:
                norm = flat.det_section(algebra, algebra.element(g)).value
                res = sylvester_resultant(m, g, 0).to_ring(point, [0])
                result.record(norm == res, f"m={m} g={g}: det {norm}, res {res}")
    return result


THM55_SECTIONS: Tuple[Tuple[str, ...], ...] = ((), ("x",), ("x-1",), ("x", "x-1"), ("x^2+x+1",))


def double_count_grid(ns: Sequence[int] = (1, 2, 3), qs: Sequence[int] = (2, 3)) -> CheckResult:
    result = CheckResult("double_count")
    for n, q, sections in itertools.product(ns, qs, THM55_SECTIONS):
        outcome = hilb.verify_double_count(n, list(sections), q)
        result.record(outcome.match, f"n={n} q={q} S={list(sections)}: {outcome.counts}")
    return result


def stalk_grid(ns: Sequence[int] = (1, 2, 3), qs: Sequence[int] = (2, 3)) -> CheckResult:
    result = CheckResult("stalk")
    for n, q in itertools.product(ns, qs):
        outcome = hilb.stalk_hilb(n, q)
        result.record(outcome.match, f"n={n} q={q}: {outcome.count_ideal}, {outcome.count_norm}")
    return result


def plane_check(qs: Sequence[int] = (2,)) -> CheckResult:
    """Plane enumeration against the closed form q^4 + q^3 and the subspace oracle."""
    result = CheckResult("plane_colength_2")
    for q in qs:
        everything = len(hilb.enumerate_points(q, 2, plane=True))
        result.record(everything == q ** 4 + q ** 3, f"q={q}: {everything} != {q ** 4 + q ** 3}")
        result.record(everything == brute_force_plane_count(q), f"q={q}: oracle disagrees with {everything}")
        localized = len(hilb.enumerate_points(q, 2, ["x"], plane=True))
        result.record(localized == brute_force_plane_count(q, ["x"]), f"q={q}, S={{x}}: oracle disagrees with {localized}")
    return result


def nonscheme_sweep(rng: random.Random, trials: int = 100) -> CheckResult:
    """member(S) and member(T) iff member(f-only), on random fractions with f = x."""
    result = CheckResult("nonscheme_biconditional")
    for field_ in (QQ, PrimeField(3)):
        ring = PolynomialRing(field_, ("x", "y"))
        f = ring.var("x")
        samples = [nonscheme.random_factored_fraction(rng, f) for _ in range(trials // 2)]
        report = nonscheme.intersection_is_fraction_ring(f, samples)
        for verdict in report.verdicts:
            result.record(verdict.consistent, f"{verdict.sample}: S={verdict.side_s} T={verdict.side_t} f={verdict.side_f}")
    return result


def _random_poly(rng: random.Random, ring: PolynomialRing, degree: int, terms: int) -> Polynomial:
    values = [c for c in ring.field.elements() if c] if ring.field.is_finite() else [Fraction(v) for v in (-2, -1, 1, 2, 3)]
    monos = [m for d in range(degree + 1) for m in monomials_of_degree(ring.nvars, d)]
    chosen = rng.sample(monos, min(terms, len(monos)))
    return Polynomial(ring, {m: rng.choice(values) for m in chosen})


def _random_roundtrip_case(rng: random.Random) -> Tuple[frac.FractionPresentation, List[frac.FractionElement]]:
    if rng.random() < 0.5:
        ring = PolynomialRing(PrimeField(rng.choice((2, 3))), ("x", "y"))
    else:
        ring = PolynomialRing(QQ, ("x",))
    f = ring.zero()
    while f.is_constant():
        f = _random_poly(rng, ring, 2, 2)
    U = frac.FractionPresentation(ring).with_section("f", f)
    gens = []
    for _ in range(rng.randint(1, 2)):
        numerator = ring.zero()
        while not numerator:
            numerator = _random_poly(rng, ring, 2, 3)
        gens.append(U.element(numerator, frac.MultiExponent.of(f=rng.randint(0, 2))))
    return U, gens


def roundtrip_sweep(rng: random.Random, trials: int = 50) -> CheckResult:
    """Extension of the contraction of J ⊆ R_f is J again.

    Both sides are compared in R[t]/(t·f - 1), which never goes through extend_contract.
    """
    result = CheckResult("extend_contract_roundtrip")
    for k in range(trials):
        U, gens = _random_roundtrip_case(rng)
        contraction = frac.extend_contract(U, gens).ideal
        extended = frac.extended_ideal(U, gens)
        again = frac.extended_ideal(U, [U.element(g) for g in contraction.generators])
        numerators_in = all(contraction.contains(g.numerator) for g in gens)
        result.record(again.equals(extended) and numerators_in, f"trial {k}: J={[str(g) for g in gens]} -> {contraction}")
    return result


def dimension_sweep(rng: random.Random, trials: int = 25) -> CheckResult:
    """extend_contract's verdict against colength(I) versus the localized quotient dimension."""
    result = CheckResult("localization_dimension")
    done = 0
    attempts = 0
    while done < trials and attempts < 20 * trials:
        attempts += 1
        field_ = PrimeField(rng.choice((2, 3)))
        ring = PolynomialRing(field_, ("x", "y"))
        x, y = ring.gens()
        a, b = (ring.constant(rng.choice(list(field_.elements()))) for _ in range(2))
        ideal = Ideal(ring, [(x - a) * _random_poly(rng, ring, 1, 2) + x ** 2, (y - b) ** 2 + x * _random_poly(rng, ring, 1, 2), y ** 3])
        if colength(ideal) is None:
            continue
        s = _random_poly(rng, ring, 1, 2)
        if not s:
            continue
        U = frac.FractionPresentation(ring).with_section("s", s)
        verdict = frac.extend_contract(U, [U.element(g) for g in ideal.generators]).isomorphism
        direct = frac.quotient_dimension(U, ideal)
        localized = frac.localized_quotient_dimension(U, ideal)
        result.record(verdict == (direct == localized), f"I={ideal} s={s}: verdict {verdict}, dims {direct} vs {localized}")
        done += 1
    return result


def _equality_presentations() -> List[frac.FractionPresentation]:
    """Two free sections over Q[x,y] and F_3[x,y], and a non-free point module on y^2 = x^3 - x."""
    out = []
    for field_ in (QQ, PrimeField(3)):
        ring = PolynomialRing(field_, ("x", "y"))
        out.append(frac.FractionPresentation(ring).with_section("f", "x").with_section("g", "y + 1"))
    ring = PolynomialRing(QQ, ("x", "y"))
    curve = QuotientRing(ring, Ideal(ring, ["y^2 - x^3 + x"]))
    point = frac.InvertibleModule(curve, ["x", "y"])
    out.append(frac.FractionPresentation(curve).with_section("s", "x", point).with_section("g", "x + 1"))
    return out


def _random_fraction(rng: random.Random, U: frac.FractionPresentation) -> frac.FractionElement:
    a = frac.MultiExponent.of({name: rng.randint(0, 2) for name in U.names()})
    numerator = U.ring.zero()
    for g in frac.tensor_power(U, a).generators():
        numerator = numerator + _random_poly(rng, U.ring, 1, 2) * g
    return U.element(numerator, a, check=False)


def _rewrite(rng: random.Random, u: frac.FractionElement) -> frac.FractionElement:
    """The same class written differently: n·σ^b / σ^(a+b), or times s/s."""
    presentation = u.presentation
    if rng.random() < 0.5:
        extra = frac.MultiExponent.of({name: rng.randint(0, 2) for name in presentation.names()})
        return u.lift_to(u.exponent + extra)
    return u * presentation.unit(rng.choice(presentation.names()))


def equality_laws_sweep(rng: random.Random, trials: int = 200) -> CheckResult:
    """fraction_eq is reflexive, symmetric and transitive, and s/s = 1."""
    result = CheckResult("equality_laws")
    presentations = _equality_presentations()
    for k in range(trials):
        U = presentations[k % len(presentations)]
        u = _random_fraction(rng, U)
        v = _rewrite(rng, u) if rng.random() < 0.6 else _random_fraction(rng, U)
        w = _rewrite(rng, v) if rng.random() < 0.6 else _random_fraction(rng, U)
        uv, vu = frac.fraction_eq(u, v), frac.fraction_eq(v, u)
        vw, uw = frac.fraction_eq(v, w), frac.fraction_eq(u, w)
        result.record(frac.fraction_eq(u, u), f"trial {k}: {u} differs from itself")
        result.record(uv == vu, f"trial {k}: {u} vs {v} is not symmetric")
        result.record(uw or not (uv and vw), f"trial {k}: {u} = {v} = {w} but {u} != {w}")
        result.record(frac.fraction_eq(u, _rewrite(rng, u)), f"trial {k}: a rewrite of {u} differs from it")
        name = rng.choice(U.names())
        result.record(frac.fraction_eq(U.unit(name), U.one()), f"trial {k}: {name}/{name} != 1 over {U}")
    return result


@dataclass(frozen=True)
class SigmaCase:
    label: str
    algebra: flat.FiniteFlatAlgebra
    sections: Tuple[str, ...]
    phi: RingMap
    expected: bool


def sigma_cases() -> List[SigmaCase]:
    """Known verdicts for Q[a][x]/(x^2 - a) and the universal pair Q[e1,e2][x]/(x^2 - e1 x + e2)."""
    A = PolynomialRing(QQ, ("a",))
    root = flat.FiniteFlatAlgebra.from_monic(A, PolynomialRing(QQ, ("x", "a")).parse("x^2 - a"), "x")
    At = A.with_variables(suffix=("t",))
    point = PolynomialRing(QQ, ())
    E = PolynomialRing(QQ, ("e1", "e2"))
    pair = flat.FiniteFlatAlgebra.from_monic(E, PolynomialRing(QQ, ("x", "e1", "e2")).parse("x^2 - e1*x + e2"), "x")
    Et = E.with_variables(suffix=("t",))

    def inverting(relation: str) -> RingMap:
        return RingMap(A, QuotientRing(At, Ideal(At, [relation])), ["a"])

    return [
        SigmaCase("x, invert a", root, ("x",), inverting("a*t - 1"), True),
        SigmaCase("x, identity", root, ("x",), RingMap.identity(A), False),
        SigmaCase("x - 1, invert 1 - a", root, ("x - 1",), inverting("(1 - a)*t - 1"), True),
        SigmaCase("x and x - 1, invert a", root, ("x", "x - 1"), inverting("a*t - 1"), False),
        SigmaCase("x and x - 1, invert a(1 - a)", root, ("x", "x - 1"), inverting("a*(1 - a)*t - 1"), True),
        SigmaCase("x, zero ring", root, ("x",), RingMap(A, QuotientRing(A, Ideal.unit(A)), ["a"]), True),
        SigmaCase("x, a -> 2", root, ("x",), RingMap(A, point, ["2"]), True),
        SigmaCase("x, a -> 0", root, ("x",), RingMap(A, point, ["0"]), False),
        SigmaCase("pair, x, invert e2", pair, ("x",), RingMap(E, QuotientRing(Et, Ideal(Et, ["e2*t - 1"])), ["e1", "e2"]), True),
        SigmaCase("pair, x - 1, at (2, 1)", pair, ("x - 1",), RingMap(E, point, ["2", "1"]), False),
    ]


def sigma_table_check() -> CheckResult:
    """Norm and operator verdicts of sigma_inverting_equiv against the known table."""
    result = CheckResult("sigma_inverting_table")
    for case in sigma_cases():
        try:
            verdicts = flat.sigma_inverting_equiv(case.algebra, list(case.sections), case.phi)
        except VerificationFailure as exc:
            result.record(False, f"{case.label}: {exc}")
            continue
        expected = (case.expected, case.expected)
        result.record(verdicts == expected, f"{case.label}: got {verdicts}, expected {expected}")
    return result


CHECKS: Dict[str, Callable[[random.Random], CheckResult]] = {
    "membership": lambda rng: membership_sweep(rng),
    "norm_resultant": lambda rng: resultant_sweep(rng),
    "norm_resultant_f3": lambda rng: monic_resultant_grid(rng),
    "double_count": lambda rng: double_count_grid(),
    "stalk": lambda rng: stalk_grid(),
    "plane_colength_2": lambda rng: plane_check((2,)),
    "nonscheme_biconditional": lambda rng: nonscheme_sweep(rng),
    "extend_contract_roundtrip": lambda rng: roundtrip_sweep(rng),
    "localization_dimension": lambda rng: dimension_sweep(rng),
    "equality_laws": lambda rng: equality_laws_sweep(rng),
    "sigma_inverting_table": lambda rng: sigma_table_check(),
}


def run_checks(seed: int, only: Optional[Sequence[str]] = None) -> List[CheckResult]:
    """Run the named checks (all by default), each with its own generator seeded from ``seed``."""
    names = list(only) if only else list(CHECKS)
    results = []
    for name in names:
        if name not in CHECKS:
            raise UsageError(f"unknown check {name!r}; choose from {sorted(CHECKS)}")
        rng = random.Random(f"{seed}:{name}")
        outcome = CHECKS[name](rng)
        logger.info("check %s: %d trials, %d failures", name, outcome.trials, outcome.failures)
        results.append(outcome)
    return results
