"""Session files: a ring header, named objects and commands, run in order.

    ring F3[x];
    hilb verify --theorem 5.5 --n 2 --invert x;

Statements end with ``;`` and ``#`` starts a comment. Arguments are separated
by blanks, so a polynomial containing blanks must be bracketed, as in
``nf (x^2 - 1) I``. Declarations (``poly``, ``ideal``, ``invert``, ``algebra``,
named ``ring``) bind a name once; every name must be declared before use.
Ideals are ideals of the header ring, so its relations are part of each one.
"""
from __future__ import annotations

import argparse
import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..core.constants import VERSION
from ..core.errors import CommandError, HilblocError, ParseError, UndefinedNameError, UsageError, VerificationFailure
from ..core.polynomial import MonomialOrder, Polynomial, PolynomialRing
from ..core.scalars import PrimeField, field_from_name
from ..utils.cache import GroebnerCache
from ..utils.parsing import SourceSpan, line_col, parse_polynomial, parse_polynomial_list, split_top_level, strip_brackets
from ..utils.report import Report, Section
from . import finite_flat_service as flat
from . import fraction_service as frac
from . import hilb_service as hilb
from .ideal_service import (
    ENGINE,
    EngineBounds,
    Ideal,
    QuotientRing,
    RingMap,
    colength,
    configured,
    eliminate,
    intersection,
    quotient,
    saturate,
)

logger = logging.getLogger(__name__)

Word = Tuple[str, int]
Action = Callable[["SessionState", Section], None]

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")
_RING = re.compile(r"\s*(?P<field>[A-Za-z]+\d*)\s*\[(?P<vars>[^\]]*)\]\s*(?:/(?P<rel>.*))?\Z", re.DOTALL)
KEYWORDS = frozenset(
    "ring poly ideal invert algebra show gb nf member colength sum product intersect quotient "
    "saturate eliminate frac norm hilb map module monic quotient in rank".split()
)
IDEAL_OPS = ("sum", "product", "intersect", "quotient", "saturate", "eliminate")
HILB_THEOREMS = ("5.5", "5.6", "5.7")
ENUMERATION_ROWS = 40


@dataclass
class Command:
    index: int
    keyword: str
    text: str
    line: int
    column: int
    action: Action

    @property
    def label(self) -> str:
        flat_text = " ".join(self.text.split())
        return flat_text if len(flat_text) <= 70 else flat_text[:67] + "..."


@dataclass
class SessionFile:
    source: str
    base: QuotientRing
    commands: List[Command]
    names: Dict[str, str]


@dataclass
class SessionState:
    base: QuotientRing
    presentation: frac.FractionPresentation
    values: Dict[str, object] = field(default_factory=dict)


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that raises ParseError at the statement instead of exiting."""

    def __init__(self, span: SourceSpan, **kwargs):
        super().__init__(add_help=False, **kwargs)
        self.span = span

    def error(self, message: str):  # type: ignore[override]
        raise self.span.error(f"{self.prog}: {message}")


def _strip_comments(source: str) -> str:
    out = []
    for line in source.split("\n"):
        cut = line.find("#")
        out.append(line if cut < 0 else line[:cut] + " " * (len(line) - cut))
    return "\n".join(out)


def words(text: str, offset: int) -> List[Word]:
    """Blank-separated words outside brackets, with their source offsets."""
    out: List[Word] = []
    depth = 0
    start: Optional[int] = None
    for i, ch in enumerate(text):
        if ch.isspace() and depth == 0:
            if start is not None:
                out.append((text[start:i], offset + start))
                start = None
            continue
        if start is None:
            start = i
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
    if start is not None:
        out.append((text[start:], offset + start))
    return out


def parse_ring(text: str, span: SourceSpan) -> QuotientRing:
    """``Q[x,y]`` or ``F3[x] / (x^3 - x)``."""
    m = _RING.match(text)
    if not m:
        raise span.error("expected a ring like Q[x,y] or F3[x] / (relations)")
    try:
        field_ = field_from_name(m.group("field"))
    except UsageError as exc:
        raise span.error(getattr(exc, "reason", str(exc)), m.start("field")) from None
    names = [v.strip() for v in m.group("vars").split(",") if v.strip()]
    for v in names:
        if not _NAME.match(v) or v in KEYWORDS:
            raise span.error(f"bad variable name {v!r}", m.start("vars"))
    try:
        ring = PolynomialRing(field_, names)
    except UsageError as exc:
        raise span.error(str(exc), m.start("vars")) from None
    if m.group("rel") is None:
        return QuotientRing(ring)
    rel_span = SourceSpan(span.source, span.offset + m.start("rel"))
    relations = parse_polynomial_list(m.group("rel"), ring, rel_span)
    return QuotientRing(ring, Ideal(ring, relations))


class _SessionParser:
    def __init__(self, source: str):
        self.source = source
        self.names: Dict[str, str] = {}
        self.rings: Dict[str, QuotientRing] = {}
        self.commands: List[Command] = []
        self.base: Optional[QuotientRing] = None

    # -- helpers -------------------------------------------------------------------------

    def span(self, offset: int) -> SourceSpan:
        return SourceSpan(self.source, offset)

    @property
    def ring(self) -> PolynomialRing:
        assert self.base is not None
        return self.base.ring

    def declare(self, name: str, kind: str, offset: int) -> None:
        if not _NAME.match(name) or name in KEYWORDS:
            raise self.span(offset).error(f"bad name {name!r}")
        if name in self.names:
            raise self.span(offset).error(f"{name!r} is already declared as a {self.names[name]}", cls=UndefinedNameError)
        if self.base is not None and name in self.ring.variables:
            raise self.span(offset).error(f"{name!r} is a variable of {self.ring!r}", cls=UndefinedNameError)
        self.names[name] = kind

    def ref(self, word: Word, kind: str) -> str:
        name, offset = word
        if self.names.get(name) != kind:
            found = self.names.get(name)
            what = f"a {found}, not a {kind}" if found else "not declared"
            raise self.span(offset).error(f"{name!r} is {what}", cls=UndefinedNameError)
        return name

    def need(self, ws: Sequence[Word], count: int, usage: str, offset: int) -> None:
        if len(ws) != count:
            raise self.span(offset).error(f"usage: {usage}")

    def poly(self, word: Word, ring: Optional[PolynomialRing] = None) -> Callable[[SessionState], Polynomial]:
        text, offset = word
        target = ring or self.ring
        if ring is None and _NAME.match(text) and text not in target.variables:
            name = self.ref(word, "poly")
            return lambda st: st.values[name]  # type: ignore[return-value]
        p = parse_polynomial(text, target, self.span(offset))
        return lambda st: p

    def ideal(self, word: Word) -> Callable[[SessionState], Ideal]:
        text, offset = word
        if text.lstrip().startswith("("):
            gens = parse_polynomial_list(text, self.ring, self.span(offset))
            relations = list(self.base.ideal.generators) if self.base else []
            ideal = Ideal(self.ring, gens + relations)
            return lambda st: ideal
        name = self.ref(word, "ideal")
        return lambda st: st.values[name]  # type: ignore[return-value]

    def ring_map(self, ws: Sequence[Word], offset: int) -> Callable[[SessionState], RingMap]:
        """``<ring> map (images)`` from the header ring."""
        if len(ws) != 3 or ws[1][0] != "map":
            raise self.span(offset).error("expected <ring> map (images)")
        target = self.rings[self.ref(ws[0], "ring")]
        images = parse_polynomial_list(ws[2][0], target.ring, self.span(ws[2][1]))
        if len(images) != self.ring.nvars:
            raise self.span(ws[2][1]).error(f"map needs {self.ring.nvars} images, got {len(images)}")
        return lambda st: RingMap(st.base, target, images)

    def exponent(self, text: str, offset: int) -> frac.MultiExponent:
        entries: Dict[str, int] = {}
        body = text.strip()
        if body in ("", "1"):
            return frac.MultiExponent()
        lead = offset + text.index(body)
        for piece, off in split_top_level(body, "*"):
            name, _, power = piece.strip().partition("^")
            where = lead + off
            self.ref((name.strip(), where), "section")
            if power and not power.strip().isdigit():
                raise self.span(where).error(f"bad exponent {piece.strip()!r}")
            entries[name.strip()] = entries.get(name.strip(), 0) + (int(power) if power else 1)
        return frac.MultiExponent.of(entries)

    def element(self, word: Word) -> Callable[[SessionState], frac.FractionElement]:
        """``[n | a^2*b]``, a polynomial or a poly name."""
        text, offset = word
        if not text.lstrip().startswith("["):
            num = self.poly(word)
            return lambda st: st.presentation.element(num(st))
        inner, base = strip_brackets(text, self.span(offset), "[", "]")
        parts = split_top_level(inner, "|")
        if len(parts) != 2:
            raise self.span(offset).error("fraction must look like [numerator | exponent]")
        (num_text, num_off), (exp_text, exp_off) = parts
        num = self.poly((num_text, offset + base + num_off))
        exp = self.exponent(exp_text, offset + base + exp_off)
        return lambda st: st.presentation.element(num(st), exp)

    def matrix(self, word: Word) -> List[List[Polynomial]]:
        text, offset = word
        inner, base = strip_brackets(text, self.span(offset), "[", "]")
        rows = []
        for row, off in split_top_level(inner):
            body, start = strip_brackets(row, self.span(offset + base + off), "[", "]")
            where = offset + base + off + start
            rows.append([parse_polynomial(p, self.ring, self.span(where + o)) for p, o in split_top_level(body)])
        if not rows or len({len(r) for r in rows}) != 1:
            raise self.span(offset).error("matrix rows must have equal length")
        return rows

    # -- statements ----------------------------------------------------------------------

    def parse(self) -> SessionFile:
        cleaned = _strip_comments(self.source)
        pieces = [(t, o) for t, o in split_top_level(cleaned, ";") if t.strip()]
        if not pieces:
            raise ParseError("empty session", 1, 1)
        for index, (text, offset) in enumerate(pieces):
            lead = len(text) - len(text.lstrip())
            ws = words(text, offset)
            keyword = ws[0][0]
            if index == 0:
                if keyword != "ring" or len(ws) < 2 or (len(ws) > 2 and ws[2][0] == "="):
                    raise self.span(offset + lead).error("session must start with a ring header like 'ring Q[x,y]'")
                head = text[lead + len("ring"):]
                self.base = parse_ring(head, self.span(offset + lead + len("ring")))
                continue
            handler = self.handlers().get(keyword)
            if handler is None:
                raise self.span(ws[0][1]).error(f"unknown command {keyword!r}")
            action = handler(ws, text, offset)
            line, col = line_col(self.source, offset + lead)
            self.commands.append(Command(len(self.commands) + 1, keyword, text.strip(), line, col, action))
        assert self.base is not None
        return SessionFile(self.source, self.base, self.commands, dict(self.names))

    def handlers(self) -> Dict[str, Callable[[Sequence[Word], str, int], Action]]:
        table = {
            "ring": self._ring,
            "poly": self._poly,
            "ideal": self._ideal,
            "invert": self._invert,
            "algebra": self._algebra,
            "show": self._show,
            "gb": self._gb,
            "nf": self._nf,
            "member": self._member,
            "colength": self._colength,
            "frac": self._frac,
            "norm": self._norm,
            "hilb": self._hilb,
        }
        table.update({op: self._op for op in IDEAL_OPS})
        return table

    def _binding(self, ws: Sequence[Word], text: str, offset: int, kind: str) -> Tuple[str, str, int]:
        """``<kind> NAME = rest``: returns name, rest text and its offset."""
        if len(ws) < 4 or ws[2][0] != "=":
            raise self.span(ws[0][1]).error(f"usage: {kind} NAME = ...")
        name, name_off = ws[1]
        self.declare(name, kind, name_off)
        rest_off = ws[3][1]
        return name, self.source_slice(rest_off, offset + len(text)), rest_off

    def source_slice(self, start: int, end: int) -> str:
        return _strip_comments(self.source)[start:end]

    def _ring(self, ws, text, offset) -> Action:
        name, rest, rest_off = self._binding(ws, text, offset, "ring")
        target = parse_ring(rest, self.span(rest_off))
        self.rings[name] = target

        def run(st: SessionState, out: Section) -> None:
            st.values[name] = target
            out.text(f"{name} = {target!r}")

        return run

    def _poly(self, ws, text, offset) -> Action:
        name, rest, rest_off = self._binding(ws, text, offset, "poly")
        p = parse_polynomial(rest, self.ring, self.span(rest_off))

        def run(st: SessionState, out: Section) -> None:
            st.values[name] = p
            out.text(f"{name} = {p}")

        return run

    def _ideal(self, ws, text, offset) -> Action:
        if len(ws) < 4 or ws[2][0] != "=":
            raise self.span(ws[0][1]).error("usage: ideal NAME = (generators) | <op> ...")
        expr = self._ideal_expr(ws[3:], ws[3][1])
        name = ws[1][0]
        self.declare(name, "ideal", ws[1][1])

        def run(st: SessionState, out: Section) -> None:
            value = expr(st)
            st.values[name] = value
            out.text(f"{name} = {value}")

        return run

    def _ideal_expr(self, ws: Sequence[Word], offset: int) -> Callable[[SessionState], Ideal]:
        op = ws[0][0]
        if op not in IDEAL_OPS:
            self.need(ws, 1, "(generators) | NAME | <op> ...", offset)
            return self.ideal(ws[0])
        args = ws[1:]
        if op == "saturate":
            self.need(args, 2, "saturate IDEAL POLY", offset)
            a, f = self.ideal(args[0]), self.poly(args[1])
            return lambda st: saturate(a(st), f(st)).reduced()
        if op == "eliminate":
            if len(args) < 2:
                raise self.span(offset).error("usage: eliminate IDEAL VAR...")
            a = self.ideal(args[0])
            names = []
            for v, off in args[1:]:
                if v not in self.ring.variables:
                    raise self.span(off).error(f"unknown variable {v!r}")
                names.append(v)
            return lambda st: eliminate(a(st), names).reduced()
        self.need(args, 2, f"{op} IDEAL IDEAL", offset)
        a, b = self.ideal(args[0]), self.ideal(args[1])
        ops: Dict[str, Callable[[Ideal, Ideal], Ideal]] = {
            "sum": lambda i, j: i + j,
            "product": lambda i, j: i * j,
            "intersect": intersection,
            "quotient": quotient,
        }
        return lambda st: ops[op](a(st), b(st)).reduced()

    def _op(self, ws, text, offset) -> Action:
        expr = self._ideal_expr(ws, ws[0][1])

        def run(st: SessionState, out: Section) -> None:
            value = expr(st)
            out.text(f"{ws[0][0]} = {value}")
            out.kv(("op", ws[0][0]), ("result", str(value)))

        return run

    def _gb(self, ws, text, offset) -> Action:
        if len(ws) not in (2, 3):
            raise self.span(ws[0][1]).error("usage: gb IDEAL [grevlex|lex]")
        target = self.ideal(ws[1])
        label = ws[1][0] if not ws[1][0].startswith("(") else "-"
        order: Optional[MonomialOrder] = None
        if len(ws) == 3:
            try:
                order = MonomialOrder.from_name(ws[2][0])
            except UsageError:
                raise self.span(ws[2][1]).error(f"unknown monomial order {ws[2][0]!r}") from None

        def run(st: SessionState, out: Section) -> None:
            ideal = target(st)
            chosen = order or ENGINE.order
            cache = ENGINE.cache
            hits, misses = (cache.hits, cache.misses) if cache is not None else (0, 0)
            basis = ideal.groebner(chosen)
            if cache is None:
                state = "off"
            elif cache.hits > hits:
                state = "hit"
            elif cache.misses > misses:
                state = "miss"
            else:
                state = "memo"
            out.table("reduced Gröbner basis", ["#", "element"], [(k + 1, g.format(chosen)) for k, g in enumerate(basis)])
            out.kv(("gb", label), ("order", chosen.name), ("size", len(basis)), ("cache", state))

        return run

    def _nf(self, ws, text, offset) -> Action:
        self.need(ws, 3, "nf POLY IDEAL", ws[0][1])
        f, target = self.poly(ws[1]), self.ideal(ws[2])

        def run(st: SessionState, out: Section) -> None:
            p = f(st)
            r = target(st).normal_form(p)
            out.text(f"nf({p}) = {r}")
            out.kv(("nf", str(r)))

        return run

    def _member(self, ws, text, offset) -> Action:
        self.need(ws, 3, "member POLY IDEAL", ws[0][1])
        f, target = self.poly(ws[1]), self.ideal(ws[2])

        def run(st: SessionState, out: Section) -> None:
            found = target(st).contains(f(st))
            out.kv(("member", found))

        return run

    def _colength(self, ws, text, offset) -> Action:
        self.need(ws, 2, "colength IDEAL", ws[0][1])
        target = self.ideal(ws[1])

        def run(st: SessionState, out: Section) -> None:
            basis = colength(target(st))
            if basis is None:
                out.text("quotient is infinite-dimensional")
                out.kv(("colength", "infinite"))
                return
            out.text("staircase: " + (", ".join(basis.labels()) or "(empty)"))
            out.kv(("colength", basis.dimension))

        return run

    def _show(self, ws, text, offset) -> Action:
        self.need(ws, 2, "show NAME", ws[0][1])
        name, off = ws[1]
        if name not in self.names:
            raise self.span(off).error(f"{name!r} is not declared", cls=UndefinedNameError)

        def run(st: SessionState, out: Section) -> None:
            kind = self.names[name]
            if kind == "section":
                out.text(str(st.presentation.pair(name)))
            elif kind == "algebra":
                algebra = st.values[name]
                out.text(f"{name}: rank {algebra.rank} over {algebra.base!r}, basis {', '.join(algebra.labels)}")  # type: ignore[attr-defined]
            else:
                out.text(f"{name} = {st.values[name]}")

        return run

    # -- fractions -----------------------------------------------------------------------

    def _invert(self, ws, text, offset) -> Action:
        if len(ws) < 3:
            raise self.span(ws[0][1]).error("usage: invert POLY NAME [module (generators) [/ DENOMINATOR]]")
        section = self.poly(ws[1])
        name, name_off = ws[2]
        module_gens: Optional[List[Polynomial]] = None
        denominator: Optional[Callable[[SessionState], Polynomial]] = None
        rest = ws[3:]
        if rest:
            if rest[0][0] != "module" or len(rest) not in (2, 4) or (len(rest) == 4 and rest[2][0] != "/"):
                raise self.span(rest[0][1]).error("expected: module (generators) [/ DENOMINATOR]")
            module_gens = parse_polynomial_list(rest[1][0], self.ring, self.span(rest[1][1]))
            if len(rest) == 4:
                denominator = self.poly(rest[3])
        self.declare(name, "section", name_off)

        def run(st: SessionState, out: Section) -> None:
            module = None
            if module_gens is not None:
                den = denominator(st) if denominator else 1
                module = frac.InvertibleModule(st.base, module_gens, den)
            st.presentation = st.presentation.with_section(name, section(st), module)
            out.text(str(st.presentation.pair(name)))

        return run

    def _frac(self, ws, text, offset) -> Action:
        if len(ws) < 2:
            raise self.span(ws[0][1]).error("usage: frac eq|add|mul|factor|contract|reduce|power|kernel|base-change|dims ...")
        sub, sub_off = ws[1]
        args = ws[2:]
        if sub in ("eq", "add", "mul"):
            self.need(args, 2, f"frac {sub} ELEMENT ELEMENT", sub_off)
            u, v = self.element(args[0]), self.element(args[1])

            def run(st: SessionState, out: Section) -> None:
                a, b = u(st), v(st)
                if sub == "eq":
                    same = frac.fraction_eq(a, b)
                    out.text(f"{a} {'=' if same else '!='} {b}")
                    out.kv(("eq", same))
                    return
                value = frac.fraction_sum(a, b) if sub == "add" else frac.fraction_product(a, b)
                out.text(f"{a} {'+' if sub == 'add' else '*'} {b} = {value}")
                out.kv((sub, str(value)))

            return run
        if sub == "factor":
            make_map = self.ring_map(args, sub_off)

            def run(st: SessionState, out: Section) -> None:
                result = frac.universal_factorization(st.presentation, make_map(st))
                out.kv(("factors", result.factors), ("failing", ",".join(result.failing) or "none"))
                if result.factors:
                    rows = [(p.name, str(result.image(st.presentation.unit(p.name)))) for p in st.presentation.pairs]
                    rows += [
                        (f"1/{p.name}", str(result.image(st.presentation.inverse_of(p.name))))
                        for p in st.presentation.pairs
                        if p.module.is_free
                    ]
                    out.table("images in the target", ["element", "image"], rows)

            return run
        if sub == "contract":
            self.need(args, 1, "frac contract (ELEMENT, ...)", sub_off)
            inner, base = strip_brackets(args[0][0], self.span(args[0][1]))
            elements = [self.element((piece.strip(), args[0][1] + base + off + (len(piece) - len(piece.lstrip()))))
                        for piece, off in split_top_level(inner) if piece.strip()]

            def run(st: SessionState, out: Section) -> None:
                result = frac.extend_contract(st.presentation, [e(st) for e in elements])
                out.text(f"contraction = {result.ideal}")
                out.kv(("contraction", str(result.ideal)), ("iso", result.isomorphism), ("failing", ",".join(result.failing) or "none"))

            return run
        if sub == "reduce":
            for w in args:
                self.ref(w, "section")
            names = [w[0] for w in args]

            def run(st: SessionState, out: Section) -> None:
                pair = frac.finite_subset_reduce(st.presentation, names)
                out.text(str(pair))
                out.kv(("section", str(pair.section)), ("free", pair.module.is_free))

            return run
        if sub == "power":
            self.need(args, 1, "frac power EXPONENT", sub_off)
            exp = self.exponent(args[0][0], args[0][1])

            def run(st: SessionState, out: Section) -> None:
                module = frac.tensor_power(st.presentation, exp)
                out.text(f"L^{exp} = {module}")
                out.kv(("power", str(exp)), ("free", module.is_free))

            return run
        if sub == "kernel":
            self.need(args, 0, "frac kernel", sub_off)

            def run(st: SessionState, out: Section) -> None:
                torsion = st.presentation.torsion
                out.text(f"kernel of R -> R_U = {torsion.reduced()}")
                out.kv(("kernel", str(torsion.reduced())), ("zero_ring", st.presentation.is_zero_ring()))

            return run
        if sub == "base-change":
            make_map = self.ring_map(args, sub_off)

            def run(st: SessionState, out: Section) -> None:
                changed = frac.base_change(st.presentation, make_map(st))
                out.text(str(changed))
                out.kv(("base_change", str(changed.base)), ("zero_ring", changed.is_zero_ring()))

            return run
        if sub == "dims":
            self.need(args, 1, "frac dims IDEAL", sub_off)
            target = self.ideal(args[0])

            def run(st: SessionState, out: Section) -> None:
                ideal = target(st)
                direct = frac.quotient_dimension(st.presentation, ideal)
                localized = frac.localized_quotient_dimension(st.presentation, ideal)
                out.kv(("colength", direct), ("localized", localized), ("iso", direct == localized and direct is not None))

            return run
        raise self.span(sub_off).error(f"unknown frac command {sub!r}")

    # -- finite flat algebras and norms ------------------------------------------------

    def _algebra(self, ws, text, offset) -> Action:
        if len(ws) < 4 or ws[2][0] != "=":
            raise self.span(ws[0][1]).error("usage: algebra NAME = monic POLY in VAR | quotient IDEAL")
        name, name_off = ws[1]
        kind, kind_off = ws[3]
        if kind == "quotient":
            self.need(ws[4:], 1, "algebra NAME = quotient IDEAL", kind_off)
            target = self.ideal(ws[4])
            self.declare(name, "algebra", name_off)

            def run(st: SessionState, out: Section) -> None:
                algebra = flat.FiniteFlatAlgebra.from_quotient(target(st)).check()
                st.values[name] = algebra
                out.text(f"{name}: rank {algebra.rank} over {algebra.base!r}, basis {', '.join(algebra.labels)}")
                out.kv(("algebra", name), ("rank", algebra.rank))

            return run
        if kind != "monic" or len(ws) < 7 or ws[-2][0] != "in":
            raise self.span(kind_off).error("usage: algebra NAME = monic POLY in VAR | quotient IDEAL")
        var, var_off = ws[-1]
        if not _NAME.match(var) or var in self.ring.variables:
            raise self.span(var_off).error(f"{var!r} must be a new variable name")
        ambient = self.ring.with_variables(suffix=(var,))
        start = ws[4][1]
        m = parse_polynomial(self.source_slice(start, ws[-2][1]), ambient, self.span(start))
        self.declare(name, "algebra", name_off)

        def run(st: SessionState, out: Section) -> None:
            algebra = flat.FiniteFlatAlgebra.from_monic(st.base, m, var).check()
            st.values[name] = algebra
            out.text(f"{name}: rank {algebra.rank} over {algebra.base!r}, basis {', '.join(algebra.labels)}")
            out.kv(("algebra", name), ("rank", algebra.rank))

        return run

    def _algebra_element(self, word: Word) -> Callable[[flat.FiniteFlatAlgebra], Polynomial]:
        text, offset = word
        span = self.span(offset)
        return lambda algebra: parse_polynomial(text, algebra.ambient, span)

    def _norm(self, ws, text, offset) -> Action:
        if len(ws) < 2:
            raise self.span(ws[0][1]).error("usage: norm det|matrix|base-change|invert|check-free|rank|fitting ...")
        sub, sub_off = ws[1]
        args = ws[2:]
        if sub in ("det", "matrix"):
            self.need(args, 2, f"norm {sub} ALGEBRA POLY", sub_off)
            name = self.ref(args[0], "algebra")
            element = self._algebra_element(args[1])

            def run(st: SessionState, out: Section) -> None:
                algebra: flat.FiniteFlatAlgebra = st.values[name]  # type: ignore[assignment]
                s = flat.ModuleSection.of(algebra, element(algebra), args[1][0])
                if sub == "matrix":
                    matrix = flat.mult_operator(algebra, s)
                    out.table(f"multiplication by {args[1][0]}", list(algebra.labels), [[str(c) for c in row] for row in matrix])
                    return
                norm = flat.det_section(algebra, s)
                out.text(f"det({args[1][0]}) = {norm}")
                out.kv(("norm", str(norm)), ("unit", norm.is_unit()))

            return run
        if sub == "base-change":
            if len(args) != 5:
                raise self.span(sub_off).error("usage: norm base-change ALGEBRA POLY RING map (images)")
            name = self.ref(args[0], "algebra")
            element = self._algebra_element(args[1])
            make_map = self.ring_map(args[2:], sub_off)

            def run(st: SessionState, out: Section) -> None:
                algebra: flat.FiniteFlatAlgebra = st.values[name]  # type: ignore[assignment]
                norm = flat.base_change_det(algebra, element(algebra), make_map(st))
                out.text(f"det({args[1][0]}) over {norm.base!r} = {norm}")
                out.kv(("norm", str(norm)), ("unit", norm.is_unit()))

            return run
        if sub == "invert":
            if len(args) != 5:
                raise self.span(sub_off).error("usage: norm invert ALGEBRA (POLY, ...) RING map (images)")
            name = self.ref(args[0], "algebra")
            inner, base = strip_brackets(args[1][0], self.span(args[1][1]))
            elements = [self._algebra_element((p.strip(), args[1][1] + base + o)) for p, o in split_top_level(inner)]
            make_map = self.ring_map(args[2:], sub_off)

            def run(st: SessionState, out: Section) -> None:
                algebra: flat.FiniteFlatAlgebra = st.values[name]  # type: ignore[assignment]
                sections = [algebra.element(e(algebra)) for e in elements]
                v_norm, v_operator = flat.sigma_inverting_equiv(algebra, sections, make_map(st))
                out.kv(("verdict_norm", v_norm), ("verdict_operator", v_operator), ("agree", v_norm == v_operator))

            return run
        if sub == "check-free":
            if len(args) != 3 or args[1][0] != "rank" or not args[2][0].isdigit():
                raise self.span(sub_off).error("usage: norm check-free MATRIX rank N")
            matrix = self.matrix(args[0])
            n = int(args[2][0])

            def run(st: SessionState, out: Section) -> None:
                verdict = flat.check_locally_free(matrix, n, st.base)
                out.kv(("locally_free", verdict), ("rank", n))

            return run
        if sub == "rank":
            self.need(args, 1, "norm rank MATRIX", sub_off)
            matrix = self.matrix(args[0])

            def run(st: SessionState, out: Section) -> None:
                out.kv(("rank", flat.locally_free_rank(matrix, st.base)))

            return run
        if sub == "fitting":
            if len(args) != 2 or not args[1][0].isdigit():
                raise self.span(sub_off).error("usage: norm fitting MATRIX J")
            matrix = self.matrix(args[0])
            j = int(args[1][0])

            def run(st: SessionState, out: Section) -> None:
                ideal = flat.fitting_ideal(matrix, j, st.base).reduced()
                out.text(f"Fitt_{j} = {ideal}")
                out.kv(("fitting", j), ("ideal", str(ideal)))

            return run
        raise self.span(sub_off).error(f"unknown norm command {sub!r}")

    # -- Hilbert schemes -----------------------------------------------------------------

    def _hilb(self, ws, text, offset) -> Action:
        span = self.span(ws[0][1])
        parser = _ArgumentParser(span, prog="hilb")
        parser.add_argument("action", choices=["universal", "norm", "enumerate", "verify", "ring"])
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--q", type=int)
        parser.add_argument("--invert", action="append", default=[])
        parser.add_argument("--plane", action="store_true")
        parser.add_argument("--theorem", choices=HILB_THEOREMS)
        args = parser.parse_args([w for w, _ in ws[1:]])
        if args.n < 1:
            raise span.error("--n must be at least 1")
        field_ = self.ring.field
        if args.q is not None:
            try:
                field_ = PrimeField(args.q)
            except UsageError as exc:
                raise span.error(str(exc)) from None
        q = args.q if args.q is not None else (field_.characteristic if isinstance(field_, PrimeField) else None)
        if args.action in ("enumerate", "verify") and q is None:
            raise span.error(f"hilb {args.action} needs --q over {field_.name}")
        if args.action == "verify" and args.theorem is None:
            raise span.error("hilb verify needs --theorem")
        if args.plane and args.action != "enumerate":
            raise span.error("--plane only applies to hilb enumerate")
        line = PolynomialRing(field_, hilb.PLANE_VARIABLES if args.plane else ("x",))
        offsets = [ws[k + 1][1] for k in range(len(ws) - 1) if ws[k][0] == "--invert"]
        sections = [parse_polynomial(s, line, self.span(off)) for s, off in zip(args.invert, offsets)]
        action = args.action
        n = args.n

        def run(st: SessionState, out: Section) -> None:
            if action == "universal":
                family = hilb.univ_family(n, field_)
                out.text(f"m = {family.monic}")
                out.text("basis: " + ", ".join(family.algebra.labels))
                out.kv(("n", n), ("monic", str(family.monic)), ("locally_free", family.verify()))
            elif action == "norm":
                family = hilb.univ_family(n, field_)
                rows = []
                for s in sections:
                    norm = hilb.norm_of_section(family, s)
                    rows.append((str(s), str(norm)))
                    out.kv(("n", n), ("section", str(s)), ("norm", str(norm)))
                out.table("norm sections", ["section", "norm"], rows)
            elif action == "ring":
                H = hilb.localized_hilb(n, sections, field_)
                out.text(f"coordinate ring: {H.coordinate_ring()!r}")
                out.kv(("n", n), ("sections", len(sections)))
            elif action == "enumerate":
                points = hilb.enumerate_points(q, n, sections, plane=args.plane)
                rows = [(p.cell, ",".join(str(c) for c in p.coordinates), str(p.ideal)) for p in points[:ENUMERATION_ROWS]]
                out.table("points", ["cell", "coordinates", "ideal"], rows)
                if len(points) > ENUMERATION_ROWS:
                    out.text(f"... {len(points) - ENUMERATION_ROWS} more")
                out.kv(("n", n), ("q", q), ("plane", args.plane), ("count", len(points)))
            else:
                _run_verify(args.theorem, n, q, sections, out)

        return run


def _run_verify(theorem: str, n: int, q: int, sections: Sequence[Polynomial], out: Section) -> None:
    if theorem == "5.5":
        result = hilb.verify_double_count(n, sections, q)
        out.kv(
            ("theorem", theorem), ("n", n), ("q", q), ("closed", result.counts["closed"]),
            ("count_ideal", result.counts["count_ideal"]), ("count_norm", result.counts["count_norm"]),
            ("match", result.match),
        )
        for line in result.details:
            out.text(line)
        result.require()
    elif theorem == "5.6":
        result = hilb.verify_section_intersection(n, sections, q)
        out.kv(
            ("theorem", theorem), ("n", n), ("q", q), ("count", result.counts["count"]),
            ("count_intersection", result.counts["count_intersection"]), ("count_empty", result.counts["count_empty"]),
            ("match", result.match),
        )
        for line in result.details:
            out.text(line)
        result.require()
    else:
        stalk = hilb.stalk_hilb(n, q)
        out.text(f"remark: {stalk.remark}")
        out.kv(
            ("theorem", theorem), ("n", n), ("q", q), ("sections_used", stalk.sections_used),
            ("count_ideal", stalk.count_ideal), ("count_norm", stalk.count_norm), ("match", stalk.match),
        )
        if not stalk.match:
            raise VerificationFailure(f"stalk counts {stalk.count_ideal} and {stalk.count_norm} should both be 1")


def parse_session(text: str) -> SessionFile:
    """Parse a whole session; the first syntax or name error is raised with its position."""
    session = _SessionParser(text).parse()
    logger.debug("parsed session: %d commands over %r", len(session.commands), session.base)
    return session


def run_session(
    session: SessionFile,
    cache_dir: Optional[str] = None,
    *,
    use_cache: bool = True,
    bounds: Optional[EngineBounds] = None,
    order: Optional[MonomialOrder] = None,
    seed: Optional[int] = None,
) -> Report:
    """Run the commands in order. A failing command raises CommandError carrying the partial report."""
    report = Report(title=f"hilbloc session over {session.base!r}")
    cache = GroebnerCache(cache_dir, persist=True) if (use_cache and cache_dir) else None
    bounds = bounds or EngineBounds()
    chosen = order or ENGINE.order
    state = SessionState(session.base, frac.FractionPresentation(session.base))
    with configured(bounds=bounds, cache=cache, order=chosen):
        # the context manager keeps a previous cache when given None
        ENGINE.cache = cache
        try:
            for command in session.commands:
                section = report.section(command.index, command.label)
                logger.info("command %d: %s", command.index, command.label)
                try:
                    command.action(state, section)
                except HilblocError as exc:
                    report.fail(command.index, command.keyword, str(exc), exc.exit_code)
                    raise CommandError(command.index, command.keyword, exc, report) from exc
        finally:
            report.provenance = _provenance(cache, bounds, chosen, seed)
    return report


def _provenance(cache: Optional[GroebnerCache], bounds: EngineBounds, order: MonomialOrder, seed: Optional[int]) -> Dict[str, object]:
    info: Dict[str, object] = {"version": VERSION, "cache": cache is not None}
    if cache is not None:
        info["cache_hits"] = cache.hits
        info["cache_misses"] = cache.misses
    info["max_pairs"] = bounds.max_pairs
    info["max_degree"] = bounds.max_degree
    info["order"] = order.name
    if seed is not None:
        info["seed"] = seed
    return info
