"""Text syntax for polynomials: ``x^2*y - 3/4*z + 1``.

Prime-field literals may be written ``p:k`` (prime p, value k). Errors carry a
line/column position relative to the enclosing source text.
"""
from __future__ import annotations

import re
from typing import List, NamedTuple, Optional, Tuple

from ..core.errors import ParseError, UsageError
from ..core.polynomial import Polynomial, PolynomialRing

_TOKEN = re.compile(
    r"\s*(?:(?P<prime>\d+:\d+)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()−]))"
)


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def line_col(source: str, offset: int) -> Tuple[int, int]:
    """1-based (line, column) of ``offset`` in ``source``."""
    line = source.count("\n", 0, offset) + 1
    start = source.rfind("\n", 0, offset) + 1
    return line, offset - start + 1


class SourceSpan(NamedTuple):
    source: str
    offset: int

    def error(self, message: str, relative: int = 0, cls=ParseError) -> ParseError:
        line, col = line_col(self.source, self.offset + relative)
        return cls(message, line, col)


def tokenize(text: str, span: SourceSpan) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise span.error(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolynomialRing, span: SourceSpan):
        self.ring = ring
        self.span = span
        self.text = text
        self.tokens = tokenize(text, span)
        self.i = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.span.error("unexpected end of expression", len(self.text))
        self.i += 1
        return tok

    def is_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "op" and tok.text.replace("−", "-") in ops

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise self.span.error("empty polynomial")
        value = self.expr()
        tok = self.peek()
        if tok is not None:
            raise self.span.error(f"unexpected {tok.text!r}", tok.offset)
        return value

    def expr(self) -> Polynomial:
        value = self.term()
        while self.is_op("+", "-"):
            op = self.take().text.replace("−", "-")
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.unary()
        while self.is_op("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or not rhs:
                    raise self.span.error("can only divide by a nonzero constant", op.offset)
                value = value.scale(self.ring.field.inv(rhs.constant_value()))
        return value

    def unary(self) -> Polynomial:
        if self.is_op("-"):
            self.take()
            return -self.unary()
        if self.is_op("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.is_op("^"):
            self.take()
            tok = self.peek()
            if tok is None or tok.kind != "num":
                where = tok.offset if tok is not None else len(self.text)
                raise self.span.error("exponent must be a non-negative integer", where)
            self.take()
            return base ** int(tok.text)
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        if tok.kind == "num":
            return self.ring.constant(int(tok.text))
        if tok.kind == "prime":
            try:
                return self.ring.constant(self.ring.field.parse(tok.text))
            except UsageError as exc:
                raise self.span.error(str(exc), tok.offset) from None
        if tok.kind == "name":
            if tok.text not in self.ring.variables:
                raise self.span.error(f"unknown variable {tok.text!r} in ring {self.ring!r}", tok.offset)
            return self.ring.var(tok.text)
        if tok.text == "(":
            inner = self.expr()
            close = self.peek()
            if close is None or close.text != ")":
                raise self.span.error("missing ')'", close.offset if close else len(self.text))
            self.take()
            return inner
        raise self.span.error(f"unexpected {tok.text!r}", tok.offset)


def parse_polynomial(text: str, ring: PolynomialRing, span: Optional[SourceSpan] = None) -> Polynomial:
    return _Parser(text, ring, span or SourceSpan(text, 0)).parse()


def split_top_level(text: str, sep: str = ",") -> List[Tuple[str, int]]:
    """Split on ``sep`` outside brackets; returns (piece, offset) pairs."""
    pieces: List[Tuple[str, int]] = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch == sep and depth == 0:
            pieces.append((text[start:i], start))
            start = i + 1
    pieces.append((text[start:], start))
    return pieces


def strip_brackets(text: str, span: SourceSpan, open_: str = "(", close: str = ")") -> Tuple[str, int]:
    """Inner text of ``( ... )`` and its offset; error if not bracketed."""
    lead = len(text) - len(text.lstrip())
    body = text.strip()
    if not body.startswith(open_) or not body.endswith(close):
        raise span.error(f"expected {open_}...{close}", lead)
    return body[1:-1], lead + 1


def parse_polynomial_list(text: str, ring: PolynomialRing, span: Optional[SourceSpan] = None) -> List[Polynomial]:
    """``(p1, p2, ...)``; ``()`` is the empty list."""
    span = span or SourceSpan(text, 0)
    inner, base = strip_brackets(text, span)
    if not inner.strip():
        return []
    return [
        parse_polynomial(piece, ring, SourceSpan(span.source, span.offset + base + off))
        for piece, off in split_top_level(inner)
    ]
