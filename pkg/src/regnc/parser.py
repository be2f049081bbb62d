"""Text syntax for regular NC formulas (``.rnc`` files).

::

    formula := literal | const | '(' '|' formula* ')' | '{' '&' formula* '}'
    literal := IDENT '>=' NUM | IDENT '<=' NUM
    const   := NUM '>=' NUM | NUM '<=' NUM | 'T' | 'F'

``#`` starts a comment running to the end of the line.  NUM is a decimal
(``0.7``, ``.7``, ``1``) or a fraction ``p/q``; its value must lie in [0, 1].
``a<=b`` between two numbers is read as the constant ``b>=a``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .core import Conj, Const, Disj, Formula, Lit, OccRef, RegncError, Sign, to_text


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(RegncError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} at {span.start}..{span.end}")
        self.span = span


class RangeError(ParseError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+/\d+|\d+(?:\.\d*)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<cmp>>=|<=)
  | (?P<punct>[(){}|&])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    start: int
    end: int


def tokenize(text: str) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), m.start(), m.end()))
        pos = m.end()
    return toks


def _number(tok: _Tok) -> Fraction:
    try:
        value = Fraction(tok.text)
    except ZeroDivisionError:
        raise ParseError("zero denominator", SourceSpan(tok.start, tok.end)) from None
    if not 0 <= value <= 1:
        raise RangeError(f"truth value {tok.text} outside [0, 1]", SourceSpan(tok.start, tok.end))
    return value


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.spans: Dict[OccRef, SourceSpan] = {}

    def _eof_span(self) -> SourceSpan:
        n = len(self.text)
        return SourceSpan(n, n)

    def peek(self, offset: int = 0):
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def take(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._eof_span())
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.take()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {tok.text!r}", SourceSpan(tok.start, tok.end))
        return tok

    def atom(self, path: OccRef) -> Formula:
        tok = self.take()
        if tok.kind == "ident":
            nxt = self.peek()
            if nxt is None or nxt.kind != "cmp":
                if tok.text == "T":
                    self.spans[path] = SourceSpan(tok.start, tok.end)
                    return Const(Fraction(1), Fraction(0))
                if tok.text == "F":
                    self.spans[path] = SourceSpan(tok.start, tok.end)
                    return Const(Fraction(0), Fraction(1))
                raise ParseError(f"expected '>=' or '<=' after {tok.text!r}",
                                 SourceSpan(tok.start, tok.end))
            cmp = self.take()
            num = self.expect("num")
            self.spans[path] = SourceSpan(tok.start, num.end)
            sign = Sign.GEQ if cmp.text == ">=" else Sign.LEQ
            return Lit(sign, tok.text, _number(num))
        if tok.kind == "num":
            lhs = _number(tok)
            cmp = self.expect("cmp")
            num = self.expect("num")
            rhs = _number(num)
            self.spans[path] = SourceSpan(tok.start, num.end)
            return Const(lhs, rhs) if cmp.text == ">=" else Const(rhs, lhs)
        raise ParseError(f"unexpected token {tok.text!r}", SourceSpan(tok.start, tok.end))

    def formula(self) -> Formula:
        # explicit stack: nesting depth is unbounded
        frames: list = []  # [class, closing delimiter, start offset, path, children]
        while True:
            tok = self.peek()
            if tok is None:
                raise ParseError("unexpected end of input", self._eof_span())
            path: OccRef = frames[-1][3] + (len(frames[-1][4]),) if frames else ()
            if tok.kind == "punct" and tok.text in "({":
                self.take()
                if tok.text == "(":
                    self.expect("punct", "|")
                    frames.append([Disj, ")", tok.start, path, []])
                else:
                    self.expect("punct", "&")
                    frames.append([Conj, "}", tok.start, path, []])
                continue
            if tok.kind == "punct":
                if not frames or tok.text != frames[-1][1]:
                    raise ParseError(f"unexpected {tok.text!r}", SourceSpan(tok.start, tok.end))
                self.take()
                cls, _, start, fpath, kids = frames.pop()
                self.spans[fpath] = SourceSpan(start, tok.end)
                node = cls(tuple(kids))
            else:
                node = self.atom(path)
            if not frames:
                return node
            frames[-1][4].append(node)


def parse_spanned(text: str) -> Tuple[Formula, Dict[OccRef, SourceSpan]]:
    """Parse one formula; also return the source span of every occurrence."""
    p = _Parser(text)
    if not p.toks:
        raise ParseError("empty input", SourceSpan(0, 0))
    phi = p.formula()
    extra = p.peek()
    if extra is not None:
        raise ParseError(f"trailing input {extra.text!r}", SourceSpan(extra.start, extra.end))
    return phi, p.spans


def parse(text: str) -> Formula:
    return parse_spanned(text)[0]


def print_formula(phi: Formula) -> str:
    return to_text(phi)
