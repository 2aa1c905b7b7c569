"""Recursive-descent parser for the JQL subset.

Keywords and field names are case-insensitive, values keep their case.
Operator precedence: NOT > AND > OR; parentheses override. The resulting
AST is normalized (nested same-combinator trees are flattened, singleton
And/Or collapse to their child).
"""

from __future__ import annotations

import datetime as _dt
import re
from dataclasses import dataclass
from typing import Optional

from jiragpt.jql.ast import (
    And,
    BooleanExpr,
    Clause,
    DateFunction,
    DateLiteral,
    JqlQuery,
    Not,
    Number,
    Op,
    Or,
    Text,
    Value,
    canonical_field,
    canonical_function,
)
from jiragpt.jql.errors import ParseError, UnknownField, UnknownFunction

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>'[^']*'|"[^"]*")
  | (?P<op>!=|!~|>=|<=|=|>|<|~)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<word>[^\s(),'"=<>!~]+)
    """,
    re.VERBOSE,
)

_NUMBER_RE = re.compile(r"[+-]?\d+(\.\d+)?\Z")
_DATE_RE = re.compile(r"(\d{4})-(\d{2})-(\d{2})( (\d{2}):(\d{2}))?\Z")
_OFFSET_RE = re.compile(r"([+-]?\d+)([dwM])\Z")

_KEYWORDS = {"and", "or", "not", "in", "is", "empty", "order", "by", "asc", "desc"}

_OP_MAP = {
    "=": Op.EQ,
    "!=": Op.NEQ,
    ">": Op.GT,
    ">=": Op.GTE,
    "<": Op.LT,
    "<=": Op.LTE,
    "~": Op.CONTAINS,
    "!~": Op.NOT_CONTAINS,
}


@dataclass(frozen=True)
class _Token:
    kind: str  # string | op | lparen | rparen | comma | word | eof
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        tokens.append(_Token(kind, m.group(), m.start()))
    tokens.append(_Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "word" and tok.text.lower() == word

    def expect_keyword(self, word: str) -> _Token:
        if not self.at_keyword(word):
            tok = self.peek()
            raise ParseError(
                f"expected {word.upper()}, got {tok.text!r}", tok.offset, frozenset({word.upper()})
            )
        return self.advance()

    # grammar ---------------------------------------------------------------

    def parse_query(self) -> JqlQuery:
        root = self.parse_or()
        order_by: tuple[tuple[str, str], ...] = ()
        if self.at_keyword("order"):
            self.advance()
            self.expect_keyword("by")
            order_by = self.parse_order_items()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(
                f"unexpected trailing input {tok.text!r}",
                tok.offset,
                frozenset({"AND", "OR", "ORDER BY", "end of input"}),
            )
        return JqlQuery(root=root, order_by=order_by)

    def parse_order_items(self) -> tuple[tuple[str, str], ...]:
        items = [self.parse_order_item()]
        while self.peek().kind == "comma":
            self.advance()
            items.append(self.parse_order_item())
        return tuple(items)

    def parse_order_item(self) -> tuple[str, str]:
        tok = self.peek()
        if tok.kind != "word":
            raise ParseError("expected field name", tok.offset, frozenset({"field name"}))
        field = canonical_field(tok.text)
        if field is None:
            raise UnknownField(tok.text, tok.offset)
        self.advance()
        direction = "ASC"
        if self.at_keyword("asc"):
            self.advance()
        elif self.at_keyword("desc"):
            self.advance()
            direction = "DESC"
        return (field, direction)

    def parse_or(self) -> BooleanExpr:
        parts = [self.parse_and()]
        while self.at_keyword("or"):
            self.advance()
            parts.append(self.parse_and())
        return _combine(Or, parts)

    def parse_and(self) -> BooleanExpr:
        parts = [self.parse_not()]
        while self.at_keyword("and"):
            self.advance()
            parts.append(self.parse_not())
        return _combine(And, parts)

    def parse_not(self) -> BooleanExpr:
        if self.at_keyword("not"):
            # "not" directly before "in"/"empty" never reaches here: NOT as a
            # combinator is only legal at expression start, where a clause
            # cannot begin with those keywords anyway.
            self.advance()
            return Not(self.parse_not())
        return self.parse_primary()

    def parse_primary(self) -> BooleanExpr:
        tok = self.peek()
        if tok.kind == "lparen":
            self.advance()
            inner = self.parse_or()
            closing = self.peek()
            if closing.kind != "rparen":
                raise ParseError("expected ')'", closing.offset, frozenset({")"}))
            self.advance()
            return inner
        return self.parse_clause()

    def parse_clause(self) -> Clause:
        tok = self.peek()
        if tok.kind != "word":
            raise ParseError(
                f"expected field name, got {tok.text!r}", tok.offset, frozenset({"field name", "("})
            )
        if tok.text.lower() in _KEYWORDS:
            raise ParseError(
                f"expected field name, got keyword {tok.text!r}", tok.offset, frozenset({"field name"})
            )
        field = canonical_field(tok.text)
        if field is None:
            raise UnknownField(tok.text, tok.offset)
        self.advance()

        tok = self.peek()
        if tok.kind == "op":
            self.advance()
            return Clause(field, _OP_MAP[tok.text], self.parse_value())
        if self.at_keyword("in"):
            self.advance()
            return Clause(field, Op.IN, self.parse_value_list())
        if self.at_keyword("not"):
            self.advance()
            self.expect_keyword("in")
            return Clause(field, Op.NOT_IN, self.parse_value_list())
        if self.at_keyword("is"):
            self.advance()
            negated = False
            if self.at_keyword("not"):
                self.advance()
                negated = True
            self.expect_keyword("empty")
            return Clause(field, Op.IS_NOT_EMPTY if negated else Op.IS_EMPTY, None)
        raise ParseError(
            f"expected operator after field {field!r}, got {tok.text!r}",
            tok.offset,
            frozenset({"=", "!=", ">", ">=", "<", "<=", "~", "!~", "IN", "NOT IN", "IS [NOT] EMPTY"}),
        )

    def parse_value_list(self) -> tuple[Value, ...]:
        tok = self.peek()
        if tok.kind != "lparen":
            raise ParseError("expected '(' after IN", tok.offset, frozenset({"("}))
        self.advance()
        values = [self.parse_value()]
        while self.peek().kind == "comma":
            self.advance()
            values.append(self.parse_value())
        closing = self.peek()
        if closing.kind != "rparen":
            raise ParseError("expected ')' or ','", closing.offset, frozenset({")", ","}))
        self.advance()
        return tuple(values)

    def parse_value(self) -> Value:
        tok = self.peek()
        if tok.kind == "string":
            self.advance()
            style = "single" if tok.text[0] == "'" else "double"
            inner = tok.text[1:-1]
            date = _parse_date(inner)
            if date is not None:
                return date
            return Text(inner, quote_style=style)
        if tok.kind == "word":
            if tok.text.lower() in _KEYWORDS:
                raise ParseError(
                    f"expected value, got keyword {tok.text!r}", tok.offset, frozenset({"value"})
                )
            self.advance()
            if self.peek().kind == "lparen":
                return self.parse_function_call(tok)
            if _NUMBER_RE.match(tok.text):
                return Number(float(tok.text))
            date = _parse_date(tok.text)
            if date is not None:
                return date
            return Text(tok.text, quote_style="bare")
        raise ParseError(
            f"expected value, got {tok.text!r}", tok.offset, frozenset({"value"})
        )

    def parse_function_call(self, name_tok: _Token) -> DateFunction:
        name = canonical_function(name_tok.text)
        if name is None:
            raise UnknownFunction(name_tok.text, name_tok.offset)
        self.advance()  # '('
        offset: Optional[tuple[int, str]] = None
        tok = self.peek()
        if tok.kind in ("word", "string"):
            raw = tok.text[1:-1] if tok.kind == "string" else tok.text
            m = _OFFSET_RE.match(raw)
            if m is None:
                raise ParseError(
                    f"expected offset like -1M, got {raw!r}", tok.offset, frozenset({"offset"})
                )
            offset = (int(m.group(1)), m.group(2))
            self.advance()
        closing = self.peek()
        if closing.kind != "rparen":
            raise ParseError("expected ')'", closing.offset, frozenset({")"}))
        self.advance()
        return DateFunction(name, offset)


def _combine(combinator, parts: list[BooleanExpr]) -> BooleanExpr:
    if len(parts) == 1:
        return parts[0]
    flat: list[BooleanExpr] = []
    for part in parts:
        if isinstance(part, combinator):
            flat.extend(part.children)
        else:
            flat.append(part)
    return combinator(tuple(flat))


def _parse_date(raw: str) -> Optional[DateLiteral]:
    m = _DATE_RE.match(raw)
    if m is None:
        return None
    try:
        date = _dt.date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    except ValueError:
        return None
    time = None
    if m.group(4):
        try:
            time = _dt.time(int(m.group(5)), int(m.group(6)))
        except ValueError:
            return None
    return DateLiteral(date, time)


def parse_jql(text: str) -> JqlQuery:
    """Parse JQL text into a normalized :class:`JqlQuery`.

    Raises :class:`ParseError` (or its subclasses :class:`UnknownField` /
    :class:`UnknownFunction`) on malformed input.
    """
    return _Parser(text).parse_query()
