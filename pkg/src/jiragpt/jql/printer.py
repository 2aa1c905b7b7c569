"""Canonical JQL rendering.

Values print bare when they lex as a single word, double-quoted otherwise
(single-quoted if the text itself contains a double quote). parse_jql of the
output reproduces the AST.
"""

from __future__ import annotations

import re

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
)

_BARE_RE = re.compile(r"[^\s(),'\"=<>!~]+\Z")
_NUMBER_RE = re.compile(r"[+-]?\d+(\.\d+)?\Z")
_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}\Z")
_KEYWORDS = {"and", "or", "not", "in", "is", "empty", "order", "by", "asc", "desc"}


def print_jql(q: JqlQuery) -> str:
    parts = [_print_expr(q.root, parent=None)]
    if q.order_by:
        rendered = ", ".join(f"{field} {direction}" for field, direction in q.order_by)
        parts.append(f"ORDER BY {rendered}")
    return " ".join(parts)


def _print_expr(expr: BooleanExpr, parent) -> str:
    if isinstance(expr, Clause):
        return _print_clause(expr)
    if isinstance(expr, Not):
        inner = _print_expr(expr.child, parent=Not)
        if isinstance(expr.child, (And, Or)):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(expr, And):
        rendered = []
        for child in expr.children:
            text = _print_expr(child, parent=And)
            if isinstance(child, Or):
                text = f"({text})"
            rendered.append(text)
        return " AND ".join(rendered)
    if isinstance(expr, Or):
        return " OR ".join(_print_expr(child, parent=Or) for child in expr.children)
    raise TypeError(f"not a BooleanExpr: {expr!r}")


def _print_clause(clause: Clause) -> str:
    if clause.op in (Op.IS_EMPTY, Op.IS_NOT_EMPTY):
        return f"{clause.field} {clause.op.value}"
    if clause.op in (Op.IN, Op.NOT_IN):
        values = ", ".join(_print_value(v) for v in clause.operand)
        return f"{clause.field} {clause.op.value} ({values})"
    return f"{clause.field} {clause.op.value} {_print_value(clause.operand)}"


def _print_value(value: Value) -> str:
    if isinstance(value, Number):
        return str(value.value)
    if isinstance(value, DateLiteral):
        if value.time is None:
            return value.date.isoformat()
        return f'"{value.date.isoformat()} {value.time.strftime("%H:%M")}"'
    if isinstance(value, DateFunction):
        if value.offset is None:
            return f"{value.name}()"
        amount, unit = value.offset
        return f"{value.name}({amount}{unit})"
    if isinstance(value, Text):
        return _print_text(value.value)
    raise TypeError(f"not a Value: {value!r}")


def _print_text(text: str) -> str:
    if (
        _BARE_RE.match(text)
        and text.lower() not in _KEYWORDS
        and not _NUMBER_RE.match(text)
        and not _DATE_RE.match(text)
    ):
        return text
    if '"' in text:
        return f"'{text}'"
    return f'"{text}"'
