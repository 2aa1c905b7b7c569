"""Evaluate a parsed query against an in-memory issue store.

Issues are duck-typed: anything exposing ``get(field_name)`` (returning the
field value or None when absent) and a ``key`` attribute works.

Date semantics:
- a day-resolution operand (bare yyyy-MM-dd) compares at day granularity;
- EQ against a period-anchor date function (startOf*/endOf*) matches the
  whole period containing the anchor, so ``created = startOfMonth()`` means
  "created this month";
- EQ against now() matches the anchor's calendar day;
- ordering comparators against a date function compare full instants.
"""

from __future__ import annotations

import datetime as _dt
import functools
import re
from typing import Optional, Sequence

from jiragpt.jql.ast import (
    And,
    BooleanExpr,
    Clause,
    DateFunction,
    DateLiteral,
    FIELD_DOMAINS,
    JqlQuery,
    LIST_FIELDS,
    Not,
    Number,
    Op,
    OPS_BY_DOMAIN,
    Or,
    Text,
)
from jiragpt.jql.errors import TypeMismatch

_KEY_RE = re.compile(r"([A-Za-z][A-Za-z0-9]*)-(\d+)\Z")

_PERIOD_BY_FUNCTION = {
    "startOfMonth": "month",
    "endOfMonth": "month",
    "startOfWeek": "week",
    "endOfWeek": "week",
    "startOfDay": "day",
    "endOfDay": "day",
    "now": "day",
}


def evaluate(q: JqlQuery, store: Sequence, clock: _dt.datetime) -> list:
    """Return issues matching ``q.root``, ordered by ``q.order_by``.

    Default order is created descending; ties break on issue key so output
    is deterministic. ``clock`` anchors the date functions.
    """
    matched = [issue for issue in store if _eval_expr(q.root, issue, clock)]
    matched.sort(key=_key_sort_key)
    order = q.order_by or (("created", "DESC"),)
    for field, direction in reversed(order):
        matched.sort(key=functools.partial(_order_key, field, direction))
    return matched


def _key_sort_key(issue):
    m = _KEY_RE.match(issue.key or "")
    if m:
        return (m.group(1), int(m.group(2)))
    return (issue.key, 0)


class _Desc:
    """Inverts comparisons so stable ascending sort yields descending order."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __lt__(self, other):
        return other.value < self.value

    def __eq__(self, other):
        return other.value == self.value


def _order_key(field: str, direction: str, issue):
    value = issue.get(field)
    absent = value is None or (isinstance(value, (list, tuple)) and not value)
    if absent:
        return (1, 0)
    value = _sortable(field, value)
    return (0, _Desc(value) if direction == "DESC" else value)


def _sortable(field: str, value):
    domain = FIELD_DOMAINS[field]
    if domain == "date":
        return _as_datetime(value)
    if domain == "number":
        return float(value)
    if isinstance(value, (list, tuple)):
        return tuple(str(v).casefold() for v in value)
    return str(value).casefold()


def _eval_expr(expr: BooleanExpr, issue, clock: _dt.datetime) -> bool:
    if isinstance(expr, Clause):
        return _eval_clause(expr, issue, clock)
    if isinstance(expr, And):
        return all(_eval_expr(child, issue, clock) for child in expr.children)
    if isinstance(expr, Or):
        return any(_eval_expr(child, issue, clock) for child in expr.children)
    if isinstance(expr, Not):
        return not _eval_expr(expr.child, issue, clock)
    raise TypeError(f"not a BooleanExpr: {expr!r}")


def _eval_clause(clause: Clause, issue, clock: _dt.datetime) -> bool:
    domain = FIELD_DOMAINS[clause.field]
    if clause.op not in OPS_BY_DOMAIN[domain]:
        raise TypeMismatch(clause.field, clause.op.value, domain)

    value = issue.get(clause.field)
    empty = value is None or (isinstance(value, (list, tuple)) and not value)
    if clause.op is Op.IS_EMPTY:
        return empty
    if clause.op is Op.IS_NOT_EMPTY:
        return not empty
    if empty:
        return False

    if domain == "date":
        return _eval_date(clause, _as_datetime(value), clock)
    if domain == "number":
        return _eval_number(clause, float(value))
    if clause.field in LIST_FIELDS:
        return _eval_list(clause, value)
    return _eval_string(clause, str(value))


# date ----------------------------------------------------------------------


def _as_datetime(value) -> _dt.datetime:
    if isinstance(value, _dt.datetime):
        return value
    if isinstance(value, _dt.date):
        return _dt.datetime.combine(value, _dt.time.min)
    raise TypeMismatch("date", "?", f"non-date value {value!r}")


def _eval_date(clause: Clause, value: _dt.datetime, clock: _dt.datetime) -> bool:
    operand = clause.operand
    if isinstance(operand, DateLiteral):
        if operand.time is None:
            # day granularity
            lhs, rhs = value.date(), operand.date
        else:
            lhs = value.replace(second=0, microsecond=0)
            rhs = _dt.datetime.combine(operand.date, operand.time)
        return _compare(clause, lhs, rhs)
    if isinstance(operand, DateFunction):
        anchor = resolve_date_function(operand, clock)
        if clause.op is Op.EQ or clause.op is Op.NEQ:
            start, end = _period_bounds(operand, anchor)
            inside = start <= value <= end
            return inside if clause.op is Op.EQ else not inside
        return _compare(clause, value, anchor)
    raise TypeMismatch(clause.field, clause.op.value, "date")


def resolve_date_function(fn: DateFunction, clock: _dt.datetime) -> _dt.datetime:
    """Resolve a date function to its anchor instant relative to ``clock``."""
    base = _apply_offset(clock, fn.offset)
    day = base.date()
    if fn.name == "now":
        return base
    if fn.name == "startOfDay":
        return _dt.datetime.combine(day, _dt.time.min)
    if fn.name == "endOfDay":
        return _dt.datetime.combine(day, _dt.time.max)
    if fn.name == "startOfWeek":
        monday = day - _dt.timedelta(days=day.weekday())
        return _dt.datetime.combine(monday, _dt.time.min)
    if fn.name == "endOfWeek":
        sunday = day + _dt.timedelta(days=6 - day.weekday())
        return _dt.datetime.combine(sunday, _dt.time.max)
    if fn.name == "startOfMonth":
        return _dt.datetime.combine(day.replace(day=1), _dt.time.min)
    if fn.name == "endOfMonth":
        return _dt.datetime.combine(_last_day_of_month(day), _dt.time.max)
    raise ValueError(f"unsupported date function {fn.name!r}")


def _apply_offset(clock: _dt.datetime, offset: Optional[tuple[int, str]]) -> _dt.datetime:
    if offset is None:
        return clock
    amount, unit = offset
    if unit == "d":
        return clock + _dt.timedelta(days=amount)
    if unit == "w":
        return clock + _dt.timedelta(weeks=amount)
    if unit == "M":
        return _add_months(clock, amount)
    raise ValueError(f"unsupported offset unit {unit!r}")


def _add_months(value: _dt.datetime, months: int) -> _dt.datetime:
    month_index = value.year * 12 + (value.month - 1) + months
    year, month = divmod(month_index, 12)
    month += 1
    last = _last_day_of_month(_dt.date(year, month, 1)).day
    return value.replace(year=year, month=month, day=min(value.day, last))


def _last_day_of_month(day: _dt.date) -> _dt.date:
    if day.month == 12:
        return _dt.date(day.year, 12, 31)
    return _dt.date(day.year, day.month + 1, 1) - _dt.timedelta(days=1)


def _period_bounds(fn: DateFunction, anchor: _dt.datetime) -> tuple[_dt.datetime, _dt.datetime]:
    period = _PERIOD_BY_FUNCTION[fn.name]
    day = anchor.date()
    if period == "day":
        start_day = end_day = day
    elif period == "week":
        start_day = day - _dt.timedelta(days=day.weekday())
        end_day = start_day + _dt.timedelta(days=6)
    else:
        start_day = day.replace(day=1)
        end_day = _last_day_of_month(day)
    return (
        _dt.datetime.combine(start_day, _dt.time.min),
        _dt.datetime.combine(end_day, _dt.time.max),
    )


# number / text -------------------------------------------------------------


def _eval_number(clause: Clause, value: float) -> bool:
    if clause.op in (Op.IN, Op.NOT_IN):
        members = [_operand_number(clause, v) for v in clause.operand]
        found = value in members
        return found if clause.op is Op.IN else not found
    return _compare(clause, value, _operand_number(clause, clause.operand))


def _operand_number(clause: Clause, operand) -> float:
    if isinstance(operand, Number):
        return float(operand.value)
    if isinstance(operand, Text):
        try:
            return float(operand.value)
        except ValueError:
            pass
    raise TypeMismatch(clause.field, clause.op.value, "number")


def _operand_text(clause: Clause, operand) -> str:
    if isinstance(operand, Text):
        return operand.value
    if isinstance(operand, Number):
        return str(operand.value)
    raise TypeMismatch(clause.field, clause.op.value, FIELD_DOMAINS[clause.field])


def _eval_string(clause: Clause, value: str) -> bool:
    folded = value.casefold()
    if clause.op in (Op.IN, Op.NOT_IN):
        members = {_operand_text(clause, v).casefold() for v in clause.operand}
        found = folded in members
        return found if clause.op is Op.IN else not found
    operand = _operand_text(clause, clause.operand).casefold()
    if clause.op is Op.EQ:
        return folded == operand
    if clause.op is Op.NEQ:
        return folded != operand
    if clause.op is Op.CONTAINS:
        return operand in folded
    if clause.op is Op.NOT_CONTAINS:
        return operand not in folded
    raise TypeMismatch(clause.field, clause.op.value, FIELD_DOMAINS[clause.field])


def _eval_list(clause: Clause, values) -> bool:
    folded = [str(v).casefold() for v in values]
    if clause.op in (Op.IN, Op.NOT_IN):
        members = {_operand_text(clause, v).casefold() for v in clause.operand}
        found = any(v in members for v in folded)
        return found if clause.op is Op.IN else not found
    operand = _operand_text(clause, clause.operand).casefold()
    if clause.op is Op.EQ:
        return operand in folded
    if clause.op is Op.NEQ:
        return operand not in folded
    if clause.op is Op.CONTAINS:
        return any(operand in v for v in folded)
    if clause.op is Op.NOT_CONTAINS:
        return not any(operand in v for v in folded)
    raise TypeMismatch(clause.field, clause.op.value, "text")


def _compare(clause: Clause, lhs, rhs) -> bool:
    if clause.op is Op.EQ:
        return lhs == rhs
    if clause.op is Op.NEQ:
        return lhs != rhs
    if clause.op is Op.GT:
        return lhs > rhs
    if clause.op is Op.GTE:
        return lhs >= rhs
    if clause.op is Op.LT:
        return lhs < rhs
    if clause.op is Op.LTE:
        return lhs <= rhs
    raise TypeMismatch(clause.field, clause.op.value, FIELD_DOMAINS.get(clause.field, "?"))
