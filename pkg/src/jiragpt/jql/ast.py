"""Typed AST for the supported JQL subset.

The node types are normalized: And/Or always hold at least two children and
never directly nest the same combinator (the parser flattens), so structural
equality doubles as semantic equality for round-trip tests.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

# The 21 retained field names, canonical casing.
FIELD_NAMES: tuple[str, ...] = (
    "status",
    "project",
    "assignee",
    "reporter",
    "creator",
    "priority",
    "issuetype",
    "created",
    "updated",
    "resolutiondate",
    "duedate",
    "resolution",
    "labels",
    "components",
    "fixVersions",
    "summary",
    "description",
    "key",
    "id",
    "timeestimate",
    "timespent",
)

# Per-field value domain, driving operator compatibility checks.
FIELD_DOMAINS: dict[str, str] = {
    "status": "enum",
    "project": "enum",
    "priority": "enum",
    "issuetype": "enum",
    "resolution": "enum",
    "assignee": "user",
    "reporter": "user",
    "creator": "user",
    "created": "date",
    "updated": "date",
    "resolutiondate": "date",
    "duedate": "date",
    "id": "number",
    "timeestimate": "number",
    "timespent": "number",
    "labels": "text",
    "components": "text",
    "fixVersions": "text",
    "summary": "text",
    "description": "text",
    "key": "text",
}

# Fields holding a list of strings rather than a scalar.
LIST_FIELDS = frozenset({"labels", "components", "fixVersions"})

_LOWER_TO_CANONICAL = {name.lower(): name for name in FIELD_NAMES}

DATE_FUNCTION_NAMES: tuple[str, ...] = (
    "startOfMonth",
    "endOfMonth",
    "startOfWeek",
    "endOfWeek",
    "startOfDay",
    "endOfDay",
    "now",
)

_LOWER_TO_FUNCTION = {name.lower(): name for name in DATE_FUNCTION_NAMES}


def canonical_field(name: str) -> Optional[str]:
    """Map a case-insensitive field name to its canonical spelling, or None."""
    return _LOWER_TO_CANONICAL.get(name.lower())


def canonical_function(name: str) -> Optional[str]:
    return _LOWER_TO_FUNCTION.get(name.lower())


class Op(Enum):
    EQ = "="
    NEQ = "!="
    GT = ">"
    GTE = ">="
    LT = "<"
    LTE = "<="
    CONTAINS = "~"
    NOT_CONTAINS = "!~"
    IN = "in"
    NOT_IN = "not in"
    IS_EMPTY = "is empty"
    IS_NOT_EMPTY = "is not empty"


# Operators taking a value list / no operand.
LIST_OPS = frozenset({Op.IN, Op.NOT_IN})
NO_OPERAND_OPS = frozenset({Op.IS_EMPTY, Op.IS_NOT_EMPTY})

# Operator compatibility per value domain.
OPS_BY_DOMAIN: dict[str, frozenset[Op]] = {
    "enum": frozenset({Op.EQ, Op.NEQ, Op.IN, Op.NOT_IN, Op.IS_EMPTY, Op.IS_NOT_EMPTY}),
    "user": frozenset({Op.EQ, Op.NEQ, Op.IN, Op.NOT_IN, Op.IS_EMPTY, Op.IS_NOT_EMPTY}),
    "date": frozenset(
        {Op.EQ, Op.NEQ, Op.GT, Op.GTE, Op.LT, Op.LTE, Op.IS_EMPTY, Op.IS_NOT_EMPTY}
    ),
    "number": frozenset(
        {Op.EQ, Op.NEQ, Op.GT, Op.GTE, Op.LT, Op.LTE, Op.IN, Op.NOT_IN, Op.IS_EMPTY, Op.IS_NOT_EMPTY}
    ),
    "text": frozenset(
        {Op.EQ, Op.NEQ, Op.CONTAINS, Op.NOT_CONTAINS, Op.IN, Op.NOT_IN, Op.IS_EMPTY, Op.IS_NOT_EMPTY}
    ),
}


@dataclass(frozen=True)
class Text:
    """A textual value. Quote style is presentational and ignored by equality."""

    value: str
    quote_style: str = field(default="bare", compare=False)  # bare | single | double


@dataclass(frozen=True)
class Number:
    value: float

    def __post_init__(self):
        # Keep integral numbers as int so printing is stable (5, not 5.0).
        if isinstance(self.value, float) and self.value.is_integer():
            object.__setattr__(self, "value", int(self.value))


@dataclass(frozen=True)
class DateFunction:
    """One of the supported date functions, with an optional signed offset.

    offset is (amount, unit) with unit in d/w/M, e.g. (-1, "M") for the
    previous month.
    """

    name: str
    offset: Optional[tuple[int, str]] = None


@dataclass(frozen=True)
class DateLiteral:
    """A yyyy-MM-dd date, optionally with HH:mm time."""

    date: _dt.date
    time: Optional[_dt.time] = None


Value = Union[Text, Number, DateFunction, DateLiteral]


@dataclass(frozen=True)
class Clause:
    field: str
    op: Op
    operand: Union[Value, tuple[Value, ...], None] = None


@dataclass(frozen=True)
class And:
    children: tuple["BooleanExpr", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["BooleanExpr", ...]


@dataclass(frozen=True)
class Not:
    child: "BooleanExpr"


BooleanExpr = Union[And, Or, Not, Clause]


@dataclass(frozen=True)
class JqlQuery:
    root: BooleanExpr
    order_by: tuple[tuple[str, str], ...] = ()  # (field, "ASC"|"DESC")
