"""Independent brute-force query oracle and random generators.

The oracle re-implements the query semantics from scratch, one issue at a
time, using ISO-string date arithmetic instead of the evaluator's datetime
range logic. It is deliberately kept free of imports from the evaluator so
the two implementations can only agree by computing the same thing.
"""

from __future__ import annotations

import calendar
import datetime as dt
import random
import string

from jiragpt.jql.ast import (
    And,
    Clause,
    DateFunction,
    DateLiteral,
    FIELD_DOMAINS,
    JqlQuery,
    LIST_FIELDS,
    Not,
    Number,
    Op,
    Or,
    Text,
)
from jiragpt.issues import Issue

# --- oracle ----------------------------------------------------------------


def oracle_keys(q: JqlQuery, store, clock: dt.datetime) -> set[str]:
    """Key set of issues matching q, computed issue by issue."""
    return {issue.key for issue in store if _matches(q.root, issue, clock)}


def _matches(node, issue, clock) -> bool:
    if isinstance(node, And):
        for child in node.children:
            if not _matches(child, issue, clock):
                return False
        return True
    if isinstance(node, Or):
        for child in node.children:
            if _matches(child, issue, clock):
                return True
        return False
    if isinstance(node, Not):
        return not _matches(node.child, issue, clock)
    return _clause_matches(node, issue, clock)


def _is_absent(value) -> bool:
    return value is None or value == () or value == []


def _clause_matches(clause: Clause, issue, clock) -> bool:
    value = issue.get(clause.field)
    if clause.op == Op.IS_EMPTY:
        return _is_absent(value)
    if clause.op == Op.IS_NOT_EMPTY:
        return not _is_absent(value)
    if _is_absent(value):
        return False
    domain = FIELD_DOMAINS[clause.field]
    if domain == "date":
        return _date_matches(clause, value, clock)
    if domain == "number":
        return _number_matches(clause, float(value))
    if clause.field in LIST_FIELDS:
        items = [str(v).casefold() for v in value]
    else:
        items = [str(value).casefold()]
    return _text_matches(clause, items)


def _text_matches(clause: Clause, items: list[str]) -> bool:
    if clause.op in (Op.IN, Op.NOT_IN):
        wanted = [_as_text(v).casefold() for v in clause.operand]
        hit = any(item in wanted for item in items)
        return hit if clause.op == Op.IN else not hit
    operand = _as_text(clause.operand).casefold()
    if clause.op == Op.EQ:
        return operand in items
    if clause.op == Op.NEQ:
        return operand not in items
    if clause.op == Op.CONTAINS:
        return any(operand in item for item in items)
    if clause.op == Op.NOT_CONTAINS:
        return all(operand not in item for item in items)
    raise AssertionError(f"unsupported text op {clause.op}")


def _as_text(value) -> str:
    if isinstance(value, Text):
        return value.value
    if isinstance(value, Number):
        return str(value.value)
    raise AssertionError(f"not a text operand: {value!r}")


def _number_matches(clause: Clause, value: float) -> bool:
    if clause.op in (Op.IN, Op.NOT_IN):
        wanted = [float(_as_text(v)) for v in clause.operand]
        hit = value in wanted
        return hit if clause.op == Op.IN else not hit
    operand = float(_as_text(clause.operand))
    return _cmp(clause.op, value, operand)


def _cmp(op: Op, lhs, rhs) -> bool:
    return {
        Op.EQ: lhs == rhs,
        Op.NEQ: lhs != rhs,
        Op.GT: lhs > rhs,
        Op.GTE: lhs >= rhs,
        Op.LT: lhs < rhs,
        Op.LTE: lhs <= rhs,
    }[op]


# Date handling: everything goes through ISO strings. A value's instant
# string is "YYYY-MM-DDTHH:MM:SS"; day strings are "YYYY-MM-DD".


def _instant_str(value) -> str:
    if isinstance(value, dt.datetime):
        return value.strftime("%Y-%m-%dT%H:%M:%S")
    return value.strftime("%Y-%m-%d") + "T00:00:00"


def _shift_day(day: str, amount: int, unit: str) -> str:
    year, month, dom = int(day[:4]), int(day[5:7]), int(day[8:10])
    if unit == "d":
        return (dt.date(year, month, dom) + dt.timedelta(days=amount)).isoformat()
    if unit == "w":
        return (dt.date(year, month, dom) + dt.timedelta(days=7 * amount)).isoformat()
    total = year * 12 + (month - 1) + amount
    year2, month2 = divmod(total, 12)
    month2 += 1
    dom2 = min(dom, calendar.monthrange(year2, month2)[1])
    return f"{year2:04d}-{month2:02d}-{dom2:02d}"


def _week_monday(day: str) -> str:
    d = dt.date.fromisoformat(day)
    return (d - dt.timedelta(days=d.weekday())).isoformat()


def _function_window(fn: DateFunction, clock: dt.datetime) -> tuple[str, str, str]:
    """(anchor_instant, period_start_day, period_end_day) as ISO strings."""
    base_day = _instant_str(clock)[:10]
    base_time = _instant_str(clock)[11:]
    if fn.offset is not None:
        amount, unit = fn.offset
        base_day = _shift_day(base_day, amount, unit)
    year, month = int(base_day[:4]), int(base_day[5:7])
    month_start = f"{base_day[:8]}01"
    month_end = f"{base_day[:8]}{calendar.monthrange(year, month)[1]:02d}"
    week_start = _week_monday(base_day)
    week_end = _shift_day(week_start, 6, "d")

    name = fn.name
    if name == "now":
        return f"{base_day}T{base_time}", base_day, base_day
    if name == "startOfDay":
        return f"{base_day}T00:00:00", base_day, base_day
    if name == "endOfDay":
        return f"{base_day}T23:59:59.999999", base_day, base_day
    if name == "startOfWeek":
        return f"{week_start}T00:00:00", week_start, week_end
    if name == "endOfWeek":
        return f"{week_end}T23:59:59.999999", week_start, week_end
    if name == "startOfMonth":
        return f"{month_start}T00:00:00", month_start, month_end
    if name == "endOfMonth":
        return f"{month_end}T23:59:59.999999", month_start, month_end
    raise AssertionError(f"unknown function {name}")


def _date_matches(clause: Clause, value, clock) -> bool:
    instant = _instant_str(value)
    operand = clause.operand
    if isinstance(operand, DateLiteral):
        if operand.time is None:
            return _cmp(clause.op, instant[:10], operand.date.isoformat())
        rhs = f"{operand.date.isoformat()}T{operand.time.strftime('%H:%M')}:00"
        return _cmp(clause.op, instant[:17] + "00", rhs)
    if isinstance(operand, DateFunction):
        anchor, start_day, end_day = _function_window(operand, clock)
        if clause.op in (Op.EQ, Op.NEQ):
            inside = start_day <= instant[:10] <= end_day
            return inside if clause.op == Op.EQ else not inside
        return _cmp(clause.op, instant, anchor)
    raise AssertionError(f"bad date operand {operand!r}")


# --- random generators -----------------------------------------------------

STATUSES = ["Abierto", "En Progreso", "Resuelto", "Validado", "Entregado", "Cerrado", "Reabierto"]
PRIORITIES = ["Highest", "High", "Medium", "Low", "Lowest"]
TYPES = ["Tarea", "Error", "Historia"]
USERS = ["joel.garcia", "maria.lopez", "ana.perez", "luis.ortega"]
LABELS = ["backend", "frontend", "docs", "infra"]
WORDS = ["consulta", "panel", "informe", "api", "tareas", "revisión", "más datos"]


def random_issue(rng: random.Random, project: str, number: int) -> Issue:
    created = dt.datetime(2023, rng.randint(6, 9), rng.randint(1, 28), rng.randint(0, 23), rng.randint(0, 59))
    updated = created + dt.timedelta(days=rng.randint(0, 20), hours=rng.randint(0, 12))
    status = rng.choice(STATUSES)
    resolved = None
    if status in ("Resuelto", "Validado", "Entregado", "Cerrado") and rng.random() < 0.8:
        resolved = updated
    return Issue(
        key=f"{project}-{number}",
        id=str(20000 + number),
        summary=" ".join(rng.sample(WORDS, k=3)),
        description=rng.choice([None, "detalle " + rng.choice(WORDS)]),
        status=status,
        assignee=rng.choice([None] + USERS),
        reporter=rng.choice(USERS),
        creator=rng.choice(USERS),
        priority=rng.choice([None] + PRIORITIES),
        issuetype=rng.choice(TYPES),
        project=project,
        created=created,
        updated=updated,
        resolutiondate=resolved,
        duedate=rng.choice([None, created.date() + dt.timedelta(days=rng.randint(1, 60))]),
        resolution=rng.choice([None, "Hecho"]),
        labels=tuple(rng.sample(LABELS, k=rng.randint(0, 2))),
        components=tuple(rng.sample(["asistente", "núcleo"], k=rng.randint(0, 1))),
        fix_versions=tuple(rng.sample(["v0.1", "v0.2"], k=rng.randint(0, 1))),
        timeestimate=rng.choice([None, rng.randint(600, 72000)]),
        timespent=rng.choice([None, rng.randint(600, 72000)]),
    )


def random_store(rng: random.Random, size: int, project: str = "GPT4") -> list[Issue]:
    return [random_issue(rng, project, n + 1) for n in range(size)]


_BARE_WORDS = ["GPT4", "Abierto", "Hecho", "backend", "v0.2", "joel.garcia", "tarea_x"]
_QUOTED_WORDS = ["En Progreso", "más datos", "Nota interna", "v0.2 final"]


def _random_text(rng: random.Random) -> Text:
    if rng.random() < 0.5:
        return Text(rng.choice(_BARE_WORDS), quote_style="bare")
    return Text(rng.choice(_QUOTED_WORDS), quote_style="double")


def _random_value_for(rng: random.Random, domain: str):
    if domain == "number":
        return Number(rng.randint(0, 90000))
    if domain == "date":
        if rng.random() < 0.5:
            name = rng.choice(
                ["startOfMonth", "endOfMonth", "startOfWeek", "endOfWeek", "startOfDay", "endOfDay", "now"]
            )
            offset = None
            if rng.random() < 0.4:
                offset = (rng.randint(-3, 3), rng.choice(["d", "w", "M"]))
            return DateFunction(name, offset)
        date = dt.date(2023, rng.randint(6, 10), rng.randint(1, 28))
        time = dt.time(rng.randint(0, 23), rng.randint(0, 59)) if rng.random() < 0.25 else None
        return DateLiteral(date, time)
    return _random_text(rng)


_OPS_FOR_GEN = {
    "enum": [Op.EQ, Op.NEQ, Op.IN, Op.NOT_IN, Op.IS_EMPTY, Op.IS_NOT_EMPTY],
    "user": [Op.EQ, Op.NEQ, Op.IN, Op.NOT_IN, Op.IS_EMPTY, Op.IS_NOT_EMPTY],
    "date": [Op.EQ, Op.NEQ, Op.GT, Op.GTE, Op.LT, Op.LTE, Op.IS_EMPTY, Op.IS_NOT_EMPTY],
    "number": [Op.EQ, Op.NEQ, Op.GT, Op.GTE, Op.LT, Op.LTE, Op.IN, Op.NOT_IN, Op.IS_EMPTY, Op.IS_NOT_EMPTY],
    "text": [Op.EQ, Op.NEQ, Op.CONTAINS, Op.NOT_CONTAINS, Op.IN, Op.NOT_IN, Op.IS_EMPTY, Op.IS_NOT_EMPTY],
}


def random_clause(rng: random.Random) -> Clause:
    field = rng.choice(list(FIELD_DOMAINS))
    domain = FIELD_DOMAINS[field]
    op = rng.choice(_OPS_FOR_GEN[domain])
    if op in (Op.IS_EMPTY, Op.IS_NOT_EMPTY):
        return Clause(field, op, None)
    if op in (Op.IN, Op.NOT_IN):
        values = tuple(_random_value_for(rng, "text" if domain == "date" else domain) for _ in range(rng.randint(1, 3)))
        if domain == "date":
            # IN is not defined for dates; switch to a scalar comparison
            return Clause(field, Op.EQ, _random_value_for(rng, "date"))
        return Clause(field, op, values)
    return Clause(field, op, _random_value_for(rng, domain))


def random_expr(rng: random.Random, depth: int = 0):
    roll = rng.random()
    if depth >= 3 or roll < 0.45:
        return random_clause(rng)
    if roll < 0.6:
        return Not(random_expr(rng, depth + 1))
    combinator = And if roll < 0.8 else Or
    children = []
    while len(children) < rng.randint(2, 3):
        child = random_expr(rng, depth + 1)
        if isinstance(child, combinator):
            children.extend(child.children)
        else:
            children.append(child)
    return combinator(tuple(children))


def random_query(rng: random.Random) -> JqlQuery:
    order_by = ()
    if rng.random() < 0.3:
        count = rng.randint(1, 2)
        fields = rng.sample(list(FIELD_DOMAINS), k=count)
        order_by = tuple((f, rng.choice(["ASC", "DESC"])) for f in fields)
    return JqlQuery(root=random_expr(rng), order_by=order_by)
