"""Static checks for generated JQL, codifying known failure modes:
hallucinated project names, English status names where Spanish ones are
expected, and unknown usernames.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from jiragpt.jql.ast import And, BooleanExpr, Clause, JqlQuery, Not, Or, Text, Value

# English -> Spanish status names from the phase-1 status-mapping block.
ENGLISH_STATUS_NAMES = {
    "open": "Abierto",
    "in progress": "En Progreso",
    "resolved": "Resuelto",
    "approved": "Aprobada",
    "delivered": "Entregado",
    "reopened": "Reabierto",
    "closed": "Cerrado",
}

_USER_FIELDS = frozenset({"assignee", "reporter", "creator"})


class LintCode(Enum):
    UNKNOWN_PROJECT = "UNKNOWN_PROJECT"
    ENGLISH_STATUS = "ENGLISH_STATUS"
    UNKNOWN_USER = "UNKNOWN_USER"


@dataclass(frozen=True)
class LintFinding:
    code: LintCode
    field: str
    value: str
    message: str


@dataclass(frozen=True)
class LintContext:
    known_projects: frozenset[str] = frozenset()
    known_users: frozenset[str] = frozenset()
    expected_status_language: str = "es"

    def __post_init__(self):
        object.__setattr__(self, "known_projects", frozenset(self.known_projects))
        object.__setattr__(self, "known_users", frozenset(self.known_users))


def lint(q: JqlQuery, ctx: LintContext) -> list[LintFinding]:
    """Return findings for every suspicious clause value; empty means clean."""
    findings: list[LintFinding] = []
    projects = {p.casefold() for p in ctx.known_projects}
    users = {u.casefold() for u in ctx.known_users}
    for clause in _clauses(q.root):
        for value in _text_values(clause):
            folded = value.casefold()
            if clause.field == "project" and projects and folded not in projects:
                findings.append(
                    LintFinding(
                        LintCode.UNKNOWN_PROJECT,
                        clause.field,
                        value,
                        f"project {value!r} is not one of the known projects",
                    )
                )
            elif clause.field == "status" and ctx.expected_status_language == "es":
                spanish = ENGLISH_STATUS_NAMES.get(folded)
                if spanish is not None:
                    findings.append(
                        LintFinding(
                            LintCode.ENGLISH_STATUS,
                            clause.field,
                            value,
                            f"status {value!r} is English; expected {spanish!r}",
                        )
                    )
            elif clause.field in _USER_FIELDS and users and folded not in users:
                findings.append(
                    LintFinding(
                        LintCode.UNKNOWN_USER,
                        clause.field,
                        value,
                        f"user {value!r} is not one of the known users",
                    )
                )
    return findings


def _clauses(expr: BooleanExpr) -> Iterator[Clause]:
    if isinstance(expr, Clause):
        yield expr
    elif isinstance(expr, (And, Or)):
        for child in expr.children:
            yield from _clauses(child)
    elif isinstance(expr, Not):
        yield from _clauses(expr.child)


def _text_values(clause: Clause) -> Iterator[str]:
    operands: tuple[Value, ...]
    if clause.operand is None:
        return
    if isinstance(clause.operand, tuple):
        operands = clause.operand
    else:
        operands = (clause.operand,)
    for operand in operands:
        if isinstance(operand, Text):
            yield operand.value
