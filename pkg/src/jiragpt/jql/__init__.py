"""JQL subset: AST, parser, printer, evaluator, and lint checks."""

from jiragpt.jql.ast import (
    And,
    Clause,
    DateFunction,
    DateLiteral,
    FIELD_DOMAINS,
    FIELD_NAMES,
    Not,
    Number,
    Op,
    Or,
    JqlQuery,
    Text,
    canonical_field,
)
from jiragpt.jql.errors import JqlError, ParseError, TypeMismatch, UnknownField, UnknownFunction
from jiragpt.jql.evaluator import evaluate
from jiragpt.jql.lint import LintCode, LintContext, LintFinding, lint
from jiragpt.jql.parser import parse_jql
from jiragpt.jql.printer import print_jql

__all__ = [
    "And",
    "Clause",
    "DateFunction",
    "DateLiteral",
    "FIELD_DOMAINS",
    "FIELD_NAMES",
    "JqlError",
    "JqlQuery",
    "LintCode",
    "LintContext",
    "LintFinding",
    "Not",
    "Number",
    "Op",
    "Or",
    "ParseError",
    "Text",
    "TypeMismatch",
    "UnknownField",
    "UnknownFunction",
    "canonical_field",
    "evaluate",
    "lint",
    "parse_jql",
    "print_jql",
]
