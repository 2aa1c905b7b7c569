"""Fixture files for the mock Jira server.

The bundled fixture is one project (GPT4) with 2 users and 20 issues:
14 Abierto and exactly one in each of the six other Spanish statuses.
All invariants are checked at load time; violations are reported together.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from jiragpt.issues import Issue, RESOLVED_STATUSES
from jiragpt.jql import LintContext
from jiragpt.jira_client import InMemoryJira

STATUS_NAMES = (
    "Abierto",
    "En Progreso",
    "Resuelto",
    "Validado",
    "Entregado",
    "Cerrado",
    "Reabierto",
)

_KEY_RE = re.compile(r"([A-Z][A-Z0-9]*)-([1-9]\d*)\Z")


class FixtureInvalid(ValueError):
    """Fixture violates its schema; lists every violated invariant."""

    def __init__(self, violations: list[str]):
        super().__init__("invalid fixture:\n" + "\n".join(f"- {v}" for v in violations))
        self.violations = violations


@dataclass(frozen=True)
class Fixture:
    project_key: str
    project_name: str
    users: tuple[str, ...]
    clock: _dt.datetime
    issues: tuple[Issue, ...]

    def lint_context(self) -> LintContext:
        return LintContext(
            known_projects=frozenset({self.project_key}),
            known_users=frozenset(self.users),
        )

    def issue_source(self) -> InMemoryJira:
        return InMemoryJira(list(self.issues), self.clock, lint_ctx=self.lint_context())


def _issue_from_flat(flat: dict) -> Issue:
    return Issue(
        key=flat["key"],
        id=str(flat["id"]),
        summary=flat["summary"],
        description=flat.get("description") or None,
        status=flat["status"],
        assignee=flat.get("assignee") or None,
        reporter=flat["reporter"],
        creator=flat["creator"],
        priority=flat.get("priority") or None,
        issuetype=flat["issuetype"],
        project=flat["project"],
        created=_dt.datetime.fromisoformat(flat["created"]),
        updated=_dt.datetime.fromisoformat(flat["updated"]),
        resolutiondate=(
            _dt.datetime.fromisoformat(flat["resolutiondate"]) if flat.get("resolutiondate") else None
        ),
        duedate=_dt.date.fromisoformat(flat["duedate"]) if flat.get("duedate") else None,
        resolution=flat.get("resolution") or None,
        labels=tuple(flat.get("labels") or ()),
        components=tuple(flat.get("components") or ()),
        fix_versions=tuple(flat.get("fixVersions") or ()),
        timeestimate=flat.get("timeestimate"),
        timespent=flat.get("timespent"),
    )


def _validate(fixture: Fixture) -> list[str]:
    violations: list[str] = []
    if len(fixture.issues) != 20:
        violations.append(f"expected 20 issues, found {len(fixture.issues)}")
    counts = Counter(i.status for i in fixture.issues)
    if counts.get("Abierto", 0) != 14:
        violations.append(f"expected 14 Abierto issues, found {counts.get('Abierto', 0)}")
    for status in STATUS_NAMES[1:]:
        if counts.get(status, 0) != 1:
            violations.append(f"expected 1 {status} issue, found {counts.get(status, 0)}")
    unknown = set(counts) - set(STATUS_NAMES)
    if unknown:
        violations.append(f"unknown statuses: {sorted(unknown)}")

    keys = [i.key for i in fixture.issues]
    duplicates = [k for k, n in Counter(keys).items() if n > 1]
    if duplicates:
        violations.append(f"duplicate keys: {sorted(duplicates)}")
    for issue in fixture.issues:
        m = _KEY_RE.match(issue.key)
        if m is None:
            violations.append(f"{issue.key}: key does not match <PROJECT>-<n>")
        elif m.group(1) != issue.project:
            violations.append(f"{issue.key}: project {issue.project!r} does not match key prefix")
        if issue.created > issue.updated:
            violations.append(f"{issue.key}: created is after updated")
        if issue.resolutiondate is not None and issue.status not in RESOLVED_STATUSES:
            violations.append(f"{issue.key}: resolutiondate set but status is {issue.status!r}")
        for user in (issue.assignee, issue.reporter, issue.creator):
            if user is not None and user not in fixture.users:
                violations.append(f"{issue.key}: unknown user {user!r}")

    assignees = {i.assignee for i in fixture.issues if i.assignee}
    if len(fixture.users) != 2:
        violations.append(f"expected 2 users, found {len(fixture.users)}")
    if len(assignees) != 2:
        violations.append(f"expected 2 distinct assignees, found {len(assignees)}")
    return violations


def _from_document(doc: dict) -> Fixture:
    try:
        fixture = Fixture(
            project_key=doc["project"]["key"],
            project_name=doc["project"].get("name", doc["project"]["key"]),
            users=tuple(doc["users"]),
            clock=_dt.datetime.fromisoformat(doc["clock"]),
            issues=tuple(_issue_from_flat(flat) for flat in doc["issues"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FixtureInvalid([f"malformed fixture document: {exc}"]) from exc
    violations = _validate(fixture)
    if violations:
        raise FixtureInvalid(violations)
    return fixture


def load_fixture(path: Union[str, Path]) -> Fixture:
    with open(path, encoding="utf-8") as fh:
        return _from_document(json.load(fh))


def default_fixture() -> Fixture:
    raw = (resources.files("jiragpt") / "data" / "fixture.json").read_text(encoding="utf-8")
    return _from_document(json.loads(raw))
