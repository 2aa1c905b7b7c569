"""Jira issue snapshots: mapping from the REST JSON shape and projection to
a reduced field set for answer synthesis.

An issue holds exactly the 21 retained fields; everything else in the raw
Jira payload is discarded at ingestion. Optional fields are present-or-absent
(None), never empty strings, so emptiness checks have one meaning.
"""

from __future__ import annotations

import datetime as _dt
import warnings
from dataclasses import dataclass, field, fields as _dc_fields
from typing import Any, Iterable, Optional

from jiragpt.jql.ast import FIELD_NAMES

# Statuses that may carry a resolution date.
RESOLVED_STATUSES = frozenset({"Resuelto", "Cerrado", "Entregado", "Validado"})

# dataclass attribute name per canonical field name (fixVersions is not a
# valid-looking Python attribute style, keep an explicit map).
_ATTR_BY_FIELD = {name: name for name in FIELD_NAMES}
_ATTR_BY_FIELD["fixVersions"] = "fix_versions"


class SchemaError(ValueError):
    """Raw Jira JSON is missing required structure (key/id/fields)."""


class UnknownFieldWarning(UserWarning):
    """A requested keep-field is not one of the 21 retained names."""


@dataclass(frozen=True)
class Issue:
    key: str
    id: str
    summary: str
    status: str
    reporter: str
    creator: str
    issuetype: str
    project: str
    created: _dt.datetime
    updated: _dt.datetime
    description: Optional[str] = None
    assignee: Optional[str] = None
    priority: Optional[str] = None
    resolutiondate: Optional[_dt.datetime] = None
    duedate: Optional[_dt.date] = None
    resolution: Optional[str] = None
    labels: tuple[str, ...] = ()
    components: tuple[str, ...] = ()
    fix_versions: tuple[str, ...] = ()
    timeestimate: Optional[int] = None
    timespent: Optional[int] = None

    def get(self, field_name: str):
        """Value of a canonical field name, or None when absent."""
        attr = _ATTR_BY_FIELD.get(field_name)
        if attr is None:
            return None
        return getattr(self, attr)


@dataclass(frozen=True)
class ReducedIssue:
    """Projection of an issue onto a selected field subset; key always kept."""

    key: str
    selected: dict[str, Any] = field(default_factory=dict)


def parse_timestamp(raw: str) -> _dt.datetime:
    return _dt.datetime.fromisoformat(raw.replace("Z", "+00:00")).replace(tzinfo=None)


def _name_of(obj: Any) -> Optional[str]:
    """Display name of a nested Jira object ({"name": ...} or {"key": ...})."""
    if obj is None:
        return None
    if isinstance(obj, str):
        return obj
    for candidate in ("name", "key", "displayName", "value"):
        if obj.get(candidate):
            return obj[candidate]
    return None


def _names_of(objs: Optional[Iterable[Any]]) -> tuple[str, ...]:
    if not objs:
        return ()
    return tuple(n for n in (_name_of(o) for o in objs) if n)


def from_jira_json(raw: dict) -> Issue:
    """Build an Issue from one element of a Jira REST v2 search response.

    Only the 21 retained fields are read; nested objects flatten to their
    display name. Raises SchemaError when key/id/fields are missing.
    """
    if not isinstance(raw, dict) or "key" not in raw or "fields" not in raw:
        raise SchemaError("issue JSON must contain 'key' and 'fields'")
    f = raw["fields"]
    if not isinstance(f, dict):
        raise SchemaError("'fields' must be an object")

    def user(name: str) -> Optional[str]:
        return _name_of(f.get(name))

    return Issue(
        key=raw["key"],
        id=str(raw.get("id", "")),
        summary=f.get("summary") or "",
        description=f.get("description") or None,
        status=_name_of(f.get("status")) or "",
        assignee=user("assignee"),
        reporter=user("reporter") or "",
        creator=user("creator") or user("reporter") or "",
        priority=_name_of(f.get("priority")),
        issuetype=_name_of(f.get("issuetype")) or "",
        project=_name_of(f.get("project")) or raw["key"].rsplit("-", 1)[0],
        created=parse_timestamp(f["created"]),
        updated=parse_timestamp(f["updated"]),
        resolutiondate=parse_timestamp(f["resolutiondate"]) if f.get("resolutiondate") else None,
        duedate=_dt.date.fromisoformat(f["duedate"]) if f.get("duedate") else None,
        resolution=_name_of(f.get("resolution")),
        labels=tuple(f.get("labels") or ()),
        components=_names_of(f.get("components")),
        fix_versions=_names_of(f.get("fixVersions")),
        timeestimate=f.get("timeestimate"),
        timespent=f.get("timespent"),
    )


def to_jira_json(issue: Issue) -> dict:
    """Serialize an Issue back to the REST v2 search-response shape."""
    fields: dict[str, Any] = {
        "summary": issue.summary,
        "description": issue.description,
        "status": {"name": issue.status},
        "assignee": {"name": issue.assignee} if issue.assignee else None,
        "reporter": {"name": issue.reporter},
        "creator": {"name": issue.creator},
        "priority": {"name": issue.priority} if issue.priority else None,
        "issuetype": {"name": issue.issuetype},
        "project": {"key": issue.project},
        "created": issue.created.isoformat(),
        "updated": issue.updated.isoformat(),
        "resolutiondate": issue.resolutiondate.isoformat() if issue.resolutiondate else None,
        "duedate": issue.duedate.isoformat() if issue.duedate else None,
        "resolution": {"name": issue.resolution} if issue.resolution else None,
        "labels": list(issue.labels),
        "components": [{"name": n} for n in issue.components],
        "fixVersions": [{"name": n} for n in issue.fix_versions],
        "timeestimate": issue.timeestimate,
        "timespent": issue.timespent,
    }
    return {"key": issue.key, "id": issue.id, "fields": fields}


def reduce(issue: Issue, keep: Iterable[str]) -> ReducedIssue:
    """Project an issue onto ``keep``; unknown names warn and are ignored.

    Absent values are left out of the projection rather than stored as None.
    """
    selected: dict[str, Any] = {}
    for name in sorted(set(keep)):
        if name == "key":
            continue
        if name not in FIELD_NAMES:
            warnings.warn(f"unknown field {name!r} ignored", UnknownFieldWarning, stacklevel=2)
            continue
        value = issue.get(name)
        if value is None or value == ():
            continue
        if isinstance(value, tuple):
            value = list(value)
        elif isinstance(value, (_dt.datetime, _dt.date)):
            value = value.isoformat()
        selected[name] = value
    return ReducedIssue(key=issue.key, selected=selected)


def reduced_to_json(reduced: ReducedIssue) -> dict:
    """JSON object for one reduced issue: key first, then fields alphabetically."""
    obj: dict[str, Any] = {"key": reduced.key}
    for name in sorted(reduced.selected):
        obj[name] = reduced.selected[name]
    return obj
