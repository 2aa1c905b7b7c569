"""Issue sources for the pipeline: the Jira REST search client and the
in-process store used for tests and offline evaluation.
"""

from __future__ import annotations

import datetime as _dt
import os
from typing import Optional, Protocol, Sequence

import httpx

from jiragpt.issues import Issue, from_jira_json
from jiragpt.jql import LintContext, evaluate, parse_jql

ENV_JIRA_TOKEN = "JIRAGPT_JIRA_TOKEN"


class JiraError(Exception):
    """Search request failed (HTTP error or rejected JQL)."""


class IssueSource(Protocol):
    def search(self, jql: str) -> list[Issue]: ...

    def lint_context(self) -> Optional[LintContext]: ...


class JiraSearchClient:
    """Client for the Jira REST v2 search endpoint (real Jira or the bundled
    mock server). Auth is a static bearer token from JIRAGPT_JIRA_TOKEN."""

    def __init__(
        self,
        base_url: str,
        token: Optional[str] = None,
        timeout: float = 30.0,
        lint_ctx: Optional[LintContext] = None,
        page_size: int = 50,
    ):
        self.base_url = base_url.rstrip("/")
        self.token = token if token is not None else os.environ.get(ENV_JIRA_TOKEN)
        self.timeout = timeout
        self._lint_ctx = lint_ctx
        self.page_size = page_size

    def _headers(self) -> dict:
        if self.token:
            return {"Authorization": f"Bearer {self.token}"}
        return {}

    def search(self, jql: str) -> list[Issue]:
        issues: list[Issue] = []
        start_at = 0
        while True:
            try:
                response = httpx.get(
                    f"{self.base_url}/rest/api/2/search",
                    params={"jql": jql, "startAt": start_at, "maxResults": self.page_size},
                    headers=self._headers(),
                    timeout=self.timeout,
                )
            except httpx.HTTPError as exc:
                raise JiraError(f"search request failed: {exc}") from exc
            if response.status_code != 200:
                raise JiraError(f"search returned HTTP {response.status_code}: {response.text[:300]}")
            payload = response.json()
            issues.extend(from_jira_json(raw) for raw in payload.get("issues", ()))
            start_at += self.page_size
            if start_at >= payload.get("total", 0):
                return issues

    def lint_context(self) -> Optional[LintContext]:
        return self._lint_ctx


class InMemoryJira:
    """Issue source over an in-memory store, executing JQL locally."""

    def __init__(
        self,
        issues: Sequence[Issue],
        clock: _dt.datetime,
        lint_ctx: Optional[LintContext] = None,
    ):
        self.issues = list(issues)
        self.clock = clock
        self._lint_ctx = lint_ctx

    def search(self, jql: str) -> list[Issue]:
        return evaluate(parse_jql(jql), self.issues, self.clock)

    def lint_context(self) -> Optional[LintContext]:
        return self._lint_ctx
