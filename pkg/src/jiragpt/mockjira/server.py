"""HTTP server emulating the Jira REST v2 search API over a loaded fixture.

Unparseable JQL mirrors Jira: HTTP 400 with {"errorMessages": [...]}. When
JIRAGPT_MOCKJIRA_TOKEN is set, requests must carry it as a bearer token;
when unset, requests are accepted without auth.
"""

from __future__ import annotations

import os
import threading
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from jiragpt.issues import to_jira_json
from jiragpt.jql import ParseError, TypeMismatch, evaluate, parse_jql
from jiragpt.mockjira.fixture import Fixture, default_fixture

ENV_TOKEN = "JIRAGPT_MOCKJIRA_TOKEN"


class FixtureStore:
    """Holds the active fixture; reloads swap it atomically."""

    def __init__(self, fixture: Fixture):
        self._fixture = fixture
        self._lock = threading.Lock()

    @property
    def fixture(self) -> Fixture:
        with self._lock:
            return self._fixture

    def replace(self, fixture: Fixture) -> None:
        with self._lock:
            self._fixture = fixture


def create_app(fixture: Optional[Fixture] = None, token: Optional[str] = None) -> FastAPI:
    store = FixtureStore(fixture or default_fixture())
    expected_token = token if token is not None else os.environ.get(ENV_TOKEN)
    app = FastAPI(title="mock Jira")
    app.state.store = store

    def _auth_failure(request: Request) -> Optional[JSONResponse]:
        if not expected_token:
            return None
        header = request.headers.get("authorization", "")
        if header == f"Bearer {expected_token}":
            return None
        return JSONResponse(status_code=401, content={"errorMessages": ["authentication required"]})

    def _run_search(jql: str, start_at: int, max_results: int) -> JSONResponse:
        if start_at < 0 or max_results < 1:
            return JSONResponse(
                status_code=400,
                content={"errorMessages": ["startAt must be >= 0 and maxResults >= 1"]},
            )
        fixture = store.fixture
        try:
            matched = evaluate(parse_jql(jql), fixture.issues, fixture.clock)
        except (ParseError, TypeMismatch) as exc:
            return JSONResponse(status_code=400, content={"errorMessages": [str(exc)]})
        page = matched[start_at : start_at + max_results]
        return JSONResponse(
            content={
                "startAt": start_at,
                "maxResults": max_results,
                "total": len(matched),
                "issues": [to_jira_json(issue) for issue in page],
            }
        )

    @app.get("/rest/api/2/search")
    def search_get(request: Request, jql: str = "", startAt: int = 0, maxResults: int = 50):
        failure = _auth_failure(request)
        if failure:
            return failure
        return _run_search(jql, startAt, maxResults)

    @app.post("/rest/api/2/search")
    async def search_post(request: Request):
        failure = _auth_failure(request)
        if failure:
            return failure
        try:
            body = await request.json()
        except Exception:
            return JSONResponse(status_code=400, content={"errorMessages": ["invalid JSON body"]})
        return _run_search(
            body.get("jql", ""), int(body.get("startAt", 0)), int(body.get("maxResults", 50))
        )

    @app.get("/rest/api/2/issue/{key}")
    def get_issue(request: Request, key: str):
        failure = _auth_failure(request)
        if failure:
            return failure
        for issue in store.fixture.issues:
            if issue.key == key:
                return JSONResponse(content=to_jira_json(issue))
        return JSONResponse(
            status_code=404, content={"errorMessages": [f"issue {key} does not exist"]}
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "issues": len(store.fixture.issues)}

    return app
