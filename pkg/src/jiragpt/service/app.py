"""HTTP API over the pipeline: POST /api/query and GET /api/meta.

Every error body is {"code", "message"} with codes from a closed set:
INVALID_REQUEST, JQL_GENERATION_FAILED, JIRA_ERROR, BACKEND_UNREACHABLE,
LLM_ERROR.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from jiragpt.evalharness import default_corpus, scripted_backend
from jiragpt.jira_client import IssueSource, JiraError, JiraSearchClient
from jiragpt.llm.gateway import (
    BackendUnreachable,
    HttpBackend,
    LLMBackend,
    LLMError,
)
from jiragpt.mockjira.fixture import default_fixture, load_fixture
from jiragpt.pipeline import (
    AnswerGenerationFailed,
    JqlGenerationFailed,
    Pipeline,
    QueryMode,
    QueryResult,
    QuerySpec,
    account,
)
from jiragpt.prompts import EmptyQuery, PromptKit, VARIANT_NAMES
from jiragpt.service.config import AppConfig


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message, **extra})


def build_issue_source(config: AppConfig) -> IssueSource:
    if config.jira_base_url:
        fixture = load_fixture(config.fixture_path) if config.fixture_path else default_fixture()
        return JiraSearchClient(config.jira_base_url, lint_ctx=fixture.lint_context())
    fixture = load_fixture(config.fixture_path) if config.fixture_path else default_fixture()
    return fixture.issue_source()


def build_llm_backend(config: AppConfig) -> LLMBackend:
    if config.llm_backend == "live":
        return HttpBackend()
    if config.llm_backend.startswith("scripted:"):
        return scripted_backend(config.llm_backend.split(":", 1)[1], default_corpus())
    raise ValueError(f"unknown llm backend {config.llm_backend!r}")


def result_to_json(result: QueryResult, config: AppConfig, model: str) -> dict:
    browse_base = (config.jira_base_url or "https://jira.invalid").rstrip("/")
    costs = account(result, config.price_table, model)
    return {
        "answer": result.answer_text,
        "issues": [
            {
                "key": issue.key,
                "summary": issue.summary,
                "status": issue.status,
                "url": f"{browse_base}/browse/{issue.key}",
            }
            for issue in result.issues
        ],
        "jql": result.jql,
        "selected_fields": sorted(result.selected_fields) if result.selected_fields else None,
        "phase_usage": {
            phase: {
                "prompt_tokens": usage.prompt_tokens,
                "completion_tokens": usage.completion_tokens,
                "cost": costs.phases[phase].cost,
            }
            for phase, usage in result.phase_usage.items()
        },
        "total_cost": costs.total_cost,
        "currency": costs.currency,
        "warnings": result.warnings,
        "retry_count": result.retry_count,
    }


def create_app(
    config: Optional[AppConfig] = None,
    jira: Optional[IssueSource] = None,
    llm: Optional[LLMBackend] = None,
) -> FastAPI:
    config = config or AppConfig()
    jira = jira if jira is not None else build_issue_source(config)
    llm = llm if llm is not None else build_llm_backend(config)
    prompts = PromptKit(config.prompt_blocks_path)
    pipeline = Pipeline(jira, llm, prompt_kit=prompts)

    app = FastAPI(title="jiragpt")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/api/query")
    async def query(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "INVALID_REQUEST", "body must be a JSON object")
        if not isinstance(body, dict) or not isinstance(body.get("text", ""), str):
            return _error(400, "INVALID_REQUEST", "body must be {text, complex, ...}")
        text = (body.get("text") or "").strip()
        if not text:
            return _error(400, "INVALID_REQUEST", "text must be non-blank")
        template = body.get("template") or "full"
        if template not in VARIANT_NAMES:
            return _error(400, "INVALID_REQUEST", f"template must be one of {list(VARIANT_NAMES)}")
        try:
            temperature = float(body.get("temperature", config.default_temperature))
            if not 0.0 <= temperature <= 1.0:
                raise ValueError(f"temperature must be in [0, 1], got {temperature}")
            spec = QuerySpec(
                text=text,
                mode=QueryMode.COMPLEX if body.get("complex") else QueryMode.BASIC,
                temperature=temperature,
                model=body.get("model") or config.default_model,
                phase1_variant=template,
            )
        except (TypeError, ValueError) as exc:
            return _error(400, "INVALID_REQUEST", str(exc))
        try:
            result = pipeline.run(spec)
        except EmptyQuery:
            return _error(400, "INVALID_REQUEST", "text must be non-blank")
        except JqlGenerationFailed as exc:
            return _error(
                422,
                "JQL_GENERATION_FAILED",
                str(exc),
                completions=exc.completions,
            )
        except AnswerGenerationFailed as exc:
            return _error(502, "LLM_ERROR", str(exc))
        except JiraError as exc:
            return _error(502, "JIRA_ERROR", str(exc))
        except BackendUnreachable as exc:
            return _error(502, "BACKEND_UNREACHABLE", str(exc))
        except LLMError as exc:
            return _error(502, "LLM_ERROR", str(exc))
        return JSONResponse(content=result_to_json(result, config, spec.model))

    @app.get("/api/meta")
    def meta():
        return {
            "models": list(config.available_models),
            "templates": list(VARIANT_NAMES),
            "examples": list(config.example_questions),
            "default_temperature": config.default_temperature,
        }

    @app.get("/health")
    def health():
        return {"status": "ok"}

    return app
