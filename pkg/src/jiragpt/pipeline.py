"""End-to-end query workflow.

Basic mode is phase 1 only: generate JQL, execute, return the issue list.
Complex mode continues with field selection (phase 2) and natural-language
answer synthesis (phase 3). The pipeline never invents answers: answer text
comes only from the phase-3 completion, and unparseable JQL never escapes
(one retry with the parse error fed back, then a hard failure).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from jiragpt.issues import Issue, ReducedIssue, reduce
from jiragpt.jira_client import IssueSource
from jiragpt.jql import JqlQuery, ParseError, lint, parse_jql
from jiragpt.jql.ast import FIELD_NAMES
from jiragpt.llm.gateway import ChatRequest, ChatResponse, LLMBackend, Message
from jiragpt.llm.tokens import PriceTable, UnknownModelPrice, estimate_cost
from jiragpt.prompts import (
    DEFAULT_PHASE3_BUDGET,
    PromptKit,
    TruncationRequired,
    parse_field_selection,
)


class QueryMode(Enum):
    BASIC = "BASIC"
    COMPLEX = "COMPLEX"


class JqlGenerationFailed(Exception):
    """Both phase-1 attempts produced unparseable JQL."""

    def __init__(self, completions: list[str], last_error: ParseError):
        super().__init__(f"could not parse generated JQL after retry: {last_error}")
        self.completions = completions
        self.last_error = last_error


class AnswerGenerationFailed(Exception):
    """Phase-3 produced an empty completion."""


@dataclass(frozen=True)
class QuerySpec:
    text: str
    mode: QueryMode = QueryMode.BASIC
    temperature: float = 0.0
    model: str = "gpt-3.5-turbo"
    phase1_variant: str = "full"


@dataclass(frozen=True)
class PhaseUsage:
    prompt_tokens: int
    completion_tokens: int

    @property
    def total_tokens(self) -> int:
        return self.prompt_tokens + self.completion_tokens


@dataclass
class QueryResult:
    jql: str
    parsed_jql: JqlQuery
    issues: list[Issue]
    answer_text: Optional[str] = None
    selected_fields: Optional[frozenset[str]] = None
    phase_usage: dict[str, PhaseUsage] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    retry_count: int = 0


@dataclass(frozen=True)
class PhaseCost:
    prompt_tokens: int
    completion_tokens: int
    cost: Optional[float]  # None when the model has no price entry


@dataclass(frozen=True)
class CostSummary:
    phases: dict[str, PhaseCost]
    total_prompt_tokens: int
    total_completion_tokens: int
    total_cost: Optional[float]
    currency: str


_FENCE_RE = re.compile(r"```[a-zA-Z]*\n?(.*?)```", re.DOTALL)
_LABEL_RE = re.compile(r"^(jql|query|consulta)\s*:\s*", re.IGNORECASE)


def sanitize_completion(text: str) -> str:
    """Strip decoration models add around JQL: code fences, backticks,
    surrounding quotes, leading "JQL:" labels, trailing periods."""
    text = text.strip()
    fence = _FENCE_RE.search(text)
    if fence:
        text = fence.group(1).strip()
    text = _LABEL_RE.sub("", text).strip()
    text = text.strip("`").strip()
    for opening, closing in (('"', '"'), ("'", "'"), ("“", "”")):
        if len(text) >= 2 and text.startswith(opening) and text.endswith(closing):
            text = text[1:-1].strip()
            break
    return text.rstrip(".").strip()


class Pipeline:
    def __init__(
        self,
        jira: IssueSource,
        llm: LLMBackend,
        prompt_kit: Optional[PromptKit] = None,
        phase3_budget: int = DEFAULT_PHASE3_BUDGET,
    ):
        self.jira = jira
        self.llm = llm
        self.prompts = prompt_kit or PromptKit()
        self.phase3_budget = phase3_budget

    # phase 1 ---------------------------------------------------------------

    def _generate_jql(self, spec: QuerySpec, result_warnings: list[str]) -> tuple[str, JqlQuery, PhaseUsage, int]:
        assembled = self.prompts.assemble_phase1(spec.phase1_variant, spec.text)
        completions: list[str] = []
        usage_prompt = usage_completion = 0
        user_text = assembled.user_text
        last_error: Optional[ParseError] = None
        for attempt in range(2):
            response = self._complete(spec, assembled.system_text, user_text)
            usage_prompt += response.prompt_tokens
            usage_completion += response.completion_tokens
            completions.append(response.content)
            jql = sanitize_completion(response.content)
            try:
                parsed = parse_jql(jql)
            except ParseError as exc:
                last_error = exc
                user_text = (
                    f"{assembled.user_text}\n\n"
                    f"The previous response was not valid JQL: {exc}\n"
                    f"Previous response: {response.content}\n"
                    f"Return only a corrected JQL query."
                )
                continue
            return jql, parsed, PhaseUsage(usage_prompt, usage_completion), attempt
        raise JqlGenerationFailed(completions, last_error)

    def _complete(self, spec: QuerySpec, system_text: str, user_text: str) -> ChatResponse:
        request = ChatRequest(
            model=spec.model,
            temperature=spec.temperature,
            messages=(Message("system", system_text), Message("user", user_text)),
        )
        return self.llm.complete(request)

    def run_basic(self, spec: QuerySpec) -> QueryResult:
        warnings: list[str] = []
        jql, parsed, usage, retries = self._generate_jql(spec, warnings)
        ctx = self.jira.lint_context()
        if ctx is not None:
            warnings.extend(f"{f.code.value}: {f.message}" for f in lint(parsed, ctx))
        issues = self.jira.search(jql)
        return QueryResult(
            jql=jql,
            parsed_jql=parsed,
            issues=issues,
            phase_usage={"phase1": usage},
            warnings=warnings,
            retry_count=retries,
        )

    # phases 2-3 ------------------------------------------------------------

    def run_complex(self, spec: QuerySpec) -> QueryResult:
        result = self.run_basic(spec)

        # phase 2: field selection over the 21 retained names
        assembled2 = self.prompts.assemble_phase2(spec.text, list(FIELD_NAMES))
        response2 = self._complete(spec, assembled2.system_text, assembled2.user_text)
        result.phase_usage["phase2"] = PhaseUsage(response2.prompt_tokens, response2.completion_tokens)
        selection = parse_field_selection(response2.content)
        if selection.fallback:
            result.warnings.append("FIELD_SELECTION_FALLBACK: kept all 21 fields")
        result.selected_fields = selection.fields

        # phase 3: answer from the reduced issue list
        reduced = [reduce(issue, selection.fields) for issue in result.issues]
        reduced, truncated = self._fit_budget(spec.text, reduced)
        if truncated:
            result.warnings.append(f"TRUNCATED: issue list cut to {len(reduced)} for the answer prompt")
        assembled3 = self.prompts.assemble_phase3(spec.text, reduced, budget=self.phase3_budget)
        response3 = self._complete(spec, assembled3.system_text, assembled3.user_text)
        result.phase_usage["phase3"] = PhaseUsage(response3.prompt_tokens, response3.completion_tokens)
        if not response3.content.strip():
            raise AnswerGenerationFailed("phase-3 completion was empty")
        result.answer_text = response3.content.strip()
        return result

    def _fit_budget(
        self, text: str, reduced: list[ReducedIssue]
    ) -> tuple[list[ReducedIssue], bool]:
        truncated = False
        kept = list(reduced)
        while kept:
            try:
                self.prompts.assemble_phase3(text, kept, budget=self.phase3_budget)
                return kept, truncated
            except TruncationRequired:
                kept.pop()
                truncated = True
        return kept, truncated

    def run(self, spec: QuerySpec) -> QueryResult:
        if spec.mode is QueryMode.COMPLEX:
            return self.run_complex(spec)
        return self.run_basic(spec)


def account(result: QueryResult, prices: PriceTable, model: str) -> CostSummary:
    """Per-phase and total token/cost figures; totals are sums of the parts."""
    phases: dict[str, PhaseCost] = {}
    total_cost: Optional[float] = 0.0
    for phase, usage in result.phase_usage.items():
        try:
            cost = estimate_cost(usage.prompt_tokens, usage.completion_tokens, model, prices)
        except UnknownModelPrice:
            cost = None
        phases[phase] = PhaseCost(usage.prompt_tokens, usage.completion_tokens, cost)
        total_cost = None if (cost is None or total_cost is None) else total_cost + cost
    return CostSummary(
        phases=phases,
        total_prompt_tokens=sum(u.prompt_tokens for u in result.phase_usage.values()),
        total_completion_tokens=sum(u.completion_tokens for u in result.phase_usage.values()),
        total_cost=total_cost,
        currency=prices.currency,
    )
