"""Pipeline tests: completion sanitizing, retry path, call economy,
complex-mode phases, and cost accounting."""

import pytest

from jiragpt.llm.gateway import ChatRequest
from jiragpt.llm.scripted import ScriptedBackend, ScriptedBehavior, ScriptedRule
from jiragpt.llm.tokens import ModelPrice, PriceTable
from jiragpt.pipeline import (
    JqlGenerationFailed,
    Pipeline,
    QueryMode,
    QuerySpec,
    account,
    sanitize_completion,
)

FIG_QUESTION = "¿Cuántas tareas creadas este mes están en progreso?"


def backend_for(rules):
    return ScriptedBackend(ScriptedBehavior(rules=tuple(rules)))


def spec_for(text, mode=QueryMode.BASIC):
    return QuerySpec(text=text, mode=mode)


# sanitizing -----------------------------------------------------------------


@pytest.mark.parametrize(
    "raw,clean",
    [
        ("status = Abierto", "status = Abierto"),
        ("  status = Abierto \n", "status = Abierto"),
        ("```\nstatus = Abierto\n```", "status = Abierto"),
        ("```jql\nstatus = Abierto\n```", "status = Abierto"),
        ("JQL:\n```\nstatus = Abierto\n```", "status = Abierto"),
        ("JQL: status = Abierto", "status = Abierto"),
        ("Consulta: status = Abierto", "status = Abierto"),
        ("`status = Abierto`", "status = Abierto"),
        ('"status = Abierto"', "status = Abierto"),
        ("'status = Abierto'", "status = Abierto"),
        ("“status = Abierto”", "status = Abierto"),
        ("status = Abierto.", "status = Abierto"),
        ('status = "En Progreso" AND project = GPT4', 'status = "En Progreso" AND project = GPT4'),
    ],
)
def test_sanitize_completion(raw, clean):
    assert sanitize_completion(raw) == clean


def test_sanitize_keeps_inner_quotes():
    assert sanitize_completion('status = "En Progreso"') == 'status = "En Progreso"'


# phase 1 / basic mode -------------------------------------------------------


def test_basic_mode_returns_issues_without_answer(jira):
    backend = backend_for([ScriptedRule(response="status = Abierto")])
    result = Pipeline(jira, backend).run(spec_for("Muestra las incidencias abiertas"))
    assert len(result.issues) == 14
    assert result.answer_text is None
    assert result.selected_fields is None
    assert result.jql == "status = Abierto"
    assert result.retry_count == 0
    assert set(result.phase_usage) == {"phase1"}


def test_basic_mode_issue_set_matches_direct_search(jira):
    backend = backend_for([ScriptedRule(response='priority = "Highest"')])
    result = Pipeline(jira, backend).run_basic(spec_for("incidencias urgentes"))
    direct = jira.search('priority = "Highest"')
    assert [i.key for i in result.issues] == [i.key for i in direct]


def test_decorated_completion_is_sanitized_without_retry(jira):
    backend = backend_for([ScriptedRule(response="JQL:\n```\nstatus = Abierto\n```")])
    result = Pipeline(jira, backend).run_basic(spec_for("abiertas"))
    assert result.jql == "status = Abierto"
    assert result.retry_count == 0
    assert backend.call_count == 1


def test_retry_feeds_the_parse_error_back_once(jira):
    def respond(req: ChatRequest) -> str:
        if "was not valid JQL" in req.last_user_message:
            return "status = Abierto"
        return "esto no es jql ;;"

    backend = backend_for([ScriptedRule(response=respond)])
    result = Pipeline(jira, backend).run_basic(spec_for("abiertas"))
    assert result.jql == "status = Abierto"
    assert result.retry_count == 1
    assert backend.call_count == 2
    retry_message = backend.calls[1].last_user_message
    assert "abiertas" in retry_message
    assert "esto no es jql ;;" in retry_message


def test_two_bad_completions_fail_hard_with_both_attempts(jira):
    backend = backend_for([ScriptedRule(response="sigo sin ser jql ;;")])
    with pytest.raises(JqlGenerationFailed) as info:
        Pipeline(jira, backend).run_basic(spec_for("abiertas"))
    assert backend.call_count == 2
    assert info.value.completions == ["sigo sin ser jql ;;"] * 2
    assert info.value.last_error is not None


def test_lint_findings_become_warnings(jira):
    backend = backend_for([ScriptedRule(response='status = "Open" AND project = FALSO')])
    result = Pipeline(jira, backend).run_basic(spec_for("abiertas"))
    assert any(w.startswith("ENGLISH_STATUS") for w in result.warnings)
    assert any(w.startswith("UNKNOWN_PROJECT") for w in result.warnings)


# complex mode ---------------------------------------------------------------


def complex_backend(phase2="status, assignee, created", phase3="Hay 1 tarea creada este mes que está en progreso."):
    return backend_for(
        [
            ScriptedRule(system_contains="respond ONLY with the specific fields", response=phase2),
            ScriptedRule(
                system_contains="You are part of an application that interfaces with JIRA",
                response=phase3,
            ),
            ScriptedRule(response="status = 'En Progreso' AND created = startOfMonth()"),
        ]
    )


def test_complex_mode_runs_three_phases(jira):
    backend = complex_backend()
    result = Pipeline(jira, backend).run(spec_for(FIG_QUESTION, QueryMode.COMPLEX))
    assert backend.call_count == 3
    assert [i.key for i in result.issues] == ["GPT4-2"]
    assert result.selected_fields == frozenset({"status", "assignee", "created"})
    assert result.answer_text == "Hay 1 tarea creada este mes que está en progreso."
    assert set(result.phase_usage) == {"phase1", "phase2", "phase3"}


def test_call_economy_basic_one_complex_three(jira):
    backend = complex_backend()
    Pipeline(jira, backend).run(spec_for(FIG_QUESTION, QueryMode.BASIC))
    assert backend.call_count == 1
    backend.reset()
    Pipeline(jira, backend).run(spec_for(FIG_QUESTION, QueryMode.COMPLEX))
    assert backend.call_count == 3


def test_phase3_prompt_contains_only_selected_fields(jira):
    backend = complex_backend(phase2="status, assignee")
    Pipeline(jira, backend).run(spec_for(FIG_QUESTION, QueryMode.COMPLEX))
    phase3_message = backend.calls[2].last_user_message
    assert '"status": "En Progreso"' in phase3_message
    assert "summary" not in phase3_message
    assert "priority" not in phase3_message


def test_field_selection_fallback_warns_and_keeps_all_fields(jira):
    backend = complex_backend(phase2="nada reconocible")
    result = Pipeline(jira, backend).run(spec_for(FIG_QUESTION, QueryMode.COMPLEX))
    assert len(result.selected_fields) == 21
    assert any(w.startswith("FIELD_SELECTION_FALLBACK") for w in result.warnings)


def test_tight_budget_truncates_issue_list_with_warning(jira):
    backend = backend_for(
        [
            ScriptedRule(system_contains="respond ONLY with the specific fields", response="summary, status"),
            ScriptedRule(
                system_contains="You are part of an application that interfaces with JIRA",
                response="Hay muchas incidencias.",
            ),
            ScriptedRule(response="project = GPT4"),
        ]
    )
    pipeline = Pipeline(jira, backend, phase3_budget=400)
    result = pipeline.run(spec_for("Muestra todo", QueryMode.COMPLEX))
    assert len(result.issues) == 20  # the issue list itself is never cut
    assert any(w.startswith("TRUNCATED") for w in result.warnings)
    phase3_message = backend.calls[2].last_user_message
    assert len(phase3_message) <= 400 + len("Muestra todo\n")


# cost accounting ------------------------------------------------------------


def test_account_totals_are_sums_of_phases(jira):
    backend = complex_backend()
    result = Pipeline(jira, backend).run(spec_for(FIG_QUESTION, QueryMode.COMPLEX))
    prices = PriceTable(rates={"gpt-3.5-turbo": ModelPrice(0.5, 1.5)})
    summary = account(result, prices, "gpt-3.5-turbo")
    assert set(summary.phases) == {"phase1", "phase2", "phase3"}
    assert summary.total_prompt_tokens == sum(p.prompt_tokens for p in summary.phases.values())
    assert summary.total_completion_tokens == sum(
        p.completion_tokens for p in summary.phases.values()
    )
    assert summary.total_cost == pytest.approx(sum(p.cost for p in summary.phases.values()))
    assert summary.currency == "USD"
    assert summary.total_cost > 0


def test_account_without_price_entry_reports_unavailable_not_zero(jira):
    backend = backend_for([ScriptedRule(response="status = Abierto")])
    result = Pipeline(jira, backend).run_basic(spec_for("abiertas"))
    summary = account(result, PriceTable(rates={}), "gpt-3.5-turbo")
    assert summary.total_cost is None
    assert summary.phases["phase1"].cost is None
    assert summary.total_prompt_tokens > 0
