"""Scripted backend behaviors for reproducible evaluation.

- "golden": answers every corpus question with its reference JQL; the upper
  bound (100% accuracy) for any variant.
- "table1": answers correctly only when the phase-1 system prompt contains
  the blocks the case needs, corrupting the JQL the way the corresponding
  real failure looks (English statuses, invented projects, wrong priority,
  or garbage for interpretation questions).
- "tempnoise": golden plus temperature-proportional corruption probability.
"""

from __future__ import annotations

import json
import re
from typing import Optional, Sequence

from jiragpt.evalharness.corpus import EvalCase
from jiragpt.llm.gateway import ChatRequest
from jiragpt.llm.scripted import (
    FaultMode,
    ScriptedBackend,
    ScriptedBehavior,
    ScriptedRule,
    apply_fault,
)

# Distinctive substrings identifying prompt blocks / phases in system text.
_B2_MARKER = "issue status names in Spanish"
_B3_MARKER = "do not invent or assume"
_B4_MARKER = "Another example"
_P2_MARKER = "respond ONLY with the specific fields"
_P3_MARKER = "You are part of an application that interfaces with JIRA"

_TAG_MARKER = {"status": _B2_MARKER, "project": _B3_MARKER, "priority": _B4_MARKER}

BEHAVIOR_NAMES = ("golden", "table1", "tempnoise")


def _find_case(corpus: Sequence[EvalCase], message: str) -> Optional[EvalCase]:
    for case in corpus:
        if case.question == message:
            return case
    # retry messages embed the original question
    for case in corpus:
        if case.question in message:
            return case
    return None


def _phase3_count_answer(req: ChatRequest) -> str:
    """Generic phase-3 reply: count the issues in the serialized JSON."""
    message = req.last_user_message
    start = message.find("\n[")
    count = 0
    if start >= 0:
        try:
            count = len(json.loads(message[start:]))
        except ValueError:
            count = 0
    if count == 1:
        return "Hay 1 incidencia que responde a la consulta."
    return f"Hay {count} incidencias que responden a la consulta."


def _phase_rules() -> list[ScriptedRule]:
    """Phase-2/3 rules shared by all behaviors; must precede phase-1 rules."""
    return [
        ScriptedRule(
            system_contains=_P2_MARKER,
            substring="¿Cuántas personas tienen asignadas tareas en el proyecto GPT4?",
            response="Necessary JSON fields: [assignee]",
        ),
        ScriptedRule(system_contains=_P2_MARKER, response="status, assignee, created"),
        ScriptedRule(
            system_contains=_P3_MARKER,
            substring="¿Cuántas tareas creadas este mes están en progreso?",
            response="Hay 1 tarea creada este mes que está en progreso.",
        ),
        ScriptedRule(system_contains=_P3_MARKER, response=_phase3_count_answer),
    ]


def golden_behavior(corpus: Sequence[EvalCase]) -> ScriptedBehavior:
    rules = _phase_rules()
    rules.append(ScriptedRule(response=_reference_responder(corpus)))
    return ScriptedBehavior(rules=tuple(rules), name="scripted:golden")


def _reference_responder(corpus: Sequence[EvalCase]):
    def respond(req: ChatRequest) -> str:
        case = _find_case(corpus, req.last_user_message)
        if case is None:
            return ""
        return case.reference_jql

    return respond


def _corrupt(case: EvalCase) -> str:
    if case.tag == "status":
        return apply_fault(case.reference_jql, FaultMode.ENGLISH_STATUS)
    if case.tag == "project":
        return apply_fault(case.reference_jql, FaultMode.INVENT_PROJECT)
    if case.tag == "priority":
        return re.sub(
            r"(priority\s*=\s*)(\"[^\"]*\"|'[^']*'|\S+)",
            r"\g<1>Máxima",
            case.reference_jql,
            flags=re.IGNORECASE,
        )
    # interpretation questions: a plausible-looking query matching nothing
    return "status = Pendiente AND project = INVENTED2"


def table1_behavior(corpus: Sequence[EvalCase]) -> ScriptedBehavior:
    def respond(req: ChatRequest) -> str:
        case = _find_case(corpus, req.last_user_message)
        if case is None:
            return ""
        if case.tag == "ok":
            return case.reference_jql
        marker = _TAG_MARKER.get(case.tag)
        if marker is not None and marker in req.system_text:
            return case.reference_jql
        return _corrupt(case)

    rules = _phase_rules()
    rules.append(ScriptedRule(response=respond))
    return ScriptedBehavior(rules=tuple(rules), name="scripted:table1")


def tempnoise_behavior(corpus: Sequence[EvalCase], seed: int = 0) -> ScriptedBehavior:
    noise = {round(0.1 * i, 1): 0.5 * round(0.1 * i, 1) for i in range(11)}
    golden = golden_behavior(corpus)
    return ScriptedBehavior(
        rules=golden.rules,
        temperature_noise=noise,
        seed=seed,
        name="scripted:tempnoise",
    )


def build_behavior(name: str, corpus: Sequence[EvalCase], seed: int = 0) -> ScriptedBehavior:
    if name == "golden":
        return golden_behavior(corpus)
    if name == "table1":
        return table1_behavior(corpus)
    if name == "tempnoise":
        return tempnoise_behavior(corpus, seed=seed)
    raise KeyError(f"unknown scripted behavior {name!r}; expected one of {BEHAVIOR_NAMES}")


def scripted_backend(name: str, corpus: Sequence[EvalCase], seed: int = 0) -> ScriptedBackend:
    return ScriptedBackend(build_behavior(name, corpus, seed=seed))
