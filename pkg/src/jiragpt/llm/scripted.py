"""Deterministic scripted chat backend for tests and offline evaluation.

With no fault modes and no temperature noise the backend is a pure function
of the request. Fault modes corrupt JQL-looking completions the way a
misguided model would: English status names, invented project names,
malformed output, or decorative prose around the query.
"""

from __future__ import annotations

import random
import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Optional, Union

from jiragpt.llm.gateway import ChatRequest, ChatResponse, EmptyCompletion
from jiragpt.llm.tokens import estimate_tokens

# Spanish -> English status corruptions, the reverse of the prompt mapping.
_SPANISH_TO_ENGLISH = {
    "Abierto": "Open",
    "En Progreso": "In Progress",
    "Resuelto": "Resolved",
    "Aprobada": "Approved",
    "Entregado": "Delivered",
    "Reabierto": "Reopened",
    "Cerrado": "Closed",
}


class FaultMode(Enum):
    INVENT_PROJECT = "INVENT_PROJECT"
    ENGLISH_STATUS = "ENGLISH_STATUS"
    MALFORMED_JQL = "MALFORMED_JQL"
    EXTRA_PROSE = "EXTRA_PROSE"


ResponseSpec = Union[str, Callable[[ChatRequest], str]]


@dataclass(frozen=True)
class ScriptedRule:
    """Matches the last user message; first matching rule wins.

    Exactly one of exact/substring/pattern should be set (a rule with none
    matches everything). ``system_contains`` optionally restricts the rule to
    requests whose system prompt contains the given text, which lets one
    behavior answer differently per pipeline phase.
    """

    response: ResponseSpec
    exact: Optional[str] = None
    substring: Optional[str] = None
    pattern: Optional[str] = None
    system_contains: Optional[str] = None

    def matches(self, req: ChatRequest) -> bool:
        if self.system_contains is not None and self.system_contains not in req.system_text:
            return False
        message = req.last_user_message
        if self.exact is not None:
            return message == self.exact
        if self.substring is not None:
            return self.substring in message
        if self.pattern is not None:
            return re.search(self.pattern, message) is not None
        return True

    def render(self, req: ChatRequest) -> str:
        if callable(self.response):
            return self.response(req)
        return self.response


@dataclass(frozen=True)
class ScriptedBehavior:
    rules: tuple[ScriptedRule, ...]
    fault_modes: frozenset[FaultMode] = frozenset()
    temperature_noise: Mapping[float, float] = field(default_factory=dict)
    seed: int = 0
    name: str = "scripted"


class ScriptedBackend:
    """LLMBackend double driven by a ScriptedBehavior.

    Counts completed calls (for call-economy assertions) and derives its RNG
    from (seed, call index, temperature), so runs are reproducible from
    construction while repeated identical requests can still differ under
    temperature noise.
    """

    def __init__(self, behavior: ScriptedBehavior):
        self.behavior = behavior
        self.calls: list[ChatRequest] = []
        self._lock = threading.Lock()

    @property
    def call_count(self) -> int:
        return len(self.calls)

    def reset(self) -> None:
        with self._lock:
            self.calls.clear()

    def complete(self, req: ChatRequest) -> ChatResponse:
        with self._lock:
            index = len(self.calls)
            self.calls.append(req)
        content = self._respond(req, index)
        if not content.strip():
            raise EmptyCompletion("scripted rule produced an empty completion")
        return ChatResponse(
            content=content,
            prompt_tokens=sum(estimate_tokens(m.content) for m in req.messages),
            completion_tokens=estimate_tokens(content),
            model=req.model,
            estimated=True,
        )

    def _respond(self, req: ChatRequest, index: int) -> str:
        content = None
        for rule in self.behavior.rules:
            if rule.matches(req):
                content = rule.render(req)
                break
        if content is None:
            raise EmptyCompletion(f"no scripted rule matches {req.last_user_message!r}")

        faults = set(self.behavior.fault_modes)
        noise = self.behavior.temperature_noise
        if noise:
            probability = noise.get(round(req.temperature, 1), 0.0)
            rng = random.Random(f"{self.behavior.seed}:{index}:{req.temperature:.1f}")
            if rng.random() < probability:
                faults.add(rng.choice(list(FaultMode)))
        for fault in sorted(faults, key=lambda f: f.value):
            content = apply_fault(content, fault)
        return content


def apply_fault(content: str, fault: FaultMode) -> str:
    if fault is FaultMode.ENGLISH_STATUS:
        for spanish, english in _SPANISH_TO_ENGLISH.items():
            content = re.sub(re.escape(spanish), english, content, flags=re.IGNORECASE)
        return content
    if fault is FaultMode.INVENT_PROJECT:
        if re.search(r"project\s*=", content, flags=re.IGNORECASE):
            return re.sub(
                r"(project\s*=\s*)(\"[^\"]*\"|'[^']*'|\S+)",
                r"\g<1>INVENTED1",
                content,
                flags=re.IGNORECASE,
            )
        return f"{content} AND project = INVENTED1"
    if fault is FaultMode.MALFORMED_JQL:
        return f"Lo siento, no puedo generar la consulta: {content} ;;"
    if fault is FaultMode.EXTRA_PROSE:
        return f"JQL:\n```\n{content}\n```"
    return content
