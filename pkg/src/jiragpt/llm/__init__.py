"""Chat-completion backends: HTTP client, scripted test double, and cost accounting."""

from jiragpt.llm.gateway import (
    AuthError,
    BackendUnreachable,
    ChatRequest,
    ChatResponse,
    EmptyCompletion,
    HttpBackend,
    LLMBackend,
    LLMError,
    Message,
    RateLimited,
)
from jiragpt.llm.scripted import FaultMode, ScriptedBackend, ScriptedBehavior, ScriptedRule
from jiragpt.llm.tokens import PriceTable, UnknownModelPrice, estimate_cost, estimate_tokens

__all__ = [
    "AuthError",
    "BackendUnreachable",
    "ChatRequest",
    "ChatResponse",
    "EmptyCompletion",
    "FaultMode",
    "HttpBackend",
    "LLMBackend",
    "LLMError",
    "Message",
    "PriceTable",
    "RateLimited",
    "ScriptedBackend",
    "ScriptedBehavior",
    "ScriptedRule",
    "UnknownModelPrice",
    "estimate_cost",
    "estimate_tokens",
]
