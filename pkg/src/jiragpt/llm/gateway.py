"""Chat-completion request/response types and the HTTP backend.

The HTTP backend speaks the OpenAI-compatible wire format:
POST {base_url}/v1/chat/completions with {model, temperature, messages[]}.
Transient failures (timeouts, 429, 5xx) are retried twice with exponential
backoff, so a single complete() call issues at most 3 attempts.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

import httpx

from jiragpt.llm.tokens import estimate_tokens

ENV_API_KEY = "JIRAGPT_LLM_API_KEY"
ENV_BASE_URL = "JIRAGPT_LLM_BASE_URL"


class LLMError(Exception):
    pass


class AuthError(LLMError):
    pass


class RateLimited(LLMError):
    pass


class BackendUnreachable(LLMError):
    pass


class EmptyCompletion(LLMError):
    pass


@dataclass(frozen=True)
class Message:
    role: str  # system | user
    content: str


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[Message, ...]
    temperature: float = 0.0
    max_tokens: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 1.0:
            raise ValueError(f"temperature must be in [0, 1], got {self.temperature}")

    @property
    def last_user_message(self) -> str:
        for message in reversed(self.messages):
            if message.role == "user":
                return message.content
        return ""

    @property
    def system_text(self) -> str:
        for message in self.messages:
            if message.role == "system":
                return message.content
        return ""


@dataclass(frozen=True)
class ChatResponse:
    content: str
    prompt_tokens: int
    completion_tokens: int
    model: str
    latency: float = 0.0
    estimated: bool = False  # true when usage was estimated, not reported upstream


class LLMBackend(Protocol):
    def complete(self, req: ChatRequest) -> ChatResponse: ...


class HttpBackend:
    """Client for an OpenAI-compatible chat-completions endpoint.

    Credentials come from the environment by default (JIRAGPT_LLM_API_KEY /
    JIRAGPT_LLM_BASE_URL). A semaphore caps concurrent in-flight requests.
    """

    MAX_ATTEMPTS = 3

    def __init__(
        self,
        base_url: Optional[str] = None,
        api_key: Optional[str] = None,
        timeout: float = 30.0,
        max_concurrency: int = 4,
        sleep: Callable[[float], None] = time.sleep,
    ):
        base_url = base_url or os.environ.get(ENV_BASE_URL)
        if not base_url:
            raise BackendUnreachable(f"no base URL configured (set {ENV_BASE_URL})")
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(ENV_API_KEY, "")
        self.timeout = timeout
        self._semaphore = threading.Semaphore(max_concurrency)
        self._sleep = sleep

    def complete(self, req: ChatRequest) -> ChatResponse:
        body = {
            "model": req.model,
            "temperature": req.temperature,
            "messages": [{"role": m.role, "content": m.content} for m in req.messages],
        }
        if req.max_tokens is not None:
            body["max_tokens"] = req.max_tokens
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        start = time.monotonic()
        with self._semaphore:
            payload = self._post_with_retry(body, headers)
        latency = time.monotonic() - start

        choices = payload.get("choices") or []
        content = ""
        if choices:
            content = (choices[0].get("message") or {}).get("content") or ""
        if not content.strip():
            raise EmptyCompletion("backend returned an empty completion")

        usage = payload.get("usage") or {}
        if "prompt_tokens" in usage:
            prompt_tokens = usage.get("prompt_tokens", 0)
            completion_tokens = usage.get("completion_tokens", 0)
            estimated = False
        else:
            prompt_tokens = sum(estimate_tokens(m.content) for m in req.messages)
            completion_tokens = estimate_tokens(content)
            estimated = True
        return ChatResponse(
            content=content,
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
            model=payload.get("model", req.model),
            latency=latency,
            estimated=estimated,
        )

    def _post_with_retry(self, body: dict, headers: dict) -> dict:
        url = f"{self.base_url}/v1/chat/completions"
        last_error: Optional[Exception] = None
        for attempt in range(self.MAX_ATTEMPTS):
            if attempt:
                self._sleep(2 ** (attempt - 1))
            try:
                response = httpx.post(url, json=body, headers=headers, timeout=self.timeout)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"backend rejected credentials (HTTP {response.status_code})")
            if response.status_code == 429 or response.status_code >= 500:
                last_error = LLMError(f"HTTP {response.status_code}")
                continue
            if response.status_code != 200:
                raise LLMError(f"unexpected HTTP {response.status_code}: {response.text[:200]}")
            return response.json()
        if last_error is not None and "429" in str(last_error):
            raise RateLimited("rate limited after retries") from last_error
        raise BackendUnreachable(f"backend unreachable after {self.MAX_ATTEMPTS} attempts") from last_error
