"""Service configuration.

The config file is plain JSON and holds no credentials; secrets come only
from environment variables (JIRAGPT_LLM_API_KEY, JIRAGPT_LLM_BASE_URL,
JIRAGPT_JIRA_TOKEN).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from jiragpt.llm.tokens import ModelPrice, PriceTable

DEFAULT_EXAMPLES = (
    "Muestra las incidencias abiertas",
    "Lista las incidencias asignadas a joel.garcia",
    "¿Cuántas tareas creadas este mes están en progreso?",
    "¿Cuántas personas tienen asignadas tareas en el proyecto GPT4?",
)


@dataclass(frozen=True)
class AppConfig:
    jira_base_url: Optional[str] = None  # None: serve the bundled fixture in-process
    llm_backend: str = "scripted:golden"  # scripted:<behavior> | live
    default_model: str = "gpt-3.5-turbo"
    available_models: tuple[str, ...] = ("gpt-3.5-turbo",)
    default_temperature: float = 0.0
    price_table: PriceTable = field(
        default_factory=lambda: PriceTable(rates={}, currency="USD")
    )
    prompt_blocks_path: Optional[Path] = None
    host: str = "127.0.0.1"
    port: int = 8000
    example_questions: tuple[str, ...] = DEFAULT_EXAMPLES
    cors_origins: tuple[str, ...] = ("*",)
    fixture_path: Optional[Path] = None


def load_config(path: Union[str, Path, None]) -> AppConfig:
    if path is None:
        return AppConfig()
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    for forbidden in ("api_key", "token", "jira_token", "llm_api_key"):
        if forbidden in doc:
            raise ValueError(
                f"config file must not contain credentials ({forbidden!r}); use environment variables"
            )
    rates = {
        model: ModelPrice(entry["prompt_per_1k"], entry["completion_per_1k"])
        for model, entry in doc.get("price_table", {}).items()
    }
    defaults = AppConfig()
    return AppConfig(
        jira_base_url=doc.get("jira_base_url"),
        llm_backend=doc.get("llm_backend", defaults.llm_backend),
        default_model=doc.get("default_model", defaults.default_model),
        available_models=tuple(doc.get("available_models", defaults.available_models)),
        default_temperature=doc.get("default_temperature", defaults.default_temperature),
        price_table=PriceTable(rates=rates, currency=doc.get("currency", "USD")),
        prompt_blocks_path=Path(doc["prompt_blocks_path"]) if doc.get("prompt_blocks_path") else None,
        host=doc.get("host", defaults.host),
        port=doc.get("port", defaults.port),
        example_questions=tuple(doc.get("example_questions", defaults.example_questions)),
        cors_origins=tuple(doc.get("cors_origins", defaults.cors_origins)),
        fixture_path=Path(doc["fixture_path"]) if doc.get("fixture_path") else None,
    )
