"""Question corpus: 70 Spanish project-management questions in three types
(single-field filter, multi-field filter, interpretation required).

Each case carries a reference JQL and the expected key set it yields on the
bundled fixture. The ``tag`` names the cheapest phase-1 prompt variant that
answers the case correctly ("ok" = even the bare variant; "status" /
"project" / "priority" = needs the status-mapping, project-rule, or
second-example block; "never" = fails under every variant), which is what
the scripted ablation backend keys on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

TAGS = ("ok", "status", "project", "priority", "never")


@dataclass(frozen=True)
class EvalCase:
    id: str
    question: str
    qtype: int
    reference_jql: str
    expected_keys: frozenset[str]
    tag: str = "never"
    notes: Optional[str] = None


def _from_document(doc: list) -> list[EvalCase]:
    cases = []
    for entry in doc:
        qtype = int(entry["qtype"])
        if qtype not in (1, 2, 3):
            raise ValueError(f"{entry['id']}: qtype must be 1, 2, or 3")
        if entry.get("tag", "never") not in TAGS:
            raise ValueError(f"{entry['id']}: unknown tag {entry['tag']!r}")
        cases.append(
            EvalCase(
                id=entry["id"],
                question=entry["question"],
                qtype=qtype,
                reference_jql=entry["reference_jql"],
                expected_keys=frozenset(entry["expected_keys"]),
                tag=entry.get("tag", "never"),
                notes=entry.get("notes"),
            )
        )
    return cases


def load_corpus(path: Union[str, Path]) -> list[EvalCase]:
    with open(path, encoding="utf-8") as fh:
        return _from_document(json.load(fh))


def default_corpus() -> list[EvalCase]:
    raw = (resources.files("jiragpt") / "data" / "corpus.json").read_text(encoding="utf-8")
    return _from_document(json.loads(raw))
