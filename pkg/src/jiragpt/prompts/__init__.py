"""Prompt templates for the three pipeline phases.

Phase-1 prompts are built from four composable blocks kept as data files so
they can be audited without touching code; the four cumulative prefixes
(B1, B1-2, B1-3, full) are the ablation variants. Assembly is pure: same
inputs, byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from jiragpt.issues import ReducedIssue, reduced_to_json
from jiragpt.jql.ast import FIELD_NAMES
from jiragpt.llm.tokens import estimate_tokens

BLOCK_IDS = ("P1_B1", "P1_B2", "P1_B3", "P1_B4", "P2", "P3")

_BLOCK_FILES = {
    "P1_B1": "p1_b1.txt",
    "P1_B2": "p1_b2.txt",
    "P1_B3": "p1_b3.txt",
    "P1_B4": "p1_b4.txt",
    "P2": "p2.txt",
    "P3": "p3.txt",
}

_BLOCK_KINDS = {
    "P1_B1": "zero_shot",
    "P1_B2": "mapping_table",
    "P1_B3": "few_shot_example",
    "P1_B4": "few_shot_example",
    "P2": "instruction",
    "P3": "instruction",
}

# Phase-1 ablation variants: cumulative block prefixes, order fixed.
PHASE1_VARIANTS: dict[str, tuple[str, ...]] = {
    "B1": ("P1_B1",),
    "B1-2": ("P1_B1", "P1_B2"),
    "B1-3": ("P1_B1", "P1_B2", "P1_B3"),
    "full": ("P1_B1", "P1_B2", "P1_B3", "P1_B4"),
}

VARIANT_NAMES = tuple(PHASE1_VARIANTS)

DEFAULT_PHASE3_BUDGET = 12000


class EmptyQuery(ValueError):
    """User query is blank after trimming."""


class TruncationRequired(ValueError):
    """Serialized issue list exceeds the phase-3 character budget."""

    def __init__(self, length: int, budget: int):
        super().__init__(f"serialized issues are {length} chars, budget {budget}")
        self.length = length
        self.budget = budget


@dataclass(frozen=True)
class PromptBlock:
    id: str
    text: str
    kind: str


@dataclass(frozen=True)
class PromptTemplate:
    phase: int
    name: str
    blocks: tuple[str, ...]


@dataclass(frozen=True)
class AssembledPrompt:
    system_text: str
    user_text: str
    token_estimate: int  # system text only, per the per-prompt cost accounting


class PromptKit:
    """Loads prompt blocks from a directory (bundled by default)."""

    def __init__(self, blocks_path: Optional[Path] = None):
        self._blocks: dict[str, PromptBlock] = {}
        for block_id, filename in _BLOCK_FILES.items():
            if blocks_path is not None:
                text = (blocks_path / filename).read_text(encoding="utf-8")
            else:
                text = (
                    resources.files("jiragpt.prompts") / "blocks" / filename
                ).read_text(encoding="utf-8")
            self._blocks[block_id] = PromptBlock(block_id, text, _BLOCK_KINDS[block_id])

    def block(self, block_id: str) -> PromptBlock:
        return self._blocks[block_id]

    def phase1_template(self, name: str) -> PromptTemplate:
        if name not in PHASE1_VARIANTS:
            raise KeyError(f"unknown phase-1 variant {name!r}; expected one of {VARIANT_NAMES}")
        return PromptTemplate(phase=1, name=name, blocks=PHASE1_VARIANTS[name])

    def assemble_phase1(self, variant: PromptTemplate | str, user_query: str) -> AssembledPrompt:
        if isinstance(variant, str):
            variant = self.phase1_template(variant)
        if variant.phase != 1:
            raise ValueError(f"expected a phase-1 template, got phase {variant.phase}")
        user_query = user_query.strip()
        if not user_query:
            raise EmptyQuery("user query is blank")
        system_text = "\n\n".join(self._blocks[b].text for b in variant.blocks)
        return AssembledPrompt(system_text, user_query, estimate_tokens(system_text))

    def assemble_phase2(self, user_query: str, available_fields: Sequence[str]) -> AssembledPrompt:
        user_query = user_query.strip()
        if not user_query:
            raise EmptyQuery("user query is blank")
        if not available_fields:
            raise ValueError("available_fields must be non-empty")
        system_text = self._blocks["P2"].text
        user_text = f"{user_query}\n{', '.join(available_fields)}"
        return AssembledPrompt(system_text, user_text, estimate_tokens(system_text))

    def assemble_phase3(
        self,
        user_query: str,
        reduced_issues: Sequence[ReducedIssue],
        budget: int = DEFAULT_PHASE3_BUDGET,
    ) -> AssembledPrompt:
        user_query = user_query.strip()
        if not user_query:
            raise EmptyQuery("user query is blank")
        serialized = serialize_reduced(reduced_issues)
        if len(serialized) > budget:
            raise TruncationRequired(len(serialized), budget)
        system_text = self._blocks["P3"].text
        return AssembledPrompt(system_text, f"{user_query}\n{serialized}", estimate_tokens(system_text))


def serialize_reduced(reduced_issues: Iterable[ReducedIssue]) -> str:
    """JSON array of reduced issues: key first, selected fields alphabetically."""
    return json.dumps([reduced_to_json(r) for r in reduced_issues], ensure_ascii=False)


@dataclass(frozen=True)
class FieldSelection:
    fields: frozenset[str]
    fallback: bool  # true when nothing matched and all 21 fields were kept

    def __iter__(self):
        return iter(self.fields)


def parse_field_selection(
    completion: str, vocabulary: Iterable[str] = FIELD_NAMES
) -> FieldSelection:
    """Extract a field set from raw model output.

    Tolerates labels ("Necessary JSON fields: [...]"), brackets, quotes and
    stray whitespace. An empty intersection with the vocabulary falls back to
    the full vocabulary instead of failing the pipeline.
    """
    vocab = {name.lower(): name for name in vocabulary}
    text = completion
    if ":" in text:
        text = text.rsplit(":", 1)[1]
    tokens = text.replace("\n", ",").split(",")
    selected = set()
    for token in tokens:
        cleaned = token.strip().strip("[](){}\"'`“”‘’.").strip().lower()
        if cleaned in vocab:
            selected.add(vocab[cleaned])
    if not selected:
        return FieldSelection(frozenset(vocab.values()), fallback=True)
    return FieldSelection(frozenset(selected), fallback=False)
