"""Evaluation harness: exact-issue-set scoring, prompt ablation, temperature sweep."""

from jiragpt.evalharness.corpus import EvalCase, default_corpus, load_corpus
from jiragpt.evalharness.behaviors import build_behavior, scripted_backend
from jiragpt.evalharness.harness import (
    CaseOutcome,
    EvalRun,
    Verdict,
    emit_report,
    format_accuracy,
    format_summary,
    run_ablation,
    run_temperature_sweep,
    score_case,
)

__all__ = [
    "CaseOutcome",
    "EvalCase",
    "EvalRun",
    "Verdict",
    "build_behavior",
    "default_corpus",
    "emit_report",
    "format_accuracy",
    "format_summary",
    "load_corpus",
    "run_ablation",
    "run_temperature_sweep",
    "score_case",
    "scripted_backend",
]
