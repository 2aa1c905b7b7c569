"""Run the question corpus through phase 1 and score exact-set accuracy.

A case is correct iff the returned issue-key set equals the expected set
exactly; order and duplicates are irrelevant; pipeline errors count as
incorrect. Accuracy is half-up rounded to 2 decimals.
"""

from __future__ import annotations

import csv
import datetime as _dt
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_UP
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from jiragpt.evalharness.corpus import EvalCase
from jiragpt.jira_client import IssueSource, JiraError
from jiragpt.jql.errors import JqlError
from jiragpt.llm.gateway import LLMBackend, LLMError
from jiragpt.pipeline import JqlGenerationFailed, Pipeline, QueryMode, QueryResult, QuerySpec
from jiragpt.prompts import PromptKit, VARIANT_NAMES


class Verdict(Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"
    ERROR = "error"


@dataclass(frozen=True)
class CaseOutcome:
    case_id: str
    qtype: int
    generated_jql: Optional[str]
    returned_keys: frozenset[str]
    verdict: Verdict
    prompt_tokens: int = 0
    completion_tokens: int = 0
    error: Optional[str] = None


@dataclass
class EvalRun:
    variant: str
    temperature: float
    backend_name: str
    prompt_token_estimate: int
    cases: list[CaseOutcome] = field(default_factory=list)
    incomplete: bool = False

    @property
    def correct_count(self) -> int:
        return sum(1 for c in self.cases if c.verdict is Verdict.CORRECT)

    @property
    def accuracy(self) -> Decimal:
        if not self.cases:
            return Decimal("0.00")
        raw = Decimal(100 * self.correct_count) / Decimal(len(self.cases))
        return raw.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


def format_accuracy(accuracy: Decimal, decimal_comma: bool = False) -> str:
    text = f"{accuracy:.2f}"
    return text.replace(".", ",") if decimal_comma else text


def score_case(case: EvalCase, result: QueryResult) -> Verdict:
    returned = {issue.key for issue in result.issues}
    return Verdict.CORRECT if returned == set(case.expected_keys) else Verdict.INCORRECT


def _run_case(pipeline: Pipeline, case: EvalCase, variant: str, temperature: float, model: str) -> CaseOutcome:
    spec = QuerySpec(
        text=case.question,
        mode=QueryMode.BASIC,
        temperature=temperature,
        model=model,
        phase1_variant=variant,
    )
    try:
        result = pipeline.run_basic(spec)
    except (JqlGenerationFailed, JqlError, JiraError, LLMError) as exc:
        return CaseOutcome(
            case_id=case.id,
            qtype=case.qtype,
            generated_jql=None,
            returned_keys=frozenset(),
            verdict=Verdict.ERROR,
            error=f"{type(exc).__name__}: {exc}",
        )
    usage = result.phase_usage.get("phase1")
    return CaseOutcome(
        case_id=case.id,
        qtype=case.qtype,
        generated_jql=result.jql,
        returned_keys=frozenset(issue.key for issue in result.issues),
        verdict=score_case(case, result),
        prompt_tokens=usage.prompt_tokens if usage else 0,
        completion_tokens=usage.completion_tokens if usage else 0,
    )


def _run_variant(
    corpus: Sequence[EvalCase],
    jira: IssueSource,
    backend: LLMBackend,
    variant: str,
    temperature: float,
    model: str,
    abort_after: int,
    prompts: PromptKit,
) -> EvalRun:
    pipeline = Pipeline(jira, backend, prompt_kit=prompts)
    estimate = prompts.assemble_phase1(variant, "x").token_estimate
    run = EvalRun(
        variant=variant,
        temperature=temperature,
        backend_name=getattr(getattr(backend, "behavior", None), "name", "live"),
        prompt_token_estimate=estimate,
    )
    consecutive_errors = 0
    for case in sorted(corpus, key=lambda c: c.id):
        outcome = _run_case(pipeline, case, variant, temperature, model)
        run.cases.append(outcome)
        if outcome.verdict is Verdict.ERROR:
            consecutive_errors += 1
            if consecutive_errors >= abort_after:
                run.incomplete = True
                break
        else:
            consecutive_errors = 0
    return run


def run_ablation(
    corpus: Sequence[EvalCase],
    jira: IssueSource,
    backend: LLMBackend,
    variants: Sequence[str] = VARIANT_NAMES,
    temperature: float = 0.0,
    model: str = "gpt-3.5-turbo",
    abort_after: int = 5,
    prompts: Optional[PromptKit] = None,
) -> list[EvalRun]:
    """One EvalRun per phase-1 variant, in the given cumulative order."""
    prompts = prompts or PromptKit()
    return [
        _run_variant(corpus, jira, backend, variant, temperature, model, abort_after, prompts)
        for variant in variants
    ]


def run_temperature_sweep(
    corpus: Sequence[EvalCase],
    jira: IssueSource,
    backend: LLMBackend,
    variant: str = "full",
    temperatures: Sequence[float] = tuple(round(0.1 * i, 1) for i in range(11)),
    repetitions: int = 1,
    model: str = "gpt-3.5-turbo",
    abort_after: int = 5,
    prompts: Optional[PromptKit] = None,
) -> list[tuple[float, Decimal, list[EvalRun]]]:
    """Rows of (temperature, mean accuracy over repetitions, individual runs)."""
    prompts = prompts or PromptKit()
    rows = []
    for temperature in temperatures:
        runs = [
            _run_variant(corpus, jira, backend, variant, temperature, model, abort_after, prompts)
            for _ in range(repetitions)
        ]
        mean = sum((run.accuracy for run in runs), Decimal(0)) / Decimal(len(runs))
        rows.append((temperature, mean.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP), runs))
    return rows


def emit_report(
    runs: Sequence[EvalRun],
    out_dir: Path,
    timestamp: Optional[str] = None,
    decimal_comma: bool = False,
) -> tuple[Path, Path]:
    """Write the per-case CSV and a human-readable summary; returns both paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if timestamp is None:
        timestamp = _dt.datetime.now().strftime("%Y%m%dT%H%M%S")
    backend = runs[0].backend_name.replace(":", "-") if runs else "empty"
    variants = "-".join(dict.fromkeys(run.variant for run in runs)) or "none"
    temps = "-".join(dict.fromkeys(f"{run.temperature:.1f}" for run in runs))
    stem = f"eval_{backend}_{variants}_t{temps}_{timestamp}"

    csv_path = out_dir / f"{stem}.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "run_id",
                "variant",
                "temperature",
                "case_id",
                "qtype",
                "generated_jql",
                "verdict",
                "prompt_tokens",
                "completion_tokens",
            ]
        )
        for run in runs:
            run_id = f"{run.backend_name}:{run.variant}:t{run.temperature:.1f}"
            for outcome in run.cases:
                writer.writerow(
                    [
                        run_id,
                        run.variant,
                        f"{run.temperature:.1f}",
                        outcome.case_id,
                        outcome.qtype,
                        outcome.generated_jql or "",
                        outcome.verdict.value,
                        outcome.prompt_tokens,
                        outcome.completion_tokens,
                    ]
                )

    summary_path = out_dir / f"{stem}_summary.txt"
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write(format_summary(runs, decimal_comma=decimal_comma))
    return csv_path, summary_path


def format_summary(runs: Sequence[EvalRun], decimal_comma: bool = False) -> str:
    lines = [f"{'variant':<8} {'temp':>4} {'accuracy':>9} {'tokens':>7}  status"]
    for run in runs:
        status = "incomplete" if run.incomplete else "complete"
        lines.append(
            f"{run.variant:<8} {run.temperature:>4.1f} "
            f"{format_accuracy(run.accuracy, decimal_comma):>8}% "
            f"{run.prompt_token_estimate:>7}  {status}"
        )
    return "\n".join(lines) + "\n"
