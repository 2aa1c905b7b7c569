"""Evaluation harness tests: corpus shape, scoring, scripted behaviors,
ablation and sweep runs, report emission."""

import csv
from decimal import Decimal

import pytest

from jiragpt.evalharness import (
    EvalCase,
    Verdict,
    emit_report,
    format_accuracy,
    format_summary,
    run_ablation,
    run_temperature_sweep,
    score_case,
    scripted_backend,
)
from jiragpt.jql import parse_jql
from jiragpt.pipeline import Pipeline, QueryMode, QueryResult, QuerySpec

# corpus shape ---------------------------------------------------------------


def test_corpus_has_70_cases_in_three_types(corpus):
    assert len(corpus) == 70
    by_type = {1: 0, 2: 0, 3: 0}
    for case in corpus:
        by_type[case.qtype] += 1
    assert by_type == {1: 24, 2: 24, 3: 22}
    assert len({case.id for case in corpus}) == 70


def test_corpus_tag_counts_drive_the_ablation_staircase(corpus):
    by_tag = {}
    for case in corpus:
        by_tag[case.tag] = by_tag.get(case.tag, 0) + 1
    assert by_tag == {"ok": 12, "status": 4, "project": 10, "priority": 8, "never": 36}


def test_every_reference_jql_parses(corpus):
    for case in corpus:
        parse_jql(case.reference_jql)


def test_reference_jql_reproduces_expected_keys(corpus, jira):
    for case in corpus:
        got = {i.key for i in jira.search(case.reference_jql)}
        assert got == set(case.expected_keys), case.id


def test_non_ok_cases_have_non_empty_expected_sets(corpus):
    # guards against corrupted queries accidentally matching the expectation
    for case in corpus:
        if case.tag != "ok":
            assert case.expected_keys, case.id


# scoring --------------------------------------------------------------------


def result_with(keys):
    class _Stub:
        def __init__(self, key):
            self.key = key

    return QueryResult(jql="", parsed_jql=None, issues=[_Stub(k) for k in keys])


def case_with(keys):
    return EvalCase(
        id="t", question="q", qtype=1, reference_jql="project = GPT4", expected_keys=frozenset(keys)
    )


def test_score_case_is_exact_set_equality():
    case = case_with({"GPT4-1", "GPT4-2"})
    assert score_case(case, result_with(["GPT4-2", "GPT4-1"])) is Verdict.CORRECT
    assert score_case(case, result_with(["GPT4-1", "GPT4-2", "GPT4-1"])) is Verdict.CORRECT
    assert score_case(case, result_with(["GPT4-1"])) is Verdict.INCORRECT
    assert score_case(case, result_with(["GPT4-1", "GPT4-2", "GPT4-3"])) is Verdict.INCORRECT
    assert score_case(case_with(set()), result_with([])) is Verdict.CORRECT


def test_accuracy_rounds_half_up():
    from jiragpt.evalharness.harness import CaseOutcome, EvalRun

    def run_with(correct, total):
        run = EvalRun(variant="full", temperature=0.0, backend_name="b", prompt_token_estimate=0)
        for n in range(total):
            verdict = Verdict.CORRECT if n < correct else Verdict.INCORRECT
            run.cases.append(
                CaseOutcome(
                    case_id=f"q{n}",
                    qtype=1,
                    generated_jql="",
                    returned_keys=frozenset(),
                    verdict=verdict,
                )
            )
        return run

    assert run_with(12, 70).accuracy == Decimal("17.14")
    assert run_with(16, 70).accuracy == Decimal("22.86")
    assert run_with(26, 70).accuracy == Decimal("37.14")
    assert run_with(34, 70).accuracy == Decimal("48.57")
    assert run_with(1, 3).accuracy == Decimal("33.33")
    assert run_with(2, 3).accuracy == Decimal("66.67")
    # exact half: 0.125 rounds up to 0.13 at the percent scale
    assert run_with(1, 800).accuracy == Decimal("0.13")


def test_format_accuracy_decimal_comma():
    assert format_accuracy(Decimal("48.57")) == "48.57"
    assert format_accuracy(Decimal("48.57"), decimal_comma=True) == "48,57"


# scripted behaviors through the harness ------------------------------------


def test_golden_backend_scores_100_on_every_variant(corpus, jira):
    backend = scripted_backend("golden", corpus)
    runs = run_ablation(corpus, jira, backend)
    assert [run.variant for run in runs] == ["B1", "B1-2", "B1-3", "full"]
    for run in runs:
        assert run.accuracy == Decimal("100.00")
        assert not run.incomplete


def test_table1_backend_reproduces_the_ablation_staircase(corpus, jira):
    runs = run_ablation(corpus, jira, scripted_backend("table1", corpus))
    assert [run.correct_count for run in runs] == [12, 16, 26, 34]
    assert [str(run.accuracy) for run in runs] == ["17.14", "22.86", "37.14", "48.57"]
    estimates = [run.prompt_token_estimate for run in runs]
    assert estimates == sorted(set(estimates))


def test_table1_corruptions_are_wrong_not_errors(corpus, jira):
    run = run_ablation(corpus, jira, scripted_backend("table1", corpus), variants=("B1",))[0]
    verdicts = {o.verdict for o in run.cases}
    assert verdicts == {Verdict.CORRECT, Verdict.INCORRECT}
    assert not run.incomplete


def test_golden_backend_answers_complex_mode_consistently(corpus, jira):
    backend = scripted_backend("golden", corpus)
    pipeline = Pipeline(jira, backend)
    result = pipeline.run(
        QuerySpec(text="¿Cuántas tareas creadas este mes están en progreso?", mode=QueryMode.COMPLEX)
    )
    assert result.answer_text == "Hay 1 tarea creada este mes que está en progreso."
    assert [i.key for i in result.issues] == ["GPT4-2"]


def test_tempnoise_sweep_has_11_rows_and_is_seed_reproducible(corpus, jira):
    def sweep(seed):
        backend = scripted_backend("tempnoise", corpus, seed=seed)
        rows = run_temperature_sweep(corpus, jira, backend, repetitions=2)
        return [(t, str(a)) for t, a, _ in rows]

    first = sweep(0)
    assert len(first) == 11
    assert [t for t, _ in first] == [round(0.1 * i, 1) for i in range(11)]
    assert first[0][1] == "100.00"
    assert all(Decimal(a) <= Decimal("100.00") for _, a in first)
    assert sweep(0) == first
    assert sweep(99) != first


def test_abort_after_consecutive_errors_marks_run_incomplete(corpus, jira):
    class _Broken:
        behavior = type("B", (), {"name": "scripted:broken"})()

        def complete(self, req):
            from jiragpt.llm.gateway import EmptyCompletion

            raise EmptyCompletion("sin respuesta")

    runs = run_ablation(corpus, jira, _Broken(), variants=("full",), abort_after=5)
    assert runs[0].incomplete
    assert len(runs[0].cases) == 5
    assert all(o.verdict is Verdict.ERROR for o in runs[0].cases)


# reports --------------------------------------------------------------------


def test_emit_report_is_deterministic_with_pinned_timestamp(corpus, jira, tmp_path):
    runs = run_ablation(corpus, jira, scripted_backend("table1", corpus))
    first = emit_report(runs, tmp_path / "a", timestamp="20230915T100000")
    second = emit_report(runs, tmp_path / "b", timestamp="20230915T100000")
    assert first[0].name == second[0].name
    assert first[0].read_text() == second[0].read_text()
    assert first[1].read_text() == second[1].read_text()


def test_report_csv_shape_and_content(corpus, jira, tmp_path):
    runs = run_ablation(corpus, jira, scripted_backend("table1", corpus))
    csv_path, summary_path = emit_report(runs, tmp_path, timestamp="20230915T100000")
    assert csv_path.name == "eval_scripted-table1_B1-B1-2-B1-3-full_t0.0_20230915T100000.csv"
    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4 * 70
    assert set(rows[0]) == {
        "run_id",
        "variant",
        "temperature",
        "case_id",
        "qtype",
        "generated_jql",
        "verdict",
        "prompt_tokens",
        "completion_tokens",
    }
    full_correct = sum(1 for r in rows if r["variant"] == "full" and r["verdict"] == "correct")
    assert full_correct == 34

    summary = summary_path.read_text()
    assert "48.57%" in summary
    assert "17.14%" in summary


def test_summary_decimal_comma(corpus, jira):
    runs = run_ablation(corpus, jira, scripted_backend("table1", corpus))
    summary = format_summary(runs, decimal_comma=True)
    assert "48,57%" in summary
    assert "48.57%" not in summary


def test_unknown_behavior_name_rejected(corpus):
    with pytest.raises(KeyError):
        scripted_backend("inventado", corpus)
