from __future__ import annotations

import pytest

from sqlmend.classifier import (
    Category,
    SEMANTIC_CATEGORIES,
    SYNTAX_CATEGORIES,
    classify,
)
from sqlmend.evaluator import Verdict, triage


def report_for(text, problem):
    result = triage(text, problem)
    assert result.verdict is not Verdict.CORRECT
    return classify(text, result, problem)


class TestSpecExamples:
    def test_broken_operator(self, problems):
        report = report_for("SELECT RUI FROM bravo WHERE CUI1 == 'C0000039'", problems["bravo"])
        assert report.categories == {Category.BROKEN_OPERATOR}

    def test_quotes_on_strings(self, problems):
        report = report_for("SELECT * FROM foxtrot WHERE TTY = PT", problems["foxtrot"])
        assert report.categories == {Category.QUOTES_ON_STRINGS}

    def test_wrong_constant_found_by_synthesis(self, problems):
        # Same query as gold except the boundary constant.
        report = report_for(
            "SELECT RSAB, TFR, CFR FROM delta WHERE CFR < 1834", problems["delta"]
        )
        assert report.categories == {Category.WRONG_VALUES_IN_WHERE}


class TestCorpus:
    def test_every_expected_category_assigned(self, problems, triage_corpus):
        for record in triage_corpus:
            expected = record.get("expect_category")
            if expected is None:
                continue
            report = report_for(record["query"], problems[record["problem"]])
            assert Category(expected) in report.categories, record["query"]

    def test_family_exclusivity_and_nonempty(self, problems, triage_corpus):
        for record in triage_corpus:
            if record["expect_verdict"] == "correct":
                continue
            result = triage(record["query"], problems[record["problem"]])
            report = classify(record["query"], result, problems[record["problem"]])
            assert report.categories, record["query"]
            if result.verdict is Verdict.SYNTAX_ERROR:
                assert report.categories <= SYNTAX_CATEGORIES
            else:
                assert report.categories <= SEMANTIC_CATEGORIES

    def test_deterministic(self, problems, triage_corpus):
        for record in triage_corpus[:6]:
            if record["expect_verdict"] == "correct":
                continue
            problem = problems[record["problem"]]
            result = triage(record["query"], problem)
            assert classify(record["query"], result, problem) == classify(
                record["query"], result, problem
            )


class TestGuards:
    def test_correct_submission_rejected(self, problems):
        result = triage("SELECT * FROM alpha WHERE min < 1", problems["alpha"])
        with pytest.raises(ValueError):
            classify("SELECT * FROM alpha WHERE min < 1", result, problems["alpha"])

    def test_unknown_column_is_column_reference_error(self, problems):
        report = report_for("SELECT nosuch FROM alpha", problems["alpha"])
        assert Category.COLUMN_REFERENCE_ERROR in report.categories

    def test_wrong_table_is_table_reference_error(self, problems):
        report = report_for("SELECT * FROM beta WHERE min < 1", problems["alpha"])
        assert Category.TABLE_REFERENCE_ERROR in report.categories
