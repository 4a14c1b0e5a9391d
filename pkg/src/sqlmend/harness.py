"""Batch triage, classification, and repair over a query corpus.

Input is JSON Lines, one submission per line:
    {"problem": id, "query": text, "participant": optional, "ts": optional}
Output is a summary report plus one JSON line per record with its verdict,
categories, repair status, tags, and timing.  Processing is deterministic:
re-running on the same corpus yields identical output up to timing fields.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from .classifier import classify
from .evaluator import Verdict, triage
from .pipeline import DEFAULT_BUDGET_MS, repair
from .printer import print_query
from .tables import ProblemSpec, SchemaError, load_problem_dir


class CorpusError(Exception):
    """The corpus file or a record in it cannot be read."""


@dataclass(frozen=True)
class CorpusRecord:
    problem_id: str
    query_text: str
    participant: str | None = None
    ts: str | None = None


@dataclass
class RunReport:
    totals: dict[str, int] = field(
        default_factory=lambda: {"correct": 0, "syntax_error": 0, "semantic_error": 0}
    )
    per_category: dict[str, int] = field(default_factory=dict)
    per_repair_type: dict[str, int] = field(default_factory=dict)
    repaired: int = 0
    timings_ms: dict[str, list[float]] = field(
        default_factory=lambda: {"repaired": [], "unrepairable": []}
    )

    @property
    def corpus_size(self) -> int:
        return sum(self.totals.values())

    @property
    def repair_rate(self) -> float | None:
        incorrect = self.totals["syntax_error"] + self.totals["semantic_error"]
        if incorrect == 0:
            return None
        return self.repaired / incorrect

    def to_dict(self) -> dict:
        def stats(values: list[float]) -> dict | None:
            if not values:
                return None
            return {"median": statistics.median(values), "max": max(values)}

        return {
            "totals": dict(self.totals),
            "per_category": dict(sorted(self.per_category.items())),
            "per_repair_type": dict(sorted(self.per_repair_type.items())),
            "repair_rate": self.repair_rate,
            "timing_ms": {k: stats(v) for k, v in self.timings_ms.items()},
        }


def read_corpus(path: str | Path) -> list[CorpusRecord]:
    records = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from None
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path}:{n}: invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or "problem" not in doc or "query" not in doc:
            raise CorpusError(f"{path}:{n}: records need 'problem' and 'query'")
        records.append(
            CorpusRecord(doc["problem"], doc["query"], doc.get("participant"), doc.get("ts"))
        )
    return records


def process_record(
    record: CorpusRecord, problems: dict[str, ProblemSpec], budget_ms: float
) -> dict:
    """Triage, classify, and (when incorrect) repair one submission."""
    line: dict = {
        "problem": record.problem_id,
        "query": record.query_text,
        "participant": record.participant,
        "ts": record.ts,
    }
    problem = problems.get(record.problem_id)
    if problem is None:
        line["error"] = f"unknown problem {record.problem_id!r}"
        return line
    result = triage(record.query_text, problem)
    line["verdict"] = result.verdict.value
    if result.verdict is not Verdict.CORRECT:
        report = classify(record.query_text, result, problem)
        line["categories"] = sorted(c.value for c in report.categories)
        started = time.monotonic()
        fix = repair(record.query_text, problem, budget_ms)
        elapsed_ms = (time.monotonic() - started) * 1000.0
        line["repair"] = {
            "status": fix.status.value,
            "tags": [t.value for t in fix.operations],
            "repaired_query": print_query(fix.repaired) if fix.repaired else None,
            "elapsed_ms": elapsed_ms,
        }
    return line


def run(
    corpus_path: str | Path,
    problems_dir: str | Path,
    budget_ms: float = DEFAULT_BUDGET_MS,
    jsonl_out: str | Path | None = None,
    report_out: str | Path | None = None,
) -> RunReport:
    """Run the harness; per-record failures are recorded, never fatal."""
    try:
        problems = load_problem_dir(problems_dir)
    except (SchemaError, OSError) as exc:
        raise CorpusError(f"cannot load problems from {problems_dir}: {exc}") from None
    records = read_corpus(corpus_path)
    report = RunReport()
    lines = []
    for record in records:
        try:
            line = process_record(record, problems, budget_ms)
        except Exception as exc:  # per-record failures are recorded, never fatal
            line = {
                "problem": record.problem_id,
                "query": record.query_text,
                "error": f"{type(exc).__name__}: {exc}",
            }
        lines.append(line)
        verdict = line.get("verdict")
        if verdict is None:
            continue
        report.totals[verdict] += 1
        for cat in line.get("categories", []):
            report.per_category[cat] = report.per_category.get(cat, 0) + 1
        fix = line.get("repair")
        if fix is not None:
            if fix["status"] == "repaired":
                report.repaired += 1
                report.timings_ms["repaired"].append(fix["elapsed_ms"])
                for tag in fix["tags"]:
                    report.per_repair_type[tag] = report.per_repair_type.get(tag, 0) + 1
            else:
                report.timings_ms["unrepairable"].append(fix["elapsed_ms"])
    if jsonl_out is not None:
        with Path(jsonl_out).open("w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(json.dumps(line) + "\n")
    if report_out is not None:
        Path(report_out).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return report
