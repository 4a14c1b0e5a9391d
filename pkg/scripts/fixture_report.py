#!/usr/bin/env python3
"""Run the corpus harness over the bundled fixtures and print the
per-repair-type breakdown next to each record's before/after text.

Usage: python scripts/fixture_report.py
"""

from __future__ import annotations

import json
from pathlib import Path

from sqlmend.harness import run
from sqlmend.pipeline import repair
from sqlmend.printer import print_query
from sqlmend.tables import load_problem_dir

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def main() -> None:
    problems = load_problem_dir(FIXTURES / "problems")
    print("repair-type fixture suite")
    print("=" * 72)
    for line in (FIXTURES / "corpus_tablev.jsonl").read_text().splitlines():
        record = json.loads(line)
        result = repair(record["query"], problems[record["problem"]])
        after = print_query(result.repaired) if result.repaired else "(unrepaired)"
        print(f"[{record['expect_stage']}]")
        print(f"  before: {record['query']}")
        print(f"  after:  {after}")
        print(f"  tags:   {', '.join(t.value for t in result.operations)}"
              f"  ({result.elapsed_ms:.1f} ms)")
    report = run(FIXTURES / "corpus_tablev.jsonl", FIXTURES / "problems")
    print("=" * 72)
    print(json.dumps(report.to_dict(), indent=2))


if __name__ == "__main__":
    main()
