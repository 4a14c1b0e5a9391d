#!/usr/bin/env python3
"""Random-case agreement experiment.

Generates mutated-gold submissions over tiny random problems, repairs each,
and checks (a) every repaired query actually passes its pairs according to
an independent interpreter, and (b) whenever a brute-force search over flat
predicates finds a fix sharing the submission's select context, the repair
pipeline found one too.  Prints per-stage counts and timing percentiles.

Usage: python scripts/random_agreement.py [-n 500] [--seed 1]
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from reference import predicate_exists, random_case, reference_check  # noqa: E402

from sqlmend.parser import ParseError, parse_lenient  # noqa: E402
from sqlmend.pipeline import RepairStatus, repair  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("-n", "--cases", type=int, default=500)
    parser.add_argument("--seed", type=int, default=20260811)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    stage_counts: Counter[str] = Counter()
    timings: list[float] = []
    repaired = unsound = divergent = 0
    done = 0
    started = time.time()
    while done < args.cases:
        problem, gold, mutated, triaged = random_case(rng)
        if mutated is None:
            continue
        done += 1
        result = repair(mutated, problem)
        timings.append(result.elapsed_ms)
        if result.status is RepairStatus.REPAIRED:
            repaired += 1
            stage_counts.update(tag.value for tag in result.operations)
            if not reference_check(result.repaired, problem):
                unsound += 1
                print(f"UNSOUND: {mutated!r}")
        else:
            try:
                context = parse_lenient(mutated).replace(where=None, lenient_flags=frozenset())
            except ParseError:
                continue
            if predicate_exists(context, problem):
                divergent += 1
                print(f"MISSED FIX: {mutated!r} ({result.reason})")

    elapsed = time.time() - started
    print(f"\n{done} cases in {elapsed:.1f}s")
    print(f"repaired: {repaired} ({repaired / done:.1%})")
    print(f"soundness violations: {unsound}, completeness divergences: {divergent}")
    print(
        f"repair time ms: median {statistics.median(timings):.1f}, "
        f"p95 {statistics.quantiles(timings, n=20)[-1]:.1f}, max {max(timings):.1f}"
    )
    print("\nrepair operations across repaired queries:")
    for tag, count in stage_counts.most_common():
        print(f"  {tag:22s} {count:5d}")
    return 1 if (unsound or divergent) else 0


if __name__ == "__main__":
    sys.exit(main())
