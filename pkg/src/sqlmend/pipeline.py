"""Staged repair: rule-based rewrites first, then synthesis, in a fixed
order, stopping at the first stage that produces a passing query.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass

from .ast_nodes import Query, bind_columns
from .evaluator import Triage, Verdict
from .parser import ParseError, parse_lenient
from .rewrites import NoFix, RepairTag, fix_columns, fix_operators, fix_strings
from .synthesis import (
    _check_safe,
    remove_clauses,
    synth_clauses,
    synth_columns,
    synth_constants,
    synth_operators,
)
from .tables import ProblemSpec

DEFAULT_BUDGET_MS = 10_000
DEFAULT_SOLVE_BUDGET_MS = 2_000

# At most ten repair attempts per submission history, newest first.
MAX_REPAIR_ATTEMPTS = 10


class RepairStatus(enum.Enum):
    REPAIRED = "repaired"
    UNREPAIRABLE = "unrepairable"


@dataclass(frozen=True)
class RepairResult:
    status: RepairStatus
    original: str
    repaired: Query | None = None
    operations: tuple[RepairTag, ...] = ()
    elapsed_ms: float = 0.0
    reason: str = ""

    @property
    def is_repaired(self) -> bool:
        return self.status is RepairStatus.REPAIRED


def _result(
    status: RepairStatus,
    original: str,
    started: float,
    repaired: Query | None = None,
    operations: tuple[RepairTag, ...] = (),
    reason: str = "",
) -> RepairResult:
    elapsed = (time.monotonic() - started) * 1000.0
    return RepairResult(status, original, repaired, operations, elapsed, reason)


_SYNTH_STAGES = (
    (RepairTag.CONSTANT_SYNTHESIS, synth_constants),
    (RepairTag.OPERATOR_SYNTHESIS, synth_operators),
    (RepairTag.COLUMN_SYNTHESIS, synth_columns),
    (RepairTag.CLAUSE_REMOVAL, remove_clauses),
    (RepairTag.CLAUSE_SYNTHESIS, synth_clauses),
)


def _is_leaf_subsequence(result: Query, original: Query) -> bool:
    """True when result's WHERE leaves are an (in-order) subsequence of the
    original's, i.e. clause removal changed nothing it kept."""
    got = list(result.where.leaves) if result.where else []
    had = list(original.where.leaves) if original.where else []
    i = 0
    for leaf in had:
        if i < len(got) and got[i] == leaf:
            i += 1
    return i == len(got)


def _synthesis_tags(tag: RepairTag, result: Query, before: Query) -> tuple[RepairTag, ...]:
    if tag is RepairTag.CLAUSE_REMOVAL:
        if _is_leaf_subsequence(result, before):
            return (tag,)
        return (tag, RepairTag.COLUMN_SYNTHESIS)
    if tag is RepairTag.CLAUSE_SYNTHESIS:
        n = len(before.where.leaves) if before.where else 0
        kept = result.where.leaves[:n] if result.where else ()
        had = before.where.leaves if before.where else ()
        if tuple(kept) == tuple(had):
            return (tag,)
        return (tag, RepairTag.COLUMN_SYNTHESIS)
    return (tag,)


def repair(
    text: str,
    problem: ProblemSpec,
    budget_ms: float = DEFAULT_BUDGET_MS,
    solve_budget_ms: float = DEFAULT_SOLVE_BUDGET_MS,
) -> RepairResult:
    """Repair one incorrect submission against its problem.

    Stage order: operator mapping, column-list reconciliation, string
    quoting, then constant / operator / column synthesis, clause removal,
    clause synthesis.  The first stage whose output passes every pair ends
    the run.  Callers triage first; an already-passing input is reported
    unrepairable with reason "already_correct".
    """
    started = time.monotonic()
    deadline = started + budget_ms / 1000.0
    solve_budget_s = solve_budget_ms / 1000.0

    try:
        q = parse_lenient(text)
    except ParseError as exc:
        return _result(RepairStatus.UNREPAIRABLE, text, started, reason=f"parse_error: {exc}")
    q = bind_columns(q, set(problem.source_table.column_names))

    if q.is_clean and _check_safe(q, problem):
        return _result(RepairStatus.UNREPAIRABLE, text, started, reason="already_correct")

    tags: list[RepairTag] = []
    fixed, log = fix_operators(q)
    if log:
        tags.append(RepairTag.OPERATOR_MISMATCH)
    q = fixed
    try:
        fixed, log = fix_columns(q, problem)
        if log:
            tags.append(RepairTag.COLUMN_MISMATCH)
        q = fixed
    except NoFix:
        pass  # select list left as-is; later stages may still be moot
    fixed, log = fix_strings(q, problem.source_table)
    if log:
        tags.append(RepairTag.STRING_REPAIR)
    q = fixed

    if not q.is_clean:
        return _result(
            RepairStatus.UNREPAIRABLE, text, started, reason="unresolved_tokens"
        )
    if _check_safe(q, problem):
        if not tags:
            return _result(RepairStatus.UNREPAIRABLE, text, started, reason="already_correct")
        return _result(RepairStatus.REPAIRED, text, started, q, tuple(tags))

    for tag, stage in _SYNTH_STAGES:
        if time.monotonic() > deadline:
            return _result(RepairStatus.UNREPAIRABLE, text, started, reason="budget")
        outcome = stage(q, problem, solve_budget_s, deadline)
        if outcome is not None:
            all_tags = tuple(tags) + _synthesis_tags(tag, outcome, q)
            return _result(RepairStatus.REPAIRED, text, started, outcome, all_tags)
    reason = "budget" if time.monotonic() > deadline else "exhausted"
    return _result(RepairStatus.UNREPAIRABLE, text, started, reason=reason)


def repair_latest(
    attempts: list[tuple[str, Triage]],
    problem: ProblemSpec,
    budget_ms: float = DEFAULT_BUDGET_MS,
    _repair=repair,
) -> RepairResult:
    """Repair a submission history: walk incorrect attempts newest first,
    returning the first successful repair, giving up after ten failures."""
    failures = 0
    for text, verdict in reversed(attempts):
        if verdict.verdict is Verdict.CORRECT:
            continue
        result = _repair(text, problem, budget_ms)
        if result.is_repaired:
            return result
        failures += 1
        if failures >= MAX_REPAIR_ATTEMPTS:
            break
    return RepairResult(RepairStatus.UNREPAIRABLE, attempts[-1][0] if attempts else "", reason="exhausted_attempts")
