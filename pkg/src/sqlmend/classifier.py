"""Heuristic error taxonomy for triaged submissions.

Syntax categories come from token- and tree-level detectors; semantic
categories from diffing actual vs expected output and from probing the
synthesis engine ("does a constant-only change make it pass?").  Detectors
favor precision over recall: when none fires, the fallback Misc category
of the matching family is assigned, and a report never mixes the two
families.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ast_nodes import ColumnRef, LenientKind, Query, Star
from .evaluator import Triage, Verdict
from .lexer import Token, TokenType, tokenize
from .synthesis import (
    Hole,
    HoleKind,
    HoleQuery,
    _check_safe,
    remove_clauses,
    solve,
    synth_clauses,
    synth_constants,
)
from .tables import ProblemSpec, tables_equal


class Category(str, enum.Enum):
    # syntax family
    BROKEN_OPERATOR = "BrokenOperator"
    COLUMN_REFERENCE_ERROR = "ColumnReferenceError"
    QUOTES_ON_STRINGS = "QuotesOnStrings"
    INCOMPLETE_QUERY = "IncompleteQuery"
    WRONG_ORDER = "WrongOrder"
    TABLE_REFERENCE_ERROR = "TableReferenceError"
    EXTRA_COMMAS = "ExtraCommas"
    MISSING_COMMAS = "MissingCommas"
    MISC_SYNTAX = "MiscSyntax"
    # semantic family
    WRONG_SUBCLAUSES_IN_WHERE = "WrongSubclausesInWhere"
    MISSING_OR_EXTRA_OPERATOR = "MissingOrExtraOperator"
    WRONG_VALUES_IN_WHERE = "WrongValuesInWhere"
    WRONG_ORDERING = "WrongOrdering"
    COLUMN_MISMATCH = "ColumnMismatch"
    WRONG_OPERATOR_IN_WHERE = "WrongOperatorInWhere"
    MISSING_JOIN = "MissingJoin"
    MISC_SEMANTIC = "MiscSemantic"


SYNTAX_CATEGORIES = frozenset(
    {
        Category.BROKEN_OPERATOR,
        Category.COLUMN_REFERENCE_ERROR,
        Category.QUOTES_ON_STRINGS,
        Category.INCOMPLETE_QUERY,
        Category.WRONG_ORDER,
        Category.TABLE_REFERENCE_ERROR,
        Category.EXTRA_COMMAS,
        Category.MISSING_COMMAS,
        Category.MISC_SYNTAX,
    }
)
SEMANTIC_CATEGORIES = frozenset(
    {
        Category.WRONG_SUBCLAUSES_IN_WHERE,
        Category.MISSING_OR_EXTRA_OPERATOR,
        Category.WRONG_VALUES_IN_WHERE,
        Category.WRONG_ORDERING,
        Category.COLUMN_MISMATCH,
        Category.WRONG_OPERATOR_IN_WHERE,
        Category.MISSING_JOIN,
        Category.MISC_SEMANTIC,
    }
)


@dataclass(frozen=True)
class ErrorReport:
    verdict: Verdict
    categories: frozenset[Category]


PROBE_BUDGET_S = 0.3


def classify(
    text: str, result: Triage, problem: ProblemSpec, probe_budget_s: float = PROBE_BUDGET_S
) -> ErrorReport:
    """Assign taxonomy categories to a non-correct triage result."""
    if result.verdict is Verdict.CORRECT:
        raise ValueError("correct submissions are not classified")
    if result.verdict is Verdict.SYNTAX_ERROR:
        cats = _syntax_categories(text, result.query, problem)
        if not cats:
            cats = {Category.MISC_SYNTAX}
    else:
        cats = _semantic_categories(result, problem, probe_budget_s)
        if not cats:
            cats = {Category.MISC_SEMANTIC}
    return ErrorReport(result.verdict, frozenset(cats))


# --- syntax detectors (token stream + parse result when available) ---


def _region(tokens: list[Token], start: int, enders: set[str]) -> list[Token]:
    out = []
    for tok in tokens[start:]:
        if tok.keyword in enders or tok.type is TokenType.EOF:
            break
        out.append(tok)
    return out


def _keyword_pos(tokens: list[Token], word: str) -> int | None:
    for i, tok in enumerate(tokens):
        if tok.keyword == word:
            return i
    return None


def _syntax_categories(text: str, query: Query | None, problem: ProblemSpec) -> set[Category]:
    tokens = tokenize(text)
    cats: set[Category] = set()

    if any(
        t.type in (TokenType.DOUBLE_EQ, TokenType.AMP_AMP, TokenType.PIPE_PIPE)
        for t in tokens
    ):
        cats.add(Category.BROKEN_OPERATOR)

    if any(t.type is TokenType.DQSTRING for t in tokens):
        cats.add(Category.QUOTES_ON_STRINGS)
    if query is not None and any(
        f.kind is LenientKind.BARE_TOKEN for f in query.lenient_flags
    ):
        cats.add(Category.QUOTES_ON_STRINGS)

    sel = _keyword_pos(tokens, "SELECT")
    frm = _keyword_pos(tokens, "FROM")
    whr = _keyword_pos(tokens, "WHERE")
    order = _keyword_pos(tokens, "ORDER")

    select_region: list[Token] = []
    if sel is not None:
        start = sel + 1
        if start < len(tokens) and tokens[start].keyword == "DISTINCT":
            start += 1
        select_region = _region(tokens, start, {"FROM", "WHERE", "ORDER"})
    from_region = _region(tokens, frm + 1, {"WHERE", "ORDER"}) if frm is not None else []

    # Keywords present but in an illegal relative order.
    for earlier, later in ((frm, sel), (whr, frm), (order, whr), (order, frm)):
        if earlier is not None and later is not None and earlier < later:
            cats.add(Category.WRONG_ORDER)
    distinct = _keyword_pos(tokens, "DISTINCT")
    if distinct is not None and sel is not None and distinct != sel + 1:
        cats.add(Category.WRONG_ORDER)

    # A required clause is absent entirely.
    if sel is None or frm is None or not select_region:
        cats.add(Category.INCOMPLETE_QUERY)
    elif not from_region or from_region[0].type not in (
        TokenType.IDENT,
        TokenType.QUALIFIED,
    ):
        cats.add(Category.INCOMPLETE_QUERY)

    # Comma anomalies in the select list.
    if sel is not None and frm is not None:
        kinds = [t.type for t in select_region]
        if select_region and select_region[-1].type is TokenType.COMMA:
            cats.add(Category.EXTRA_COMMAS)  # dangling comma before FROM
        if any(a is b is TokenType.COMMA for a, b in zip(kinds, kinds[1:])):
            cats.add(Category.EXTRA_COMMAS)
        if kinds and kinds[0] is TokenType.COMMA:
            cats.add(Category.EXTRA_COMMAS)
        if any(a is b is TokenType.IDENT for a, b in zip(kinds, kinds[1:])):
            cats.add(Category.MISSING_COMMAS)

    # Qualified names: a qualifier outside the FROM table list cites an
    # unknown table; several FROM tables make unqualified names ambiguous.
    from_tables = {t.text for t in from_region if t.type is TokenType.IDENT}
    qualifiers = {
        t.text.split(".", 1)[0] for t in tokens if t.type is TokenType.QUALIFIED
    }
    if qualifiers - from_tables:
        cats.add(Category.TABLE_REFERENCE_ERROR)
    multi_table = sum(1 for t in from_region if t.type is TokenType.COMMA) > 0
    if multi_table and (
        any(t.type is TokenType.IDENT for t in select_region)
        or any(
            t.type is TokenType.IDENT
            for t in (_region(tokens, whr + 1, {"ORDER"}) if whr is not None else [])
        )
    ):
        cats.add(Category.COLUMN_REFERENCE_ERROR)

    if query is not None:
        cats |= _resolution_categories(query, problem)
    return cats


def _resolution_categories(query: Query, problem: ProblemSpec) -> set[Category]:
    cats: set[Category] = set()
    source = problem.source_table
    if query.table != source.name:
        cats.add(Category.TABLE_REFERENCE_ERROR)
    known = set(source.column_names)
    referenced: list[str] = []
    output_names: list[str] = []
    if not isinstance(query.select, Star):
        referenced.extend(item.column for item in query.select)
        output_names = [item.output_name for item in query.select]
    if query.where is not None:
        for leaf in query.where.leaves:
            for side in (leaf.lhs, leaf.rhs):
                if isinstance(side, ColumnRef):
                    referenced.append(side.name)
    if any(name not in known for name in referenced):
        cats.add(Category.COLUMN_REFERENCE_ERROR)
    if query.order_by is not None and query.order_by.column not in known | set(output_names):
        cats.add(Category.COLUMN_REFERENCE_ERROR)
    return cats


# --- semantic detectors (output diff + synthesis probes) ---


def _op_only_fix_exists(q: Query, problem: ProblemSpec, budget_s: float) -> bool:
    """Does changing only comparison operators (constants fixed) make the
    query pass?"""
    if q.where is None:
        return False
    holes = tuple(
        Hole(i, HoleKind.OP, i, "op", leaf.op) for i, leaf in enumerate(q.where.leaves)
    )
    return solve(HoleQuery(q, holes), problem, budget_s).is_sat


def _semantic_categories(
    result: Triage, problem: ProblemSpec, budget_s: float
) -> set[Category]:
    cats: set[Category] = set()
    q = result.query
    assert q is not None and result.first_failing_pair is not None
    pair = problem.pairs[result.first_failing_pair]
    actual = result.actual_output
    assert actual is not None

    if actual.columns != pair.destination.columns:
        cats.add(Category.COLUMN_MISMATCH)
        return cats  # with the wrong output columns, no predicate probe can pass

    if (
        pair.ordered
        and tables_equal(actual, pair.destination, ordered=False)
        and not tables_equal(actual, pair.destination, ordered=True)
    ):
        cats.add(Category.WRONG_ORDERING)

    if _check_safe(q.replace(distinct=not q.distinct), problem):
        cats.add(Category.MISSING_OR_EXTRA_OPERATOR)

    # Synthesis probes, most specific first; only the first that fires is
    # reported (a broader change can always emulate a narrower one).
    if synth_constants(q, problem, budget_s) is not None:
        cats.add(Category.WRONG_VALUES_IN_WHERE)
    elif _op_only_fix_exists(q, problem, budget_s):
        cats.add(Category.WRONG_OPERATOR_IN_WHERE)
    elif (
        remove_clauses(q, problem, budget_s) is not None
        or synth_clauses(q, problem, budget_s) is not None
    ):
        cats.add(Category.WRONG_SUBCLAUSES_IN_WHERE)

    # Single-table scope: a second table is never referenced, so this
    # detector cannot fire; the category is retained for the taxonomy.
    if _needs_missing_join(problem):
        cats.add(Category.MISSING_JOIN)
    return cats


def _needs_missing_join(problem: ProblemSpec) -> bool:
    return False
