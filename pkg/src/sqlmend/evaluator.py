"""Execute queries against in-memory tables and triage submissions.

Evaluation order follows SQL: filter (WHERE), project (SELECT), collapse
duplicates (DISTINCT), then sort (ORDER BY, stable; ties keep source
order).  String ordering is code-point order, collation-free.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ast_nodes import (
    Bop,
    CmpOp,
    ColumnRef,
    Comparison,
    IntLit,
    Operand,
    Query,
    Star,
    StrLit,
    bind_columns,
)
from .parser import ParseError, parse_lenient
from .tables import Column, ColumnType, ProblemSpec, Table, Value, tables_equal


class EvalError(Exception):
    """A query cannot be executed; counts as a syntax error at triage."""


class UnknownTable(EvalError):
    pass


class UnknownColumn(EvalError):
    pass


class TypeMismatch(EvalError):
    pass


def _operand_type(op: Operand, source: Table) -> ColumnType:
    if isinstance(op, ColumnRef):
        idx = source.column_index(op.name)
        if idx is None:
            raise UnknownColumn(f"unknown column {op.name!r}")
        return source.columns[idx].type
    if isinstance(op, IntLit):
        return ColumnType.INT
    if isinstance(op, StrLit):
        return ColumnType.STR
    raise EvalError(f"unresolved bare token {op.text!r}")


def _operand_value(op: Operand, row: tuple[Value, ...], source: Table) -> Value:
    if isinstance(op, ColumnRef):
        return row[source.column_index(op.name)]  # type: ignore[index]
    if isinstance(op, (IntLit, StrLit)):
        return op.value
    raise EvalError(f"unresolved bare token {op.text!r}")


def compare_values(a: Value, op: CmpOp, b: Value) -> bool:
    if op is CmpOp.EQ:
        return a == b
    if op is CmpOp.NE:
        return a != b
    if op is CmpOp.LT:
        return a < b  # type: ignore[operator]
    if op is CmpOp.LE:
        return a <= b  # type: ignore[operator]
    if op is CmpOp.GT:
        return a > b  # type: ignore[operator]
    return a >= b  # type: ignore[operator]


def _leaf_holds(leaf: Comparison, row: tuple[Value, ...], source: Table) -> bool:
    return compare_values(
        _operand_value(leaf.lhs, row, source),
        leaf.op,
        _operand_value(leaf.rhs, row, source),
    )


@dataclass(frozen=True)
class QueryPlan:
    """Resolved projection and shaping for a query over one source schema.

    Splitting planning from row selection lets the synthesis engine reuse
    the projection while it searches over predicates.
    """

    source: Table
    out_columns: tuple[Column, ...]
    proj_indices: tuple[int, ...]
    distinct: bool
    # Sort key: None, ("out", i) over projected cells, or ("src", i).
    sort_key: tuple[str, int] | None
    sort_desc: bool

    def selected_rows(self, q: Query) -> list[int]:
        rows = []
        for i, row in enumerate(self.source.rows):
            if q.where is None or _predicate_holds(q.where, row, self.source):
                rows.append(i)
        return rows

    def assemble(self, selected: list[int]) -> Table:
        src_rows = self.source.rows
        projected = [
            (i, tuple(src_rows[i][j] for j in self.proj_indices)) for i in selected
        ]
        if self.distinct:
            seen = set()
            deduped = []
            for i, row in projected:
                if row not in seen:
                    seen.add(row)
                    deduped.append((i, row))
            projected = deduped
        if self.sort_key is not None:
            kind, idx = self.sort_key
            if kind == "out":
                projected = sorted(projected, key=lambda p: p[1][idx], reverse=self.sort_desc)
            else:
                projected = sorted(
                    projected, key=lambda p: src_rows[p[0]][idx], reverse=self.sort_desc
                )
        return Table(
            name="result",
            columns=self.out_columns,
            rows=tuple(row for _, row in projected),
        )


def _predicate_holds(pred, row, source) -> bool:
    value = None
    group = True
    for k, leaf in enumerate(pred.leaves):
        if k > 0 and pred.connectors[k - 1] is Bop.OR:
            value = group if value is None else (value or group)
            group = True
        # AND binds tighter: fold the leaf into the current group
        group = group and _leaf_holds(leaf, row, source)
    value = group if value is None else (value or group)
    return value


def plan_query(q: Query, source: Table) -> QueryPlan:
    """Resolve names and types; raises EvalError family on bad references."""
    if q.table != source.name:
        raise UnknownTable(f"unknown table {q.table!r}")
    if isinstance(q.select, Star):
        proj = tuple(range(len(source.columns)))
        out_cols = source.columns
    else:
        indices = []
        out_cols_list = []
        for item in q.select:
            idx = source.column_index(item.column)
            if idx is None:
                raise UnknownColumn(f"unknown column {item.column!r}")
            indices.append(idx)
            out_cols_list.append(Column(item.output_name, source.columns[idx].type))
        proj = tuple(indices)
        out_cols = tuple(out_cols_list)
        names = [c.name for c in out_cols]
        if len(set(names)) != len(names):
            # Result tables carry unique column names; a duplicated output
            # name cannot form one and reads as a database error.
            raise EvalError(f"duplicate output column in {names!r}")
    # Type-check every comparison once, against the schema.
    if q.where is not None:
        for leaf in q.where.leaves:
            if _operand_type(leaf.lhs, source) is not _operand_type(leaf.rhs, source):
                raise TypeMismatch(
                    f"type mismatch in comparison "
                    f"{leaf.lhs!r} {leaf.op.text} {leaf.rhs!r}"
                )
    sort_key = None
    desc = False
    if q.order_by is not None:
        desc = q.order_by.descending
        out_names = [c.name for c in out_cols]
        if q.order_by.column in out_names:
            sort_key = ("out", out_names.index(q.order_by.column))
        else:
            idx = source.column_index(q.order_by.column)
            if idx is None or q.distinct:
                # With DISTINCT the sort column must be part of the output.
                raise UnknownColumn(f"cannot ORDER BY {q.order_by.column!r}")
            sort_key = ("src", idx)
    return QueryPlan(
        source=source,
        out_columns=out_cols,
        proj_indices=proj,
        distinct=q.distinct,
        sort_key=sort_key,
        sort_desc=desc,
    )


def eval_query(q: Query, source: Table) -> Table:
    """Evaluate a clean query against a source table.

    Deterministic and total whenever the query's references resolve against
    the source schema; otherwise raises an EvalError subclass.
    """
    if not q.is_clean:
        raise EvalError("query carries unrepaired lenient tokens")
    plan = plan_query(q, source)
    return plan.assemble(plan.selected_rows(q))


class Verdict(enum.Enum):
    CORRECT = "correct"
    SYNTAX_ERROR = "syntax_error"
    SEMANTIC_ERROR = "semantic_error"


@dataclass(frozen=True)
class Triage:
    verdict: Verdict
    first_failing_pair: int | None = None  # 0-based pair index
    actual_output: Table | None = None
    query: Query | None = None  # parse result, when parsing succeeded
    detail: str = ""


@dataclass(frozen=True)
class FeedbackView:
    """What a participant sees after a submission."""

    revealed_pairs: int
    expected: Table
    actual: Table | None
    message: str


def triage(text: str, problem: ProblemSpec) -> Triage:
    """Classify a submission as correct, syntax error, or semantic error.

    Failing to parse, carrying unresolved lenient tokens, or failing to
    execute all count as syntax errors, mirroring a database error message.
    Otherwise the query runs against every pair in order.
    """
    try:
        q = parse_lenient(text)
    except ParseError as exc:
        return Triage(Verdict.SYNTAX_ERROR, detail=str(exc))
    q = bind_columns(q, set(problem.source_table.column_names))
    if not q.is_clean:
        return Triage(Verdict.SYNTAX_ERROR, query=q, detail="non-standard tokens")
    for i, pair in enumerate(problem.pairs):
        try:
            actual = eval_query(q, pair.source)
        except EvalError as exc:
            return Triage(Verdict.SYNTAX_ERROR, query=q, detail=str(exc))
        if not tables_equal(actual, pair.destination, pair.ordered):
            return Triage(
                Verdict.SEMANTIC_ERROR,
                first_failing_pair=i,
                actual_output=actual,
                query=q,
            )
    return Triage(Verdict.CORRECT, query=q)
