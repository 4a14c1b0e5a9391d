"""Rule-based rewrites: operator mapping, column-list reconciliation,
string quoting.  Each is deterministic, needs no search, and is idempotent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ast_nodes import (
    BareToken,
    ColumnRef,
    Comparison,
    LenientKind,
    Predicate,
    Query,
    SelectItem,
    Star,
    StrLit,
)
from .tables import ColumnType, ProblemSpec, Table


class RepairTag(str, enum.Enum):
    OPERATOR_MISMATCH = "OperatorMismatch"
    COLUMN_MISMATCH = "ColumnMismatch"
    STRING_REPAIR = "StringRepair"
    CONSTANT_SYNTHESIS = "ConstantSynthesis"
    OPERATOR_SYNTHESIS = "OperatorSynthesis"
    COLUMN_SYNTHESIS = "ColumnSynthesis"
    CLAUSE_REMOVAL = "ClauseRemoval"
    CLAUSE_SYNTHESIS = "ClauseSynthesis"


NON_SYNTHESIS_TAGS = (
    RepairTag.OPERATOR_MISMATCH,
    RepairTag.COLUMN_MISMATCH,
    RepairTag.STRING_REPAIR,
)


@dataclass(frozen=True)
class RewriteEntry:
    kind: RepairTag
    before: str
    after: str


RewriteLog = list[RewriteEntry]


class NoFix(Exception):
    """The select list cannot be reconciled with the destination schema."""


class Ambiguous(Exception):
    """A bare token compared against an integer column stayed unresolved."""


_OPERATOR_TEXT = {
    LenientKind.DOUBLE_EQ: ("==", "="),
    LenientKind.AMP_AMP: ("&&", "AND"),
    LenientKind.PIPE_PIPE: ("||", "OR"),
}


def fix_operators(q: Query) -> tuple[Query, RewriteLog]:
    """Map C/Java operators to their SQL equivalents: == / && / ||.

    The lenient parser already stores the SQL operator in the tree, so the
    rewrite clears the recorded flags, keeping everything else unchanged.
    """
    log: RewriteLog = []
    keep = set()
    for flag in sorted(q.lenient_flags, key=lambda f: f.position):
        if flag.kind in _OPERATOR_TEXT:
            before, after = _OPERATOR_TEXT[flag.kind]
            log.append(RewriteEntry(RepairTag.OPERATOR_MISMATCH, before, after))
        else:
            keep.add(flag)
    if not log:
        return q, []
    return q.replace(lenient_flags=frozenset(keep)), log


def _select_text(select: Star | tuple[SelectItem, ...]) -> str:
    if isinstance(select, Star):
        return "*"
    return ", ".join(
        f"{it.column} AS {it.alias}" if it.alias else it.column for it in select
    )


def fix_columns(q: Query, problem: ProblemSpec) -> tuple[Query, RewriteLog]:
    """Reconcile the select list with the destination schema.

    Sub-cases, first applicable per pass, repeated to a fixed point:
    star expansion, positional AS-rename, extension to the destination
    list, case-correction of unknown column names.  The WHERE clause is
    never touched.  Raises NoFix when the output names still cannot match
    the destination (the query is returned unchanged by the caller).
    """
    src_names = list(problem.source_table.column_names)
    dst_names = [c.name for c in problem.destination_columns]
    dst_in_src = all(n in src_names for n in dst_names)

    current = q
    log: RewriteLog = []
    for _ in range(4):  # each sub-case fires at most once before the fixpoint
        select = current.select
        changed = None
        if isinstance(select, Star):
            if list(problem.source_table.column_names) == dst_names:
                break  # SELECT * already matches
            if dst_in_src:
                changed = tuple(SelectItem(n) for n in dst_names)
        else:
            out_names = [it.output_name for it in select]
            known = all(it.column in src_names for it in select)
            if out_names == dst_names and known:
                break
            if known and len(select) == len(dst_names) and out_names != dst_names:
                # Rename by position, aliasing only where names differ.
                changed = tuple(
                    it if it.output_name == want else SelectItem(it.column, want)
                    for it, want in zip(select, dst_names)
                )
            elif (
                known
                and dst_in_src
                and set(out_names) <= set(dst_names)
                and len(select) < len(dst_names)
            ):
                changed = tuple(SelectItem(n) for n in dst_names)
            else:
                corrected = _case_correct(select, src_names)
                if corrected is not None:
                    changed = corrected
        if changed is None:
            break
        entry = RewriteEntry(
            RepairTag.COLUMN_MISMATCH,
            f"SELECT {_select_text(select)}",
            f"SELECT {_select_text(changed)}",
        )
        log.append(entry)
        current = current.replace(select=changed)

    if not _output_matches(current.select, problem):
        raise NoFix(
            f"select list cannot produce destination columns {dst_names!r}"
        )
    return current, log


def _case_correct(
    select: tuple[SelectItem, ...], src_names: list[str]
) -> tuple[SelectItem, ...] | None:
    lower_map: dict[str, list[str]] = {}
    for n in src_names:
        lower_map.setdefault(n.lower(), []).append(n)
    items = []
    fixed = False
    for it in select:
        if it.column not in src_names:
            match = lower_map.get(it.column.lower(), [])
            if len(match) == 1:
                items.append(SelectItem(match[0], it.alias))
                fixed = True
                continue
        items.append(it)
    return tuple(items) if fixed else None


def _output_matches(select: Star | tuple[SelectItem, ...], problem: ProblemSpec) -> bool:
    dst_names = [c.name for c in problem.destination_columns]
    if isinstance(select, Star):
        return list(problem.source_table.column_names) == dst_names
    return [it.output_name for it in select] == dst_names and all(
        it.column in problem.source_table.column_names for it in select
    )


def fix_strings(q: Query, source: Table) -> tuple[Query, RewriteLog]:
    """Normalize string literals in the WHERE clause.

    Double-quoted literals become single-quoted; a bare token becomes a
    string literal when compared against a string column (unless its text
    names a source column, in which case it becomes a column reference).
    A bare token compared against an integer column stays unresolved and
    keeps its flag, leaving the query a syntax error.
    """
    if q.where is None:
        # Double-quote flags can only arise in the WHERE clause.
        return q, []
    log: RewriteLog = []
    flags = set(q.lenient_flags)
    col_names = set(source.column_names)

    def column_type(name: str) -> ColumnType | None:
        idx = source.column_index(name)
        return source.columns[idx].type if idx is not None else None

    # Pass 1: bare tokens naming a column become references.
    leaves: list[Comparison] = []
    for leaf in q.where.leaves:
        lhs, rhs = leaf.lhs, leaf.rhs
        for side, op in (("lhs", lhs), ("rhs", rhs)):
            if isinstance(op, BareToken) and op.text in col_names:
                ref = ColumnRef(op.text)
                flags = {
                    f
                    for f in flags
                    if not (f.kind is LenientKind.BARE_TOKEN and f.position == op.position)
                }
                log.append(RewriteEntry(RepairTag.STRING_REPAIR, op.text, op.text))
                if side == "lhs":
                    lhs = ref
                else:
                    rhs = ref
        leaves.append(Comparison(lhs, leaf.op, rhs))

    # Pass 2: remaining bare tokens against string columns become literals.
    resolved: list[Comparison] = []
    for leaf in leaves:
        lhs, rhs = leaf.lhs, leaf.rhs
        for side, op, other in (("lhs", lhs, rhs), ("rhs", rhs, lhs)):
            if not isinstance(op, BareToken):
                continue
            if isinstance(other, ColumnRef) and column_type(other.name) is ColumnType.STR:
                lit = StrLit(op.text)
                flags = {
                    f
                    for f in flags
                    if not (f.kind is LenientKind.BARE_TOKEN and f.position == op.position)
                }
                log.append(
                    RewriteEntry(RepairTag.STRING_REPAIR, op.text, f"'{op.text}'")
                )
                if side == "lhs":
                    lhs = lit
                else:
                    rhs = lit
        resolved.append(Comparison(lhs, leaf.op, rhs))

    # Double-quoted literals already parsed as strings; clear their flags.
    dq = [f for f in sorted(flags, key=lambda f: f.position) if f.kind is LenientKind.DOUBLE_QUOTED_STRING]
    for f in dq:
        flags.discard(f)
        log.append(RewriteEntry(RepairTag.STRING_REPAIR, '"..."', "'...'"))

    if not log:
        return q, []
    return (
        q.replace(
            where=Predicate(tuple(resolved), q.where.connectors),
            lenient_flags=frozenset(flags),
        ),
        log,
    )
