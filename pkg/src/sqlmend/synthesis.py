"""Hole-based synthesis over WHERE clauses.

A query fragment (constant, operator, column, connector) is replaced by a
typed hole; the solver searches finite candidate domains for an assignment
making every (source, destination) pair pass.

Finite domains are complete here: with only {=, !=, <, <=, >, >=} against
single columns, the set of row subsets a comparison can select changes only
at data values, so integer domains of the data values plus one value below
the minimum and one above the maximum, and string domains of the data
values plus one absent sentinel, realize every achievable row subset.
Enumeration therefore loses no solutions relative to an unbounded solver.

The solver is a direct enumerator: candidates are generated in a fixed
tie-break order (a hole's original value first, then domain elements in
schema/ascending order) and the first satisfying assignment wins, biasing
repairs toward minimal edits.  Per-leaf candidates that select identical
row sets on every pair are deduplicated, which cannot change the first
satisfying assignment because the product order is coordinate-monotone.
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field

from .ast_nodes import (
    Bop,
    CMP_OPS,
    CmpOp,
    ColumnRef,
    Comparison,
    IntLit,
    Operand,
    Predicate,
    Query,
    STR_OPS,
    StrLit,
)
from .evaluator import EvalError, compare_values, eval_query, plan_query
from .tables import ColumnType, ProblemSpec, Table, Value, tables_equal


def check(q: Query, problem: ProblemSpec) -> bool:
    """True iff the query maps every pair's source to its destination.

    EvalErrors propagate; callers that want a boolean treat them as False.
    """
    for pair in problem.pairs:
        if not tables_equal(eval_query(q, pair.source), pair.destination, pair.ordered):
            return False
    return True


def _check_safe(q: Query, problem: ProblemSpec) -> bool:
    try:
        return check(q, problem)
    except EvalError:
        return False


class HoleKind(enum.Enum):
    CONST = "const"
    OP = "op"
    COL = "col"
    BOP = "bop"


@dataclass(frozen=True)
class Hole:
    """One typed hole.  `leaf` indexes the predicate's comparisons (or, for
    BOP holes, its connectors); `slot` is "lhs", "rhs", "op", or "bop".
    `original` is the concrete fragment the hole replaced, None for holes in
    synthesized subclauses."""

    id: int
    kind: HoleKind
    leaf: int
    slot: str
    original: object | None = None


@dataclass(frozen=True)
class HoleQuery:
    """A query plus the holes punched into its WHERE clause.

    The base query keeps concrete fragments at abstracted positions (and
    placeholders at synthesized ones); holes say which slots the solver may
    rewrite."""

    base: Query
    holes: tuple[Hole, ...]


class SolveStatus(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    BUDGET_EXCEEDED = "budget_exceeded"


Assignment = dict[int, object]


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    assignment: Assignment | None = None

    @property
    def is_sat(self) -> bool:
        return self.status is SolveStatus.SAT


def substitute(hq: HoleQuery, assignment: Assignment) -> Query:
    """Fill every hole from the assignment, yielding a concrete query."""
    if hq.base.where is None:
        return hq.base
    leaves = list(hq.base.where.leaves)
    connectors = list(hq.base.where.connectors)
    for hole in hq.holes:
        value = assignment[hole.id]
        if hole.slot == "bop":
            connectors[hole.leaf] = value  # type: ignore[assignment]
            continue
        leaf = leaves[hole.leaf]
        if hole.slot == "op":
            leaves[hole.leaf] = Comparison(leaf.lhs, value, leaf.rhs)  # type: ignore[arg-type]
            continue
        operand: Operand = (
            ColumnRef(value) if hole.kind is HoleKind.COL else _lit(value)  # type: ignore[arg-type]
        )
        if hole.slot == "lhs":
            leaves[hole.leaf] = Comparison(operand, leaf.op, leaf.rhs)
        else:
            leaves[hole.leaf] = Comparison(leaf.lhs, leaf.op, operand)
    return hq.base.replace(where=Predicate(tuple(leaves), tuple(connectors)))


# --- candidate domains ---


@dataclass
class _Domains:
    """Per-problem constant domains and column info, shared across leaves."""

    source: Table
    int_values: dict[str, list[int]] = field(default_factory=dict)
    str_values: dict[str, list[str]] = field(default_factory=dict)
    sentinel: str = ""

    @classmethod
    def build(cls, problem: ProblemSpec) -> "_Domains":
        source = problem.source_table
        dom = cls(source=source)
        all_strings: set[str] = set()
        for col in source.columns:
            values: set[Value] = set()
            for pair in problem.pairs:
                idx = pair.source.column_index(col.name)
                for row in pair.source.rows:
                    values.add(row[idx])
            if col.type is ColumnType.INT:
                ints = sorted(values)  # type: ignore[type-var]
                if ints:
                    ints = sorted(set(ints) | {ints[0] - 1, ints[-1] + 1})
                else:
                    ints = [0]
                dom.int_values[col.name] = ints  # type: ignore[assignment]
            else:
                strs = sorted(values)  # type: ignore[type-var]
                dom.str_values[col.name] = strs  # type: ignore[assignment]
                all_strings.update(strs)  # type: ignore[arg-type]
        sentinel = "absent"
        while sentinel in all_strings:
            sentinel += "_"
        dom.sentinel = sentinel
        return dom

    def column_type(self, name: str) -> ColumnType | None:
        idx = self.source.column_index(name)
        return self.source.columns[idx].type if idx is not None else None

    def const_domain(self, column: str, original: object | None) -> list[Value]:
        ctype = self.column_type(column)
        values: list[Value]
        if ctype is ColumnType.INT:
            values = list(self.int_values[column])
        else:
            values = list(self.str_values[column]) + [self.sentinel]
        out: list[Value] = []
        if original is not None and _value_type(original) is ctype:
            out.append(original)  # original value first
        for v in values:
            if v not in out:
                out.append(v)
        return out

    def col_domain(self, original: object | None) -> list[str]:
        names = [c.name for c in self.source.columns]
        if isinstance(original, str) and original in names:
            return [original] + [n for n in names if n != original]
        return names


def _value_type(v: object) -> ColumnType:
    return ColumnType.INT if isinstance(v, int) and not isinstance(v, bool) else ColumnType.STR


def _ops_for(ctype: ColumnType, original: CmpOp | None) -> list[CmpOp]:
    ops = list(CMP_OPS if ctype is ColumnType.INT else STR_OPS)
    if original is not None and original in ops:
        return [original] + [o for o in ops if o is not original]
    return ops


def _operand_value_for_mask(op: Operand, row: tuple[Value, ...], source: Table) -> Value | None:
    if isinstance(op, ColumnRef):
        idx = source.column_index(op.name)
        return None if idx is None else row[idx]
    if isinstance(op, (IntLit, StrLit)):
        return op.value
    return None


def _leaf_mask(leaf: Comparison, source: Table) -> int | None:
    """Bitmask of rows satisfying the comparison; None if it cannot be
    evaluated (unknown column, mismatched types, unresolved token)."""
    lhs_t = _static_type(leaf.lhs, source)
    rhs_t = _static_type(leaf.rhs, source)
    if lhs_t is None or rhs_t is None or lhs_t is not rhs_t:
        return None
    mask = 0
    for i, row in enumerate(source.rows):
        a = _operand_value_for_mask(leaf.lhs, row, source)
        b = _operand_value_for_mask(leaf.rhs, row, source)
        if compare_values(a, leaf.op, b):  # type: ignore[arg-type]
            mask |= 1 << i
    return mask


def _static_type(op: Operand, source: Table) -> ColumnType | None:
    if isinstance(op, ColumnRef):
        idx = source.column_index(op.name)
        return None if idx is None else source.columns[idx].type
    if isinstance(op, IntLit):
        return ColumnType.INT
    if isinstance(op, StrLit):
        return ColumnType.STR
    return None


@dataclass(frozen=True)
class _LeafCandidate:
    comparison: Comparison
    fragment: tuple[tuple[int, object], ...]  # (hole id, value) pairs
    masks: tuple[int, ...]  # one bitmask per pair


def _lit(v: Value) -> Operand:
    return IntLit(v) if isinstance(v, int) and not isinstance(v, bool) else StrLit(v)


def _leaf_candidates(
    leaf: Comparison,
    holes: dict[str, Hole],
    dom: _Domains,
    problem: ProblemSpec,
) -> list[_LeafCandidate]:
    """All concrete instantiations of one comparison, in tie-break order,
    deduplicated by their per-pair row masks.

    Nesting (slowest to fastest): column operands left to right, then the
    constant, then the operator; every hole tries its original value first.
    A constant hole's domain follows the column it is compared against, so
    constants are enumerated after the counterpart column is chosen.
    """
    out: list[_LeafCandidate] = []
    seen: set[tuple[int, ...]] = set()

    def finish(lhs: Operand, rhs: Operand, op: CmpOp, frag: dict[int, object]) -> None:
        cand = Comparison(lhs, op, rhs)
        masks = []
        for pair in problem.pairs:
            m = _leaf_mask(cand, pair.source)
            if m is None:
                return
            masks.append(m)
        key = tuple(masks)
        if key in seen:
            return
        seen.add(key)
        out.append(_LeafCandidate(cand, tuple(sorted(frag.items())), key))

    lhs_hole = holes.get("lhs")
    rhs_hole = holes.get("rhs")
    op_hole = holes.get("op")

    def op_choices(lhs: Operand, rhs: Operand) -> list[CmpOp]:
        lhs_t = _static_type(lhs, dom.source)
        rhs_t = _static_type(rhs, dom.source)
        if lhs_t is None or rhs_t is None or lhs_t is not rhs_t:
            return []
        if op_hole is None:
            return [leaf.op]
        return _ops_for(lhs_t, op_hole.original)  # type: ignore[arg-type]

    def emit(lhs: Operand, rhs: Operand, frag: dict[int, object]) -> None:
        for op in op_choices(lhs, rhs):
            full = dict(frag)
            if op_hole is not None:
                full[op_hole.id] = op
            finish(lhs, rhs, op, full)

    def side_options(hole: Hole | None, fixed: Operand) -> list[tuple[Operand, dict[int, object]]]:
        if hole is None:
            return [(fixed, {})]
        assert hole.kind is HoleKind.COL
        return [(ColumnRef(n), {hole.id: n}) for n in dom.col_domain(hole.original)]

    def const_options(hole: Hole, counterpart: Operand) -> list[tuple[Operand, dict[int, object]]]:
        if not isinstance(counterpart, ColumnRef) or dom.column_type(counterpart.name) is None:
            return []
        return [(_lit(v), {hole.id: v}) for v in dom.const_domain(counterpart.name, hole.original)]

    if lhs_hole is not None and lhs_hole.kind is HoleKind.CONST:
        # Constant on the left: resolve the right side (the column) first.
        for rhs, rfrag in side_options(rhs_hole, leaf.rhs):
            for lhs, lfrag in const_options(lhs_hole, rhs):
                emit(lhs, rhs, {**rfrag, **lfrag})
        return out
    for lhs, lfrag in side_options(lhs_hole, leaf.lhs):
        if rhs_hole is not None and rhs_hole.kind is HoleKind.CONST:
            rhs_opts = const_options(rhs_hole, lhs)
        else:
            rhs_opts = side_options(rhs_hole, leaf.rhs)
        for rhs, rfrag in rhs_opts:
            emit(lhs, rhs, {**lfrag, **rfrag})
    return out


# --- the solver ---

_BUDGET_CHECK_EVERY = 1024


def solve(
    hq: HoleQuery,
    problem: ProblemSpec,
    budget_s: float = 2.0,
    deadline: float | None = None,
) -> SolveResult:
    """Search the candidate domains for an assignment satisfying all pairs.

    Returns the first satisfying assignment in tie-break order, Unsat when
    the domains are exhausted, or BudgetExceeded (treated as Unsat by
    callers) when the time budget runs out.
    """
    stop_at = time.monotonic() + budget_s
    if deadline is not None:
        stop_at = min(stop_at, deadline)

    base = hq.base
    try:
        plans = [plan_query(base.replace(where=None), pair.source) for pair in problem.pairs]
    except EvalError:
        return SolveResult(SolveStatus.UNSAT)
    # Synthesis never edits the select list, so mismatched output columns
    # can never pass, whatever the predicate.
    for plan, pair in zip(plans, problem.pairs):
        if plan.out_columns != pair.destination.columns:
            return SolveResult(SolveStatus.UNSAT)

    if base.where is None:
        if _check_safe(base, problem):
            return SolveResult(SolveStatus.SAT, {})
        return SolveResult(SolveStatus.UNSAT)

    dom = _Domains.build(problem)
    pred = base.where
    n = len(pred.leaves)
    holes_by_leaf: list[dict[str, Hole]] = [{} for _ in range(n)]
    bop_holes: dict[int, Hole] = {}
    for hole in hq.holes:
        if hole.slot == "bop":
            bop_holes[hole.leaf] = hole
        else:
            holes_by_leaf[hole.leaf][hole.slot] = hole

    # Dimensions in syntactic order: leaf 0, connector 0, leaf 1, ...
    dims: list[list[object]] = []
    for i in range(n):
        if i > 0:
            hole = bop_holes.get(i - 1)
            if hole is None:
                dims.append([(pred.connectors[i - 1], ())])
            else:
                order = [Bop.AND, Bop.OR]
                if hole.original in order:
                    order = [hole.original] + [b for b in order if b is not hole.original]
                dims.append([(b, ((hole.id, b),)) for b in order])
        cands = _leaf_candidates(pred.leaves[i], holes_by_leaf[i], dom, problem)
        if not cands:
            return SolveResult(SolveStatus.UNSAT)
        dims.append(cands)

    n_pairs = len(problem.pairs)
    pass_memo: dict[tuple[int, ...], bool] = {}
    dests = [(pair.destination, pair.ordered) for pair in problem.pairs]

    def passes(mask_tuple: tuple[int, ...]) -> bool:
        cached = pass_memo.get(mask_tuple)
        if cached is not None:
            return cached
        ok = True
        for plan, mask, (dest, ordered) in zip(plans, mask_tuple, dests):
            selected = [i for i in range(len(plan.source.rows)) if mask >> i & 1]
            if not tables_equal(plan.assemble(selected), dest, ordered):
                ok = False
                break
        pass_memo[mask_tuple] = ok
        return ok

    counter = 0
    for combo in itertools.product(*dims):
        counter += 1
        if counter % _BUDGET_CHECK_EVERY == 0 and time.monotonic() > stop_at:
            return SolveResult(SolveStatus.BUDGET_EXCEEDED)
        # Fold the chosen leaves/connectors into one mask per pair.
        group = None
        total = [0] * n_pairs
        ok_shape = True
        for item in combo:
            if isinstance(item, _LeafCandidate):
                if group is None:
                    group = list(item.masks)
                else:
                    group = [g & m for g, m in zip(group, item.masks)]
            else:
                bop = item[0]
                if bop is Bop.OR:
                    total = [t | g for t, g in zip(total, group)]  # type: ignore[arg-type]
                    group = None
        if group is not None:
            total = [t | g for t, g in zip(total, group)]
        if not passes(tuple(total)):
            continue
        # Reconstruct the winning assignment and verify via real evaluation.
        assignment: Assignment = {}
        leaves: list[Comparison] = []
        connectors: list[Bop] = []
        for item in combo:
            if isinstance(item, _LeafCandidate):
                leaves.append(item.comparison)
                assignment.update(dict(item.fragment))
            else:
                connectors.append(item[0])
                assignment.update(dict(item[1]))
        result = base.replace(where=Predicate(tuple(leaves), tuple(connectors)))
        if not _check_safe(result, problem):
            raise RuntimeError("mask search and evaluator disagree on a candidate")
        return SolveResult(SolveStatus.SAT, assignment)
    return SolveResult(SolveStatus.UNSAT)


# --- hole builders for the five repair stages ---


def _next_id(holes: list[Hole]) -> int:
    return len(holes)


def _const_holes_for_leaf(
    leaf: Comparison, leaf_idx: int, holes: list[Hole], source: Table
) -> None:
    """Open a CONST hole for each literal compared against a column.  A
    comparison between two constants is left untouched."""
    lhs_col = isinstance(leaf.lhs, ColumnRef)
    rhs_col = isinstance(leaf.rhs, ColumnRef)
    if isinstance(leaf.rhs, (IntLit, StrLit)) and lhs_col:
        holes.append(Hole(_next_id(holes), HoleKind.CONST, leaf_idx, "rhs", leaf.rhs.value))
    elif isinstance(leaf.lhs, (IntLit, StrLit)) and rhs_col:
        holes.append(Hole(_next_id(holes), HoleKind.CONST, leaf_idx, "lhs", leaf.lhs.value))


def synth_constants(
    q: Query, problem: ProblemSpec, budget_s: float = 2.0, deadline: float | None = None
) -> Query | None:
    """Replace every WHERE constant compared against a column with a typed
    hole and solve.  Returns the repaired query or None (unsat)."""
    if q.where is None:
        return None
    _require_clean(q)
    holes: list[Hole] = []
    for i, leaf in enumerate(q.where.leaves):
        _const_holes_for_leaf(leaf, i, holes, problem.source_table)
    return _solved(HoleQuery(q, tuple(holes)), problem, budget_s, deadline)


def synth_operators(
    q: Query, problem: ProblemSpec, budget_s: float = 2.0, deadline: float | None = None
) -> Query | None:
    """Replace every comparison operator with a typed hole, re-opening the
    constant of each column/constant comparison alongside it (an operator
    change usually shifts the boundary constant too)."""
    if q.where is None:
        return None
    _require_clean(q)
    holes: list[Hole] = []
    for i, leaf in enumerate(q.where.leaves):
        _const_holes_for_leaf(leaf, i, holes, problem.source_table)
        holes.append(Hole(_next_id(holes), HoleKind.OP, i, "op", leaf.op))
    return _solved(HoleQuery(q, tuple(holes)), problem, budget_s, deadline)


def _column_holes(q: Query, leaf_indices: list[int]) -> list[Hole]:
    """Column-synthesis holes for the given leaves: every column operand is
    opened, and the constant of an opened comparison is re-opened with it
    (the new column's value domain differs from the old column's)."""
    holes: list[Hole] = []
    assert q.where is not None
    for i in leaf_indices:
        leaf = q.where.leaves[i]
        opened = False
        if isinstance(leaf.lhs, ColumnRef):
            holes.append(Hole(_next_id(holes), HoleKind.COL, i, "lhs", leaf.lhs.name))
            opened = True
        if isinstance(leaf.rhs, ColumnRef):
            holes.append(Hole(_next_id(holes), HoleKind.COL, i, "rhs", leaf.rhs.name))
            opened = True
        if opened:
            if isinstance(leaf.rhs, (IntLit, StrLit)):
                holes.append(Hole(_next_id(holes), HoleKind.CONST, i, "rhs", leaf.rhs.value))
            elif isinstance(leaf.lhs, (IntLit, StrLit)):
                holes.append(Hole(_next_id(holes), HoleKind.CONST, i, "lhs", leaf.lhs.value))
    return holes


def synth_columns(
    q: Query, problem: ProblemSpec, budget_s: float = 2.0, deadline: float | None = None
) -> Query | None:
    """Open every column operand (operators stay fixed); on failure, retry
    opening one subclause at a time, left to right."""
    if q.where is None:
        return None
    _require_clean(q)
    all_leaves = list(range(len(q.where.leaves)))
    result = _solved(HoleQuery(q, tuple(_column_holes(q, all_leaves))), problem, budget_s, deadline)
    if result is not None:
        return result
    if len(all_leaves) > 1:
        for i in all_leaves:
            if deadline is not None and time.monotonic() > deadline:
                return None
            result = _solved(
                HoleQuery(q, tuple(_column_holes(q, [i]))), problem, budget_s, deadline
            )
            if result is not None:
                return result
    return None


def _splice(q: Query, keep: tuple[int, ...]) -> Query:
    """Retain the given leaves; each retained leaf after the first keeps the
    connector immediately preceding it in the original predicate."""
    assert q.where is not None
    leaves = tuple(q.where.leaves[i] for i in keep)
    connectors = tuple(q.where.connectors[i - 1] for i in keep[1:])
    return q.replace(where=Predicate(leaves, connectors))


def remove_clauses(
    q: Query, problem: ProblemSpec, budget_s: float = 2.0, deadline: float | None = None
) -> Query | None:
    """Drop subclauses that block correctness: try every retained subset,
    larger subsets first, re-running column synthesis on the remainder.  On
    total failure the original clause set stands (None is returned)."""
    if q.where is None or len(q.where.leaves) < 2:
        return None
    _require_clean(q)
    n = len(q.where.leaves)
    for k in range(n - 1, 0, -1):
        for keep in itertools.combinations(range(n), k):
            if deadline is not None and time.monotonic() > deadline:
                return None
            result = synth_columns(_splice(q, keep), problem, budget_s, deadline)
            if result is not None:
                return result
    return None


MAX_LEAVES = 5


def synth_clauses(
    q: Query, problem: ProblemSpec, budget_s: float = 2.0, deadline: float | None = None
) -> Query | None:
    """Append synthesized subclauses `BOP col op const` to the column-
    synthesis abstraction of the query (or to an empty predicate), one at a
    time, until the pairs pass or the predicate reaches five subclauses."""
    _require_clean(q)
    if _check_safe(q, problem):
        return q
    n_orig = len(q.where.leaves) if q.where is not None else 0
    if n_orig >= MAX_LEAVES:
        return None
    source = problem.source_table
    if not source.columns:
        return None
    placeholder = Comparison(ColumnRef(source.columns[0].name), CmpOp.EQ, IntLit(0))
    for added in range(1, MAX_LEAVES - n_orig + 1):
        if deadline is not None and time.monotonic() > deadline:
            return None
        leaves = list(q.where.leaves) if q.where is not None else []
        connectors = list(q.where.connectors) if q.where is not None else []
        holes = _column_holes(q, list(range(n_orig))) if q.where is not None else []
        for j in range(added):
            leaf_idx = n_orig + j
            if leaf_idx > 0:
                connectors.append(Bop.AND)
                holes.append(Hole(len(holes), HoleKind.BOP, leaf_idx - 1, "bop"))
            leaves.append(placeholder)
            holes.append(Hole(len(holes), HoleKind.COL, leaf_idx, "lhs"))
            holes.append(Hole(len(holes), HoleKind.CONST, leaf_idx, "rhs"))
            holes.append(Hole(len(holes), HoleKind.OP, leaf_idx, "op"))
        widened = q.replace(where=Predicate(tuple(leaves), tuple(connectors)))
        result = _solved(HoleQuery(widened, tuple(holes)), problem, budget_s, deadline)
        if result is not None:
            return result
    return None


def _require_clean(q: Query) -> None:
    if not q.is_clean:
        raise ValueError("synthesis requires a cleanly parsed query")


def _solved(
    hq: HoleQuery, problem: ProblemSpec, budget_s: float, deadline: float | None
) -> Query | None:
    result = solve(hq, problem, budget_s, deadline)
    if result.is_sat:
        assert result.assignment is not None
        return substitute(hq, result.assignment)
    return None
