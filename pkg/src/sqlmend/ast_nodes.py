"""AST node types for the supported SQL subset.

The subset covers single-table SELECT queries with an optional compound
WHERE clause (flat AND/OR over comparisons, AND binding tighter), DISTINCT,
ORDER BY on one column, and AS-renames in the select list.  Queries produced
by the lenient parser may additionally carry C/Java-flavored tokens recorded
as lenient flags; such queries must be rewritten before they can be printed
or executed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace


class CmpOp(enum.Enum):
    EQ = "="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @property
    def text(self) -> str:
        return self.value


# Canonical operator order used for deterministic enumeration.
CMP_OPS: tuple[CmpOp, ...] = (CmpOp.EQ, CmpOp.NE, CmpOp.LT, CmpOp.LE, CmpOp.GT, CmpOp.GE)

# Operators valid on string operands; integers admit all six.
STR_OPS: tuple[CmpOp, ...] = (CmpOp.EQ, CmpOp.NE)


class Bop(enum.Enum):
    AND = "AND"
    OR = "OR"


class LenientKind(enum.Enum):
    DOUBLE_EQ = "=="
    AMP_AMP = "&&"
    PIPE_PIPE = "||"
    DOUBLE_QUOTED_STRING = "double-quoted-string"
    BARE_TOKEN = "bare-token"


@dataclass(frozen=True)
class LenientToken:
    """One non-standard token the lenient parser accepted, by token index."""

    kind: LenientKind
    position: int


@dataclass(frozen=True)
class ColumnRef:
    name: str


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class StrLit:
    value: str


@dataclass(frozen=True)
class BareToken:
    """An unquoted word in operand position: either an unquoted string
    literal or a column reference, to be resolved against a schema.

    `position` is the token index recorded by the lenient parser and ties
    the operand to its lenient flag; -1 for synthetically built operands.
    """

    text: str
    position: int = -1


Operand = ColumnRef | IntLit | StrLit | BareToken


@dataclass(frozen=True)
class Comparison:
    lhs: Operand
    op: CmpOp
    rhs: Operand


@dataclass(frozen=True)
class Predicate:
    """Flat comparison list; connectors[i] joins leaves[i] and leaves[i+1].

    Evaluation uses standard SQL precedence (AND binds tighter than OR).
    """

    leaves: tuple[Comparison, ...]
    connectors: tuple[Bop, ...]

    def __post_init__(self) -> None:
        if not self.leaves:
            raise ValueError("a predicate needs at least one comparison")
        if len(self.connectors) != len(self.leaves) - 1:
            raise ValueError("connector count must be len(leaves) - 1")

    def or_groups(self) -> list[list[int]]:
        """Leaf indices grouped into the AND-groups of the OR-of-ANDs form."""
        groups: list[list[int]] = [[0]]
        for i, conn in enumerate(self.connectors):
            if conn is Bop.AND:
                groups[-1].append(i + 1)
            else:
                groups.append([i + 1])
        return groups


@dataclass(frozen=True)
class SelectItem:
    column: str
    alias: str | None = None

    @property
    def output_name(self) -> str:
        return self.alias if self.alias is not None else self.column


@dataclass(frozen=True)
class Star:
    """SELECT * placeholder."""


@dataclass(frozen=True)
class OrderBy:
    column: str
    descending: bool = False


@dataclass(frozen=True)
class Query:
    table: str
    select: Star | tuple[SelectItem, ...] = Star()
    distinct: bool = False
    where: Predicate | None = None
    order_by: OrderBy | None = None
    lenient_flags: frozenset[LenientToken] = field(default_factory=frozenset)

    @property
    def is_clean(self) -> bool:
        return not self.lenient_flags

    def replace(self, **changes) -> Query:
        return replace(self, **changes)


def bind_columns(q: Query, columns: set[str]) -> Query:
    """Resolve bare tokens that name a known column into column references.

    A bare token is only a candidate string literal when its text is not a
    known column; once a schema is in scope, column-named tokens become
    ordinary references and their lenient flags are dropped.
    """
    if q.where is None or not q.lenient_flags:
        return q
    new_leaves = []
    resolved_positions: set[int] = set()

    def resolve(op: Operand) -> Operand:
        if isinstance(op, BareToken) and op.text in columns:
            resolved_positions.add(op.position)
            return ColumnRef(op.text)
        return op

    for leaf in q.where.leaves:
        new_leaves.append(Comparison(resolve(leaf.lhs), leaf.op, resolve(leaf.rhs)))
    if not resolved_positions:
        return q
    flags = frozenset(
        f
        for f in q.lenient_flags
        if not (f.kind is LenientKind.BARE_TOKEN and f.position in resolved_positions)
    )
    return q.replace(
        where=Predicate(tuple(new_leaves), q.where.connectors),
        lenient_flags=flags,
    )
