"""Canonical printer: single spaces, uppercase keywords, single quotes."""

from __future__ import annotations

from .ast_nodes import (
    BareToken,
    ColumnRef,
    IntLit,
    Operand,
    Predicate,
    Query,
    Star,
    StrLit,
)


class RenderError(Exception):
    """Raised when printing a query that still carries lenient tokens."""


def _operand(op: Operand) -> str:
    if isinstance(op, ColumnRef):
        return op.name
    if isinstance(op, IntLit):
        return str(op.value)
    if isinstance(op, StrLit):
        return "'" + op.value.replace("'", "''") + "'"
    if isinstance(op, BareToken):
        raise RenderError(f"unresolved bare token {op.text!r}")
    raise TypeError(f"unknown operand {op!r}")


def _predicate(p: Predicate) -> str:
    parts = [f"{_operand(p.leaves[0].lhs)} {p.leaves[0].op.text} {_operand(p.leaves[0].rhs)}"]
    for conn, leaf in zip(p.connectors, p.leaves[1:]):
        parts.append(conn.value)
        parts.append(f"{_operand(leaf.lhs)} {leaf.op.text} {_operand(leaf.rhs)}")
    return " ".join(parts)


def print_query(q: Query) -> str:
    """Render a clean query as canonical text; parse_lenient round-trips it.

    Raises RenderError if the query still carries lenient flags: lenient
    queries must be repaired before they are displayed.
    """
    if not q.is_clean:
        raise RenderError("query carries lenient tokens and cannot be rendered")
    parts = ["SELECT"]
    if q.distinct:
        parts.append("DISTINCT")
    if isinstance(q.select, Star):
        parts.append("*")
    else:
        cols = []
        for item in q.select:
            cols.append(f"{item.column} AS {item.alias}" if item.alias else item.column)
        parts.append(", ".join(cols))
    parts.append("FROM")
    parts.append(q.table)
    if q.where is not None:
        parts.append("WHERE")
        parts.append(_predicate(q.where))
    if q.order_by is not None:
        parts.append("ORDER BY")
        parts.append(q.order_by.column + (" DESC" if q.order_by.descending else ""))
    return " ".join(parts)
