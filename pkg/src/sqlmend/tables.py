"""Typed in-memory relations and problem specifications.

A problem is a set of (source, destination) table pairs acting as test
cases: a query solves the problem iff it maps every source to its
destination.  Tables are immutable after load and freely shareable.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path


class ColumnType(enum.Enum):
    INT = "int"
    STR = "str"


Value = int | str


class SchemaError(Exception):
    """Problem file is malformed (bad JSON, missing fields, bad shapes)."""


class CellTypeError(SchemaError):
    """A cell's value does not match its column type."""


class ArityError(SchemaError):
    """A row's length does not match the column count."""


@dataclass(frozen=True)
class Column:
    name: str
    type: ColumnType


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[Column, ...]
    rows: tuple[tuple[Value, ...], ...]

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate column names in table {self.name!r}")
        for r, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ArityError(
                    f"table {self.name!r} row {r}: arity {len(row)} != {len(self.columns)}"
                )
            for cell, col in zip(row, self.columns):
                if not _cell_matches(cell, col.type):
                    raise CellTypeError(
                        f"table {self.name!r} row {r} column {col.name!r}: "
                        f"{cell!r} is not {col.type.value}"
                    )

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column_index(self, name: str) -> int | None:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        return None


def _cell_matches(cell: Value, ctype: ColumnType) -> bool:
    if ctype is ColumnType.INT:
        return isinstance(cell, int) and not isinstance(cell, bool)
    return isinstance(cell, str)


@dataclass(frozen=True)
class TablePair:
    source: Table
    destination: Table
    ordered: bool = False


@dataclass(frozen=True)
class ProblemSpec:
    id: str
    pairs: tuple[TablePair, ...]
    description: str = ""

    def __post_init__(self) -> None:
        if not self.pairs:
            raise SchemaError(f"problem {self.id!r} has no table pairs")
        src_schema = [(p.source.name, p.source.columns) for p in self.pairs]
        dst_schema = [(p.destination.name, p.destination.columns) for p in self.pairs]
        if len(set(src_schema)) != 1 or len(set(dst_schema)) != 1:
            raise SchemaError(f"problem {self.id!r}: pairs do not share schemas")

    @property
    def source_table(self) -> Table:
        return self.pairs[0].source

    @property
    def source_columns(self) -> tuple[Column, ...]:
        return self.pairs[0].source.columns

    @property
    def destination_columns(self) -> tuple[Column, ...]:
        return self.pairs[0].destination.columns


def _parse_table(obj: object, what: str) -> Table:
    if not isinstance(obj, dict):
        raise SchemaError(f"{what}: expected an object")
    try:
        name = obj["name"]
        columns = obj["columns"]
        rows = obj["rows"]
    except KeyError as exc:
        raise SchemaError(f"{what}: missing field {exc.args[0]!r}") from None
    if not isinstance(name, str) or not isinstance(columns, list) or not isinstance(rows, list):
        raise SchemaError(f"{what}: bad field types")
    cols = []
    for c in columns:
        if not isinstance(c, dict) or "name" not in c or "type" not in c:
            raise SchemaError(f"{what}: bad column entry {c!r}")
        try:
            ctype = ColumnType(c["type"])
        except ValueError:
            raise SchemaError(f"{what}: unknown column type {c['type']!r}") from None
        cols.append(Column(c["name"], ctype))
    tuple_rows = []
    for row in rows:
        if not isinstance(row, list):
            raise SchemaError(f"{what}: row is not a list")
        tuple_rows.append(tuple(row))
    return Table(name, tuple(cols), tuple(tuple_rows))


def load_problem(path: str | Path) -> ProblemSpec:
    """Load and validate one problem file (see the JSON schema in README)."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    for required in ("id", "pairs"):
        if required not in doc:
            raise SchemaError(f"{path}: missing field {required!r}")
    ordered = bool(doc.get("ordered", False))
    pairs_doc = doc["pairs"]
    if not isinstance(pairs_doc, list) or not pairs_doc:
        raise SchemaError(f"{path}: 'pairs' must be a non-empty array")
    pairs = []
    for i, p in enumerate(pairs_doc):
        if not isinstance(p, dict) or "source" not in p or "destination" not in p:
            raise SchemaError(f"{path}: pair {i} must have source and destination")
        pairs.append(
            TablePair(
                source=_parse_table(p["source"], f"{path}: pair {i} source"),
                destination=_parse_table(p["destination"], f"{path}: pair {i} destination"),
                ordered=ordered,
            )
        )
    return ProblemSpec(id=doc["id"], pairs=tuple(pairs), description=doc.get("description", ""))


def load_problem_dir(directory: str | Path) -> dict[str, ProblemSpec]:
    """Load every *.json problem in a directory, keyed by problem id."""
    problems: dict[str, ProblemSpec] = {}
    for path in sorted(Path(directory).glob("*.json")):
        spec = load_problem(path)
        if spec.id in problems:
            raise SchemaError(f"duplicate problem id {spec.id!r}")
        problems[spec.id] = spec
    return problems


def tables_equal(a: Table, b: Table, ordered: bool) -> bool:
    """Column names, order, and types must match; rows compare as sequences
    when ordered, as multisets (bags) otherwise."""
    if a.columns != b.columns:
        return False
    if ordered:
        return list(a.rows) == list(b.rows)
    return Counter(a.rows) == Counter(b.rows)
