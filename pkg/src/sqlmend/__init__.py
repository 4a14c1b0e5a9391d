"""sqlmend: example-driven repair for a small SQL subset.

Submissions are triaged against (source, destination) table pairs, errors
are classified, and incorrect queries are repaired by staged rewrites and
hole-based synthesis until every pair passes.
"""

from .ast_nodes import Query, bind_columns
from .evaluator import EvalError, Triage, Verdict, eval_query, triage
from .parser import ParseError, parse_lenient
from .printer import RenderError, print_query
from .pipeline import RepairResult, RepairStatus, repair, repair_latest
from .rewrites import RepairTag, fix_columns, fix_operators, fix_strings
from .synthesis import (
    check,
    remove_clauses,
    solve,
    substitute,
    synth_clauses,
    synth_columns,
    synth_constants,
    synth_operators,
)
from .tables import ProblemSpec, Table, TablePair, load_problem, load_problem_dir, tables_equal

__version__ = "0.1.0"

__all__ = [
    "EvalError",
    "ParseError",
    "ProblemSpec",
    "Query",
    "RenderError",
    "RepairResult",
    "RepairStatus",
    "RepairTag",
    "Table",
    "TablePair",
    "Triage",
    "Verdict",
    "bind_columns",
    "check",
    "eval_query",
    "fix_columns",
    "fix_operators",
    "fix_strings",
    "load_problem",
    "load_problem_dir",
    "parse_lenient",
    "print_query",
    "remove_clauses",
    "repair",
    "repair_latest",
    "solve",
    "substitute",
    "synth_clauses",
    "synth_columns",
    "synth_constants",
    "synth_operators",
    "tables_equal",
    "triage",
]
