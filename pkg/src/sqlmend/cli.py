"""Command-line entry points: `sqlmend run` and `sqlmend serve`."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .harness import CorpusError, run
from .pipeline import DEFAULT_BUDGET_MS


def _add_run_parser(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("run", help="triage, classify, and repair a query corpus")
    p.add_argument("--corpus", required=True, help="JSONL corpus file")
    p.add_argument("--problems", required=True, help="directory of problem JSON files")
    p.add_argument("--budget-ms", type=float, default=DEFAULT_BUDGET_MS)
    p.add_argument("--out", help="write the summary report JSON here")
    p.add_argument("--jsonl", help="write one JSON line per record here")


def _add_serve_parser(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("serve", help="start the practice service")
    p.add_argument("--port", type=int, default=int(os.environ.get("SQLMEND_PORT", "8000")))
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument(
        "--problems",
        default=os.environ.get("SQLMEND_PROBLEMS_DIR", "fixtures/problems"),
    )
    p.add_argument(
        "--pool", default=os.environ.get("SQLMEND_POOL", "fixtures/vote_pool.json")
    )
    p.add_argument(
        "--data-dir", default=os.environ.get("SQLMEND_DATA_DIR", "practice-data")
    )
    p.add_argument(
        "--fake-clock",
        action="store_true",
        default=os.environ.get("SQLMEND_FAKE_CLOCK") == "1",
        help="expose POST /_test/clock to advance a fake clock (for tests)",
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sqlmend")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)
    _add_serve_parser(sub)
    args = parser.parse_args(argv)

    if args.command == "run":
        try:
            report = run(
                args.corpus,
                args.problems,
                budget_ms=args.budget_ms,
                jsonl_out=args.jsonl,
                report_out=args.out,
            )
        except CorpusError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(json.dumps(report.to_dict(), indent=2))
        return 0

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        app = create_app(
            problems_dir=args.problems,
            pool_path=args.pool,
            data_dir=args.data_dir,
            fake_clock=args.fake_clock,
        )
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        return 0
    return 2


if __name__ == "__main__":
    sys.exit(main())
