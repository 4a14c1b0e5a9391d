"""HTTP practice service: serve problems pair by pair, grade attempts,
offer repaired queries, and record understandability ratings.
"""

from __future__ import annotations

import json
import random
import secrets
import threading
import time
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from ..evaluator import FeedbackView, Triage, Verdict, triage
from ..pipeline import repair_latest
from ..printer import print_query
from ..tables import ProblemSpec, Table, load_problem_dir
from .events import EventLog, ProblemState, ServiceState, VoteOption, replay

FATIGUE_MIN_ATTEMPTS = 5
FATIGUE_MIN_SECONDS = 300.0

VOTE_CATEGORIES = ("MCQ", "MRQ", "OCQ", "ORQ")
LABELS = ("A", "B", "C", "D")


class AttemptBody(BaseModel):
    query: str = ""


class RatingBody(BaseModel):
    problem: str
    label: str
    score: int
    rationale: str | None = None


class ClockBody(BaseModel):
    advance_s: float = Field(ge=0)


class _FakeClock:
    """Adjustable clock for driving the fatigue timer in tests."""

    def __init__(self) -> None:
        self._base = time.time()
        self._offset = 0.0

    def __call__(self) -> float:
        return self._base + self._offset

    def advance(self, seconds: float) -> None:
        self._offset += seconds


def _table_json(table: Table) -> dict:
    return {
        "name": table.name,
        "columns": [{"name": c.name, "type": c.type.value} for c in table.columns],
        "rows": [list(r) for r in table.rows],
    }


def _load_pool(path: str | Path | None) -> dict[str, dict[str, list[str]]]:
    if path is None or not Path(path).exists():
        return {}
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return {
        pid: {"correct": list(v.get("correct", [])), "repaired": list(v.get("repaired", []))}
        for pid, v in doc.items()
    }


def create_app(
    problems_dir: str | Path,
    pool_path: str | Path | None = None,
    data_dir: str | Path = "practice-data",
    clock=None,
    rng_seed: int | None = None,
    fake_clock: bool = False,
    repair_budget_ms: float = 10_000,
) -> FastAPI:
    problems = load_problem_dir(problems_dir)
    pool = _load_pool(pool_path)
    log = EventLog(Path(data_dir) / "events.jsonl")
    state: ServiceState = replay(log)
    lock = threading.Lock()
    rng = random.Random(rng_seed)
    test_clock: _FakeClock | None = None
    if clock is None:
        if fake_clock:
            test_clock = _FakeClock()
            clock = test_clock
        else:
            clock = time.time

    app = FastAPI(title="sqlmend practice service")
    # The browser client may be served from a separate static-file origin.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def record(event: dict) -> None:
        # Mutate in-memory state and persist atomically wrt other requests.
        state.apply(event)
        log.append(event)

    def require_participant(participant_id: str | None) -> str:
        if not participant_id or participant_id not in state.participants:
            raise HTTPException(status_code=401, detail="establish a session first")
        return participant_id

    def require_problem(problem_id: str) -> ProblemSpec:
        problem = problems.get(problem_id)
        if problem is None:
            raise HTTPException(status_code=404, detail=f"unknown problem {problem_id!r}")
        return problem

    def fatigue_ready(st: ProblemState, now: float) -> bool:
        return (
            st.attempt_count >= FATIGUE_MIN_ATTEMPTS
            and st.first_attempt_at is not None
            and now - st.first_attempt_at >= FATIGUE_MIN_SECONDS
        )

    @app.post("/session")
    def create_session() -> dict:
        with lock:
            participant = secrets.token_hex(8)
            record({"type": "session", "participant": participant, "ts": clock()})
        return {"participantId": participant}

    @app.get("/problems")
    def list_problems(x_participant_id: str | None = Header(default=None)) -> dict:
        with lock:
            require_participant(x_participant_id)
            listing = [
                {"id": p.id, "description": p.description, "totalPairs": len(p.pairs)}
                for p in problems.values()
            ]
        return {"problems": listing}

    @app.get("/problems/{problem_id}")
    def get_problem(
        problem_id: str, x_participant_id: str | None = Header(default=None)
    ) -> dict:
        with lock:
            participant = require_participant(x_participant_id)
            problem = require_problem(problem_id)
            st = state.problem_state(participant, problem_id)
            revealed = min(st.revealed_pairs, len(problem.pairs))
            pairs = [
                {
                    "index": i,
                    "source": _table_json(pair.source),
                    "destination": _table_json(pair.destination),
                }
                for i, pair in enumerate(problem.pairs[:revealed])
            ]
        return {
            "id": problem.id,
            "description": problem.description,
            "totalPairs": len(problem.pairs),
            "revealedPairs": revealed,
            "pairs": pairs,
        }

    @app.post("/problems/{problem_id}/attempts")
    def submit_attempt(
        problem_id: str,
        body: AttemptBody,
        x_participant_id: str | None = Header(default=None),
    ) -> dict:
        if not body.query.strip():
            raise HTTPException(status_code=400, detail="empty query")
        with lock:
            participant = require_participant(x_participant_id)
            problem = require_problem(problem_id)
            result = triage(body.query, problem)
            now = clock()
            record(
                {
                    "type": "attempt",
                    "participant": participant,
                    "problem": problem_id,
                    "query": body.query,
                    "verdict": result.verdict.value,
                    "failed_pair": result.first_failing_pair,
                    "ts": now,
                }
            )
            st = state.problem_state(participant, problem_id)
            revealed = min(st.revealed_pairs, len(problem.pairs))
            if result.verdict is Verdict.CORRECT:
                message = "Correct! Your query solved every table pair. Move on to the next problem."
                expected_pair = problem.pairs[revealed - 1]
            elif result.verdict is Verdict.SYNTAX_ERROR:
                message = f"Unfortunately, your proposed query didn't run: {result.detail}"
                expected_pair = problem.pairs[revealed - 1]
            else:
                message = (
                    "Unfortunately, your proposed query didn't solve the problem. "
                    "Compare the expected and actual tables below."
                )
                expected_pair = problem.pairs[result.first_failing_pair]
            feedback = FeedbackView(
                revealed_pairs=revealed,
                expected=expected_pair.destination,
                actual=result.actual_output,
                message=message,
            )
            return {
                "verdict": result.verdict.value,
                "solved": st.solved,
                "fatigueButton": fatigue_ready(st, now),
                "feedback": {
                    "revealedPairs": feedback.revealed_pairs,
                    "expected": _table_json(feedback.expected),
                    "actual": _table_json(feedback.actual) if feedback.actual else None,
                    "message": feedback.message,
                },
            }

    def pick_from_pool(problem_id: str, kind: str) -> tuple[str, tuple[str, int]] | None:
        entries = pool.get(problem_id, {}).get(kind, [])
        if not entries:
            return None
        counted = [
            (state.show_counts.get((problem_id, kind, i), 0), i) for i in range(len(entries))
        ]
        _, index = min(counted)  # least shown first; ties go to the lowest index
        return entries[index], (kind, index)

    @app.post("/problems/{problem_id}/vote-options")
    def vote_options(
        problem_id: str, x_participant_id: str | None = Header(default=None)
    ) -> dict:
        with lock:
            participant = require_participant(x_participant_id)
            problem = require_problem(problem_id)
            st = state.problem_state(participant, problem_id)
            issued = state.issued.get((participant, problem_id))
            if issued is not None:
                return {
                    "options": [
                        {"label": o.label, "category": o.category, "query": o.query}
                        for o in issued
                    ]
                }
            if not st.solved and not fatigue_ready(st, clock()):
                raise HTTPException(
                    status_code=409, detail="solve the problem or keep trying first"
                )
            candidates: list[tuple[str, str, tuple[str, int] | None]] = []
            correct = [q for q, v in st.attempts if v == Verdict.CORRECT.value]
            if correct:
                candidates.append(("MCQ", correct[-1], None))
            history = [
                (q, Triage(Verdict(v)))
                for q, v in st.attempts
            ]
            if any(v != Verdict.CORRECT.value for _, v in st.attempts):
                fix = repair_latest(history, problem, repair_budget_ms)
                if fix.is_repaired:
                    candidates.append(("MRQ", print_query(fix.repaired), None))
            for category, kind in (("OCQ", "correct"), ("ORQ", "repaired")):
                picked = pick_from_pool(problem_id, kind)
                if picked is not None:
                    candidates.append((category, picked[0], picked[1]))
            # Consolidate identical queries, keeping the earliest category.
            seen: dict[str, int] = {}
            merged: list[tuple[str, str, list[tuple[str, int]]]] = []
            for category, query, ref in candidates:
                key = query.strip()
                if key in seen:
                    if ref is not None:
                        merged[seen[key]][2].append(ref)
                    continue
                seen[key] = len(merged)
                merged.append((category, query, [ref] if ref else []))
            order = list(range(len(merged)))
            rng.shuffle(order)  # labels A.. are assigned in random order
            options = []
            for label, idx in zip(LABELS, order):
                category, query, refs = merged[idx]
                options.append(
                    VoteOption(label, category, query, refs[0] if refs else None)
                )
            options.sort(key=lambda o: o.label)
            record(
                {
                    "type": "vote_options",
                    "participant": participant,
                    "problem": problem_id,
                    "options": [
                        {
                            "label": o.label,
                            "category": o.category,
                            "query": o.query,
                            "pool": list(o.pool_ref) if o.pool_ref else None,
                        }
                        for o in options
                    ],
                    "ts": clock(),
                }
            )
            return {
                "options": [
                    {"label": o.label, "category": o.category, "query": o.query}
                    for o in options
                ]
            }

    @app.post("/ratings", status_code=204)
    def submit_rating(
        body: RatingBody, x_participant_id: str | None = Header(default=None)
    ) -> Response:
        with lock:
            participant = require_participant(x_participant_id)
            if not 1 <= body.score <= 7:
                raise HTTPException(status_code=400, detail="score must be 1..7")
            issued = state.issued.get((participant, body.problem))
            option = next((o for o in issued or [] if o.label == body.label), None)
            if option is None:
                raise HTTPException(status_code=409, detail="unknown label for this problem")
            record(
                {
                    "type": "rating",
                    "participant": participant,
                    "problem": body.problem,
                    "label": body.label,
                    "category": option.category,
                    "score": body.score,
                    "rationale": body.rationale,
                    "ts": clock(),
                }
            )
        return Response(status_code=204)

    if test_clock is not None:

        @app.post("/_test/clock")
        def advance_clock(body: ClockBody) -> dict:
            test_clock.advance(body.advance_s)
            return {"now": test_clock()}

    return app
