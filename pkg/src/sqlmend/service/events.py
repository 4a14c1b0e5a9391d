"""Append-only JSON-lines event log for the practice service.

Every state change is one versioned event line; in-memory state is a fold
over the log, so replaying it reconstructs all session state (ratings use
last-write-wins via superseding events).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

EVENT_VERSION = 1


class EventLog:
    """Serialized appender over a single JSONL file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def append(self, event: dict) -> None:
        line = json.dumps({"v": EVENT_VERSION, **event})
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def read_all(self) -> list[dict]:
        if not self.path.exists():
            return []
        events = []
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                events.append(json.loads(line))
        return events


@dataclass
class ProblemState:
    attempt_count: int = 0
    first_attempt_at: float | None = None
    revealed_pairs: int = 1
    solved: bool = False
    attempts: list[tuple[str, str]] = field(default_factory=list)  # (query, verdict)


@dataclass
class VoteOption:
    label: str
    category: str
    query: str
    pool_ref: tuple[str, int] | None = None  # ("correct"|"repaired", index)


@dataclass
class ServiceState:
    """Mutable fold of the event log; guarded by the app's lock."""

    participants: set[str] = field(default_factory=set)
    problems: dict[tuple[str, str], ProblemState] = field(default_factory=dict)
    # (problem, kind, index) -> times shown for voting
    show_counts: dict[tuple[str, str, int], int] = field(default_factory=dict)
    issued: dict[tuple[str, str], list[VoteOption]] = field(default_factory=dict)
    ratings: dict[tuple[str, str, str], dict] = field(default_factory=dict)

    def problem_state(self, participant: str, problem: str) -> ProblemState:
        return self.problems.setdefault((participant, problem), ProblemState())

    def apply(self, event: dict) -> None:
        etype = event["type"]
        if etype == "session":
            self.participants.add(event["participant"])
        elif etype == "attempt":
            st = self.problem_state(event["participant"], event["problem"])
            st.attempt_count += 1
            if st.first_attempt_at is None:
                st.first_attempt_at = event["ts"]
            st.attempts.append((event["query"], event["verdict"]))
            if event["verdict"] == "correct":
                st.solved = True
            failed = event.get("failed_pair")
            if failed is not None:
                st.revealed_pairs = max(st.revealed_pairs, failed + 1)
        elif etype == "vote_options":
            options = [
                VoteOption(
                    o["label"],
                    o["category"],
                    o["query"],
                    tuple(o["pool"]) if o.get("pool") else None,
                )
                for o in event["options"]
            ]
            self.issued[(event["participant"], event["problem"])] = options
            for o in options:
                if o.pool_ref is not None:
                    key = (event["problem"], o.pool_ref[0], o.pool_ref[1])
                    self.show_counts[key] = self.show_counts.get(key, 0) + 1
        elif etype == "rating":
            key = (event["participant"], event["problem"], event["label"])
            self.ratings[key] = {
                "category": event["category"],
                "score": event["score"],
                "rationale": event.get("rationale"),
            }


def replay(log: EventLog) -> ServiceState:
    state = ServiceState()
    for event in log.read_all():
        state.apply(event)
    return state
