from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from sqlmend.service import create_app

from conftest import FIXTURES, PROBLEMS_DIR

GOOD = "SELECT * FROM alpha WHERE min < 1"
BAD = "SELECT * FROM alpha WHERE min < 2"


@pytest.fixture()
def app_dir(tmp_path):
    return tmp_path / "data"


@pytest.fixture()
def client(app_dir):
    app = create_app(
        PROBLEMS_DIR, FIXTURES / "vote_pool.json", app_dir, rng_seed=1234, fake_clock=True
    )
    return TestClient(app)


def session(client):
    pid = client.post("/session").json()["participantId"]
    return {"X-Participant-Id": pid}


def submit(client, headers, query, problem="alpha"):
    return client.post(f"/problems/{problem}/attempts", json={"query": query}, headers=headers)


def reach_fatigue(client, headers, problem="charlie"):
    for _ in range(5):
        submit(client, headers, "SELECT * FROM charlie WHERE VAL < 99", problem)
    client.post("/_test/clock", json={"advance_s": 301})


class TestProblems:
    def test_fresh_session_sees_only_pair_one(self, client):
        h = session(client)
        doc = client.get("/problems/charlie", headers=h).json()
        assert doc["totalPairs"] == 2
        assert doc["revealedPairs"] == 1
        assert len(doc["pairs"]) == 1

    def test_failing_later_pair_reveals_it(self, client):
        h = session(client)
        # Passes pair 1 of charlie, fails pair 2.
        submit(client, h, "SELECT * FROM charlie WHERE VAL < 8", "charlie")
        doc = client.get("/problems/charlie", headers=h).json()
        assert doc["revealedPairs"] == 2
        assert {p["index"] for p in doc["pairs"]} == {0, 1}

    def test_unknown_problem_404(self, client):
        assert client.get("/problems/nope", headers=session(client)).status_code == 404

    def test_listing_never_leaks_pairs(self, client):
        doc = client.get("/problems", headers=session(client)).json()
        assert all("pairs" not in p for p in doc["problems"])

    def test_session_required(self, client):
        assert client.get("/problems").status_code == 401


class TestAttempts:
    def test_correct_query_congratulated(self, client):
        r = submit(client, session(client), GOOD).json()
        assert r["verdict"] == "correct"
        assert "Correct" in r["feedback"]["message"]

    def test_incorrect_query_returns_actual_table(self, client):
        r = submit(client, session(client), BAD).json()
        assert r["verdict"] == "semantic_error"
        assert "didn't solve" in r["feedback"]["message"]
        assert r["feedback"]["actual"] is not None
        assert r["feedback"]["expected"]["rows"] == [["a", 0, 5], ["d", 0, 4]]

    def test_empty_body_400(self, client):
        assert submit(client, session(client), "   ").status_code == 400

    def test_fatigue_needs_five_attempts_and_five_minutes(self, client):
        h = session(client)
        for _ in range(3):
            submit(client, h, BAD)
        r = submit(client, h, BAD).json()  # 4th attempt, no time elapsed
        assert r["fatigueButton"] is False
        r = submit(client, h, BAD).json()  # 5th attempt, still too soon
        assert r["fatigueButton"] is False
        client.post("/_test/clock", json={"advance_s": 301})
        r = submit(client, h, BAD).json()
        assert r["fatigueButton"] is True


class TestVoteOptions:
    def test_four_options_for_solver_with_repairable_history(self, client):
        h = session(client)
        submit(client, h, BAD)
        submit(client, h, "select  *  from alpha where min < 1")
        options = client.post("/problems/alpha/vote-options", headers=h).json()["options"]
        assert [o["label"] for o in options] == ["A", "B", "C", "D"]
        assert {o["category"] for o in options} == {"MCQ", "MRQ", "OCQ", "ORQ"}

    def test_409_when_neither_solved_nor_fatigued(self, client):
        h = session(client)
        submit(client, h, BAD)
        assert client.post("/problems/alpha/vote-options", headers=h).status_code == 409

    def test_fatigued_non_solver_gets_pool_options_only(self, client):
        h = session(client)
        reach_fatigue(client, h)
        options = client.post("/problems/charlie/vote-options", headers=h).json()["options"]
        categories = {o["category"] for o in options}
        assert "MCQ" not in categories
        assert {"OCQ", "ORQ"} <= categories | {"MRQ"}

    def test_identical_queries_consolidated(self, client, app_dir):
        h = session(client)
        # The participant's correct query matches a pool entry verbatim.
        pool = json.loads((FIXTURES / "vote_pool.json").read_text())
        submit(client, h, pool["alpha"]["correct"][0])
        options = client.post("/problems/alpha/vote-options", headers=h).json()["options"]
        texts = [o["query"] for o in options]
        assert len(texts) == len(set(texts))
        assert any(o["category"] == "MCQ" for o in options)

    def test_issuance_is_stable_per_participant(self, client):
        h = session(client)
        submit(client, h, GOOD)
        first = client.post("/problems/alpha/vote-options", headers=h).json()
        second = client.post("/problems/alpha/vote-options", headers=h).json()
        assert first == second

    def test_pool_selection_is_fair(self, client, app_dir):
        # Many participants request options; pool show-counts stay balanced.
        for _ in range(7):
            h = session(client)
            submit(client, h, GOOD)
            client.post("/problems/alpha/vote-options", headers=h)
        counts: dict[tuple[str, int], int] = {}
        for line in (app_dir / "events.jsonl").read_text().splitlines():
            event = json.loads(line)
            if event["type"] != "vote_options":
                continue
            for option in event["options"]:
                if option.get("pool"):
                    key = tuple(option["pool"])
                    counts[key] = counts.get(key, 0) + 1
        correct_counts = [v for (kind, _), v in counts.items() if kind == "correct"]
        assert max(correct_counts) - min(correct_counts) <= 1


class TestRatings:
    def issue(self, client):
        h = session(client)
        submit(client, h, BAD)
        submit(client, h, GOOD)
        options = client.post("/problems/alpha/vote-options", headers=h).json()["options"]
        return h, options

    def test_score_recorded(self, client):
        h, options = self.issue(client)
        r = client.post(
            "/ratings",
            json={"problem": "alpha", "label": options[0]["label"], "score": 7},
            headers=h,
        )
        assert r.status_code == 204

    def test_score_out_of_range_400(self, client):
        h, options = self.issue(client)
        r = client.post(
            "/ratings",
            json={"problem": "alpha", "label": options[0]["label"], "score": 0},
            headers=h,
        )
        assert r.status_code == 400

    def test_unknown_label_409(self, client):
        h, _ = self.issue(client)
        r = client.post("/ratings", json={"problem": "alpha", "label": "Z", "score": 5}, headers=h)
        assert r.status_code == 409

    def test_duplicate_label_overwrites(self, client, app_dir):
        h, options = self.issue(client)
        label = options[0]["label"]
        client.post("/ratings", json={"problem": "alpha", "label": label, "score": 2}, headers=h)
        client.post("/ratings", json={"problem": "alpha", "label": label, "score": 6}, headers=h)
        events = [
            json.loads(line)
            for line in (app_dir / "events.jsonl").read_text().splitlines()
        ]
        ratings = [e for e in events if e["type"] == "rating" and e["label"] == label]
        assert [e["score"] for e in ratings] == [2, 6]  # superseding events, last wins


class TestEventLog:
    def test_replay_reconstructs_state(self, app_dir):
        app = create_app(PROBLEMS_DIR, FIXTURES / "vote_pool.json", app_dir, rng_seed=5, fake_clock=True)
        client = TestClient(app)
        h = session(client)
        submit(client, h, "SELECT * FROM charlie WHERE VAL < 8", "charlie")
        submit(client, h, GOOD)
        options = client.post("/problems/alpha/vote-options", headers=h).json()["options"]
        client.post(
            "/ratings",
            json={"problem": "alpha", "label": options[0]["label"], "score": 3},
            headers=h,
        )
        # Restart on the same data directory: revealed pairs, issued labels,
        # and ratings must all come back from the log alone.
        reborn = TestClient(
            create_app(PROBLEMS_DIR, FIXTURES / "vote_pool.json", app_dir, rng_seed=6, fake_clock=True)
        )
        doc = reborn.get("/problems/charlie", headers=h).json()
        assert doc["revealedPairs"] == 2
        again = reborn.post("/problems/alpha/vote-options", headers=h).json()["options"]
        assert again == options

    def test_every_event_is_versioned(self, client, app_dir):
        h = session(client)
        submit(client, h, GOOD)
        for line in (app_dir / "events.jsonl").read_text().splitlines():
            assert json.loads(line)["v"] == 1

    def test_responses_never_leak_unrevealed_pairs(self, client, problems):
        h = session(client)
        submit(client, h, "SELECT CODE FROM charlie", "charlie")  # fails pair 1
        doc = client.get("/problems/charlie", headers=h).json()
        assert doc["revealedPairs"] == 1
        body = json.dumps(doc)
        hidden_pair = problems["charlie"].pairs[1]
        assert json.dumps(hidden_pair.source.rows[0][0]) not in body
