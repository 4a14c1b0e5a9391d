import { describe, expect, it } from "vitest";

import { PracticeApi } from "../src/api.js";
import { SessionController } from "../src/state.js";

type Route = (body: unknown) => { status: number; body: unknown };

function fakeFetch(routes: Record<string, Route>): typeof fetch {
  return async (input, init) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const route = routes[`${method} ${path}`];
    if (route === undefined) {
      return new Response(JSON.stringify({ detail: `no route ${method} ${path}` }), {
        status: 500,
      });
    }
    const parsed = init?.body ? JSON.parse(String(init.body)) : undefined;
    const { status, body } = route(parsed);
    return new Response(status === 204 ? null : JSON.stringify(body), { status });
  };
}

const problemDoc = {
  id: "alpha",
  description: "d",
  totalPairs: 1,
  revealedPairs: 1,
  pairs: [],
};

function makeController(routes: Record<string, Route>) {
  const api = new PracticeApi("http://service", fakeFetch(routes));
  return new SessionController(api);
}

describe("SessionController", () => {
  it("start opens a session and lists problems", async () => {
    const controller = makeController({
      "POST /session": () => ({ status: 200, body: { participantId: "p1" } }),
      "GET /problems": () => ({
        status: 200,
        body: { problems: [{ id: "alpha", description: "d", totalPairs: 1 }] },
      }),
    });
    await controller.start();
    expect(controller.state.problems).toHaveLength(1);
  });

  it("failed submissions keep the query text and surface the error", async () => {
    const controller = makeController({
      "POST /session": () => ({ status: 200, body: { participantId: "p1" } }),
      "GET /problems": () => ({ status: 200, body: { problems: [] } }),
      "GET /problems/alpha": () => ({ status: 200, body: problemDoc }),
      "POST /problems/alpha/attempts": () => ({ status: 500, body: { detail: "boom" } }),
    });
    await controller.start();
    await controller.openProblem("alpha");
    controller.setQuery("SELECT broken");
    await controller.submit();
    expect(controller.state.error).toContain("boom");
    expect(controller.state.queryText).toBe("SELECT broken");
    expect(controller.state.busy).toBe(false);
  });

  it("vote options blocked with 409 render as keep-trying guidance", async () => {
    const controller = makeController({
      "POST /session": () => ({ status: 200, body: { participantId: "p1" } }),
      "GET /problems": () => ({ status: 200, body: { problems: [] } }),
      "GET /problems/alpha": () => ({ status: 200, body: problemDoc }),
      "POST /problems/alpha/vote-options": () => ({
        status: 409,
        body: { detail: "solve the problem or keep trying first" },
      }),
    });
    await controller.start();
    await controller.openProblem("alpha");
    await controller.openVoting();
    expect(controller.state.phase).toBe("attempting");
    expect(controller.state.error).toContain("keep trying");
  });

  it("submitVotes posts one rating per card once all are scored", async () => {
    const ratings: unknown[] = [];
    const controller = makeController({
      "POST /session": () => ({ status: 200, body: { participantId: "p1" } }),
      "GET /problems": () => ({ status: 200, body: { problems: [] } }),
      "GET /problems/alpha": () => ({ status: 200, body: problemDoc }),
      "POST /problems/alpha/vote-options": () => ({
        status: 200,
        body: {
          options: [
            { label: "A", category: "MCQ", query: "q1" },
            { label: "B", category: "OCQ", query: "q2" },
          ],
        },
      }),
      "POST /ratings": (body) => {
        ratings.push(body);
        return { status: 204, body: null };
      },
    });
    await controller.start();
    await controller.openProblem("alpha");
    await controller.openVoting();
    expect(controller.votesComplete()).toBe(false);
    await controller.submitVotes();
    expect(ratings).toHaveLength(0); // incomplete scores: nothing sent
    controller.setScore("A", 6);
    controller.setScore("B", 2);
    expect(controller.votesComplete()).toBe(true);
    await controller.submitVotes();
    expect(ratings).toHaveLength(2);
    expect(controller.state.phase).toBe("done");
  });
});
