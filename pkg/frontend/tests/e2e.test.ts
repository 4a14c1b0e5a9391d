// Scripted end-to-end session against a live practice service: the same
// controller and render code the browser runs, driven over real HTTP.

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { PracticeApi } from "../src/api.js";
import { render } from "../src/render.js";
import { SessionController } from "../src/state.js";

const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = resolve(__dirname, "..", "..");

let service: ChildProcess;
let dataDir: string;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 20_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/session`, { method: "POST" });
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("practice service did not come up");
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "sqlmend-e2e-"));
  service = spawn(
    "python3",
    [
      "-m",
      "sqlmend.cli",
      "serve",
      "--port",
      String(PORT),
      "--data-dir",
      dataDir,
      "--problems",
      "fixtures/problems",
      "--pool",
      "fixtures/vote_pool.json",
      "--fake-clock",
    ],
    { cwd: REPO_ROOT, stdio: "ignore" }
  );
  await waitForService();
}, 30_000);

afterAll(() => {
  service.kill();
});

async function advanceClock(seconds: number): Promise<void> {
  const response = await fetch(`${BASE}/_test/clock`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ advance_s: seconds }),
  });
  expect(response.ok).toBe(true);
}

describe("practice loop against a live service", () => {
  it("failing diff, success banner, fatigue path, four ratings", async () => {
    const api = new PracticeApi(BASE);
    const controller = new SessionController(api);
    await controller.start();
    const participant = api.participantId;
    expect(participant).toBeTruthy();

    await controller.openProblem("alpha");
    expect(render(controller.state)).toContain("1 of 1 table pairs revealed");

    // A failing query: the page shows the message and the two-table diff.
    controller.setQuery("SELECT * FROM alpha WHERE min < 2");
    await controller.submit();
    let html = render(controller.state);
    expect(controller.state.lastAttempt?.verdict).toBe("semantic_error");
    expect(html).toContain("didn't solve");
    expect(html).toContain("Expected");
    expect(html).toContain("Your output");
    expect(html).toContain("diff-row");

    // A passing query (text differs from the canonical repair and the
    // seeded pool, so four distinct vote cards survive consolidation).
    controller.setQuery("SELECT  name, min, max  FROM alpha WHERE min < 1");
    await controller.submit();
    html = render(controller.state);
    expect(controller.state.lastAttempt?.verdict).toBe("correct");
    expect(html).toContain("banner success");

    // Fatigue path: five or more attempts over five minutes (fake clock).
    for (let i = 0; i < 3; i++) {
      controller.setQuery("SELECT * FROM alpha WHERE min < 2");
      await controller.submit();
    }
    expect(controller.state.lastAttempt?.fatigueButton).toBe(false);
    await advanceClock(301);
    controller.setQuery("SELECT * FROM alpha WHERE min < 2");
    await controller.submit();
    expect(controller.state.lastAttempt?.fatigueButton).toBe(true);
    expect(render(controller.state)).toContain("I'm tired of this problem");

    // The fatigue button opens voting; rate all four cards.
    await controller.openVoting();
    expect(controller.state.phase).toBe("voting");
    const options = controller.state.voteOptions;
    expect(options).toHaveLength(4);
    expect(new Set(options.map((o) => o.category))).toEqual(
      new Set(["MCQ", "MRQ", "OCQ", "ORQ"])
    );
    expect(render(controller.state)).toContain("disabled");
    for (const [i, option] of options.entries()) {
      controller.setScore(option.label, 4 + (i % 3));
      controller.setRationale(option.label, `card ${option.label}`);
    }
    expect(render(controller.state)).not.toContain('"submit-votes" disabled');
    await controller.submitVotes();
    expect(controller.state.phase).toBe("done");

    // The service event log carries the matching attempt and rating events.
    const events = readFileSync(join(dataDir, "events.jsonl"), "utf-8")
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line));
    const attempts = events.filter(
      (e) => e.type === "attempt" && e.participant === participant
    );
    const ratings = events.filter(
      (e) => e.type === "rating" && e.participant === participant
    );
    expect(attempts).toHaveLength(6);
    expect(attempts.filter((e) => e.verdict === "correct")).toHaveLength(1);
    expect(ratings).toHaveLength(4);
    expect(new Set(ratings.map((e) => e.category))).toEqual(
      new Set(["MCQ", "MRQ", "OCQ", "ORQ"])
    );
    for (const rating of ratings) {
      expect(rating.score).toBeGreaterThanOrEqual(1);
      expect(rating.score).toBeLessThanOrEqual(7);
    }
  }, 60_000);
});
