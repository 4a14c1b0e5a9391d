import { describe, expect, it } from "vitest";

import { AttemptView, TableView } from "../src/api.js";
import { render, renderDiff, renderTable, renderVoting } from "../src/render.js";
import { initialState } from "../src/state.js";

const expected: TableView = {
  name: "expected",
  columns: [
    { name: "item", type: "str" },
    { name: "quantity", type: "int" },
  ],
  rows: [
    ["grapes", 200],
    ["apples", 500],
  ],
};

const actual: TableView = {
  name: "result",
  columns: expected.columns,
  rows: [
    ["grapes", 200],
    ["bananas", 400],
  ],
};

describe("renderTable", () => {
  it("escapes cell content", () => {
    const html = renderTable({
      name: "t",
      columns: [{ name: "a", type: "str" }],
      rows: [["<script>"]],
    });
    expect(html).toContain("&lt;script&gt;");
    expect(html).not.toContain("<script>");
  });
});

describe("renderDiff", () => {
  it("highlights rows missing from the other side", () => {
    const html = renderDiff(expected, actual);
    const highlighted = html.match(/class="diff-row"/g) ?? [];
    // apples (expected only) and bananas (actual only)
    expect(highlighted.length).toBe(2);
    expect(html).toContain("apples");
    expect(html).toContain("bananas");
  });

  it("handles a missing actual table", () => {
    const html = renderDiff(expected, null);
    expect(html).toContain("did not run");
  });
});

describe("render", () => {
  const failing: AttemptView = {
    verdict: "semantic_error",
    solved: false,
    fatigueButton: false,
    feedback: {
      revealedPairs: 1,
      expected,
      actual,
      message: "Unfortunately, your proposed query didn't solve the problem.",
    },
  };

  it("failing attempt shows the message and both tables", () => {
    const state = { ...initialState(), lastAttempt: failing };
    const html = render(state);
    expect(html).toContain("didn't solve");
    expect(html).toContain("Expected");
    expect(html).toContain("Your output");
  });

  it("correct attempt shows the success banner", () => {
    const attempt: AttemptView = {
      ...failing,
      verdict: "correct",
      solved: true,
      feedback: { ...failing.feedback, actual: null, message: "Correct! Move on." },
    };
    const html = render({ ...initialState(), lastAttempt: attempt });
    expect(html).toContain("banner success");
    expect(html).toContain('id="rate"');
  });

  it("network errors keep the query text on screen", () => {
    const state = {
      ...initialState(),
      error: "500: boom",
      queryText: "SELECT * FROM alpha",
    };
    const html = render(state);
    expect(html).toContain("500: boom");
    expect(html).toContain("SELECT * FROM alpha");
  });

  it("renders only revealed pairs, never fabricating hidden ones", () => {
    const state = {
      ...initialState(),
      problem: {
        id: "charlie",
        description: "two pairs",
        totalPairs: 2,
        revealedPairs: 1,
        pairs: [{ index: 0, source: expected, destination: actual }],
      },
    };
    const html = render(state);
    expect(html.match(/Table pair/g) ?? []).toHaveLength(1);
    expect(html).toContain("1 of 2 table pairs revealed");
  });

  it("fatigue button appears when the service says so", () => {
    const state = {
      ...initialState(),
      lastAttempt: { ...failing, fatigueButton: true },
    };
    expect(render(state)).toContain("I'm tired of this problem");
  });
});

describe("renderVoting", () => {
  const options = [
    { label: "A", category: "MCQ" as const, query: "SELECT 1" },
    { label: "B", category: "ORQ" as const, query: "SELECT 2" },
  ];

  it("submit stays disabled until every card has a score", () => {
    const state = { ...initialState(), phase: "voting" as const, voteOptions: options };
    expect(renderVoting(state)).toContain("disabled");
    const scored = { ...state, scores: { A: 5, B: 3 } };
    expect(renderVoting(scored)).not.toContain("disabled");
  });

  it("each card offers the full 1..7 scale", () => {
    const state = { ...initialState(), phase: "voting" as const, voteOptions: options };
    const html = renderVoting(state);
    for (const n of [1, 2, 3, 4, 5, 6, 7]) {
      expect(html).toContain(`value="${n}"`);
    }
  });
});
