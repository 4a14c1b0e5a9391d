// Pure view layer: state in, HTML strings out.  Keeping this free of DOM
// and network lets the scripted session assert on exactly what a browser
// would show.

import { TableView, VoteOption } from "./api.js";
import { SessionState } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function rowKey(row: Array<number | string>): string {
  return JSON.stringify(row);
}

/** Multiset difference of rows: how many copies of each row in `a` lack a
 * counterpart in `b`. */
function extraRows(a: TableView, b: TableView): Map<string, number> {
  const counts = new Map<string, number>();
  for (const row of b.rows) {
    const key = rowKey(row);
    counts.set(key, (counts.get(key) ?? 0) + 1);
  }
  const extra = new Map<string, number>();
  for (const row of a.rows) {
    const key = rowKey(row);
    const remaining = counts.get(key) ?? 0;
    if (remaining > 0) {
      counts.set(key, remaining - 1);
    } else {
      extra.set(key, (extra.get(key) ?? 0) + 1);
    }
  }
  return extra;
}

export function renderTable(table: TableView, highlight?: Map<string, number>): string {
  const header = table.columns.map((c) => `<th>${escapeHtml(c.name)}</th>`).join("");
  const used = new Map<string, number>();
  const body = table.rows
    .map((row) => {
      const key = rowKey(row);
      const budget = highlight?.get(key) ?? 0;
      const seen = used.get(key) ?? 0;
      const marked = seen < budget;
      if (marked) used.set(key, seen + 1);
      const cells = row.map((cell) => `<td>${escapeHtml(String(cell))}</td>`).join("");
      return `<tr${marked ? ' class="diff-row"' : ""}>${cells}</tr>`;
    })
    .join("");
  return `<table><thead><tr>${header}</tr></thead><tbody>${body}</tbody></table>`;
}

/** Expected and actual side by side, rows missing from the other side
 * highlighted. */
export function renderDiff(expected: TableView, actual: TableView | null): string {
  const expectedExtra = actual ? extraRows(expected, actual) : undefined;
  const actualExtra = actual ? extraRows(actual, expected) : undefined;
  const left = `<div class="pane"><h4>Expected</h4>${renderTable(expected, expectedExtra)}</div>`;
  const right = actual
    ? `<div class="pane"><h4>Your output</h4>${renderTable(actual, actualExtra)}</div>`
    : `<div class="pane"><h4>Your output</h4><p class="no-output">The query did not run.</p></div>`;
  return `<div class="diff">${left}${right}</div>`;
}

export function renderProblem(state: SessionState): string {
  const problem = state.problem;
  if (problem === null) return "";
  const pairs = problem.pairs
    .map(
      (pair) => `
      <section class="pair">
        <h3>Table pair ${pair.index + 1} of ${problem.totalPairs}</h3>
        <div class="diff">
          <div class="pane"><h4>Source: ${escapeHtml(pair.source.name)}</h4>${renderTable(pair.source)}</div>
          <div class="pane"><h4>Destination</h4>${renderTable(pair.destination)}</div>
        </div>
      </section>`
    )
    .join("");
  return `
    <h2>${escapeHtml(problem.id)}</h2>
    <p>${escapeHtml(problem.description)}</p>
    ${pairs}
    <p class="reveal-note">${problem.revealedPairs} of ${problem.totalPairs} table pairs revealed.</p>`;
}

export function renderAttempt(state: SessionState): string {
  const attempt = state.lastAttempt;
  const parts: string[] = [];
  if (state.error !== null) {
    parts.push(`<p class="error">${escapeHtml(state.error)} Your query text is preserved; try again.</p>`);
  }
  if (attempt !== null) {
    if (attempt.verdict === "correct") {
      parts.push(`<div class="banner success">${escapeHtml(attempt.feedback.message)}</div>`);
    } else {
      parts.push(`<div class="banner failure">${escapeHtml(attempt.feedback.message)}</div>`);
      parts.push(renderDiff(attempt.feedback.expected, attempt.feedback.actual));
    }
    if (attempt.fatigueButton) {
      parts.push(`<button id="fatigue">I'm tired of this problem</button>`);
    }
    if (attempt.solved) {
      parts.push(`<button id="rate">Rate some queries</button>`);
    }
  }
  return parts.join("\n");
}

export function renderVoteCard(option: VoteOption, score: number | undefined): string {
  const radios = [1, 2, 3, 4, 5, 6, 7]
    .map(
      (n) =>
        `<label><input type="radio" name="score-${option.label}" value="${n}"${
          score === n ? " checked" : ""
        }>${n}</label>`
    )
    .join("");
  return `
    <div class="vote-card" data-label="${option.label}">
      <h4>Query ${option.label}</h4>
      <pre>${escapeHtml(option.query)}</pre>
      <div class="likert">1 = very difficult … 7 = very easy<br>${radios}</div>
      <textarea class="rationale" data-label="${option.label}" placeholder="Why? (optional)"></textarea>
    </div>`;
}

export function renderVoting(state: SessionState): string {
  const cards = state.voteOptions
    .map((option) => renderVoteCard(option, state.scores[option.label]))
    .join("");
  const complete =
    state.voteOptions.length > 0 &&
    state.voteOptions.every((o) => state.scores[o.label] !== undefined);
  return `
    <h2>How understandable is each query?</h2>
    ${cards}
    <button id="submit-votes"${complete ? "" : " disabled"}>Submit ratings</button>`;
}

export function render(state: SessionState): string {
  if (state.phase === "voting") return renderVoting(state);
  if (state.phase === "done") {
    return `<div class="banner success">Thanks! Your ratings were recorded.</div>`;
  }
  const submit = `<textarea id="query" placeholder="SELECT ...">${escapeHtml(
    state.queryText
  )}</textarea>
    <button id="submit"${state.busy ? " disabled" : ""}>Run query</button>`;
  return `${renderProblem(state)}\n${submit}\n${renderAttempt(state)}`;
}
