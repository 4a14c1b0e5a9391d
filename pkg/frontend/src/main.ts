// Browser bootstrap: wire the controller to the page.  All behavior lives
// in state.ts/render.ts; this file only moves DOM events.

import { PracticeApi } from "./api.js";
import { SessionController } from "./state.js";
import { render } from "./render.js";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app container");
const app: HTMLElement = root;

// Same-origin by default; `?service=http://host:port` points elsewhere.
const serviceOrigin = new URLSearchParams(window.location.search).get("service") ?? "";
const api = new PracticeApi(serviceOrigin);
const controller = new SessionController(api, (state) => {
  const active = document.activeElement;
  const keepFocus = active instanceof HTMLTextAreaElement && active.id === "query";
  app.innerHTML = renderShell(state);
  wire();
  if (keepFocus) {
    const box = document.getElementById("query");
    if (box instanceof HTMLTextAreaElement) {
      box.focus();
      box.selectionStart = box.value.length;
    }
  }
});

function renderShell(state: ReturnType<() => typeof controller.state>): string {
  const menu = state.problems
    .map(
      (p) =>
        `<li><a href="#" class="problem-link" data-id="${p.id}">${p.id}</a> — ${p.description}</li>`
    )
    .join("");
  return `<nav><ul>${menu}</ul></nav><main>${render(state)}</main>`;
}

function wire(): void {
  for (const link of Array.from(document.querySelectorAll<HTMLAnchorElement>(".problem-link"))) {
    link.addEventListener("click", (event) => {
      event.preventDefault();
      void controller.openProblem(link.dataset.id ?? "");
    });
  }
  const query = document.getElementById("query");
  if (query instanceof HTMLTextAreaElement) {
    query.addEventListener("input", () => {
      controller.state.queryText = query.value; // avoid re-render per keystroke
    });
  }
  document.getElementById("submit")?.addEventListener("click", () => void controller.submit());
  document.getElementById("fatigue")?.addEventListener("click", () => void controller.openVoting());
  document.getElementById("rate")?.addEventListener("click", () => void controller.openVoting());
  for (const radio of Array.from(
    document.querySelectorAll<HTMLInputElement>(".vote-card input[type=radio]")
  )) {
    radio.addEventListener("change", () => {
      const label = radio.name.replace("score-", "");
      controller.setScore(label, Number(radio.value));
    });
  }
  for (const box of Array.from(
    document.querySelectorAll<HTMLTextAreaElement>(".vote-card textarea")
  )) {
    box.addEventListener("input", () => {
      controller.state.rationales[box.dataset.label ?? ""] = box.value;
    });
  }
  document
    .getElementById("submit-votes")
    ?.addEventListener("click", () => void controller.submitVotes());
}

void controller.start();
