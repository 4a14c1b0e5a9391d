// Session controller: one problem on screen, at most one in-flight
// attempt, vote cards unlocked by solving or by the fatigue button.

import {
  ApiError,
  AttemptView,
  PracticeApi,
  ProblemSummary,
  ProblemView,
  VoteOption,
} from "./api.js";

export type Phase = "browsing" | "attempting" | "voting" | "done";

export type SessionState = {
  phase: Phase;
  problems: ProblemSummary[];
  problem: ProblemView | null;
  queryText: string;
  busy: boolean;
  lastAttempt: AttemptView | null;
  error: string | null;
  voteOptions: VoteOption[];
  scores: Record<string, number>;
  rationales: Record<string, string>;
  votesSubmitted: boolean;
};

export function initialState(): SessionState {
  return {
    phase: "browsing",
    problems: [],
    problem: null,
    queryText: "",
    busy: false,
    lastAttempt: null,
    error: null,
    voteOptions: [],
    scores: {},
    rationales: {},
    votesSubmitted: false,
  };
}

export class SessionController {
  state: SessionState = initialState();

  constructor(private api: PracticeApi, private onChange: (s: SessionState) => void = () => {}) {}

  private update(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.state);
  }

  async start(): Promise<void> {
    await this.api.openSession();
    const doc = await this.api.listProblems();
    this.update({ problems: doc.problems, phase: "browsing" });
  }

  async openProblem(id: string): Promise<void> {
    const problem = await this.api.getProblem(id);
    this.update({
      phase: "attempting",
      problem,
      lastAttempt: null,
      error: null,
      queryText: "",
      voteOptions: [],
      scores: {},
      rationales: {},
      votesSubmitted: false,
    });
  }

  setQuery(text: string): void {
    this.update({ queryText: text });
  }

  /** POST the current query; the input text survives failures. */
  async submit(): Promise<void> {
    const problem = this.state.problem;
    if (problem === null || this.state.busy) return;
    this.update({ busy: true, error: null });
    try {
      const attempt = await this.api.submitAttempt(problem.id, this.state.queryText);
      const refreshed = await this.api.getProblem(problem.id);
      this.update({ busy: false, lastAttempt: attempt, problem: refreshed });
    } catch (err) {
      this.update({ busy: false, error: describe(err) });
    }
  }

  canVote(): boolean {
    const attempt = this.state.lastAttempt;
    return attempt !== null && (attempt.solved || attempt.fatigueButton);
  }

  async openVoting(): Promise<void> {
    const problem = this.state.problem;
    if (problem === null) return;
    try {
      const doc = await this.api.voteOptions(problem.id);
      this.update({ phase: "voting", voteOptions: doc.options, error: null });
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.update({ error: "Solve the problem or keep trying first." });
        return;
      }
      this.update({ error: describe(err) });
    }
  }

  setScore(label: string, score: number): void {
    this.update({ scores: { ...this.state.scores, [label]: score } });
  }

  setRationale(label: string, text: string): void {
    this.update({ rationales: { ...this.state.rationales, [label]: text } });
  }

  /** Every visible card needs a score before submission unlocks. */
  votesComplete(): boolean {
    return (
      this.state.voteOptions.length > 0 &&
      this.state.voteOptions.every((o) => this.state.scores[o.label] !== undefined)
    );
  }

  async submitVotes(): Promise<void> {
    const problem = this.state.problem;
    if (problem === null || !this.votesComplete()) return;
    for (const option of this.state.voteOptions) {
      const score = this.state.scores[option.label];
      if (score === undefined) continue;
      await this.api.submitRating(problem.id, option.label, score, this.state.rationales[option.label]);
    }
    this.update({ phase: "done", votesSubmitted: true });
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.status}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}
