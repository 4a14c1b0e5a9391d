// Typed client for the practice service. All grading, repair, and option
// selection happens server side; this module only moves JSON.

export type TableView = {
  name: string;
  columns: Array<{ name: string; type: "int" | "str" }>;
  rows: Array<Array<number | string>>;
};

export type ProblemSummary = { id: string; description: string; totalPairs: number };

export type PairView = { index: number; source: TableView; destination: TableView };

export type ProblemView = {
  id: string;
  description: string;
  totalPairs: number;
  revealedPairs: number;
  pairs: PairView[];
};

export type Verdict = "correct" | "syntax_error" | "semantic_error";

export type AttemptView = {
  verdict: Verdict;
  solved: boolean;
  fatigueButton: boolean;
  feedback: {
    revealedPairs: number;
    expected: TableView;
    actual: TableView | null;
    message: string;
  };
};

export type VoteOption = { label: string; category: "MCQ" | "MRQ" | "OCQ" | "ORQ"; query: string };

export type VoteView = { options: VoteOption[] };

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class PracticeApi {
  participantId: string | null = null;

  constructor(private baseUrl: string, private fetchFn: typeof fetch = fetch) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.participantId) headers["X-Participant-Id"] = this.participantId;
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const doc = await response.json();
        if (typeof doc.detail === "string") detail = doc.detail;
      } catch {
        // keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  async openSession(): Promise<string> {
    const doc = await this.request<{ participantId: string }>("POST", "/session");
    this.participantId = doc.participantId;
    return doc.participantId;
  }

  listProblems(): Promise<{ problems: ProblemSummary[] }> {
    return this.request("GET", "/problems");
  }

  getProblem(id: string): Promise<ProblemView> {
    return this.request("GET", `/problems/${encodeURIComponent(id)}`);
  }

  submitAttempt(id: string, query: string): Promise<AttemptView> {
    return this.request("POST", `/problems/${encodeURIComponent(id)}/attempts`, { query });
  }

  voteOptions(id: string): Promise<VoteView> {
    return this.request("POST", `/problems/${encodeURIComponent(id)}/vote-options`);
  }

  submitRating(problem: string, label: string, score: number, rationale?: string): Promise<void> {
    return this.request("POST", "/ratings", { problem, label, score, rationale });
  }
}
