import { ApiClient, FetchLike, UrlView } from "../src/api.js";

export interface RecordedCall {
  url: string;
  method: string;
  body: string | null;
}

export class FixtureServer {
  calls: RecordedCall[] = [];
  private routes = new Map<string, { status: number; body: unknown }>();

  route(method: string, path: string, body: unknown, status = 200): void {
    this.routes.set(`${method} ${path}`, { status, body });
  }

  fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    this.calls.push({
      url,
      method,
      body: typeof init?.body === "string" ? init.body : null,
    });
    const hit = this.routes.get(`${method} ${url}`);
    if (!hit) {
      return new Response(JSON.stringify({ error: "NotFound" }), { status: 404 });
    }
    return new Response(JSON.stringify(hit.body), { status: hit.status });
  };

  client(): ApiClient {
    return new ApiClient("", this.fetch);
  }
}

export function urlViewFixture(overrides: Partial<UrlView> = {}): UrlView {
  return {
    url_id: "ab".repeat(32),
    url: "https://phish.example/steal",
    submitter: "alice",
    evidence_email: "mail quoting https://phish.example/steal",
    status: "Phishing",
    phish_score: 0.3452,
    first_block_height: 2,
    votes: [
      { verifier_id: "carol", verdict: "Phishing", ordinal: 1, block_height: 3, rank: 0.25, skill_points: 153 },
      { verifier_id: "dave", verdict: "Phishing", ordinal: 2, block_height: 3, rank: 0.25, skill_points: 120 },
      { verifier_id: "bob", verdict: "NotPhishing", ordinal: 3, block_height: 4, rank: 0.25, skill_points: 96 },
      { verifier_id: "erin", verdict: "NotPhishing", ordinal: 4, block_height: 4, rank: 0.25, skill_points: 88 },
    ],
    timeline: [
      { ordinal: 1, score: null },
      { ordinal: 2, score: null },
      { ordinal: 3, score: 1.0 },
      { ordinal: 4, score: 0.5 },
    ],
    ...overrides,
  };
}
