// Typed client for the node HTTP API. The server is authoritative for every
// score and status; this module never derives them locally.

export type Verdict = "Phishing" | "NotPhishing";

export interface VoteView {
  verifier_id: string;
  verdict: Verdict;
  ordinal: number;
  block_height: number;
  rank: number;
  skill_points: number;
}

export interface TimelinePoint {
  ordinal: number;
  score: number | null;
}

export interface UrlView {
  url_id: string;
  url: string;
  submitter: string;
  evidence_email: string;
  status: "Unverified" | "Phishing" | "NotPhishing";
  phish_score: number | null;
  first_block_height: number;
  votes: VoteView[];
  timeline: TimelinePoint[];
}

export interface GraphNode {
  id: string;
  rank: number;
  skill_points: number;
}

export interface GraphEdge {
  from: string;
  to: string;
  weight: number;
}

export interface GraphView {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface BlacklistEntry {
  url: string;
  phish_score: number;
}

export interface WriteResponse {
  tx_id: string;
  accepted: boolean;
  committed: boolean;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public code: string, public status: number) {
    super(code);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(`${this.base}${path}`, init);
    const doc = await res.json();
    if (!res.ok) {
      throw new ApiError((doc as { error?: string }).error ?? "UnknownError", res.status);
    }
    return doc as T;
  }

  getUrl(urlId: string): Promise<UrlView> {
    return this.request("GET", `/api/v1/urls/${urlId}`);
  }

  getTimeline(urlId: string): Promise<{ url_id: string; timeline: TimelinePoint[] }> {
    return this.request("GET", `/api/v1/urls/${urlId}/timeline`);
  }

  getGraph(): Promise<GraphView> {
    return this.request("GET", "/api/v1/graph");
  }

  getBlacklist(): Promise<BlacklistEntry[]> {
    return this.request("GET", "/api/v1/blacklist");
  }

  castVote(urlId: string, sender: string, verdict: Verdict): Promise<WriteResponse> {
    return this.request("POST", `/api/v1/urls/${urlId}/votes`, { sender, verdict });
  }

  registerUser(verifierId: string, displayName: string): Promise<WriteResponse> {
    return this.request("POST", "/api/v1/users", {
      verifier_id: verifierId,
      display_name: displayName,
    });
  }

  submitUrl(sender: string, url: string, evidenceEmail: string): Promise<WriteResponse> {
    return this.request("POST", "/api/v1/urls", {
      sender,
      url,
      evidence_email: evidenceEmail,
    });
  }
}

declare global {
  interface Window {
    VERIPHISH_API?: string;
  }
}

export function defaultClient(): ApiClient {
  const base = typeof window !== "undefined" && window.VERIPHISH_API ? window.VERIPHISH_API : "";
  return new ApiClient(base);
}
