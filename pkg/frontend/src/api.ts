/** Thin typed client over the HTTP API; every view reads through this. */

import type {
  ApiError,
  Dashboard,
  Feed,
  Leaderboard,
  Overview,
  Plan,
  ScoringConfig,
  TreemapResponse,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ApiError,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export interface ClientOptions {
  baseUrl: string;
  projectId: string;
  token: () => string;
  fetcher?: typeof fetch;
}

export class ApiClient {
  private readonly fetcher: typeof fetch;

  constructor(private readonly options: ClientOptions) {
    this.fetcher = options.fetcher ?? fetch.bind(globalThis);
  }

  projectUrl(suffix: string): string {
    const base = this.options.baseUrl.replace(/\/+$/, "");
    return `${base}/projects/${encodeURIComponent(this.options.projectId)}${suffix}`;
  }

  private async request<T>(method: string, suffix: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {
      Authorization: `Bearer ${this.options.token()}`,
    };
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await this.fetcher(this.projectUrl(suffix), {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(response.status, payload as ApiError);
    }
    return payload as T;
  }

  leaderboard(contestId: string): Promise<Leaderboard> {
    return this.request("GET", `/contests/${encodeURIComponent(contestId)}/leaderboard`);
  }

  feed(developerId: string, page = 1, pageSize = 20): Promise<Feed> {
    return this.request(
      "GET",
      `/developers/${encodeURIComponent(developerId)}/feed?page=${page}&page_size=${pageSize}`,
    );
  }

  dashboard(developerId: string): Promise<Dashboard> {
    return this.request("GET", `/developers/${encodeURIComponent(developerId)}/dashboard`);
  }

  suggestions(developerId: string): Promise<unknown[]> {
    return this.request("GET", `/developers/${encodeURIComponent(developerId)}/suggestions`);
  }

  treemap(): Promise<TreemapResponse> {
    return this.request("GET", "/suggestions/treemap");
  }

  overview(contestId?: string): Promise<Overview> {
    const query = contestId ? `?contest=${encodeURIComponent(contestId)}` : "";
    return this.request("GET", `/overview${query}`);
  }

  scoringConfig(): Promise<ScoringConfig> {
    return this.request("GET", "/scoring-config");
  }

  putScoringConfig(config: Partial<ScoringConfig>): Promise<ScoringConfig> {
    return this.request("PUT", "/scoring-config", config);
  }

  createPlan(doc: unknown): Promise<Plan> {
    return this.request("POST", "/plans", doc);
  }

  getPlan(planId: string): Promise<Plan> {
    return this.request("GET", `/plans/${encodeURIComponent(planId)}`);
  }

  applyAdjustment(doc: {
    developer_id: string;
    delta: number;
    reason?: string;
  }): Promise<unknown> {
    return this.request("POST", "/adjustments", doc);
  }

  openContest(doc: { starts_at?: string; ends_at?: string }): Promise<unknown> {
    return this.request("POST", "/contests", doc);
  }

  closeContest(contestId: string): Promise<unknown> {
    return this.request("POST", `/contests/${encodeURIComponent(contestId)}/close`, {});
  }
}
