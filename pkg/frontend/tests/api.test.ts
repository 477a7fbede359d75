import { describe, expect, it } from "vitest";

import { ApiClient, ApiRequestError } from "../src/api.js";
import { loadConfig, DEFAULT_CONFIG } from "../src/config.js";
import { LatestOnly } from "../src/poll.js";

function stubFetch(status: number, body: unknown, calls: Array<{ url: string; init?: RequestInit }> = []) {
  return (async (url: RequestInfo | URL, init?: RequestInit) => {
    calls.push({ url: String(url), init });
    return {
      ok: status < 400,
      status,
      json: async () => body,
    } as Response;
  }) as typeof fetch;
}

describe("api client", () => {
  it("builds project-scoped urls and sends the bearer token", async () => {
    const calls: Array<{ url: string; init?: RequestInit }> = [];
    const client = new ApiClient({
      baseUrl: "http://api.example:8385/",
      projectId: "c-app",
      token: () => "tok-alice",
      fetcher: stubFetch(200, { contest_id: "contest-1", state: "open", rows: [] }, calls),
    });
    await client.leaderboard("contest-1");
    expect(calls[0].url).toBe(
      "http://api.example:8385/projects/c-app/contests/contest-1/leaderboard",
    );
    expect((calls[0].init?.headers as Record<string, string>).Authorization).toBe(
      "Bearer tok-alice",
    );
  });

  it("wraps error bodies with their code", async () => {
    const client = new ApiClient({
      baseUrl: "http://api.example",
      projectId: "c-app",
      token: () => "nope",
      fetcher: stubFetch(401, { code: "Unauthenticated", message: "missing bearer token", details: {} }),
    });
    await expect(client.treemap()).rejects.toThrowError(ApiRequestError);
    await expect(client.treemap()).rejects.toThrow(/Unauthenticated/);
  });
});

describe("config loading", () => {
  it("falls back to defaults when config.json is unreachable", async () => {
    const failing = (async () => {
      throw new Error("offline");
    }) as unknown as typeof fetch;
    expect(await loadConfig(failing)).toEqual(DEFAULT_CONFIG);
  });

  it("accepts overrides and rejects nonsense intervals", async () => {
    const fetcher = stubFetch(200, { apiBaseUrl: "http://x", pollIntervalMs: 5 });
    const config = await loadConfig(fetcher);
    expect(config.apiBaseUrl).toBe("http://x");
    expect(config.pollIntervalMs).toBe(DEFAULT_CONFIG.pollIntervalMs);
  });
});

describe("stale response protection", () => {
  it("drops a slow response that arrives after a newer one", async () => {
    const latest = new LatestOnly<string>();
    let releaseFirst!: (value: string) => void;
    const first = latest.run(
      () => new Promise<string>((resolve) => (releaseFirst = resolve)),
    );
    const second = await latest.run(async () => "fresh");
    expect(second).toBe("fresh");
    releaseFirst("stale");
    expect(await first).toBeNull();
  });
});
