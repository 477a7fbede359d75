/** Deployment configuration, served next to the static bundle. */

export interface AppConfig {
  apiBaseUrl: string;
  pollIntervalMs: number;
}

export const DEFAULT_CONFIG: AppConfig = {
  apiBaseUrl: "http://127.0.0.1:8385",
  pollIntervalMs: 30_000,
};

export async function loadConfig(fetcher: typeof fetch = fetch): Promise<AppConfig> {
  try {
    const response = await fetcher("./config.json", { cache: "no-cache" });
    if (!response.ok) return { ...DEFAULT_CONFIG };
    const raw = (await response.json()) as Partial<AppConfig>;
    return {
      apiBaseUrl: typeof raw.apiBaseUrl === "string" ? raw.apiBaseUrl : DEFAULT_CONFIG.apiBaseUrl,
      pollIntervalMs:
        typeof raw.pollIntervalMs === "number" && raw.pollIntervalMs >= 1000
          ? raw.pollIntervalMs
          : DEFAULT_CONFIG.pollIntervalMs,
    };
  } catch {
    return { ...DEFAULT_CONFIG };
  }
}
