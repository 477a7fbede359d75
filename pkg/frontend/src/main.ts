/** Single-page shell: hash routing, polling, and event delegation.
 *
 * Every number on screen comes straight from an API field; this file only
 * wires fetches to renderers and form state to request documents.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import { loadConfig } from "./config.js";
import { LatestOnly, startPolling, type PollerHandle } from "./poll.js";
import { errorBanner } from "./render.js";
import { renderFeed } from "./pages/feed.js";
import { renderLeaderboard } from "./pages/leaderboard.js";
import { renderDashboard } from "./pages/dashboard.js";
import {
  buildPlanDocument,
  renderPlanBuilder,
  validateDraft,
  type ContestWindow,
  type ObjectiveDraft,
  type PlanDraft,
} from "./pages/planBuilder.js";
import { renderConfigEditor, renderOverview } from "./pages/manager.js";
import { nextFocus, renderTreemapPage } from "./pages/treemapPage.js";
import type { TreemapResponse } from "./types.js";

interface Session {
  projectId: string;
  developerId: string;
  contestId: string;
  token: string;
}

function readSession(): Session | null {
  const raw = localStorage.getItem("debtforge-session");
  if (!raw) return null;
  try {
    return JSON.parse(raw) as Session;
  } catch {
    return null;
  }
}

function writeSession(session: Session): void {
  localStorage.setItem("debtforge-session", JSON.stringify(session));
}

const ROUTES = ["leaderboard", "feed", "dashboard", "suggestions", "plans", "config", "overview"] as const;
type Route = (typeof ROUTES)[number];

function currentRoute(): Route {
  const hash = location.hash.replace(/^#\/?/, "");
  return (ROUTES as readonly string[]).includes(hash) ? (hash as Route) : "leaderboard";
}

async function boot(): Promise<void> {
  const config = await loadConfig();
  const root = document.getElementById("app")!;
  let session = readSession();
  if (!session) {
    renderLogin(root, (entered) => {
      session = entered;
      writeSession(entered);
      location.reload();
    });
    return;
  }
  const client = new ApiClient({
    baseUrl: config.apiBaseUrl,
    projectId: session.projectId,
    token: () => session!.token,
  });

  let poller: PollerHandle | null = null;
  const latest = new LatestOnly<string>();
  let lastGood = "";
  let treemapFocus = "";
  let treemapData: TreemapResponse | null = null;
  let planDraft: PlanDraft = {
    assignees: [],
    objectives: [defaultObjective()],
    bonus: 3,
    penalty: -3,
    starts_at: "",
    ends_at: "",
  };

  function defaultObjective(): ObjectiveDraft {
    return { phrasing: "fewer_than", sign_filter: "negative", threshold: 5, rule_filter: null };
  }

  async function renderRoute(): Promise<string> {
    const route = currentRoute();
    switch (route) {
      case "leaderboard":
        return renderLeaderboard(await client.leaderboard(session!.contestId), session!.developerId);
      case "feed":
        return renderFeed(await client.feed(session!.developerId));
      case "dashboard":
        return renderDashboard(await client.dashboard(session!.developerId));
      case "suggestions": {
        treemapData = await client.treemap();
        return renderTreemapPage(treemapData, treemapFocus);
      }
      case "plans": {
        const board = await client.leaderboard(session!.contestId);
        const contest: ContestWindow = {
          contest_id: board.contest_id,
          starts_at: "",
          ends_at: "9999-12-31T00:00:00Z",
        };
        const developers = board.rows.map((row) => row.developer_id);
        return renderPlanBuilder(planDraft, contest, developers);
      }
      case "config":
        return renderConfigEditor(await client.scoringConfig());
      case "overview":
        return renderOverview(await client.overview());
    }
  }

  async function refresh(): Promise<void> {
    try {
      const html = await latest.run(renderRoute);
      if (html !== null) {
        lastGood = html;
        root.innerHTML = navBar() + html;
      }
    } catch (error) {
      const message =
        error instanceof ApiRequestError ? error.message : "service unreachable — showing cached view";
      root.innerHTML = navBar() + errorBanner(message) + lastGood;
    }
  }

  function navBar(): string {
    const links = ROUTES.map(
      (route) =>
        `<a href="#/${route}" class="${route === currentRoute() ? "active" : ""}">${route}</a>`,
    ).join("");
    return `<nav class="top">${links}<span class="who">${session!.developerId}</span><button data-logout>sign out</button></nav>`;
  }

  window.addEventListener("hashchange", () => void refresh());
  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.closest("[data-logout]")) {
      localStorage.removeItem("debtforge-session");
      location.reload();
      return;
    }
    const cell = target.closest(".cell") as HTMLElement | null;
    if (cell && treemapData) {
      treemapFocus = nextFocus(treemapData.root, treemapFocus, cell.dataset.path ?? "");
      void refresh();
      return;
    }
    const crumb = target.closest("[data-crumb]") as HTMLElement | null;
    if (crumb) {
      event.preventDefault();
      treemapFocus = crumb.dataset.crumb ?? "";
      void refresh();
      return;
    }
    if (target.matches("[data-add-objective]")) {
      planDraft.objectives.push(defaultObjective());
      void refresh();
      return;
    }
    const removeIdx = (target as HTMLElement).dataset?.remove;
    if (removeIdx !== undefined) {
      planDraft.objectives.splice(Number(removeIdx), 1);
      void refresh();
      return;
    }
    if (target.matches("[data-submit]")) {
      void submitPlan();
    }
  });

  root.addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    const fieldset = input.closest(".objective") as HTMLElement | null;
    if (fieldset) {
      const index = Number(fieldset.dataset.index);
      const objective = planDraft.objectives[index];
      if (!objective) return;
      if (input.name === "phrasing") objective.phrasing = input.value as ObjectiveDraft["phrasing"];
      if (input.name === "threshold") objective.threshold = Number(input.value);
      if (input.name === "sign") objective.sign_filter = input.value as "positive" | "negative";
      if (input.name === "rule") objective.rule_filter = input.value || null;
      void refresh();
      return;
    }
    if (input.name === "assignee") {
      const checked = new Set(planDraft.assignees);
      if (input.checked) checked.add(input.value);
      else checked.delete(input.value);
      planDraft.assignees = [...checked];
      void refresh();
    }
    if (input.name === "bonus") planDraft.bonus = Number(input.value);
    if (input.name === "penalty") planDraft.penalty = Number(input.value);
    if (input.name === "starts_at") planDraft.starts_at = input.value;
    if (input.name === "ends_at") planDraft.ends_at = input.value;
  });

  async function submitPlan(): Promise<void> {
    const contest: ContestWindow = {
      contest_id: session!.contestId,
      starts_at: "",
      ends_at: "9999-12-31T00:00:00Z",
    };
    if (validateDraft(planDraft, contest).length > 0) return;
    try {
      await client.createPlan(buildPlanDocument(planDraft));
      planDraft = {
        assignees: [],
        objectives: [defaultObjective()],
        bonus: 3,
        penalty: -3,
        starts_at: "",
        ends_at: "",
      };
      location.hash = "#/dashboard";
    } catch (error) {
      if (error instanceof ApiRequestError) {
        const board = await client.leaderboard(session!.contestId);
        root.innerHTML =
          navBar() +
          renderPlanBuilder(
            planDraft,
            contest,
            board.rows.map((r) => r.developer_id),
            error.message,
          );
      }
    }
  }

  poller = startPolling(refresh, config.pollIntervalMs);
  void poller;
}

function renderLogin(root: HTMLElement, done: (session: Session) => void): void {
  root.innerHTML = `
    <section class="login">
      <h2>DebtForge</h2>
      <label>project <input name="project" placeholder="c-app"/></label>
      <label>developer <input name="developer" placeholder="alice"/></label>
      <label>contest <input name="contest" placeholder="contest-1"/></label>
      <label>token <input name="token" type="password"/></label>
      <button>enter</button>
    </section>`;
  root.querySelector("button")!.addEventListener("click", () => {
    const value = (name: string) =>
      (root.querySelector(`input[name=${name}]`) as HTMLInputElement).value.trim();
    done({
      projectId: value("project"),
      developerId: value("developer"),
      contestId: value("contest"),
      token: value("token"),
    });
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot();
}
