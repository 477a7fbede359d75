/** Personal dashboard: score gauge, full action detail, adjustments, plans. */

import type { Dashboard } from "../types.js";
import { esc, formatPoints, signBadge } from "../render.js";
import { describeObjective } from "./planBuilder.js";

export function renderDashboard(dashboard: Dashboard): string {
  const contest = dashboard.contest
    ? `<div class="gauge"><span class="score">${formatPoints(dashboard.contest.score)}</span>` +
      `<span class="rank">rank ${dashboard.contest.rank}</span>` +
      `<span class="split">${formatPoints(dashboard.contest.positive_points)} / ${dashboard.contest.negative_points}</span></div>`
    : '<p class="empty">No open contest right now.</p>';

  const actions = dashboard.actions
    .map(
      (action) =>
        `<li>${signBadge(action.sign)}<span class="points">${formatPoints(action.points)}</span>` +
        `<span class="rule">${esc(action.rule_id)}</span>` +
        `<span class="file">${esc(action.file_path)}</span>` +
        `<span class="commit">${esc(action.commit_id.slice(0, 8))}</span>` +
        `<time>${esc(action.created_at)}</time></li>`,
    )
    .join("");

  const adjustments = dashboard.adjustments
    .map(
      (adj) =>
        `<li><span class="points">${formatPoints(adj.delta)}</span>` +
        `<span class="reason">${esc(adj.reason)}</span><time>${esc(adj.issued_at)}</time></li>`,
    )
    .join("");

  const plans = dashboard.ongoing_plans
    .map((plan) => {
      const objectives = (plan.progress ?? [])
        .map(
          (p) =>
            `<li class="${p.satisfied_now ? "on-track" : "behind"}">` +
            `${esc(describeObjective({ kind: p.kind as "at_most" | "at_least", sign_filter: p.sign_filter as "positive" | "negative", threshold: p.threshold, rule_filter: p.rule_filter }))}` +
            ` — ${p.count} so far${p.final ? "" : " (provisional)"}</li>`,
        )
        .join("");
      return (
        `<article class="plan"><h4>${esc(plan.plan_id)}</h4>` +
        `<p>${formatPoints(plan.bonus)} on success, ${plan.penalty} on failure · until ${esc(plan.ends_at)}</p>` +
        `<ul>${objectives}</ul></article>`
      );
    })
    .join("");

  return (
    `<section class="dashboard">` +
    `<h2>${esc(dashboard.display_name)}</h2>` +
    contest +
    `<h3>Your actions</h3><ul class="actions">${actions || "<li class='empty'>none yet</li>"}</ul>` +
    (adjustments ? `<h3>Adjustments</h3><ul class="adjustments">${adjustments}</ul>` : "") +
    `<h3>Ongoing action plans</h3>` +
    (plans || '<p class="empty">No plans assigned.</p>') +
    `</section>`
  );
}
