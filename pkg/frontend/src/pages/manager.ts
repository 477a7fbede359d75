/** Manager views: observation overview and the scoring-config editor. */

import type { Overview, ScoringConfig } from "../types.js";
import { esc, formatPoints } from "../render.js";

export function renderOverview(overview: Overview): string {
  const rules = overview.rule_counts
    .map(
      (rc) =>
        `<tr><td>${esc(rc.rule_id)}</td><td>${rc.negative_actions}</td><td>${rc.positive_actions}</td></tr>`,
    )
    .join("");
  const scores = overview.developer_scores
    .map(
      (row) =>
        `<tr><td>${row.rank}</td><td>${esc(row.developer_id)}</td><td>${formatPoints(row.score)}</td></tr>`,
    )
    .join("");
  const flagged = overview.flagged_actions
    .map((f) => `<li>${esc(f.action_id)} — ${esc(f.reason)}</li>`)
    .join("");
  const quarantine = Object.entries(overview.quarantined_authors)
    .map(([author, commits]) => `<li>${esc(author)}: ${commits.length} commit(s)</li>`)
    .join("");
  return (
    `<section class="overview" data-contest="${esc(overview.contest_id)}">` +
    `<h2>Observation — ${esc(overview.contest_id)} (${esc(overview.contest_state)})</h2>` +
    `<h3>Most violated rules</h3>` +
    `<table><thead><tr><th>Rule</th><th>Negative</th><th>Positive</th></tr></thead><tbody>${rules}</tbody></table>` +
    `<h3>Developer scores</h3>` +
    `<table><thead><tr><th>#</th><th>Developer</th><th>Score</th></tr></thead><tbody>${scores}</tbody></table>` +
    (flagged ? `<h3>Needs review</h3><ul class="flagged">${flagged}</ul>` : "") +
    (quarantine ? `<h3>Unmapped authors</h3><ul class="quarantine">${quarantine}</ul>` : "") +
    `</section>`
  );
}

export function renderConfigEditor(config: ScoringConfig, serverError?: string): string {
  const overrides = Object.entries(config.rule_overrides)
    .map(
      ([rule, [pos, neg]]) =>
        `<tr data-rule="${esc(rule)}"><td>${esc(rule)}</td>` +
        `<td><input name="pos" type="number" min="0" value="${pos}"/></td>` +
        `<td><input name="neg" type="number" max="0" value="${neg}"/></td>` +
        `<td><button data-drop="${esc(rule)}">drop</button></td></tr>`,
    )
    .join("");
  const disabled = config.disabled_rules
    .map((rule) => `<li>${esc(rule)} <button data-enable="${esc(rule)}">re-enable</button></li>`)
    .join("");
  return (
    `<section class="config-editor" data-version="${config.version}">` +
    `<h2>Point configuration <small>v${config.version}</small></h2>` +
    (serverError ? `<div class="banner error">${esc(serverError)}</div>` : "") +
    `<label>positive default <input name="default_positive" type="number" min="0" value="${config.default_positive}"/></label>` +
    `<label>negative default <input name="default_negative" type="number" max="0" value="${config.default_negative}"/></label>` +
    `<h3>Per-rule overrides</h3>` +
    `<table><thead><tr><th>Rule</th><th>Fix reward</th><th>Introduce cost</th><th></th></tr></thead>` +
    `<tbody>${overrides}</tbody></table>` +
    `<h3>Disabled rules</h3><ul class="disabled">${disabled || "<li class='empty'>none</li>"}</ul>` +
    `<button data-save>save as v${config.version + 1}</button>` +
    `</section>`
  );
}
