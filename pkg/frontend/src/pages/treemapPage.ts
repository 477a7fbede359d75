/** Suggestion view: rule reward ranking above the source treemap. */

import type { TreemapNode, TreemapResponse } from "../types.js";
import { esc } from "../render.js";
import { descendInto, renderTreemapSvg } from "../treemap.js";

export const TREEMAP_WIDTH = 960;
export const TREEMAP_HEIGHT = 540;

export function renderRuleRanking(response: TreemapResponse): string {
  if (response.rule_ranking.length === 0) {
    return '<p class="empty">Nothing to fix — no open violations.</p>';
  }
  const rows = response.rule_ranking
    .map(
      (row) =>
        `<tr><td class="rule">${esc(row.rule_id)}</td>` +
        `<td class="potential">${row.total_potential}</td>` +
        `<td class="count">${row.open_count}</td></tr>`,
    )
    .join("");
  return (
    `<table class="rule-ranking">` +
    `<thead><tr><th>Rule</th><th>Points available</th><th>Open</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderTreemapPage(response: TreemapResponse, focusPath = ""): string {
  const focus = descendInto(response.root, focusPath) ?? response.root;
  const crumbs = breadcrumbs(focus.path)
    .map(([label, path]) => `<a href="#" data-crumb="${esc(path)}">${esc(label)}</a>`)
    .join(" / ");
  return (
    `<section class="suggestions" data-head="${esc(response.head_commit_id)}">` +
    `<h2>Where the points are</h2>` +
    renderRuleRanking(response) +
    `<nav class="crumbs">${crumbs}</nav>` +
    renderTreemapSvg(focus, TREEMAP_WIDTH, TREEMAP_HEIGHT) +
    `</section>`
  );
}

export function breadcrumbs(path: string): Array<[string, string]> {
  const crumbs: Array<[string, string]> = [["(root)", ""]];
  if (path === "") return crumbs;
  let acc = "";
  for (const part of path.split("/")) {
    acc = acc === "" ? part : `${acc}/${part}`;
    crumbs.push([part, acc]);
  }
  return crumbs;
}

/** Click handling: a cell with children descends; leaves keep the focus. */
export function nextFocus(root: TreemapNode, currentFocus: string, clickedPath: string): string {
  const clicked = descendInto(root, clickedPath);
  if (clicked === null) return currentFocus;
  return clicked.children.length > 0 ? clicked.path : currentFocus;
}
