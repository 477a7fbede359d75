/** Newsfeed: own actions in full detail, peers as anonymized entries. */

import type { Feed, FeedEntry } from "../types.js";
import { esc, formatPoints, signBadge } from "../render.js";

function entryHtml(entry: FeedEntry): string {
  if (entry.own) {
    return (
      `<li class="entry own">` +
      signBadge(entry.sign) +
      `<span class="points">${formatPoints(entry.points)}</span>` +
      `<span class="rule">${esc(entry.rule_id)}</span>` +
      `<span class="file">${esc(entry.file_path)}</span>` +
      `<time>${esc(entry.created_at)}</time>` +
      `</li>`
    );
  }
  return (
    `<li class="entry peer">` +
    signBadge(entry.sign) +
    `<span class="points">${formatPoints(entry.points)}</span>` +
    `<span class="rule">${esc(entry.rule_id)}</span>` +
    `<span class="author">${esc(entry.author)}</span>` +
    `<time>${esc(entry.created_at)}</time>` +
    `</li>`
  );
}

export function renderFeed(feed: Feed): string {
  const items = feed.entries.map(entryHtml).join("");
  const empty = feed.entries.length === 0 ? '<p class="empty">No actions yet.</p>' : "";
  return (
    `<section class="feed">` +
    `<h2>Newsfeed</h2>${empty}<ul>${items}</ul>` +
    `<nav class="pager" data-page="${feed.page}" data-total="${feed.total_entries}">` +
    `<button data-nav="prev" ${feed.page <= 1 ? "disabled" : ""}>Newer</button>` +
    `<button data-nav="next" ${feed.page * feed.page_size >= feed.total_entries ? "disabled" : ""}>Older</button>` +
    `</nav></section>`
  );
}
