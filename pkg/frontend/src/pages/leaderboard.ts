/** Leaderboard page: rows exactly in API rank order, current user highlighted. */

import type { Leaderboard } from "../types.js";
import { esc, formatPoints } from "../render.js";

export function renderLeaderboard(board: Leaderboard, currentUser: string): string {
  const rows = board.rows
    .map((row) => {
      const mine = row.developer_id === currentUser ? ' class="me"' : "";
      return (
        `<tr${mine} data-developer="${esc(row.developer_id)}">` +
        `<td class="rank">${row.rank}</td>` +
        `<td class="developer">${esc(row.developer_id)}</td>` +
        `<td class="score">${formatPoints(row.score)}</td>` +
        `<td class="pos">${formatPoints(row.positive_points)}</td>` +
        `<td class="neg">${row.negative_points}</td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<section class="leaderboard" data-contest="${esc(board.contest_id)}">` +
    `<h2>Leaderboard <span class="state ${esc(board.state)}">${esc(board.state)}</span></h2>` +
    `<table><thead><tr><th>#</th><th>Developer</th><th>Score</th><th>Positive</th><th>Negative</th></tr></thead>` +
    `<tbody>${rows}</tbody></table></section>`
  );
}
