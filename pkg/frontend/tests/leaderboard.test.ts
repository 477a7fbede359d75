import { describe, expect, it } from "vitest";

import { renderLeaderboard } from "../src/pages/leaderboard.js";
import type { Leaderboard } from "../src/types.js";
import leaderboardFixture from "../fixtures/leaderboard.json";

const board = leaderboardFixture as Leaderboard;

describe("leaderboard page", () => {
  it("renders the recorded fixture rows in API rank order", () => {
    const html = renderLeaderboard(board, "alice");
    const rowOrder = [...html.matchAll(/data-developer="([^"]+)"/g)].map((m) => m[1]);
    expect(rowOrder).toEqual(board.rows.map((r) => r.developer_id));
    expect(rowOrder[0]).toBe("alice");
  });

  it("highlights the current user and nobody else", () => {
    const html = renderLeaderboard(board, "bob");
    const highlighted = [...html.matchAll(/<tr class="me" data-developer="([^"]+)"/g)].map(
      (m) => m[1],
    );
    expect(highlighted).toEqual(["bob"]);
  });

  it("shows tie ranks exactly as the API serves them", () => {
    const tied: Leaderboard = {
      contest_id: "c",
      state: "open",
      rows: [
        { rank: 1, developer_id: "a", score: 5, positive_points: 5, negative_points: 0 },
        { rank: 1, developer_id: "b", score: 5, positive_points: 6, negative_points: -1 },
        { rank: 3, developer_id: "c", score: 2, positive_points: 2, negative_points: 0 },
      ],
    };
    const html = renderLeaderboard(tied, "a");
    const ranks = [...html.matchAll(/<td class="rank">(\d+)<\/td>/g)].map((m) => Number(m[1]));
    expect(ranks).toEqual([1, 1, 3]);
  });

  it("escapes developer ids", () => {
    const sneaky: Leaderboard = {
      contest_id: "c",
      state: "open",
      rows: [
        {
          rank: 1,
          developer_id: "<img src=x>",
          score: 0,
          positive_points: 0,
          negative_points: 0,
        },
      ],
    };
    expect(renderLeaderboard(sneaky, "a")).not.toContain("<img src=x>");
  });
});
