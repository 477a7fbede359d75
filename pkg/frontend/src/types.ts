/** Payload shapes mirroring the HTTP API's published response schemas. */

export interface LeaderboardRow {
  rank: number;
  developer_id: string;
  score: number;
  positive_points: number;
  negative_points: number;
}

export interface Leaderboard {
  contest_id: string;
  state: "scheduled" | "open" | "closed";
  rows: LeaderboardRow[];
}

export interface OwnFeedEntry {
  own: true;
  action_id: string;
  commit_id: string;
  author_id: string;
  rule_id: string;
  file_path: string;
  sign: "positive" | "negative";
  points: number;
  created_at: string;
}

export interface PeerFeedEntry {
  own: false;
  author: string; // per-contest pseudonym, never a real identity
  rule_id: string;
  sign: "positive" | "negative";
  points: number;
  created_at: string;
}

export type FeedEntry = OwnFeedEntry | PeerFeedEntry;

export interface Feed {
  developer_id: string;
  page: number;
  page_size: number;
  total_entries: number;
  entries: FeedEntry[];
}

export interface Objective {
  kind: "at_most" | "at_least";
  sign_filter: "positive" | "negative";
  threshold: number;
  rule_filter: string | null;
}

export interface Plan {
  plan_id: string;
  contest_id: string;
  assignees: string[];
  objectives: Objective[];
  bonus: number;
  penalty: number;
  starts_at: string;
  ends_at: string;
  state: "active" | "succeeded" | "failed";
  created_by?: string;
  progress?: ObjectiveProgress[];
}

export interface ObjectiveProgress {
  index: number;
  kind: string;
  sign_filter: string;
  rule_filter: string | null;
  threshold: number;
  count: number;
  satisfied_now: boolean;
  final: boolean;
}

export interface TreemapNode {
  path: string;
  name: string;
  weight: number;
  violation_count: number;
  children: TreemapNode[];
}

export interface TreemapResponse {
  head_commit_id: string;
  root: TreemapNode;
  rule_ranking: RuleRankingRow[];
}

export interface RuleRankingRow {
  rule_id: string;
  total_potential: number;
  open_count: number;
}

export interface Dashboard {
  developer_id: string;
  display_name: string;
  contest: {
    contest_id: string;
    score: number;
    rank: number;
    positive_points: number;
    negative_points: number;
  } | null;
  actions: OwnFeedEntry[];
  adjustments: { delta: number; reason: string; issued_at: string }[];
  plan_payouts: { plan_id: string; delta: number }[];
  ongoing_plans: Plan[];
}

export interface ScoringConfig {
  default_positive: number;
  default_negative: number;
  severity_overrides: Record<string, [number, number]>;
  category_overrides: Record<string, [number, number]>;
  rule_overrides: Record<string, [number, number]>;
  disabled_rules: string[];
  category_precedes_severity: boolean;
  version: number;
  effective_from: string;
}

export interface Overview {
  project_id: string;
  contest_id: string;
  contest_state: string;
  rule_counts: { rule_id: string; negative_actions: number; positive_actions: number }[];
  developer_scores: LeaderboardRow[];
  totals: Record<string, number>;
  flagged_actions: { action_id: string; contest_id: string; reason: string }[];
  quarantined_authors: Record<string, string[]>;
  scoring_config_version: number;
}

export interface ApiError {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
