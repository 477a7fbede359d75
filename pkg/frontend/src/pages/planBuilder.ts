/** Action-plan builder (manager view).
 *
 * The form accepts both threshold phrasings — "at most N" and "fewer than N"
 * — and normalizes to the canonical inclusive form before submission, showing
 * the stored meaning next to the input so there is no off-by-one surprise.
 * Client-side validation mirrors the server's rules; the server remains the
 * authority and its rejections are surfaced verbatim.
 */

import type { Objective, Plan } from "../types.js";
import { esc } from "../render.js";

export interface ObjectiveDraft {
  phrasing: "at_most" | "at_least" | "fewer_than" | "more_than";
  sign_filter: "positive" | "negative";
  threshold: number;
  rule_filter: string | null;
}

export interface PlanDraft {
  assignees: string[];
  objectives: ObjectiveDraft[];
  bonus: number;
  penalty: number;
  starts_at: string;
  ends_at: string;
}

export interface ContestWindow {
  contest_id: string;
  starts_at: string;
  ends_at: string;
}

/** Canonical objective the draft will be stored as. */
export function normalizeObjective(draft: ObjectiveDraft): Objective {
  let kind: Objective["kind"];
  let threshold = draft.threshold;
  switch (draft.phrasing) {
    case "fewer_than":
      kind = "at_most";
      threshold = draft.threshold - 1;
      break;
    case "more_than":
      kind = "at_least";
      threshold = draft.threshold + 1;
      break;
    default:
      kind = draft.phrasing;
  }
  return {
    kind,
    sign_filter: draft.sign_filter,
    threshold,
    rule_filter: draft.rule_filter,
  };
}

export function buildPlanDocument(draft: PlanDraft): Record<string, unknown> {
  return {
    assignees: [...draft.assignees].sort(),
    objectives: draft.objectives.map(normalizeObjective),
    bonus: draft.bonus,
    penalty: draft.penalty,
    starts_at: draft.starts_at,
    ends_at: draft.ends_at,
  };
}

export function validateDraft(draft: PlanDraft, contest: ContestWindow): string[] {
  const problems: string[] = [];
  if (draft.assignees.length === 0) problems.push("Pick at least one assignee.");
  if (draft.objectives.length === 0) problems.push("Add at least one objective.");
  for (const [i, objective] of draft.objectives.entries()) {
    if (!Number.isInteger(objective.threshold) || objective.threshold < 0) {
      problems.push(`Objective ${i + 1}: threshold must be a whole number ≥ 0.`);
    } else if (objective.phrasing === "fewer_than" && objective.threshold < 1) {
      problems.push(`Objective ${i + 1}: "fewer than 0" can never be met.`);
    }
  }
  if (draft.bonus < 0) problems.push("Bonus must be ≥ 0.");
  if (draft.penalty > 0) problems.push("Penalty must be ≤ 0.");
  if (!draft.starts_at || !draft.ends_at) {
    problems.push("Set both window dates.");
  } else {
    if (draft.ends_at <= draft.starts_at) problems.push("Window must end after it starts.");
    if (draft.starts_at < contest.starts_at || draft.ends_at > contest.ends_at) {
      problems.push("Plan window must sit inside the contest window.");
    }
  }
  return problems;
}

/** Key-order-insensitive canonical JSON, for document equality checks. */
export function canonicalJson(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(canonicalJson).join(",")}]`;
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([key, item]) => `${JSON.stringify(key)}:${canonicalJson(item)}`);
    return `{${entries.join(",")}}`;
  }
  return JSON.stringify(value);
}

/** Equality of what was submitted vs. what the server stored and returned. */
export function planRoundTripsEqual(submitted: Record<string, unknown>, stored: Plan): boolean {
  const normalized = {
    assignees: [...stored.assignees].sort(),
    objectives: stored.objectives.map((o) => ({
      kind: o.kind,
      sign_filter: o.sign_filter,
      threshold: o.threshold,
      rule_filter: o.rule_filter ?? null,
    })),
    bonus: stored.bonus,
    penalty: stored.penalty,
    starts_at: stored.starts_at,
    ends_at: stored.ends_at,
  };
  return canonicalJson(normalized) === canonicalJson(submitted);
}

export function describeObjective(objective: Objective): string {
  const verb = objective.kind === "at_most" ? "at most" : "at least";
  const rule = objective.rule_filter ? ` on ${objective.rule_filter}` : "";
  return `${verb} ${objective.threshold} ${objective.sign_filter} action(s)${rule}`;
}

export function renderPlanBuilder(
  draft: PlanDraft,
  contest: ContestWindow,
  developers: string[],
  serverError?: string,
): string {
  const problems = validateDraft(draft, contest);
  const assigneeBoxes = developers
    .map(
      (dev) =>
        `<label><input type="checkbox" name="assignee" value="${esc(dev)}" ` +
        `${draft.assignees.includes(dev) ? "checked" : ""}/> ${esc(dev)}</label>`,
    )
    .join("");
  const objectiveRows = draft.objectives
    .map((objective, i) => {
      const canonical = normalizeObjective(objective);
      return (
        `<fieldset class="objective" data-index="${i}">` +
        `<select name="phrasing">` +
        ["at_most", "fewer_than", "at_least", "more_than"]
          .map(
            (p) =>
              `<option value="${p}" ${p === objective.phrasing ? "selected" : ""}>${p.replace("_", " ")}</option>`,
          )
          .join("") +
        `</select>` +
        `<input name="threshold" type="number" min="0" value="${objective.threshold}"/>` +
        `<select name="sign"><option value="positive" ${objective.sign_filter === "positive" ? "selected" : ""}>positive</option>` +
        `<option value="negative" ${objective.sign_filter === "negative" ? "selected" : ""}>negative</option></select>` +
        `<input name="rule" placeholder="any rule" value="${esc(objective.rule_filter ?? "")}"/>` +
        `<span class="canonical">stored as: ${esc(describeObjective(canonical))}</span>` +
        `<button data-remove="${i}">remove</button>` +
        `</fieldset>`
      );
    })
    .join("");
  const problemList = problems.map((p) => `<li>${esc(p)}</li>`).join("");
  return (
    `<section class="plan-builder">` +
    `<h2>New action plan <small>contest ${esc(contest.contest_id)}</small></h2>` +
    (serverError ? `<div class="banner error">${esc(serverError)}</div>` : "") +
    `<div class="assignees">${assigneeBoxes}</div>` +
    `<div class="objectives">${objectiveRows}</div>` +
    `<button data-add-objective>add objective</button>` +
    `<label>bonus <input name="bonus" type="number" min="0" value="${draft.bonus}"/></label>` +
    `<label>penalty <input name="penalty" type="number" max="0" value="${draft.penalty}"/></label>` +
    `<label>from <input name="starts_at" value="${esc(draft.starts_at)}"/></label>` +
    `<label>until <input name="ends_at" value="${esc(draft.ends_at)}"/></label>` +
    (problems.length > 0 ? `<ul class="problems">${problemList}</ul>` : "") +
    `<button data-submit ${problems.length > 0 ? "disabled" : ""}>create plan</button>` +
    `</section>`
  );
}
