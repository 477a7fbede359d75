"""Action plans: manager-issued, timeboxed challenges over action counts.

Objectives are conjunctive; the plan succeeds only if every objective holds at
window end.  Counts aggregate over the whole assignee group, and the resulting
bonus or penalty lands on every assignee uniformly, even if one person did all
the work.  "Fewer than N" phrasings are normalized to inclusive ``at_most``
thresholds at creation so stored plans are unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Iterable, Mapping, Optional

from .errors import SchemaMismatch
from .model import ActionRecord, Sign, format_utc, parse_utc


class ObjectiveKind(str, Enum):
    AT_MOST = "at_most"
    AT_LEAST = "at_least"


class PlanState(str, Enum):
    ACTIVE = "active"
    SUCCEEDED = "succeeded"
    FAILED = "failed"


@dataclass(frozen=True)
class Objective:
    kind: ObjectiveKind
    sign_filter: Sign
    threshold: int
    rule_filter: Optional[str] = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, ObjectiveKind):
            object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        if not isinstance(self.sign_filter, Sign):
            object.__setattr__(self, "sign_filter", Sign(self.sign_filter))
        if self.threshold < 0:
            raise ValueError("objective threshold must be >= 0")

    def matches(self, action: ActionRecord) -> bool:
        if action.sign is not self.sign_filter:
            return False
        return self.rule_filter is None or action.rule_id == self.rule_filter

    def satisfied(self, count: int) -> bool:
        if self.kind is ObjectiveKind.AT_LEAST:
            return count >= self.threshold
        return count <= self.threshold


@dataclass(frozen=True)
class ActionPlan:
    plan_id: str
    contest_id: str
    assignees: frozenset[str]
    objectives: tuple[Objective, ...]
    bonus: int
    penalty: int
    starts_at: datetime
    ends_at: datetime
    state: PlanState = PlanState.ACTIVE
    created_by: str = ""

    def __post_init__(self) -> None:
        if not self.assignees:
            raise ValueError("plan needs at least one assignee")
        if not self.objectives:
            raise ValueError("plan needs at least one objective")
        if self.bonus < 0:
            raise ValueError("bonus must be >= 0")
        if self.penalty > 0:
            raise ValueError("penalty must be <= 0")
        if self.ends_at <= self.starts_at:
            raise ValueError("plan window must have starts_at < ends_at")

    def in_window(self, at: datetime) -> bool:
        return self.starts_at <= at <= self.ends_at

    def with_state(self, state: PlanState) -> "ActionPlan":
        return ActionPlan(
            plan_id=self.plan_id,
            contest_id=self.contest_id,
            assignees=self.assignees,
            objectives=self.objectives,
            bonus=self.bonus,
            penalty=self.penalty,
            starts_at=self.starts_at,
            ends_at=self.ends_at,
            state=state,
            created_by=self.created_by,
        )


def matching_actions(plan: ActionPlan, objective: Objective, actions: Iterable[ActionRecord]) -> int:
    """Count of actions by any assignee, inside the plan window, matching the objective."""
    return sum(
        1
        for action in actions
        if action.author_id in plan.assignees
        and plan.in_window(action.created_at)
        and objective.matches(action)
    )


def objective_progress(
    plan: ActionPlan, objective_index: int, actions: Iterable[ActionRecord]
) -> tuple[int, bool]:
    """(count, satisfied_now); for at_most objectives this is provisional
    until the window ends."""
    objective = plan.objectives[objective_index]
    count = matching_actions(plan, objective, actions)
    return count, objective.satisfied(count)


def evaluate_plan(plan: ActionPlan, actions: Iterable[ActionRecord]) -> bool:
    """Success iff every objective is satisfied over the full window."""
    action_list = list(actions)
    return all(
        objective.satisfied(matching_actions(plan, objective, action_list))
        for objective in plan.objectives
    )


# -- wire format -----------------------------------------------------------

_PHRASING_ALIASES = {"fewer_than", "less_than", "more_than"}


def objective_from_doc(doc: Mapping[str, Any], index: int) -> Objective:
    if not isinstance(doc, Mapping):
        raise SchemaMismatch(f"objective {index} must be an object")
    kind_raw = doc.get("kind")
    threshold = doc.get("threshold")
    if not isinstance(threshold, int) or isinstance(threshold, bool) or threshold < 0:
        raise SchemaMismatch(f"objective {index}: threshold must be a non-negative integer")
    if kind_raw in _PHRASING_ALIASES:
        # UI phrasings: "fewer than 5" stores as at_most 4, "more than 5" as at_least 6.
        if kind_raw == "more_than":
            kind, threshold = ObjectiveKind.AT_LEAST, threshold + 1
        else:
            if threshold < 1:
                raise SchemaMismatch(f"objective {index}: 'fewer than 0' is unsatisfiable")
            kind, threshold = ObjectiveKind.AT_MOST, threshold - 1
    else:
        try:
            kind = ObjectiveKind(kind_raw)
        except ValueError:
            raise SchemaMismatch(f"objective {index}: unknown kind {kind_raw!r}") from None
    try:
        sign = Sign(doc.get("sign_filter"))
    except ValueError:
        raise SchemaMismatch(f"objective {index}: sign_filter must be positive|negative") from None
    rule_filter = doc.get("rule_filter")
    if rule_filter is not None and not isinstance(rule_filter, str):
        raise SchemaMismatch(f"objective {index}: rule_filter must be a string")
    return Objective(kind=kind, sign_filter=sign, threshold=threshold, rule_filter=rule_filter)


def objective_to_doc(objective: Objective) -> dict[str, Any]:
    return {
        "kind": objective.kind.value,
        "sign_filter": objective.sign_filter.value,
        "threshold": objective.threshold,
        "rule_filter": objective.rule_filter,
    }


def plan_to_doc(plan: ActionPlan) -> dict[str, Any]:
    return {
        "plan_id": plan.plan_id,
        "contest_id": plan.contest_id,
        "assignees": sorted(plan.assignees),
        "objectives": [objective_to_doc(o) for o in plan.objectives],
        "bonus": plan.bonus,
        "penalty": plan.penalty,
        "starts_at": format_utc(plan.starts_at),
        "ends_at": format_utc(plan.ends_at),
        "state": plan.state.value,
        "created_by": plan.created_by,
    }


def plan_from_doc(doc: Mapping[str, Any]) -> ActionPlan:
    try:
        return ActionPlan(
            plan_id=doc["plan_id"],
            contest_id=doc["contest_id"],
            assignees=frozenset(doc["assignees"]),
            objectives=tuple(
                objective_from_doc(o, i) for i, o in enumerate(doc["objectives"])
            ),
            bonus=int(doc["bonus"]),
            penalty=int(doc["penalty"]),
            starts_at=parse_utc(doc["starts_at"]),
            ends_at=parse_utc(doc["ends_at"]),
            state=PlanState(doc.get("state", "active")),
            created_by=doc.get("created_by", ""),
        )
    except SchemaMismatch:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaMismatch(f"invalid plan document: {exc}") from exc
