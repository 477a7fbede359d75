"""Event-sourced orchestration of the whole platform.

Every external input (project setup, commit bundles, config edits, contest
lifecycle, plans, adjustments) is appended to the per-project event log and
then folded into :class:`ProjectState`.  All derived data — actions, scores,
leaderboards, plan settlements, outstanding violations — is computed inside
the fold, never stored as an input, so replaying a log reconstructs the exact
live state.  Mutations are serialized per project; reads take the same lock
and therefore always see a consistent snapshot.
"""

from __future__ import annotations

import hashlib
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Mapping, Optional

from . import contests as contests_mod
from . import plans as plans_mod
from .contests import (
    Contest,
    ContestLedger,
    ContestState,
    LeaderboardRow,
    PlanPayout,
    contest_to_doc,
    rank_rows,
)
from .diffing import MergePolicy, extract_actions, merge_policy
from .errors import (
    AlreadySettled,
    ContestAlreadyOpen,
    ContestClosed,
    ContestNotOpen,
    DanglingParent,
    DuplicateConflict,
    EmptyObjectives,
    InvalidWindow,
    NonParticipant,
    NotAManager,
    NoSnapshot,
    PendingLimitExceeded,
    SchemaMismatch,
    SnapshotMissing,
    UnknownCommit,
    UnknownContest,
    UnknownDeveloper,
    UnknownPlan,
    UnknownProject,
    WindowNotEnded,
    WindowOutsideContest,
)
from .ingestion import (
    CommitBundle,
    IngestReceipt,
    bundle_digest,
    parse_baseline,
    parse_bundle,
)
from .model import (
    ActionRecord,
    CommitMeta,
    Developer,
    Fingerprint,
    Role,
    Rule,
    Severity,
    Sign,
    Snapshot,
    Violation,
    format_utc,
    parse_utc,
    utc_now,
    validate_project_id,
)
from .scoring import (
    ScoreAdjustment,
    ScoringConfig,
    config_active_at,
    config_from_doc,
    config_to_doc,
    resolve_points,
)
from .store import EventStore, MemoryEventStore, canonical_json
from .suggestions import (
    OutstandingViolation,
    build_treemap,
    outstanding_with_potential,
    personalized_suggestions,
    rule_reward_ranking,
)

DEFAULT_PENDING_LIMIT = 10_000


@dataclass(frozen=True)
class ProjectOptions:
    merge_policy: MergePolicy = MergePolicy.SKIP
    count_deletion_fixes: bool = True
    pending_limit: int = DEFAULT_PENDING_LIMIT

    def to_doc(self) -> dict[str, Any]:
        return {
            "merge_policy": self.merge_policy.value,
            "count_deletion_fixes": self.count_deletion_fixes,
            "pending_limit": self.pending_limit,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "ProjectOptions":
        try:
            return cls(
                merge_policy=MergePolicy(doc.get("merge_policy", "skip")),
                count_deletion_fixes=bool(doc.get("count_deletion_fixes", True)),
                pending_limit=int(doc.get("pending_limit", DEFAULT_PENDING_LIMIT)),
            )
        except ValueError as exc:
            raise SchemaMismatch(f"invalid project options: {exc}") from exc


def _rule_from_doc(doc: Mapping[str, Any]) -> Rule:
    try:
        return Rule(
            rule_id=doc["rule_id"],
            title=doc.get("title") or doc["rule_id"],
            severity=Severity(doc.get("severity", "major")),
            category=doc.get("category", "general"),
            enabled=bool(doc.get("enabled", True)),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaMismatch(f"invalid rule document: {exc}") from exc


def _rule_to_doc(rule: Rule) -> dict[str, Any]:
    return {
        "rule_id": rule.rule_id,
        "title": rule.title,
        "severity": rule.severity.value,
        "category": rule.category,
        "enabled": rule.enabled,
    }


def _developer_from_doc(doc: Mapping[str, Any]) -> tuple[Developer, Optional[str]]:
    try:
        developer = Developer(
            developer_id=doc["developer_id"],
            display_name=doc.get("display_name") or doc["developer_id"],
            vcs_identities=frozenset(doc.get("vcs_identities", [])),
            role=Role(doc.get("role", "developer")),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaMismatch(f"invalid developer document: {exc}") from exc
    token = doc.get("token")
    if token is not None and not isinstance(token, str):
        raise SchemaMismatch("developer token must be a string")
    return developer, token


def _check_developer_set(developers: list[tuple[Developer, Optional[str]]]) -> None:
    seen_ids: set[str] = set()
    seen_identities: set[str] = set()
    seen_tokens: set[str] = set()
    for developer, token in developers:
        if developer.developer_id in seen_ids:
            raise SchemaMismatch(f"duplicate developer_id {developer.developer_id!r}")
        seen_ids.add(developer.developer_id)
        overlap = developer.vcs_identities & seen_identities
        if overlap:
            raise SchemaMismatch(
                "vcs identities must be disjoint across developers",
                identities=sorted(overlap),
            )
        seen_identities |= developer.vcs_identities
        if token is not None:
            if token in seen_tokens:
                raise SchemaMismatch("duplicate developer token")
            seen_tokens.add(token)


def _creation_digest(payload: Mapping[str, Any]) -> str:
    """Project identity for idempotent creation; stamped timestamps excluded."""
    trimmed = dict(payload)
    trimmed.pop("created_at", None)
    config = dict(trimmed.get("scoring_config") or {})
    config.pop("effective_from", None)
    config.pop("version", None)
    trimmed["scoring_config"] = config
    return bundle_digest(trimmed)


def _developer_to_doc(developer: Developer, token: Optional[str]) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "developer_id": developer.developer_id,
        "display_name": developer.display_name,
        "vcs_identities": sorted(developer.vcs_identities),
        "role": developer.role.value,
    }
    if token is not None:
        doc["token"] = token
    return doc


@dataclass
class ProjectState:
    """All materialized per-project state; mutated only by the event fold."""

    project_id: str
    name: str = ""
    rules: dict[str, Rule] = field(default_factory=dict)
    developers: dict[str, Developer] = field(default_factory=dict)
    identity_index: dict[str, str] = field(default_factory=dict)
    tokens: dict[str, str] = field(default_factory=dict)
    options: ProjectOptions = field(default_factory=ProjectOptions)
    configs: list[ScoringConfig] = field(default_factory=list)
    creation_digest: str = ""

    snapshots: dict[str, Snapshot] = field(default_factory=dict)
    metas: dict[str, CommitMeta] = field(default_factory=dict)
    baselines: set[str] = field(default_factory=set)
    applied_order: list[str] = field(default_factory=list)
    content_digests: dict[str, str] = field(default_factory=dict)
    receipts: dict[str, IngestReceipt] = field(default_factory=dict)
    submit_seq: dict[str, int] = field(default_factory=dict)
    pending: dict[str, CommitBundle] = field(default_factory=dict)
    pending_order: list[str] = field(default_factory=list)
    parked: list[str] = field(default_factory=list)
    quarantine: dict[str, list[str]] = field(default_factory=dict)

    actions: dict[str, ActionRecord] = field(default_factory=dict)
    action_order: list[str] = field(default_factory=list)
    flagged: list[dict[str, str]] = field(default_factory=list)

    contests: dict[str, ContestLedger] = field(default_factory=dict)
    contest_order: list[str] = field(default_factory=list)
    open_contest_id: Optional[str] = None

    plans: dict[str, plans_mod.ActionPlan] = field(default_factory=dict)
    plan_order: list[str] = field(default_factory=list)

    head_commit_id: Optional[str] = None
    outstanding: dict[Fingerprint, tuple[Violation, str]] = field(default_factory=dict)

    # -- derived lookups --------------------------------------------------

    @property
    def current_config(self) -> ScoringConfig:
        return self.configs[-1]

    def config_at(self, at: datetime) -> ScoringConfig:
        return config_active_at(self.configs, at)

    def enabled_rule_ids(self, config: Optional[ScoringConfig] = None) -> frozenset[str]:
        config = config or self.current_config
        return frozenset(
            rule_id
            for rule_id, rule in self.rules.items()
            if rule.enabled and not config.rule_disabled(rule_id)
        )

    def participants(self) -> list[str]:
        return sorted(
            dev_id for dev_id, dev in self.developers.items() if not dev.is_manager
        )

    def resolve_author(self, author: str) -> Optional[str]:
        return self.identity_index.get(author)

    def ledger(self, contest_id: str) -> ContestLedger:
        ledger = self.contests.get(contest_id)
        if ledger is None:
            raise UnknownContest(f"no contest {contest_id!r}", contest_id=contest_id)
        return ledger

    def open_ledger(self) -> Optional[ContestLedger]:
        if self.open_contest_id is None:
            return None
        return self.contests[self.open_contest_id]

    def effective_contest_end(self, ledger: ContestLedger) -> datetime:
        if ledger.closed_at is not None and ledger.closed_at < ledger.contest.ends_at:
            return ledger.closed_at
        return ledger.contest.ends_at

    def route_contest(self, at: datetime) -> Optional[ContestLedger]:
        """Ledger whose window covers ``at``; an open contest wins boundaries."""
        open_ledger = self.open_ledger()
        if open_ledger is not None and open_ledger.contest.covers(at):
            return open_ledger
        for contest_id in self.contest_order:
            ledger = self.contests[contest_id]
            if ledger.contest.covers(at):
                return ledger
        return None

    def outstanding_now(self) -> list[OutstandingViolation]:
        pairs = [(v, first_seen) for v, first_seen in self.outstanding.values()]
        pairs.sort(key=lambda p: p[0].fingerprint)
        return outstanding_with_potential(pairs, self.rules, self.current_config)


class Engine:
    """Facade over the event store: validate, append, fold, answer queries."""

    def __init__(self, store: Optional[EventStore] = None) -> None:
        self.store: EventStore = store if store is not None else MemoryEventStore()
        self._states: dict[str, ProjectState] = {}
        self._locks: dict[str, threading.RLock] = defaultdict(threading.RLock)
        self._registry_lock = threading.Lock()
        for project_id in self.store.project_ids():
            state = ProjectState(project_id=project_id)
            for envelope in self.store.replay(project_id):
                _apply_event(state, envelope.kind, envelope.payload, envelope.sequence_no)
            self._states[project_id] = state

    def close(self) -> None:
        self.store.close()

    # -- internals ---------------------------------------------------------

    def _lock(self, project_id: str):
        with self._registry_lock:
            return self._locks[project_id]

    def _state(self, project_id: str) -> ProjectState:
        state = self._states.get(project_id)
        if state is None:
            raise UnknownProject(f"no project {project_id!r}", project_id=project_id)
        return state

    def _commit(self, state: ProjectState, kind: str, payload: dict[str, Any]) -> int:
        sequence_no = self.store.append(state.project_id, kind, payload)
        _apply_event(state, kind, payload, sequence_no)
        return sequence_no

    # -- projects ----------------------------------------------------------

    def create_project(self, doc: Mapping[str, Any], now: Optional[datetime] = None) -> dict[str, Any]:
        if not isinstance(doc, Mapping):
            raise SchemaMismatch("project document must be an object")
        project_id = doc.get("project_id")
        if not isinstance(project_id, str):
            raise SchemaMismatch("project_id must be a string")
        try:
            validate_project_id(project_id)
        except ValueError as exc:
            raise SchemaMismatch(str(exc)) from exc
        now = now or utc_now()

        rules = [_rule_from_doc(r) for r in doc.get("rules", [])]
        if len({r.rule_id for r in rules}) != len(rules):
            raise SchemaMismatch("duplicate rule_id in project document")
        developers = [_developer_from_doc(d) for d in doc.get("developers", [])]
        _check_developer_set(developers)

        config_doc = doc.get("scoring_config") or {"default_positive": 1, "default_negative": -1}
        effective_raw = config_doc.get("effective_from")
        effective_from = parse_utc(effective_raw) if effective_raw else now
        config = config_from_doc(config_doc, version=1, effective_from=effective_from)
        options = ProjectOptions.from_doc(doc.get("options") or {})

        payload = {
            "project_id": project_id,
            "name": doc.get("name", project_id),
            "rules": [_rule_to_doc(r) for r in rules],
            "developers": [_developer_to_doc(d, t) for d, t in developers],
            "scoring_config": config_to_doc(config),
            "options": options.to_doc(),
            "created_at": format_utc(now),
        }
        digest = _creation_digest(payload)

        with self._lock(project_id):
            existing = self._states.get(project_id)
            if existing is not None:
                if existing.creation_digest == digest:
                    return self.describe_project(project_id)
                raise DuplicateConflict(
                    f"project {project_id!r} already exists with different content"
                )
            state = ProjectState(project_id=project_id)
            sequence_no = self.store.append(project_id, "project_created", payload)
            _apply_event(state, "project_created", payload, sequence_no)
            with self._registry_lock:
                self._states[project_id] = state
        return self.describe_project(project_id)

    def describe_project(self, project_id: str) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            return {
                "project_id": state.project_id,
                "name": state.name,
                "rules": [_rule_to_doc(r) for _, r in sorted(state.rules.items())],
                "developers": [
                    _developer_to_doc(d, None) for _, d in sorted(state.developers.items())
                ],
                "options": state.options.to_doc(),
                "scoring_config_version": state.current_config.version,
                "open_contest_id": state.open_contest_id,
                "head_commit_id": state.head_commit_id,
            }

    def project_ids(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._states)

    def register_developer(self, project_id: str, doc: Mapping[str, Any]) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            developer, token = _developer_from_doc(doc)
            if developer.developer_id in state.developers:
                raise DuplicateConflict(
                    f"developer {developer.developer_id!r} already registered"
                )
            overlap = developer.vcs_identities & set(state.identity_index)
            if overlap:
                raise SchemaMismatch(
                    "vcs identities already mapped", identities=sorted(overlap)
                )
            self._commit(
                state,
                "developer_registered",
                {"developer": _developer_to_doc(developer, token)},
            )
            return _developer_to_doc(developer, None)

    def authenticate(self, project_id: str, token: str) -> Developer:
        with self._lock(project_id):
            state = self._state(project_id)
            developer_id = state.tokens.get(token)
            if developer_id is None:
                raise UnknownDeveloper("token not recognized")
            return state.developers[developer_id]

    # -- ingestion ------------------------------------------------------------

    def declare_baseline(
        self, project_id: str, doc: Mapping[str, Any], now: Optional[datetime] = None
    ) -> dict[str, Any]:
        now = now or utc_now()
        with self._lock(project_id):
            state = self._state(project_id)
            declared_at = format_utc(now)
            commit_id, _snapshot, digest = parse_baseline(doc, now)
            existing = state.content_digests.get(commit_id)
            if existing is not None:
                if existing == digest:
                    return state.receipts[commit_id].to_doc()
                raise DuplicateConflict(
                    f"commit {commit_id!r} already ingested with different content",
                    commit_id=commit_id,
                )
            self._commit(
                state,
                "baseline_declared",
                {"baseline": dict(doc), "declared_at": declared_at},
            )
            return state.receipts[commit_id].to_doc()

    def rebaseline(
        self, project_id: str, doc: Mapping[str, Any], now: Optional[datetime] = None
    ) -> dict[str, Any]:
        now = now or utc_now()
        with self._lock(project_id):
            state = self._state(project_id)
            commit_id, _snapshot, digest = parse_baseline(doc, now)
            if commit_id not in state.snapshots:
                raise UnknownCommit(
                    f"commit {commit_id!r} was never ingested", commit_id=commit_id
                )
            if state.content_digests.get(commit_id) == digest:
                return {"commit_id": commit_id, "status": "unchanged"}
            self._commit(
                state,
                "rebaselined",
                {"baseline": dict(doc), "declared_at": format_utc(now)},
            )
            return {"commit_id": commit_id, "status": "rebaselined"}

    def submit_bundle(self, project_id: str, doc: Mapping[str, Any]) -> dict[str, Any]:
        """Buffered ingestion: out-of-order bundles park until parents arrive."""
        return self._ingest(project_id, doc, strict=False)

    def ingest_bundle(self, project_id: str, doc: Mapping[str, Any]) -> dict[str, Any]:
        """Strict ingestion: every parent must already be known."""
        return self._ingest(project_id, doc, strict=True)

    def _ingest(self, project_id: str, doc: Mapping[str, Any], *, strict: bool) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            bundle = parse_bundle(doc)
            commit_id = bundle.meta.commit_id
            existing = state.content_digests.get(commit_id)
            if existing is not None:
                if existing == bundle.digest:
                    return state.receipts[commit_id].to_doc()
                raise DuplicateConflict(
                    f"commit {commit_id!r} already ingested with different content",
                    commit_id=commit_id,
                )
            missing = [p for p in bundle.meta.parent_ids if p not in state.snapshots]
            if missing:
                if strict:
                    raise DanglingParent(
                        f"parents of {commit_id!r} not ingested and not baselines",
                        missing_parents=missing,
                    )
                if len(state.pending) >= state.options.pending_limit:
                    raise PendingLimitExceeded(
                        f"pending buffer full ({state.options.pending_limit})"
                    )
            self._commit(state, "bundle_submitted", {"bundle": dict(doc)})
            return state.receipts[commit_id].to_doc()

    def pending_report(self, project_id: str) -> list[dict[str, Any]]:
        """What is parked waiting for parents; each entry names the gap."""
        with self._lock(project_id):
            state = self._state(project_id)
            report = []
            for commit_id in state.pending_order:
                bundle = state.pending[commit_id]
                missing = [p for p in bundle.meta.parent_ids if p not in state.snapshots]
                report.append({"commit_id": commit_id, "missing_parents": missing})
            return report

    # -- scoring config ----------------------------------------------------

    def get_scoring_config(self, project_id: str) -> dict[str, Any]:
        with self._lock(project_id):
            return config_to_doc(self._state(project_id).current_config)

    def put_scoring_config(
        self, project_id: str, doc: Mapping[str, Any], now: Optional[datetime] = None
    ) -> dict[str, Any]:
        now = now or utc_now()
        with self._lock(project_id):
            state = self._state(project_id)
            next_version = state.current_config.version + 1
            supplied = doc.get("version")
            if supplied is not None and supplied != next_version:
                raise SchemaMismatch(
                    f"config version must be {next_version}", supplied=supplied
                )
            effective_raw = doc.get("effective_from")
            effective_from = parse_utc(effective_raw) if effective_raw else now
            previous = state.current_config.effective_from
            if previous is not None and effective_from <= previous:
                raise SchemaMismatch(
                    "effective_from must be after the previous config version"
                )
            config = config_from_doc(doc, version=next_version, effective_from=effective_from)
            self._commit(state, "config_updated", {"config": config_to_doc(config)})
            return config_to_doc(state.current_config)

    # -- contests ------------------------------------------------------------

    def open_contest(
        self,
        project_id: str,
        starts_at: datetime,
        ends_at: Optional[datetime] = None,
        contest_id: Optional[str] = None,
    ) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            if ends_at is None:
                ends_at = starts_at + contests_mod.DEFAULT_CONTEST_DURATION
            if ends_at <= starts_at:
                raise InvalidWindow("contest window must have starts_at < ends_at")
            if state.open_contest_id is not None:
                raise ContestAlreadyOpen(
                    f"contest {state.open_contest_id!r} is already open"
                )
            for other_id in state.contest_order:
                other = state.contests[other_id]
                other_end = state.effective_contest_end(other)
                if starts_at < other_end and other.contest.starts_at < ends_at:
                    raise InvalidWindow(
                        f"window overlaps contest {other_id!r}", contest_id=other_id
                    )
            if contest_id is None:
                contest_id = f"contest-{len(state.contest_order) + 1}"
            elif contest_id in state.contests:
                raise DuplicateConflict(f"contest {contest_id!r} already exists")
            self._commit(
                state,
                "contest_opened",
                {
                    "contest_id": contest_id,
                    "starts_at": format_utc(starts_at),
                    "ends_at": format_utc(ends_at),
                },
            )
            return contest_to_doc(state.contests[contest_id].contest)

    def close_contest(
        self, project_id: str, contest_id: str, now: Optional[datetime] = None
    ) -> dict[str, Any]:
        now = now or utc_now()
        with self._lock(project_id):
            state = self._state(project_id)
            ledger = state.ledger(contest_id)
            if ledger.contest.state is not ContestState.OPEN:
                raise ContestNotOpen(f"contest {contest_id!r} is not open")
            self._commit(
                state,
                "contest_closed",
                {"contest_id": contest_id, "closed_at": format_utc(now)},
            )
            ledger = state.ledger(contest_id)
            return {
                "contest": contest_to_doc(ledger.contest),
                "closed_at": format_utc(ledger.closed_at),
                "leaderboard": [row.to_doc() for row in ledger.frozen_leaderboard or []],
                "plans": [
                    plans_mod.plan_to_doc(state.plans[plan_id])
                    for plan_id in state.plan_order
                    if state.plans[plan_id].contest_id == contest_id
                ],
            }

    def leaderboard(self, project_id: str, contest_id: str) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            ledger = state.ledger(contest_id)
            rows = _leaderboard_rows(state, ledger)
            return {
                "contest_id": contest_id,
                "state": ledger.contest.state.value,
                "rows": [row.to_doc() for row in rows],
            }

    def developer_score(self, project_id: str, contest_id: str, developer_id: str) -> int:
        with self._lock(project_id):
            state = self._state(project_id)
            developer = state.developers.get(developer_id)
            if developer is None:
                raise UnknownDeveloper(f"no developer {developer_id!r}")
            if developer.is_manager:
                raise NonParticipant("managers hold no contest score")
            ledger = state.ledger(contest_id)
            for row in _leaderboard_rows(state, ledger):
                if row.developer_id == developer_id:
                    return row.score
            return 0

    # -- action plans -----------------------------------------------------

    def create_plan(
        self, project_id: str, issued_by: str, doc: Mapping[str, Any]
    ) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            issuer = state.developers.get(issued_by)
            if issuer is None:
                raise UnknownDeveloper(f"no developer {issued_by!r}")
            if not issuer.is_manager:
                raise NotAManager("only managers may create action plans")

            contest_id = doc.get("contest_id") or state.open_contest_id
            if contest_id is None:
                raise ContestNotOpen("no open contest to attach the plan to")
            ledger = state.ledger(contest_id)
            if ledger.contest.state is not ContestState.OPEN:
                raise ContestNotOpen(f"contest {contest_id!r} is not open")

            objectives_raw = doc.get("objectives")
            if not objectives_raw:
                raise EmptyObjectives("plan requires at least one objective")
            objectives = tuple(
                plans_mod.objective_from_doc(o, i) for i, o in enumerate(objectives_raw)
            )
            for i, objective in enumerate(objectives):
                if objective.rule_filter is not None:
                    rule = state.rules.get(objective.rule_filter)
                    if rule is None or objective.rule_filter not in state.enabled_rule_ids():
                        raise SchemaMismatch(
                            f"objective {i}: rule_filter must reference an enabled rule",
                            rule_id=objective.rule_filter,
                        )

            assignees = doc.get("assignees") or []
            for assignee in assignees:
                member = state.developers.get(assignee)
                if member is None:
                    raise UnknownDeveloper(f"no developer {assignee!r}")
                if member.is_manager:
                    raise NonParticipant(f"manager {assignee!r} cannot be assigned")

            try:
                starts_at = parse_utc(doc["starts_at"])
                ends_at = parse_utc(doc["ends_at"])
            except (KeyError, ValueError) as exc:
                raise SchemaMismatch(f"invalid plan window: {exc}") from exc
            contest = ledger.contest
            if starts_at < contest.starts_at or ends_at > contest.ends_at:
                raise WindowOutsideContest(
                    "plan window must sit inside the contest window"
                )

            plan_id = f"plan-{len(state.plan_order) + 1}"
            try:
                plan = plans_mod.ActionPlan(
                    plan_id=plan_id,
                    contest_id=contest_id,
                    assignees=frozenset(assignees),
                    objectives=objectives,
                    bonus=int(doc.get("bonus", 0)),
                    penalty=int(doc.get("penalty", 0)),
                    starts_at=starts_at,
                    ends_at=ends_at,
                    created_by=issued_by,
                )
            except (ValueError, TypeError) as exc:
                raise SchemaMismatch(f"invalid plan: {exc}") from exc
            self._commit(state, "plan_created", {"plan": plans_mod.plan_to_doc(plan)})
            return plans_mod.plan_to_doc(state.plans[plan_id])

    def get_plan(self, project_id: str, plan_id: str) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            plan = state.plans.get(plan_id)
            if plan is None:
                raise UnknownPlan(f"no plan {plan_id!r}")
            doc = plans_mod.plan_to_doc(plan)
            doc["progress"] = _plan_progress(state, plan)
            return doc

    def objective_progress(
        self, project_id: str, plan_id: str, objective_index: int
    ) -> tuple[int, bool]:
        with self._lock(project_id):
            state = self._state(project_id)
            plan = state.plans.get(plan_id)
            if plan is None:
                raise UnknownPlan(f"no plan {plan_id!r}")
            if not 0 <= objective_index < len(plan.objectives):
                raise UnknownPlan(f"plan {plan_id!r} has no objective {objective_index}")
            return plans_mod.objective_progress(
                plan, objective_index, state.actions.values()
            )

    def settle_plan(
        self, project_id: str, plan_id: str, now: Optional[datetime] = None
    ) -> dict[str, Any]:
        now = now or utc_now()
        with self._lock(project_id):
            state = self._state(project_id)
            plan = state.plans.get(plan_id)
            if plan is None:
                raise UnknownPlan(f"no plan {plan_id!r}")
            if plan.state is not plans_mod.PlanState.ACTIVE:
                raise AlreadySettled(f"plan {plan_id!r} already settled")
            if now < plan.ends_at:
                raise WindowNotEnded(
                    f"plan window ends at {format_utc(plan.ends_at)}"
                )
            self._commit(
                state, "plan_settled", {"plan_id": plan_id, "settled_at": format_utc(now)}
            )
            return plans_mod.plan_to_doc(state.plans[plan_id])

    # -- adjustments ---------------------------------------------------------

    def apply_adjustment(
        self,
        project_id: str,
        issued_by: str,
        developer_id: str,
        delta: int,
        reason: str = "",
        contest_id: Optional[str] = None,
        now: Optional[datetime] = None,
    ) -> dict[str, Any]:
        now = now or utc_now()
        with self._lock(project_id):
            state = self._state(project_id)
            issuer = state.developers.get(issued_by)
            if issuer is None:
                raise UnknownDeveloper(f"no developer {issued_by!r}")
            if not issuer.is_manager:
                raise NotAManager("only managers may adjust scores")
            target = state.developers.get(developer_id)
            if target is None:
                raise UnknownDeveloper(f"no developer {developer_id!r}")
            if target.is_manager:
                raise NonParticipant("managers hold no contest score")
            contest_id = contest_id or state.open_contest_id
            if contest_id is None:
                raise ContestClosed("no open contest to adjust")
            ledger = state.ledger(contest_id)
            if ledger.contest.state is not ContestState.OPEN:
                raise ContestClosed(f"contest {contest_id!r} is not open")
            total_adjustments = sum(
                len(led.adjustments) for led in state.contests.values()
            )
            adjustment = ScoreAdjustment(
                adjustment_id=f"adj-{total_adjustments + 1}",
                developer_id=developer_id,
                contest_id=contest_id,
                delta=int(delta),
                reason=reason,
                issued_by=issued_by,
                issued_at=now,
            )
            self._commit(state, "adjustment_applied", {"adjustment": adjustment.to_doc()})
            return adjustment.to_doc()

    # -- developer views ---------------------------------------------------

    def newsfeed(
        self, project_id: str, developer_id: str, page: int = 1, page_size: int = 20
    ) -> dict[str, Any]:
        if page < 1 or not 1 <= page_size <= 200:
            raise SchemaMismatch("page must be >= 1 and page_size in 1..200")
        with self._lock(project_id):
            state = self._state(project_id)
            if developer_id not in state.developers:
                raise UnknownDeveloper(f"no developer {developer_id!r}")
            visible = [
                state.actions[action_id]
                for action_id in state.action_order
                if not state.developers[state.actions[action_id].author_id].is_manager
            ]
            visible.sort(key=lambda a: (a.created_at, a.action_id), reverse=True)
            start = (page - 1) * page_size
            entries = [
                _feed_entry(state, action, viewer=developer_id)
                for action in visible[start : start + page_size]
            ]
            return {
                "developer_id": developer_id,
                "page": page,
                "page_size": page_size,
                "total_entries": len(visible),
                "entries": entries,
            }

    def dashboard(self, project_id: str, developer_id: str) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            developer = state.developers.get(developer_id)
            if developer is None:
                raise UnknownDeveloper(f"no developer {developer_id!r}")
            own_actions = [
                state.actions[action_id]
                for action_id in state.action_order
                if state.actions[action_id].author_id == developer_id
            ]
            own_actions.sort(key=lambda a: (a.created_at, a.action_id), reverse=True)
            adjustments = [
                adj.to_doc()
                for contest_id in state.contest_order
                for adj in state.contests[contest_id].adjustments
                if adj.developer_id == developer_id
            ]
            payouts = [
                {"plan_id": p.plan_id, "contest_id": contest_id, "delta": p.delta}
                for contest_id in state.contest_order
                for p in state.contests[contest_id].payouts
                if p.developer_id == developer_id
            ]
            contest_section = None
            open_ledger = state.open_ledger()
            if open_ledger is not None:
                if not developer.is_manager:
                    rows = _leaderboard_rows(state, open_ledger)
                    mine = next(
                        (row for row in rows if row.developer_id == developer_id), None
                    )
                    if mine is not None:
                        contest_section = {
                            "contest_id": open_ledger.contest.contest_id,
                            "score": mine.score,
                            "rank": mine.rank,
                            "positive_points": mine.positive_points,
                            "negative_points": mine.negative_points,
                        }
            ongoing = [
                dict(plans_mod.plan_to_doc(plan), progress=_plan_progress(state, plan))
                for plan in (state.plans[pid] for pid in state.plan_order)
                if developer_id in plan.assignees
                and plan.state is plans_mod.PlanState.ACTIVE
            ]
            return {
                "developer_id": developer_id,
                "display_name": developer.display_name,
                "contest": contest_section,
                "actions": [_action_doc(action) for action in own_actions],
                "adjustments": adjustments,
                "plan_payouts": payouts,
                "ongoing_plans": ongoing,
            }

    # -- manager views ----------------------------------------------------

    def manager_overview(
        self, project_id: str, caller_id: str, contest_id: Optional[str] = None
    ) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            caller = state.developers.get(caller_id)
            if caller is None:
                raise UnknownDeveloper(f"no developer {caller_id!r}")
            if not caller.is_manager:
                raise NotAManager("overview is a manager view")
            if contest_id is None:
                contest_id = state.open_contest_id or (
                    state.contest_order[-1] if state.contest_order else None
                )
            if contest_id is None:
                raise UnknownContest("project has no contests yet")
            ledger = state.ledger(contest_id)

            per_rule: dict[str, dict[str, int]] = {}
            totals = {"positive_actions": 0, "negative_actions": 0, "points": 0}
            for action in ledger.actions:
                bucket = per_rule.setdefault(
                    action.rule_id, {"negative_actions": 0, "positive_actions": 0}
                )
                if action.sign is Sign.NEGATIVE:
                    bucket["negative_actions"] += 1
                    totals["negative_actions"] += 1
                else:
                    bucket["positive_actions"] += 1
                    totals["positive_actions"] += 1
                totals["points"] += action.points
            rule_counts = [
                {"rule_id": rule_id, **counts} for rule_id, counts in per_rule.items()
            ]
            rule_counts.sort(
                key=lambda rc: (-rc["negative_actions"], -rc["positive_actions"], rc["rule_id"])
            )
            rows = _leaderboard_rows(state, ledger)
            return {
                "project_id": project_id,
                "contest_id": contest_id,
                "contest_state": ledger.contest.state.value,
                "rule_counts": rule_counts,
                "developer_scores": [row.to_doc() for row in rows],
                "totals": totals,
                "flagged_actions": [dict(item) for item in state.flagged],
                "quarantined_authors": {
                    author: list(commit_ids)
                    for author, commit_ids in sorted(state.quarantine.items())
                },
                "scoring_config_version": state.current_config.version,
            }

    # -- suggestions ----------------------------------------------------------

    def rule_reward_ranking(self, project_id: str) -> list[dict[str, Any]]:
        with self._lock(project_id):
            state = self._state(project_id)
            if state.head_commit_id is None:
                raise NoSnapshot("project has no ingested snapshot")
            ranking = rule_reward_ranking(state.outstanding_now())
            return [
                {"rule_id": rule_id, "total_potential": total, "open_count": count}
                for rule_id, total, count in ranking
            ]

    def personalized_suggestions(
        self, project_id: str, developer_id: str, last_n_commits: int = 5
    ) -> list[dict[str, Any]]:
        with self._lock(project_id):
            state = self._state(project_id)
            if developer_id not in state.developers:
                raise UnknownDeveloper(f"no developer {developer_id!r}")
            if state.head_commit_id is None:
                raise NoSnapshot("project has no ingested snapshot")
            authored = [
                state.metas[commit_id]
                for commit_id in state.applied_order
                if commit_id in state.metas
                and state.metas[commit_id].author_id == developer_id
            ]
            authored.sort(key=lambda m: m.authored_at)
            recent_paths: set[str] = set()
            for meta in authored[-last_n_commits:]:
                for change in meta.changed_files:
                    recent_paths.add(change.path)
            picks = personalized_suggestions(state.outstanding_now(), recent_paths)
            return [ov.to_doc() for ov in picks]

    def treemap(self, project_id: str) -> dict[str, Any]:
        with self._lock(project_id):
            state = self._state(project_id)
            if state.head_commit_id is None:
                raise NoSnapshot("project has no ingested snapshot")
            root = build_treemap(state.outstanding_now())
            return {"head_commit_id": state.head_commit_id, "root": root.to_doc()}

    def outstanding_violations(self, project_id: str) -> list[dict[str, Any]]:
        """Open violations of enabled rules in the latest tree state, with rewards."""
        with self._lock(project_id):
            state = self._state(project_id)
            if state.head_commit_id is None:
                raise NoSnapshot("project has no ingested snapshot")
            return [ov.to_doc() for ov in state.outstanding_now()]

    # -- audit ------------------------------------------------------------------

    def state_digest(self, project_id: str) -> str:
        with self._lock(project_id):
            state = self._state(project_id)
            return hashlib.sha256(
                canonical_json(_digest_doc(state)).encode("utf-8")
            ).hexdigest()

    def list_actions(self, project_id: str) -> list[dict[str, Any]]:
        with self._lock(project_id):
            state = self._state(project_id)
            return [_action_doc(state.actions[aid]) for aid in state.action_order]


# -- event fold ---------------------------------------------------------------


def _apply_event(state: ProjectState, kind: str, payload: Mapping[str, Any], seq: int) -> None:
    if kind == "project_created":
        _apply_project_created(state, payload)
    elif kind == "developer_registered":
        _apply_developer_registered(state, payload)
    elif kind == "baseline_declared":
        _apply_baseline(state, payload, seq)
    elif kind == "rebaselined":
        _apply_rebaseline(state, payload)
    elif kind == "bundle_submitted":
        _apply_bundle_submitted(state, payload, seq)
    elif kind == "config_updated":
        _apply_config_updated(state, payload)
    elif kind == "contest_opened":
        _apply_contest_opened(state, payload)
    elif kind == "contest_closed":
        _apply_contest_closed(state, payload)
    elif kind == "plan_created":
        _apply_plan_created(state, payload)
    elif kind == "plan_settled":
        _apply_plan_settled(state, payload)
    elif kind == "adjustment_applied":
        _apply_adjustment_applied(state, payload)
    else:
        raise StorageCorruption(f"unknown event kind {kind!r}")


class StorageCorruption(RuntimeError):
    pass


def _apply_project_created(state: ProjectState, payload: Mapping[str, Any]) -> None:
    state.name = payload.get("name", state.project_id)
    for rule_doc in payload["rules"]:
        rule = _rule_from_doc(rule_doc)
        state.rules[rule.rule_id] = rule
    for dev_doc in payload["developers"]:
        developer, token = _developer_from_doc(dev_doc)
        _index_developer(state, developer, token)
    config_doc = payload["scoring_config"]
    state.configs.append(
        config_from_doc(
            {k: v for k, v in config_doc.items() if k not in ("version", "effective_from")},
            version=config_doc["version"],
            effective_from=parse_utc(config_doc["effective_from"]),
        )
    )
    state.options = ProjectOptions.from_doc(payload["options"])
    state.creation_digest = _creation_digest(payload)


def _index_developer(state: ProjectState, developer: Developer, token: Optional[str]) -> None:
    state.developers[developer.developer_id] = developer
    for identity in developer.vcs_identities:
        state.identity_index[identity] = developer.developer_id
    if token:
        state.tokens[token] = developer.developer_id


def _apply_developer_registered(state: ProjectState, payload: Mapping[str, Any]) -> None:
    developer, token = _developer_from_doc(payload["developer"])
    _index_developer(state, developer, token)
    _reprocess_parked(state)


def _reprocess_parked(state: ProjectState) -> None:
    """Newly mapped identities release parked commits, in original apply order."""
    still_parked: list[str] = []
    for commit_id in state.parked:
        meta = state.metas[commit_id]
        author_id = state.resolve_author(meta.author)
        if author_id is None:
            still_parked.append(commit_id)
            continue
        meta = meta.with_author_id(author_id)
        state.metas[commit_id] = meta
        if meta.author in state.quarantine:
            remaining = [c for c in state.quarantine[meta.author] if c != commit_id]
            if remaining:
                state.quarantine[meta.author] = remaining
            else:
                del state.quarantine[meta.author]
        count = _extract_and_record(state, meta)
        old = state.receipts.get(commit_id)
        if old is not None:
            state.receipts[commit_id] = IngestReceipt(
                commit_id=commit_id,
                status="applied",
                sequence_no=old.sequence_no,
                actions_extracted=count,
                author_unmapped=False,
            )
    state.parked = still_parked


def _apply_baseline(state: ProjectState, payload: Mapping[str, Any], seq: int) -> None:
    declared_at = parse_utc(payload["declared_at"])
    commit_id, snapshot, digest = parse_baseline(payload["baseline"], declared_at)
    state.snapshots[commit_id] = snapshot
    state.baselines.add(commit_id)
    state.applied_order.append(commit_id)
    state.content_digests[commit_id] = digest
    state.receipts[commit_id] = IngestReceipt(
        commit_id=commit_id, status="baseline", sequence_no=seq
    )
    _advance_head(state, snapshot, commit_id)
    _drain_pending(state)


def _apply_rebaseline(state: ProjectState, payload: Mapping[str, Any]) -> None:
    declared_at = parse_utc(payload["declared_at"])
    commit_id, snapshot, digest = parse_baseline(payload["baseline"], declared_at)
    state.snapshots[commit_id] = snapshot
    state.content_digests[commit_id] = digest
    if state.head_commit_id == commit_id:
        _advance_head(state, snapshot, commit_id)


def _apply_bundle_submitted(state: ProjectState, payload: Mapping[str, Any], seq: int) -> None:
    bundle = parse_bundle(payload["bundle"])
    commit_id = bundle.meta.commit_id
    state.submit_seq[commit_id] = seq
    missing = [p for p in bundle.meta.parent_ids if p not in state.snapshots]
    if missing:
        state.pending[commit_id] = bundle
        state.pending_order.append(commit_id)
        state.receipts[commit_id] = IngestReceipt(
            commit_id=commit_id,
            status="pending",
            sequence_no=seq,
            missing_parents=tuple(missing),
        )
        state.content_digests[commit_id] = bundle.digest
        return
    state.content_digests[commit_id] = bundle.digest
    _apply_commit(state, bundle, seq)
    _drain_pending(state)


def _apply_commit(state: ProjectState, bundle: CommitBundle, seq: int) -> None:
    commit_id = bundle.meta.commit_id
    author_id = state.resolve_author(bundle.meta.author)
    meta = bundle.meta.with_author_id(author_id)
    state.metas[commit_id] = meta
    state.snapshots[commit_id] = bundle.snapshot
    state.applied_order.append(commit_id)

    actions_extracted = 0
    author_unmapped = author_id is None
    if author_unmapped:
        state.parked.append(commit_id)
        state.quarantine.setdefault(meta.author, []).append(commit_id)
    else:
        actions_extracted = _extract_and_record(state, meta)

    state.receipts[commit_id] = IngestReceipt(
        commit_id=commit_id,
        status="applied",
        sequence_no=seq,
        actions_extracted=actions_extracted,
        author_unmapped=author_unmapped,
    )
    _advance_head(state, bundle.snapshot, commit_id)


def _extract_and_record(state: ProjectState, meta: CommitMeta) -> int:
    parent_snapshot: Optional[Snapshot] = None
    if len(meta.parent_ids) >= 2:
        if merge_policy(meta, state.options.merge_policy) is MergePolicy.SKIP:
            return 0
        parent_snapshot = state.snapshots.get(meta.parent_ids[0])
        if parent_snapshot is None:
            raise SnapshotMissing(f"missing snapshot for {meta.parent_ids[0]!r}")
    elif len(meta.parent_ids) == 1:
        parent_snapshot = state.snapshots.get(meta.parent_ids[0])
        if parent_snapshot is None:
            raise SnapshotMissing(f"missing snapshot for {meta.parent_ids[0]!r}")

    child_snapshot = state.snapshots[meta.commit_id]
    config = state.config_at(meta.authored_at)
    enabled = state.enabled_rule_ids(config)
    actions = extract_actions(
        parent_snapshot,
        child_snapshot,
        meta,
        enabled,
        count_deletion_fixes=state.options.count_deletion_fixes,
    )
    for action in actions:
        _record_action(state, action)
    return len(actions)


def _record_action(state: ProjectState, action: ActionRecord) -> None:
    config = state.config_at(action.created_at)
    rule = state.rules[action.rule_id]
    action = action.with_points(resolve_points(config, rule, action.sign))
    state.actions[action.action_id] = action
    state.action_order.append(action.action_id)

    author = state.developers[action.author_id]
    ledger = state.route_contest(action.created_at)
    if ledger is None:
        return  # between contests: recorded, scores nothing
    try:
        contests_mod.apply_action(ledger, action, author_is_manager=author.is_manager)
    except NonParticipant:
        pass  # game masters' actions are recorded for audit only
    except ContestClosed:
        state.flagged.append(
            {
                "action_id": action.action_id,
                "contest_id": ledger.contest.contest_id,
                "reason": "arrived after contest close",
            }
        )


def _advance_head(state: ProjectState, snapshot: Snapshot, commit_id: str) -> None:
    refreshed: dict[Fingerprint, tuple[Violation, str]] = {}
    for violation in snapshot.violations:
        fp = violation.fingerprint
        previous = state.outstanding.get(fp)
        first_seen = previous[1] if previous is not None else commit_id
        refreshed[fp] = (violation, first_seen)
    state.outstanding = refreshed
    state.head_commit_id = commit_id


def _drain_pending(state: ProjectState) -> None:
    progressed = True
    while progressed:
        progressed = False
        for commit_id in list(state.pending_order):
            bundle = state.pending[commit_id]
            if any(p not in state.snapshots for p in bundle.meta.parent_ids):
                continue
            state.pending_order.remove(commit_id)
            del state.pending[commit_id]
            _apply_commit(state, bundle, state.submit_seq[commit_id])
            progressed = True


def _apply_config_updated(state: ProjectState, payload: Mapping[str, Any]) -> None:
    doc = payload["config"]
    config = config_from_doc(
        {k: v for k, v in doc.items() if k not in ("version", "effective_from")},
        version=doc["version"],
        effective_from=parse_utc(doc["effective_from"]),
    )
    state.configs.append(config)


def _apply_contest_opened(state: ProjectState, payload: Mapping[str, Any]) -> None:
    contest = Contest(
        contest_id=payload["contest_id"],
        project_id=state.project_id,
        starts_at=parse_utc(payload["starts_at"]),
        ends_at=parse_utc(payload["ends_at"]),
        state=ContestState.OPEN,
    )
    state.contests[contest.contest_id] = ContestLedger(contest=contest)
    state.contest_order.append(contest.contest_id)
    state.open_contest_id = contest.contest_id


def _apply_contest_closed(state: ProjectState, payload: Mapping[str, Any]) -> None:
    contest_id = payload["contest_id"]
    closed_at = parse_utc(payload["closed_at"])
    ledger = state.contests[contest_id]
    for plan_id in state.plan_order:
        plan = state.plans[plan_id]
        if plan.contest_id == contest_id and plan.state is plans_mod.PlanState.ACTIVE:
            _settle(state, plan)
    ledger.frozen_leaderboard = _live_rows(state, ledger)
    ledger.closed_at = closed_at
    ledger.contest = Contest(
        contest_id=ledger.contest.contest_id,
        project_id=ledger.contest.project_id,
        starts_at=ledger.contest.starts_at,
        ends_at=ledger.contest.ends_at,
        state=ContestState.CLOSED,
    )
    if state.open_contest_id == contest_id:
        state.open_contest_id = None


def _apply_plan_created(state: ProjectState, payload: Mapping[str, Any]) -> None:
    plan = plans_mod.plan_from_doc(payload["plan"])
    state.plans[plan.plan_id] = plan
    state.plan_order.append(plan.plan_id)


def _apply_plan_settled(state: ProjectState, payload: Mapping[str, Any]) -> None:
    plan = state.plans[payload["plan_id"]]
    if plan.state is plans_mod.PlanState.ACTIVE:
        _settle(state, plan)


def _settle(state: ProjectState, plan: plans_mod.ActionPlan) -> None:
    succeeded = plans_mod.evaluate_plan(plan, state.actions.values())
    delta = plan.bonus if succeeded else plan.penalty
    ledger = state.contests[plan.contest_id]
    for developer_id in sorted(plan.assignees):
        ledger.payouts.append(
            PlanPayout(plan_id=plan.plan_id, developer_id=developer_id, delta=delta)
        )
    state.plans[plan.plan_id] = plan.with_state(
        plans_mod.PlanState.SUCCEEDED if succeeded else plans_mod.PlanState.FAILED
    )


def _apply_adjustment_applied(state: ProjectState, payload: Mapping[str, Any]) -> None:
    adjustment = ScoreAdjustment.from_doc(payload["adjustment"])
    state.contests[adjustment.contest_id].adjustments.append(adjustment)


# -- shared read helpers -----------------------------------------------------


def _live_rows(state: ProjectState, ledger: ContestLedger) -> list[LeaderboardRow]:
    return rank_rows(ledger, state.participants(), state.enabled_rule_ids())


def _leaderboard_rows(state: ProjectState, ledger: ContestLedger) -> list[LeaderboardRow]:
    if ledger.frozen_leaderboard is not None:
        return ledger.frozen_leaderboard
    return _live_rows(state, ledger)


def _action_doc(action: ActionRecord) -> dict[str, Any]:
    return {
        "action_id": action.action_id,
        "commit_id": action.commit_id,
        "author_id": action.author_id,
        "rule_id": action.rule_id,
        "file_path": action.file_path,
        "sign": action.sign.value,
        "points": action.points,
        "created_at": format_utc(action.created_at),
    }


def _feed_entry(state: ProjectState, action: ActionRecord, viewer: str) -> dict[str, Any]:
    if action.author_id == viewer:
        doc = _action_doc(action)
        doc["own"] = True
        return doc
    ledger = state.route_contest(action.created_at)
    contest_id = ledger.contest.contest_id if ledger is not None else "-"
    return {
        "author": _pseudonym(state.project_id, contest_id, action.author_id),
        "own": False,
        "sign": action.sign.value,
        "rule_id": action.rule_id,
        "points": action.points,
        "created_at": format_utc(action.created_at),
    }


def _pseudonym(project_id: str, contest_id: str, developer_id: str) -> str:
    digest = hashlib.sha256(
        f"{project_id}\x00{contest_id}\x00{developer_id}".encode("utf-8")
    ).hexdigest()
    return f"anon-{digest[:10]}"


def _plan_progress(state: ProjectState, plan: plans_mod.ActionPlan) -> list[dict[str, Any]]:
    progress = []
    for index, objective in enumerate(plan.objectives):
        count, satisfied = plans_mod.objective_progress(
            plan, index, state.actions.values()
        )
        progress.append(
            {
                "index": index,
                "kind": objective.kind.value,
                "sign_filter": objective.sign_filter.value,
                "rule_filter": objective.rule_filter,
                "threshold": objective.threshold,
                "count": count,
                "satisfied_now": satisfied,
                "final": plan.state is not plans_mod.PlanState.ACTIVE,
            }
        )
    return progress


def _digest_doc(state: ProjectState) -> dict[str, Any]:
    """Deterministic dump of every projection, for replay-equality checks."""
    return {
        "project_id": state.project_id,
        "name": state.name,
        "rules": [_rule_to_doc(r) for _, r in sorted(state.rules.items())],
        "developers": [
            _developer_to_doc(d, None) for _, d in sorted(state.developers.items())
        ],
        "tokens": sorted(state.tokens.items()),
        "options": state.options.to_doc(),
        "configs": [config_to_doc(c) for c in state.configs],
        "baselines": sorted(state.baselines),
        "applied_order": list(state.applied_order),
        "snapshots": {
            commit_id: sorted(map(list, snap.fingerprints()))
            for commit_id, snap in sorted(state.snapshots.items())
        },
        "receipts": {
            commit_id: receipt.to_doc()
            for commit_id, receipt in sorted(state.receipts.items())
        },
        "pending": sorted(state.pending),
        "parked": list(state.parked),
        "quarantine": {k: list(v) for k, v in sorted(state.quarantine.items())},
        "actions": [_action_doc(state.actions[aid]) for aid in state.action_order],
        "flagged": [dict(item) for item in state.flagged],
        "contests": [
            {
                "contest": contest_to_doc(state.contests[cid].contest),
                "actions": [a.action_id for a in state.contests[cid].actions],
                "adjustments": [a.to_doc() for a in state.contests[cid].adjustments],
                "payouts": [
                    {"plan_id": p.plan_id, "developer_id": p.developer_id, "delta": p.delta}
                    for p in state.contests[cid].payouts
                ],
                "closed_at": format_utc(state.contests[cid].closed_at)
                if state.contests[cid].closed_at
                else None,
                "frozen_leaderboard": [
                    row.to_doc() for row in state.contests[cid].frozen_leaderboard
                ]
                if state.contests[cid].frozen_leaderboard is not None
                else None,
            }
            for cid in state.contest_order
        ],
        "open_contest_id": state.open_contest_id,
        "plans": [plans_mod.plan_to_doc(state.plans[pid]) for pid in state.plan_order],
        "head_commit_id": state.head_commit_id,
        "outstanding": [
            [list(fp), first_seen]
            for fp, (_v, first_seen) in sorted(state.outstanding.items())
        ],
    }
