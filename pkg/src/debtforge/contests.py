"""Timeboxed contests: windows, per-contest event ledgers, and ranking.

A contest collects every scoring event that lands inside its window.  Scores
are always recomputed from the ledger (actions + adjustments + plan payouts),
which keeps them trivially consistent with the event log.  Ranking is
competition style: tied scores share a rank and the next rank is skipped;
display order inside a tie prefers whoever carries fewer negative points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from typing import AbstractSet, Iterable, Optional

from .errors import ContestClosed, NonParticipant
from .model import ActionRecord, Sign, format_utc
from .scoring import ScoreAdjustment

DEFAULT_CONTEST_DURATION = timedelta(days=21)


class ContestState(str, Enum):
    SCHEDULED = "scheduled"
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class Contest:
    contest_id: str
    project_id: str
    starts_at: datetime
    ends_at: datetime
    state: ContestState = ContestState.OPEN

    def __post_init__(self) -> None:
        if self.ends_at <= self.starts_at:
            raise ValueError("contest window must have starts_at < ends_at")

    def covers(self, at: datetime) -> bool:
        return self.starts_at <= at <= self.ends_at

    def overlaps(self, starts_at: datetime, ends_at: datetime) -> bool:
        return starts_at <= self.ends_at and self.starts_at <= ends_at


@dataclass(frozen=True)
class PlanPayout:
    plan_id: str
    developer_id: str
    delta: int


@dataclass(frozen=True)
class LeaderboardRow:
    rank: int
    developer_id: str
    score: int
    positive_points: int
    negative_points: int

    def to_doc(self) -> dict:
        return {
            "rank": self.rank,
            "developer_id": self.developer_id,
            "score": self.score,
            "positive_points": self.positive_points,
            "negative_points": self.negative_points,
        }


@dataclass
class ContestLedger:
    """Mutable accumulation of one contest's scoring events."""

    contest: Contest
    actions: list[ActionRecord] = field(default_factory=list)
    adjustments: list[ScoreAdjustment] = field(default_factory=list)
    payouts: list[PlanPayout] = field(default_factory=list)
    frozen_leaderboard: Optional[list[LeaderboardRow]] = None
    closed_at: Optional[datetime] = None

    @property
    def is_open(self) -> bool:
        return self.contest.state is ContestState.OPEN

    def point_sums(
        self, developer_id: str, enabled_rules: AbstractSet[str]
    ) -> tuple[int, int]:
        """(positive_points, negative_points) from actions of enabled rules only."""
        pos = neg = 0
        for action in self.actions:
            if action.author_id != developer_id or action.rule_id not in enabled_rules:
                continue
            if action.sign is Sign.POSITIVE:
                pos += action.points
            else:
                neg += action.points
        return pos, neg

    def developer_score(self, developer_id: str, enabled_rules: AbstractSet[str]) -> int:
        pos, neg = self.point_sums(developer_id, enabled_rules)
        score = pos + neg
        score += sum(a.delta for a in self.adjustments if a.developer_id == developer_id)
        score += sum(p.delta for p in self.payouts if p.developer_id == developer_id)
        return score


def apply_action(ledger: ContestLedger, action: ActionRecord, *, author_is_manager: bool) -> int:
    """Fold one scored action into the contest; returns the point delta.

    The action must fall inside the contest window and the contest must still
    be open; game masters never accrue contest score.
    """
    if author_is_manager:
        raise NonParticipant("managers do not participate in contests")
    if not ledger.contest.covers(action.created_at):
        raise ContestClosed(
            f"action at {format_utc(action.created_at)} is outside the contest window"
        )
    if ledger.contest.state is not ContestState.OPEN:
        raise ContestClosed(f"contest {ledger.contest.contest_id!r} is not open")
    ledger.actions.append(action)
    return action.points


def rank_rows(
    ledger: ContestLedger,
    participants: Iterable[str],
    enabled_rules: AbstractSet[str],
) -> list[LeaderboardRow]:
    """Competition-ranked leaderboard over every participant.

    Sort: score descending; ties display whoever has the smaller absolute
    negative-point total first, then the stable developer key.
    """
    entries = []
    for developer_id in participants:
        pos, neg = ledger.point_sums(developer_id, enabled_rules)
        score = ledger.developer_score(developer_id, enabled_rules)
        entries.append((developer_id, score, pos, neg))
    entries.sort(key=lambda e: (-e[1], abs(e[3]), e[0]))

    rows: list[LeaderboardRow] = []
    previous_score: Optional[int] = None
    rank = 0
    for position, (developer_id, score, pos, neg) in enumerate(entries, start=1):
        if previous_score is None or score != previous_score:
            rank = position
            previous_score = score
        rows.append(
            LeaderboardRow(
                rank=rank,
                developer_id=developer_id,
                score=score,
                positive_points=pos,
                negative_points=neg,
            )
        )
    return rows


def contest_to_doc(contest: Contest) -> dict:
    return {
        "contest_id": contest.contest_id,
        "project_id": contest.project_id,
        "starts_at": format_utc(contest.starts_at),
        "ends_at": format_utc(contest.ends_at),
        "state": contest.state.value,
    }
