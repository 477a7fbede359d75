"""Core domain vocabulary: rules, violations, snapshots, commits, actions.

Everything here is an immutable value object, safe to share across threads.
The one piece of real logic is violation identity: a violation is keyed by
``(rule_id, file_path, snippet_hash, ordinal)`` where ``snippet_hash``
digests the whitespace-normalized offending line and ``ordinal``
disambiguates identical lines within one file.  Line numbers are display
metadata only, so inserting or deleting unrelated lines never changes a
violation's identity.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Optional, Tuple


class Severity(str, Enum):
    INFO = "info"
    MINOR = "minor"
    MAJOR = "major"
    CRITICAL = "critical"
    BLOCKER = "blocker"


class Sign(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class ChangeKind(str, Enum):
    ADDED = "added"
    MODIFIED = "modified"
    DELETED = "deleted"
    RENAMED = "renamed"


class Role(str, Enum):
    DEVELOPER = "developer"
    MANAGER = "manager"


Fingerprint = Tuple[str, str, str, int]

_WS_RUN = re.compile(r"\s+")


def normalize_line(raw_source_line: str) -> str:
    """Strip leading/trailing whitespace and collapse internal runs to one space."""
    return _WS_RUN.sub(" ", raw_source_line.strip())


def snippet_digest(raw_source_line: str) -> str:
    """Hex digest of the normalized source line, the stable part of a fingerprint."""
    normalized = normalize_line(raw_source_line)
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()[:16]


def parse_utc(value: str) -> datetime:
    """Parse an ISO-8601 timestamp, accepting a trailing 'Z', into aware UTC."""
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        raise ValueError(f"timestamp lacks timezone: {value!r}")
    return dt.astimezone(timezone.utc)


def format_utc(dt: datetime) -> str:
    """Canonical wire form: UTC ISO-8601 with a 'Z' suffix."""
    if dt.tzinfo is None:
        raise ValueError("naive datetime cannot be serialized")
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


_PROJECT_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


def validate_project_id(project_id: str) -> str:
    """Project ids double as log file names, so restrict them to a safe slug."""
    if not _PROJECT_ID.match(project_id):
        raise ValueError(f"invalid project_id: {project_id!r}")
    return project_id


def normalize_path(path: str) -> str:
    """Repository-relative path with forward slashes and no leading slash."""
    cleaned = path.replace("\\", "/").lstrip("/")
    if not cleaned:
        raise ValueError("empty file path")
    return cleaned


@dataclass(frozen=True)
class Rule:
    """One linter check: identity plus the display metadata scoring layers use."""

    rule_id: str
    title: str
    severity: Severity
    category: str
    enabled: bool = True

    def __post_init__(self) -> None:
        if not self.rule_id:
            raise ValueError("rule_id must be non-empty")
        if not isinstance(self.severity, Severity):
            object.__setattr__(self, "severity", Severity(self.severity))


@dataclass(frozen=True)
class Violation:
    """One rule infraction at a location in one commit's snapshot."""

    rule_id: str
    file_path: str
    line: int
    snippet_hash: str
    ordinal: int

    def __post_init__(self) -> None:
        if self.line < 1:
            raise ValueError(f"line must be >= 1, got {self.line}")
        if self.ordinal < 0:
            raise ValueError(f"ordinal must be >= 0, got {self.ordinal}")
        object.__setattr__(self, "file_path", normalize_path(self.file_path))

    @property
    def fingerprint(self) -> Fingerprint:
        return (self.rule_id, self.file_path, self.snippet_hash, self.ordinal)


def fingerprint(v: Violation) -> Fingerprint:
    """The location-stable identity: rule, path, normalized-line digest, ordinal."""
    return v.fingerprint


def build_violations(
    raw: Iterable[tuple[str, str, int, str]],
) -> tuple[Violation, ...]:
    """Construct violations from raw ``(rule_id, file_path, line, source_line)`` inputs.

    Ordinals are assigned per ``(file_path, rule_id, snippet_hash)`` group in
    line order (input order breaking ties), so two identical offending lines
    in one file get ordinals 0 and 1 and therefore distinct fingerprints.
    """
    entries = []
    for idx, (rule_id, file_path, line, source_line) in enumerate(raw):
        entries.append((normalize_path(file_path), rule_id, snippet_digest(source_line), line, idx))
    entries.sort(key=lambda e: (e[0], e[1], e[2], e[3], e[4]))
    violations: list[Violation] = []
    counters: dict[tuple[str, str, str], int] = {}
    for file_path, rule_id, digest, line, _idx in entries:
        key = (file_path, rule_id, digest)
        ordinal = counters.get(key, 0)
        counters[key] = ordinal + 1
        violations.append(
            Violation(
                rule_id=rule_id,
                file_path=file_path,
                line=line,
                snippet_hash=digest,
                ordinal=ordinal,
            )
        )
    return tuple(violations)


@dataclass(frozen=True)
class Snapshot:
    """The full violation state of the tree at one commit."""

    commit_id: str
    violations: tuple[Violation, ...]
    analyzed_at: datetime

    def __post_init__(self) -> None:
        seen: set[Fingerprint] = set()
        for v in self.violations:
            fp = v.fingerprint
            if fp in seen:
                raise ValueError(f"duplicate fingerprint in snapshot: {fp}")
            seen.add(fp)

    def fingerprints(self) -> frozenset[Fingerprint]:
        return frozenset(v.fingerprint for v in self.violations)


@dataclass(frozen=True)
class FileChange:
    path: str
    kind: ChangeKind
    renamed_from: Optional[str] = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, ChangeKind):
            object.__setattr__(self, "kind", ChangeKind(self.kind))
        object.__setattr__(self, "path", normalize_path(self.path))
        if self.kind is ChangeKind.RENAMED:
            if not self.renamed_from:
                raise ValueError("renamed change requires renamed_from")
            object.__setattr__(self, "renamed_from", normalize_path(self.renamed_from))
        elif self.renamed_from is not None:
            raise ValueError("renamed_from only valid for renamed changes")


@dataclass(frozen=True)
class CommitMeta:
    """VCS facts about one commit.  ``author`` is the raw VCS identity string;
    ``author_id`` is the mapped developer key, or None while unmapped."""

    commit_id: str
    parent_ids: tuple[str, ...]
    author: str
    authored_at: datetime
    changed_files: tuple[FileChange, ...]
    author_id: Optional[str] = None

    def with_author_id(self, author_id: Optional[str]) -> "CommitMeta":
        return CommitMeta(
            commit_id=self.commit_id,
            parent_ids=self.parent_ids,
            author=self.author,
            authored_at=self.authored_at,
            changed_files=self.changed_files,
            author_id=author_id,
        )


@dataclass(frozen=True)
class ActionRecord:
    """A signed event: a commit added (negative) or removed (positive) a violation.

    ``points`` is 0 at extraction and frozen once scoring resolves it; later
    config edits never rewrite it.
    """

    action_id: str
    commit_id: str
    author_id: str
    rule_id: str
    file_path: str
    sign: Sign
    points: int
    created_at: datetime

    def with_points(self, points: int) -> "ActionRecord":
        if self.sign is Sign.POSITIVE and points < 0:
            raise ValueError("positive action cannot carry negative points")
        if self.sign is Sign.NEGATIVE and points > 0:
            raise ValueError("negative action cannot carry positive points")
        return ActionRecord(
            action_id=self.action_id,
            commit_id=self.commit_id,
            author_id=self.author_id,
            rule_id=self.rule_id,
            file_path=self.file_path,
            sign=self.sign,
            points=points,
            created_at=self.created_at,
        )


@dataclass(frozen=True)
class Developer:
    developer_id: str
    display_name: str
    vcs_identities: frozenset[str]
    role: Role = Role.DEVELOPER

    def __post_init__(self) -> None:
        if not self.developer_id:
            raise ValueError("developer_id must be non-empty")
        if not isinstance(self.role, Role):
            object.__setattr__(self, "role", Role(self.role))
        if not isinstance(self.vcs_identities, frozenset):
            object.__setattr__(self, "vcs_identities", frozenset(self.vcs_identities))

    @property
    def is_manager(self) -> bool:
        return self.role is Role.MANAGER
