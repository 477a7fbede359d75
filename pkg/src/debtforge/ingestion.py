"""Wire-format parsing and validation for everything the service accepts.

The engine speaks exactly one normalized report format; converting linter
output into it is the CLI adapter's job.  A commit bundle carries VCS metadata
plus the full violation snapshot at that commit; ``snippet_hash`` and
``ordinal`` are computed here, server-side, from the raw source lines.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import SchemaMismatch
from .model import (
    ChangeKind,
    CommitMeta,
    FileChange,
    Snapshot,
    build_violations,
    parse_utc,
)
from .store import canonical_json

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CommitBundle:
    meta: CommitMeta
    snapshot: Snapshot
    schema_version: int = SCHEMA_VERSION
    digest: str = ""

    def __post_init__(self) -> None:
        if self.meta.commit_id != self.snapshot.commit_id:
            raise ValueError("bundle meta and snapshot must agree on commit_id")


@dataclass(frozen=True)
class IngestReceipt:
    commit_id: str
    status: str  # applied | pending | baseline
    sequence_no: int
    actions_extracted: int = 0
    author_unmapped: bool = False
    missing_parents: tuple[str, ...] = ()

    def to_doc(self) -> dict[str, Any]:
        return {
            "commit_id": self.commit_id,
            "status": self.status,
            "sequence_no": self.sequence_no,
            "actions_extracted": self.actions_extracted,
            "author_unmapped": self.author_unmapped,
            "missing_parents": list(self.missing_parents),
        }


def bundle_digest(doc: Mapping[str, Any]) -> str:
    """Content identity used for duplicate detection; canonical, whitespace-proof."""
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


def _require(doc: Mapping[str, Any], field: str, where: str) -> Any:
    if field not in doc:
        raise SchemaMismatch(f"{where}: missing field {field!r}")
    return doc[field]


def _require_str(doc: Mapping[str, Any], field: str, where: str) -> str:
    value = _require(doc, field, where)
    if not isinstance(value, str) or not value:
        raise SchemaMismatch(f"{where}: field {field!r} must be a non-empty string")
    return value


def parse_snapshot(doc: Mapping[str, Any], commit_id: str, analyzed_at, where: str) -> Snapshot:
    if not isinstance(doc, Mapping):
        raise SchemaMismatch(f"{where}: snapshot must be an object")
    raw = doc.get("violations")
    if not isinstance(raw, list):
        raise SchemaMismatch(f"{where}: snapshot.violations must be a list")
    inputs = []
    for i, item in enumerate(raw):
        if not isinstance(item, Mapping):
            raise SchemaMismatch(f"{where}: violation {i} must be an object")
        rule_id = _require_str(item, "rule_id", f"{where}: violation {i}")
        file_path = _require_str(item, "file_path", f"{where}: violation {i}")
        line = _require(item, "line", f"{where}: violation {i}")
        if not isinstance(line, int) or isinstance(line, bool) or line < 1:
            raise SchemaMismatch(f"{where}: violation {i}: line must be a positive integer")
        source_line = _require(item, "source_line", f"{where}: violation {i}")
        if not isinstance(source_line, str):
            raise SchemaMismatch(f"{where}: violation {i}: source_line must be a string")
        inputs.append((rule_id, file_path, line, source_line))
    try:
        violations = build_violations(inputs)
        return Snapshot(commit_id=commit_id, violations=violations, analyzed_at=analyzed_at)
    except ValueError as exc:
        raise SchemaMismatch(f"{where}: {exc}") from exc


def parse_changed_file(doc: Mapping[str, Any], where: str) -> FileChange:
    path = _require_str(doc, "path", where)
    kind_raw = _require_str(doc, "kind", where)
    try:
        kind = ChangeKind(kind_raw)
    except ValueError:
        raise SchemaMismatch(f"{where}: unknown change kind {kind_raw!r}") from None
    renamed_from = doc.get("renamed_from")
    if renamed_from is not None and not isinstance(renamed_from, str):
        raise SchemaMismatch(f"{where}: renamed_from must be a string")
    try:
        return FileChange(path=path, kind=kind, renamed_from=renamed_from)
    except ValueError as exc:
        raise SchemaMismatch(f"{where}: {exc}") from exc


def parse_bundle(doc: Mapping[str, Any]) -> CommitBundle:
    """Validate a commit-bundle document and compute violation identities."""
    if not isinstance(doc, Mapping):
        raise SchemaMismatch("bundle must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(
            f"unsupported schema_version {version!r}", supported=SCHEMA_VERSION
        )
    meta_doc = _require(doc, "meta", "bundle")
    if not isinstance(meta_doc, Mapping):
        raise SchemaMismatch("bundle.meta must be an object")
    commit_id = _require_str(meta_doc, "commit_id", "bundle.meta")
    parent_ids = meta_doc.get("parent_ids", [])
    if not isinstance(parent_ids, list) or not all(isinstance(p, str) and p for p in parent_ids):
        raise SchemaMismatch("bundle.meta.parent_ids must be a list of commit ids")
    if len(set(parent_ids)) != len(parent_ids):
        raise SchemaMismatch("bundle.meta.parent_ids must not repeat")
    author = _require_str(meta_doc, "author", "bundle.meta")
    try:
        authored_at = parse_utc(_require_str(meta_doc, "authored_at", "bundle.meta"))
    except ValueError as exc:
        raise SchemaMismatch(f"bundle.meta.authored_at: {exc}") from exc
    changed_raw = meta_doc.get("changed_files", [])
    if not isinstance(changed_raw, list):
        raise SchemaMismatch("bundle.meta.changed_files must be a list")
    changes = []
    for i, item in enumerate(changed_raw):
        if not isinstance(item, Mapping):
            raise SchemaMismatch(f"bundle.meta.changed_files[{i}] must be an object")
        changes.append(parse_changed_file(item, f"bundle.meta.changed_files[{i}]"))
    changed_files = tuple(changes)
    meta = CommitMeta(
        commit_id=commit_id,
        parent_ids=tuple(parent_ids),
        author=author,
        authored_at=authored_at,
        changed_files=changed_files,
    )
    snapshot_doc = _require(doc, "snapshot", "bundle")
    snapshot = parse_snapshot(snapshot_doc, commit_id, authored_at, "bundle")
    try:
        return CommitBundle(
            meta=meta,
            snapshot=snapshot,
            schema_version=SCHEMA_VERSION,
            digest=bundle_digest(doc),
        )
    except ValueError as exc:
        raise SchemaMismatch(f"bundle: {exc}") from exc


def parse_baseline(doc: Mapping[str, Any], declared_at) -> tuple[str, Snapshot, str]:
    """Validate a baseline/rebaseline document: (commit_id, snapshot, digest)."""
    if not isinstance(doc, Mapping):
        raise SchemaMismatch("baseline must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(f"unsupported schema_version {version!r}")
    commit_id = _require_str(doc, "commit_id", "baseline")
    snapshot = parse_snapshot(_require(doc, "snapshot", "baseline"), commit_id, declared_at, "baseline")
    return commit_id, snapshot, bundle_digest(doc)
