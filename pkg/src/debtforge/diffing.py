"""Turn a commit's snapshot pair into signed, author-attributed actions.

A commit is charged one negative action for every violation fingerprint that
appears on its side and not its parent's, and credited one positive action for
every fingerprint that disappears.  The comparison is restricted to the files
the commit itself touched, so analyzer drift elsewhere in the tree never blames
an innocent commit.  Renames are tracked by rewriting the parent-side
fingerprints to the post-image path before differencing; deleting a file counts
its removed violations as fixes unless the project turned that off.
"""

from __future__ import annotations

from enum import Enum
from typing import AbstractSet, Optional

from .errors import AuthorUnmapped
from .model import (
    ActionRecord,
    ChangeKind,
    CommitMeta,
    Sign,
    Snapshot,
    Violation,
)


class MergePolicy(str, Enum):
    SKIP = "skip"
    DIFF_FIRST_PARENT = "diff_first_parent"


def merge_policy(meta: CommitMeta, configured: MergePolicy = MergePolicy.SKIP) -> MergePolicy:
    """Policy for a multi-parent commit; the project default is to skip it."""
    if len(meta.parent_ids) < 2:
        raise ValueError("merge_policy applies to commits with >= 2 parents")
    return configured


def _scope(meta: CommitMeta, *, count_deletion_fixes: bool) -> tuple[set[str], set[str], dict[str, str]]:
    """Paths in diff scope on the parent side, the child side, and the
    old-path -> new-path rename map."""
    parent_paths: set[str] = set()
    child_paths: set[str] = set()
    renames: dict[str, str] = {}
    for change in meta.changed_files:
        if change.kind is ChangeKind.ADDED:
            child_paths.add(change.path)
        elif change.kind is ChangeKind.MODIFIED:
            parent_paths.add(change.path)
            child_paths.add(change.path)
        elif change.kind is ChangeKind.DELETED:
            if count_deletion_fixes:
                parent_paths.add(change.path)
        elif change.kind is ChangeKind.RENAMED:
            assert change.renamed_from is not None
            parent_paths.add(change.renamed_from)
            child_paths.add(change.path)
            renames[change.renamed_from] = change.path
    return parent_paths, child_paths, renames


def _rename(v: Violation, new_path: str) -> Violation:
    return Violation(
        rule_id=v.rule_id,
        file_path=new_path,
        line=v.line,
        snippet_hash=v.snippet_hash,
        ordinal=v.ordinal,
    )


def extract_actions(
    parent: Optional[Snapshot],
    child: Snapshot,
    meta: CommitMeta,
    enabled_rules: AbstractSet[str],
    *,
    count_deletion_fixes: bool = True,
) -> list[ActionRecord]:
    """Signed actions of ``child`` relative to ``parent``, attributed to the author.

    ``parent`` is the first-parent snapshot, or None for a rooted commit that
    starts from an empty tree.  Output order is deterministic:
    (sign, rule_id, file_path, ordinal), negatives first.
    """
    if meta.author_id is None:
        raise AuthorUnmapped(
            f"author {meta.author!r} is not mapped to a developer", commit_id=meta.commit_id
        )
    if not enabled_rules:
        return []

    parent_paths, child_paths, renames = _scope(meta, count_deletion_fixes=count_deletion_fixes)

    parent_side: dict[tuple, Violation] = {}
    if parent is not None:
        for v in parent.violations:
            if v.rule_id not in enabled_rules or v.file_path not in parent_paths:
                continue
            if v.file_path in renames:
                v = _rename(v, renames[v.file_path])
            parent_side[v.fingerprint] = v

    child_side: dict[tuple, Violation] = {}
    for v in child.violations:
        if v.rule_id not in enabled_rules or v.file_path not in child_paths:
            continue
        child_side[v.fingerprint] = v

    introduced = [child_side[fp] for fp in child_side.keys() - parent_side.keys()]
    removed = [parent_side[fp] for fp in parent_side.keys() - child_side.keys()]

    ordered = [(Sign.NEGATIVE, v) for v in introduced] + [(Sign.POSITIVE, v) for v in removed]
    ordered.sort(key=lambda sv: (sv[0].value, sv[1].rule_id, sv[1].file_path, sv[1].ordinal, sv[1].snippet_hash))

    actions = []
    for index, (sign, violation) in enumerate(ordered):
        actions.append(
            ActionRecord(
                action_id=f"{meta.commit_id}#{index}",
                commit_id=meta.commit_id,
                author_id=meta.author_id,
                rule_id=violation.rule_id,
                file_path=violation.file_path,
                sign=sign,
                points=0,
                created_at=meta.authored_at,
            )
        )
    return actions
