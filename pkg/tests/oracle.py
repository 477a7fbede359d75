"""Brute-force reference for the diff engine, independent of the library code.

The oracle recomputes violation identities from raw inputs with its own
whitespace normalization and its own multiset arithmetic (collections.Counter),
applies the documented scope rules, and yields expected action counts per
(sign, rule, path).  Nothing here imports the diffing module.
"""

from __future__ import annotations

import random
import re
from collections import Counter

RawViolation = tuple[str, str, int, str]  # rule_id, file_path, line, source_line


def _norm(text: str) -> str:
    return re.sub(r"\s+", " ", text.strip())


def _scope(changed_files: list[dict], count_deletion_fixes: bool):
    parent_scope: set[str] = set()
    child_scope: set[str] = set()
    renames: dict[str, str] = {}
    for change in changed_files:
        kind = change["kind"]
        path = change["path"]
        if kind == "added":
            child_scope.add(path)
        elif kind == "modified":
            parent_scope.add(path)
            child_scope.add(path)
        elif kind == "deleted":
            if count_deletion_fixes:
                parent_scope.add(path)
        elif kind == "renamed":
            parent_scope.add(change["renamed_from"])
            child_scope.add(path)
            renames[change["renamed_from"]] = path
    return parent_scope, child_scope, renames


def oracle_diff(
    parent_raw: list[RawViolation],
    child_raw: list[RawViolation],
    changed_files: list[dict],
    enabled_rules: set[str],
    count_deletion_fixes: bool = True,
) -> tuple[Counter, Counter]:
    """(negatives, positives) as Counters over (rule_id, file_path).

    Computed from the full fingerprint-level multiset difference: occurrences
    of each (rule, post-image path, normalized text) are counted on both sides
    and the per-key surplus becomes actions, then aggregated by (rule, path).
    """
    parent_scope, child_scope, renames = _scope(changed_files, count_deletion_fixes)

    parent_counts: Counter = Counter()
    for rule_id, path, _line, source in parent_raw:
        if rule_id in enabled_rules and path in parent_scope:
            parent_counts[(rule_id, renames.get(path, path), _norm(source))] += 1

    child_counts: Counter = Counter()
    for rule_id, path, _line, source in child_raw:
        if rule_id in enabled_rules and path in child_scope:
            child_counts[(rule_id, path, _norm(source))] += 1

    negatives: Counter = Counter()
    for (rule_id, path, _text), surplus in (child_counts - parent_counts).items():
        negatives[(rule_id, path)] += surplus
    positives: Counter = Counter()
    for (rule_id, path, _text), surplus in (parent_counts - child_counts).items():
        positives[(rule_id, path)] += surplus
    return negatives, positives


# -- random fixture generation ------------------------------------------------

FILE_POOL = [
    "src/a.js",
    "src/b.js",
    "src/ui/form.js",
    "src/ui/grid.js",
    "lib/core.js",
    "lib/net/http.js",
    "lib/net/ws.js",
    "tools/build.js",
    "tools/check.js",
    "app.js",
]

TEXT_POOL = [
    "return true;",
    "console.log('done');",
    "var unused = 1;",
    "if (x == null) {}",
    "eval(input);",
    "\tcallback()  ;",
    "process.exit(0);",
    "while (true) {}",
]

RULE_POOL = ["no-unreachable", "log.md", "no-eval", "eqeqeq"]


def random_snapshot_pair(rng: random.Random) -> dict:
    """A correlated parent/child violation pair plus change metadata.

    Child mutates the parent by dropping/adding violations, sometimes renaming
    or deleting a file; changed_files usually covers the touched files but may
    omit or over-report to exercise scope restriction.
    """
    files = rng.sample(FILE_POOL, rng.randint(1, 10))
    enabled = set(rng.sample(RULE_POOL, rng.randint(1, len(RULE_POOL))))

    parent: list[RawViolation] = []
    for _ in range(rng.randint(0, 50)):
        parent.append(
            (
                rng.choice(RULE_POOL),
                rng.choice(files),
                rng.randint(1, 400),
                rng.choice(TEXT_POOL),
            )
        )

    child = [v for v in parent if rng.random() > 0.3]
    for _ in range(rng.randint(0, 15)):
        child.append(
            (
                rng.choice(RULE_POOL),
                rng.choice(files),
                rng.randint(1, 400),
                rng.choice(TEXT_POOL),
            )
        )

    changed_files: list[dict] = []
    touched = set()
    deleted_file = None
    renamed = None
    if files and rng.random() < 0.25:
        deleted_file = rng.choice(files)
        child = [v for v in child if v[1] != deleted_file]
        changed_files.append({"path": deleted_file, "kind": "deleted"})
        touched.add(deleted_file)
    remaining = [f for f in files if f != deleted_file]
    if remaining and rng.random() < 0.25:
        old = rng.choice(remaining)
        new = old + ".renamed.js"
        renamed = (old, new)
        child = [(r, new if p == old else p, l, s) for (r, p, l, s) in child]
        changed_files.append({"path": new, "kind": "renamed", "renamed_from": old})
        touched.add(old)

    for path in remaining:
        if renamed and path == renamed[0]:
            continue
        include = rng.random()
        if include < 0.7:
            changed_files.append({"path": path, "kind": rng.choice(["modified", "added"])})
            touched.add(path)
        # else: file stays out of scope even if its violations differ

    return {
        "parent": parent,
        "child": child,
        "changed_files": changed_files,
        "enabled_rules": enabled,
    }
