"""Shared fixtures: a canned project and bundle builders used across the suite."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from debtforge.engine import Engine

T0 = datetime(2024, 3, 1, 9, 0, 0, tzinfo=timezone.utc)


def ts(hours: float = 0.0) -> datetime:
    return T0 + timedelta(hours=hours)


def iso(hours: float = 0.0) -> str:
    return ts(hours).isoformat().replace("+00:00", "Z")


NO_UNREACHABLE = {
    "rule_id": "no-unreachable",
    "title": "Unreachable code",
    "severity": "major",
    "category": "bug-risk",
}

LOG_RULE = {
    "rule_id": "log.md",
    "title": "Logging conventions",
    "severity": "minor",
    "category": "convention",
}


def project_doc(project_id: str = "c-app", **overrides) -> dict:
    doc = {
        "project_id": project_id,
        "rules": [dict(NO_UNREACHABLE), dict(LOG_RULE)],
        "developers": [
            {
                "developer_id": "alice",
                "display_name": "Alice",
                "vcs_identities": ["Alice <alice@example.com>"],
                "role": "developer",
                "token": "tok-alice",
            },
            {
                "developer_id": "bob",
                "display_name": "Bob",
                "vcs_identities": ["Bob <bob@example.com>"],
                "role": "developer",
                "token": "tok-bob",
            },
            {
                "developer_id": "mallory",
                "display_name": "Mallory",
                "vcs_identities": ["Mallory <mallory@example.com>"],
                "role": "manager",
                "token": "tok-mallory",
            },
        ],
        "scoring_config": {
            "default_positive": 1,
            "default_negative": -1,
            "effective_from": iso(-24),
        },
    }
    doc.update(overrides)
    return doc


def bundle_doc(
    commit_id: str,
    parent_ids: list[str],
    author: str,
    authored_at: str,
    changed_files: list[dict],
    violations: list[dict],
) -> dict:
    return {
        "schema_version": 1,
        "meta": {
            "commit_id": commit_id,
            "parent_ids": parent_ids,
            "author": author,
            "authored_at": authored_at,
            "changed_files": changed_files,
        },
        "snapshot": {"violations": violations},
    }


def baseline_doc(commit_id: str, violations: list[dict] | None = None) -> dict:
    return {
        "schema_version": 1,
        "commit_id": commit_id,
        "snapshot": {"violations": violations or []},
    }


def violation(rule_id: str, file_path: str, line: int, source_line: str) -> dict:
    return {
        "rule_id": rule_id,
        "file_path": file_path,
        "line": line,
        "source_line": source_line,
    }


# Bob introduces unreachable code after an early return; Alice reorders the
# lines so the call happens before the return, which removes the violation.
LISTING_BEFORE = [
    "function handleClick(event) {",
    "\t// Stop event propagation and default behavior",
    "\treturn false;",
    "\tconsole.log('Clicked', event.target);",
    "}",
]

LISTING_AFTER = [
    "function handleClick(event) {",
    "\tconsole.log('Clicked', event.target);",
    "\t// Stop event propagation and default behavior",
    "\treturn false;",
    "}",
]


def bob_commit(parent: str = "base") -> dict:
    return bundle_doc(
        commit_id="c-bob",
        parent_ids=[parent],
        author="Bob <bob@example.com>",
        authored_at=iso(1),
        changed_files=[{"path": "src/click.js", "kind": "added"}],
        violations=[violation("no-unreachable", "src/click.js", 4, LISTING_BEFORE[3])],
    )


def alice_commit(parent: str = "c-bob") -> dict:
    return bundle_doc(
        commit_id="c-alice",
        parent_ids=[parent],
        author="Alice <alice@example.com>",
        authored_at=iso(2),
        changed_files=[{"path": "src/click.js", "kind": "modified"}],
        violations=[],
    )


@pytest.fixture
def engine() -> Engine:
    return Engine()


@pytest.fixture
def project(engine: Engine) -> Engine:
    engine.create_project(project_doc())
    return engine
