#!/usr/bin/env python3
"""Record API responses into frontend/fixtures/ for the UI test suite.

Boots the backend in-process, replays a small representative history, and
snapshots the responses the pages render. Re-run after API changes:

    python3 frontend/scripts/record_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from debtforge.api import create_app
from debtforge.engine import Engine

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

ALICE = {"Authorization": "Bearer tok-alice"}
MANAGER = {"Authorization": "Bearer tok-mallory"}


def iso(hours: float) -> str:
    from datetime import datetime, timedelta, timezone

    t0 = datetime(2024, 3, 1, 9, 0, tzinfo=timezone.utc)
    return (t0 + timedelta(hours=hours)).isoformat().replace("+00:00", "Z")


def bundle(commit_id, parents, author, hours, changed, violations):
    return {
        "schema_version": 1,
        "meta": {
            "commit_id": commit_id,
            "parent_ids": parents,
            "author": author,
            "authored_at": iso(hours),
            "changed_files": changed,
        },
        "snapshot": {"violations": violations},
    }


def v(rule, path, line, text):
    return {"rule_id": rule, "file_path": path, "line": line, "source_line": text}


def main() -> None:
    engine = Engine()
    client = TestClient(create_app(engine))

    client.post(
        "/projects",
        json={
            "project_id": "c-app",
            "rules": [
                {"rule_id": "no-unreachable", "severity": "major", "category": "bug-risk"},
                {"rule_id": "log.md", "severity": "minor", "category": "convention"},
            ],
            "developers": [
                {"developer_id": "alice", "display_name": "Alice",
                 "vcs_identities": ["Alice <alice@example.com>"], "role": "developer",
                 "token": "tok-alice"},
                {"developer_id": "bob", "display_name": "Bob",
                 "vcs_identities": ["Bob <bob@example.com>"], "role": "developer",
                 "token": "tok-bob"},
                {"developer_id": "mallory", "display_name": "Mallory",
                 "vcs_identities": [], "role": "manager", "token": "tok-mallory"},
            ],
            "scoring_config": {
                "default_positive": 2,
                "default_negative": -2,
                "rule_overrides": {"log.md": [10, -5]},
                "effective_from": "2024-01-01T00:00:00Z",
            },
        },
    ).raise_for_status()
    client.post(
        "/projects/c-app/contests",
        json={"starts_at": iso(0), "ends_at": iso(24 * 21)},
        headers=MANAGER,
    ).raise_for_status()

    # backlog sized so the final treemap splits 6:4 between pkg/ and src/
    backlog = [
        v("no-unreachable", "pkg/a.js", 3, "alpha();"),
        v("no-unreachable", "pkg/a.js", 9, "beta();"),
        v("no-unreachable", "pkg/a.js", 15, "gamma();"),
        v("no-unreachable", "pkg/b.js", 4, "delta();"),
        v("no-unreachable", "src/x.js", 5, "epsilon();"),
        v("no-unreachable", "src/y.js", 7, "zeta();"),
    ]
    client.post(
        "/projects/c-app/baseline",
        json={"schema_version": 1, "commit_id": "base", "snapshot": {"violations": backlog}},
        headers=MANAGER,
    ).raise_for_status()

    # snapshots carry the full tree state at each commit
    click = v("no-unreachable", "src/click.js", 4, "\tconsole.log('Clicked', event.target);")
    client.post(
        "/projects/c-app/commits",
        json=bundle(
            "c-bob", ["base"], "Bob <bob@example.com>", 1,
            [{"path": "src/click.js", "kind": "added"}],
            backlog + [click],
        ),
        headers=MANAGER,
    ).raise_for_status()
    after_fixes = [item for item in backlog if item["line"] != 3]  # pkg/a.js:3 repaid
    client.post(
        "/projects/c-app/commits",
        json=bundle(
            "c-alice", ["c-bob"], "Alice <alice@example.com>", 2,
            [{"path": "src/click.js", "kind": "modified"},
             {"path": "pkg/a.js", "kind": "modified"}],
            after_fixes,
        ),
        headers=MANAGER,
    ).raise_for_status()

    submitted_plan = {
        "assignees": ["alice", "bob"],
        "objectives": [
            {"kind": "at_most", "sign_filter": "negative", "threshold": 4, "rule_filter": None},
            {"kind": "at_least", "sign_filter": "positive", "threshold": 10, "rule_filter": "log.md"},
        ],
        "bonus": 3,
        "penalty": -3,
        "starts_at": iso(0),
        "ends_at": iso(48),
    }
    created = client.post("/projects/c-app/plans", json=submitted_plan, headers=MANAGER)
    created.raise_for_status()
    plan_id = created.json()["plan_id"]
    refetched = client.get(f"/projects/c-app/plans/{plan_id}", headers=ALICE)
    refetched.raise_for_status()

    FIXTURES.mkdir(exist_ok=True)
    dump = lambda name, payload: (FIXTURES / name).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    dump("leaderboard.json", client.get(
        "/projects/c-app/contests/contest-1/leaderboard", headers=ALICE).json())
    dump("feed.json", client.get(
        "/projects/c-app/developers/alice/feed", headers=ALICE).json())
    dump("dashboard.json", client.get(
        "/projects/c-app/developers/alice/dashboard", headers=ALICE).json())
    dump("treemap.json", client.get(
        "/projects/c-app/suggestions/treemap", headers=ALICE).json())
    dump("overview.json", client.get("/projects/c-app/overview", headers=MANAGER).json())
    dump("scoring_config.json", client.get(
        "/projects/c-app/scoring-config", headers=ALICE).json())
    dump("plan_roundtrip.json", {"submitted": submitted_plan, "stored": refetched.json()})
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
