"""Seeded random operation histories driven against a live engine.

Used by the replay-equality and anonymization suites.  Developer identifiers
are fixed-length strings with a distinctive ``zz`` prefix so that a substring
scan of a serialized feed can only match a real identifier leak, never an
accidental overlap with JSON scaffolding or pseudonyms.
"""

from __future__ import annotations

import random
import string
from datetime import datetime, timedelta, timezone

from debtforge.engine import Engine

T0 = datetime(2024, 3, 1, 9, 0, tzinfo=timezone.utc)

RULES = [
    {"rule_id": "no-unreachable", "severity": "major", "category": "bug-risk"},
    {"rule_id": "log.md", "severity": "minor", "category": "convention"},
    {"rule_id": "no-eval", "severity": "critical", "category": "security"},
]

FILES = ["src/a.js", "src/b.js", "src/deep/c.js", "lib/d.js"]
TEXTS = ["return;", "console.log(x);", "eval(s);", "var v = 1;"]


def _iso(at: datetime) -> str:
    return at.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _dev_id(rng: random.Random, taken: set[str]) -> str:
    while True:
        candidate = "zz" + "".join(rng.choice(string.ascii_lowercase) for _ in range(6))
        if candidate not in taken:
            taken.add(candidate)
            return candidate


def build_history(engine: Engine, seed: int) -> dict:
    """Run a random but valid op sequence; returns ids for later inspection."""
    rng = random.Random(seed)
    project_id = f"proj-{seed}"
    taken: set[str] = set()
    developer_ids = [_dev_id(rng, taken) for _ in range(rng.randint(2, 4))]
    manager_id = _dev_id(rng, taken)

    def identity(dev: str) -> str:
        return f"{dev} <{dev}@zz.example>"

    developers = [
        {
            "developer_id": dev,
            "display_name": f"ZZ-Name-{dev}",
            "vcs_identities": [identity(dev)],
            "role": "developer",
        }
        for dev in developer_ids
    ]
    developers.append(
        {
            "developer_id": manager_id,
            "display_name": f"ZZ-Name-{manager_id}",
            "vcs_identities": [identity(manager_id)],
            "role": "manager",
        }
    )
    engine.create_project(
        {
            "project_id": project_id,
            "rules": [dict(r) for r in RULES],
            "developers": developers,
            "scoring_config": {
                "default_positive": rng.randint(1, 3),
                "default_negative": -rng.randint(1, 3),
                "rule_overrides": {"log.md": [10, -5]} if rng.random() < 0.5 else {},
                "effective_from": _iso(T0 - timedelta(days=1)),
            },
        }
    )

    clock = T0
    engine.open_contest(project_id, clock, clock + timedelta(days=21))
    contest_id = "contest-1"

    def fresh_violations():
        return [
            {
                "rule_id": rng.choice(RULES)["rule_id"],
                "file_path": rng.choice(FILES),
                "line": rng.randint(1, 80),
                "source_line": rng.choice(TEXTS),
            }
            for _ in range(rng.randint(0, 6))
        ]

    engine.declare_baseline(
        project_id,
        {"schema_version": 1, "commit_id": "c0", "snapshot": {"violations": fresh_violations()}},
        now=clock,
    )

    head = "c0"
    commit_no = 0
    plan_no = 0
    for _ in range(rng.randint(3, 10)):
        clock += timedelta(hours=rng.randint(1, 12))
        roll = rng.random()
        if roll < 0.6:
            commit_no += 1
            commit_id = f"c{commit_no}"
            author = rng.choice(developer_ids + [manager_id])
            engine.submit_bundle(
                project_id,
                {
                    "schema_version": 1,
                    "meta": {
                        "commit_id": commit_id,
                        "parent_ids": [head],
                        "author": identity(author),
                        "authored_at": _iso(clock),
                        "changed_files": [
                            {"path": path, "kind": "modified"} for path in FILES
                        ],
                    },
                    "snapshot": {"violations": fresh_violations()},
                },
            )
            head = commit_id
        elif roll < 0.75:
            engine.put_scoring_config(
                project_id,
                {
                    "default_positive": rng.randint(1, 4),
                    "default_negative": -rng.randint(1, 4),
                    "disabled_rules": ["no-eval"] if rng.random() < 0.3 else [],
                },
                now=clock,
            )
        elif roll < 0.9:
            engine.apply_adjustment(
                project_id,
                issued_by=manager_id,
                developer_id=rng.choice(developer_ids),
                delta=rng.randint(-4, 4),
                reason="review",
                now=clock,
            )
        else:
            plan_no += 1
            engine.create_plan(
                project_id,
                manager_id,
                {
                    "assignees": rng.sample(developer_ids, rng.randint(1, len(developer_ids))),
                    "objectives": [
                        {
                            "kind": rng.choice(["at_most", "at_least"]),
                            "sign_filter": rng.choice(["positive", "negative"]),
                            "threshold": rng.randint(0, 5),
                        }
                    ],
                    "bonus": rng.randint(0, 5),
                    "penalty": -rng.randint(0, 5),
                    "starts_at": _iso(clock),
                    "ends_at": _iso(clock + timedelta(days=1)),
                },
            )

    if rng.random() < 0.6:
        engine.close_contest(project_id, contest_id, now=T0 + timedelta(days=21))

    return {
        "project_id": project_id,
        "developer_ids": developer_ids,
        "manager_id": manager_id,
        "contest_id": contest_id,
    }
