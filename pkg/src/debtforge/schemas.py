"""Published JSON Schemas for API responses, versioned with the service.

Contract tests validate live responses against these documents; clients can
fetch them from ``GET /schemas`` to pin their expectations.
"""

from __future__ import annotations

from typing import Any

SCHEMA_VERSION = 1

_TIMESTAMP = {"type": "string", "pattern": r"^\d{4}-\d{2}-\d{2}T.*Z$"}

_ERROR = {
    "type": "object",
    "required": ["code", "message", "details"],
    "properties": {
        "code": {"type": "string"},
        "message": {"type": "string"},
        "details": {"type": "object"},
    },
}

_RECEIPT = {
    "type": "object",
    "required": ["commit_id", "status", "sequence_no", "actions_extracted"],
    "properties": {
        "commit_id": {"type": "string"},
        "status": {"enum": ["applied", "pending", "baseline"]},
        "sequence_no": {"type": "integer", "minimum": 1},
        "actions_extracted": {"type": "integer", "minimum": 0},
        "author_unmapped": {"type": "boolean"},
        "missing_parents": {"type": "array", "items": {"type": "string"}},
    },
}

_LEADERBOARD_ROW = {
    "type": "object",
    "required": ["rank", "developer_id", "score", "positive_points", "negative_points"],
    "properties": {
        "rank": {"type": "integer", "minimum": 1},
        "developer_id": {"type": "string"},
        "score": {"type": "integer"},
        "positive_points": {"type": "integer", "minimum": 0},
        "negative_points": {"type": "integer", "maximum": 0},
    },
}

_LEADERBOARD = {
    "type": "object",
    "required": ["contest_id", "state", "rows"],
    "properties": {
        "contest_id": {"type": "string"},
        "state": {"enum": ["scheduled", "open", "closed"]},
        "rows": {"type": "array", "items": _LEADERBOARD_ROW},
    },
}

_CONTEST = {
    "type": "object",
    "required": ["contest_id", "project_id", "starts_at", "ends_at", "state"],
    "properties": {
        "contest_id": {"type": "string"},
        "project_id": {"type": "string"},
        "starts_at": _TIMESTAMP,
        "ends_at": _TIMESTAMP,
        "state": {"enum": ["scheduled", "open", "closed"]},
    },
}

_OBJECTIVE = {
    "type": "object",
    "required": ["kind", "sign_filter", "threshold"],
    "properties": {
        "kind": {"enum": ["at_most", "at_least"]},
        "sign_filter": {"enum": ["positive", "negative"]},
        "threshold": {"type": "integer", "minimum": 0},
        "rule_filter": {"type": ["string", "null"]},
    },
}

_PLAN = {
    "type": "object",
    "required": [
        "plan_id",
        "contest_id",
        "assignees",
        "objectives",
        "bonus",
        "penalty",
        "starts_at",
        "ends_at",
        "state",
    ],
    "properties": {
        "plan_id": {"type": "string"},
        "contest_id": {"type": "string"},
        "assignees": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "objectives": {"type": "array", "items": _OBJECTIVE, "minItems": 1},
        "bonus": {"type": "integer", "minimum": 0},
        "penalty": {"type": "integer", "maximum": 0},
        "starts_at": _TIMESTAMP,
        "ends_at": _TIMESTAMP,
        "state": {"enum": ["active", "succeeded", "failed"]},
        "created_by": {"type": "string"},
        "progress": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "count", "satisfied_now", "final"],
                "properties": {
                    "index": {"type": "integer"},
                    "count": {"type": "integer", "minimum": 0},
                    "satisfied_now": {"type": "boolean"},
                    "final": {"type": "boolean"},
                },
            },
        },
    },
}

_OWN_FEED_ENTRY = {
    "type": "object",
    "required": ["own", "action_id", "author_id", "sign", "rule_id", "points", "created_at"],
    "properties": {
        "own": {"const": True},
        "action_id": {"type": "string"},
        "author_id": {"type": "string"},
        "commit_id": {"type": "string"},
        "file_path": {"type": "string"},
        "sign": {"enum": ["positive", "negative"]},
        "rule_id": {"type": "string"},
        "points": {"type": "integer"},
        "created_at": _TIMESTAMP,
    },
}

_PEER_FEED_ENTRY = {
    "type": "object",
    "required": ["own", "author", "sign", "rule_id", "points", "created_at"],
    "properties": {
        "own": {"const": False},
        "author": {"type": "string", "pattern": "^anon-[0-9a-f]{10}$"},
        "sign": {"enum": ["positive", "negative"]},
        "rule_id": {"type": "string"},
        "points": {"type": "integer"},
        "created_at": _TIMESTAMP,
    },
    "additionalProperties": False,
}

_FEED = {
    "type": "object",
    "required": ["developer_id", "page", "page_size", "total_entries", "entries"],
    "properties": {
        "developer_id": {"type": "string"},
        "page": {"type": "integer", "minimum": 1},
        "page_size": {"type": "integer", "minimum": 1},
        "total_entries": {"type": "integer", "minimum": 0},
        "entries": {
            "type": "array",
            "items": {"oneOf": [_OWN_FEED_ENTRY, _PEER_FEED_ENTRY]},
        },
    },
}

_ACTION = {
    "type": "object",
    "required": ["action_id", "commit_id", "author_id", "rule_id", "file_path", "sign", "points", "created_at"],
    "properties": {
        "action_id": {"type": "string"},
        "commit_id": {"type": "string"},
        "author_id": {"type": "string"},
        "rule_id": {"type": "string"},
        "file_path": {"type": "string"},
        "sign": {"enum": ["positive", "negative"]},
        "points": {"type": "integer"},
        "created_at": _TIMESTAMP,
    },
}

_DASHBOARD = {
    "type": "object",
    "required": ["developer_id", "display_name", "contest", "actions", "adjustments", "ongoing_plans"],
    "properties": {
        "developer_id": {"type": "string"},
        "display_name": {"type": "string"},
        "contest": {
            "type": ["object", "null"],
            "properties": {
                "contest_id": {"type": "string"},
                "score": {"type": "integer"},
                "rank": {"type": "integer", "minimum": 1},
            },
        },
        "actions": {"type": "array", "items": _ACTION},
        "adjustments": {"type": "array"},
        "plan_payouts": {"type": "array"},
        "ongoing_plans": {"type": "array"},
    },
}

_SUGGESTION = {
    "type": "object",
    "required": ["rule_id", "file_path", "line", "potential_points", "first_seen_commit"],
    "properties": {
        "rule_id": {"type": "string"},
        "file_path": {"type": "string"},
        "line": {"type": "integer", "minimum": 1},
        "snippet_hash": {"type": "string"},
        "ordinal": {"type": "integer", "minimum": 0},
        "first_seen_commit": {"type": "string"},
        "potential_points": {"type": "integer", "minimum": 0},
    },
}

_TREEMAP_NODE: dict[str, Any] = {
    "type": "object",
    "required": ["path", "name", "weight", "violation_count", "children"],
    "properties": {
        "path": {"type": "string"},
        "name": {"type": "string"},
        "weight": {"type": "integer", "minimum": 0},
        "violation_count": {"type": "integer", "minimum": 0},
        "children": {"type": "array", "items": {"$ref": "#/$defs/treemap_node"}},
    },
}

_TREEMAP = {
    "type": "object",
    "required": ["head_commit_id", "root", "rule_ranking"],
    "properties": {
        "head_commit_id": {"type": "string"},
        "root": {"$ref": "#/$defs/treemap_node"},
        "rule_ranking": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rule_id", "total_potential", "open_count"],
                "properties": {
                    "rule_id": {"type": "string"},
                    "total_potential": {"type": "integer", "minimum": 0},
                    "open_count": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
    "$defs": {"treemap_node": _TREEMAP_NODE},
}

_OVERVIEW = {
    "type": "object",
    "required": [
        "project_id",
        "contest_id",
        "rule_counts",
        "developer_scores",
        "totals",
        "flagged_actions",
        "quarantined_authors",
    ],
    "properties": {
        "project_id": {"type": "string"},
        "contest_id": {"type": "string"},
        "contest_state": {"enum": ["scheduled", "open", "closed"]},
        "rule_counts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rule_id", "negative_actions", "positive_actions"],
            },
        },
        "developer_scores": {"type": "array", "items": _LEADERBOARD_ROW},
        "totals": {"type": "object"},
        "flagged_actions": {"type": "array"},
        "quarantined_authors": {"type": "object"},
        "scoring_config_version": {"type": "integer", "minimum": 1},
    },
}

_SCORING_CONFIG = {
    "type": "object",
    "required": ["default_positive", "default_negative", "version", "effective_from"],
    "properties": {
        "default_positive": {"type": "integer", "minimum": 0},
        "default_negative": {"type": "integer", "maximum": 0},
        "severity_overrides": {"type": "object"},
        "category_overrides": {"type": "object"},
        "rule_overrides": {"type": "object"},
        "disabled_rules": {"type": "array", "items": {"type": "string"}},
        "category_precedes_severity": {"type": "boolean"},
        "version": {"type": "integer", "minimum": 1},
        "effective_from": _TIMESTAMP,
    },
}

RESPONSE_SCHEMAS: dict[str, dict[str, Any]] = {
    "error": _ERROR,
    "receipt": _RECEIPT,
    "contest": _CONTEST,
    "leaderboard": _LEADERBOARD,
    "plan": _PLAN,
    "feed": _FEED,
    "dashboard": _DASHBOARD,
    "suggestions": {"type": "array", "items": _SUGGESTION},
    "treemap": _TREEMAP,
    "overview": _OVERVIEW,
    "scoring_config": _SCORING_CONFIG,
}


def schema_for(name: str) -> dict[str, Any]:
    return RESPONSE_SCHEMAS[name]
