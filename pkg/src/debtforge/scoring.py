"""Point resolution from the layered scoring configuration.

Lookup precedence is per-rule overrides, then category, then severity, then
the project defaults.  A matching layer supplies both the positive and the
negative value; layers below it are not consulted.  Whether category outranks
severity is itself configurable (``category_precedes_severity``, default on).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Mapping, Optional

from .errors import SchemaMismatch
from .model import Rule, Severity, Sign, format_utc, parse_utc

PointPair = tuple[int, int]  # (positive >= 0, negative <= 0)


def _validate_pair(pair: PointPair, where: str) -> PointPair:
    pos, neg = pair
    if pos < 0:
        raise ValueError(f"{where}: positive points must be >= 0, got {pos}")
    if neg > 0:
        raise ValueError(f"{where}: negative points must be <= 0, got {neg}")
    return (int(pos), int(neg))


@dataclass(frozen=True)
class ScoringConfig:
    """One immutable version of the project's point assignment."""

    default_positive: int
    default_negative: int
    severity_overrides: Mapping[Severity, PointPair] = field(default_factory=dict)
    category_overrides: Mapping[str, PointPair] = field(default_factory=dict)
    rule_overrides: Mapping[str, PointPair] = field(default_factory=dict)
    disabled_rules: frozenset[str] = frozenset()
    category_precedes_severity: bool = True
    version: int = 1
    effective_from: Optional[datetime] = None

    def __post_init__(self) -> None:
        _validate_pair((self.default_positive, self.default_negative), "defaults")
        for sev, pair in self.severity_overrides.items():
            _validate_pair(pair, f"severity {sev}")
        for cat, pair in self.category_overrides.items():
            _validate_pair(pair, f"category {cat}")
        for rid, pair in self.rule_overrides.items():
            _validate_pair(pair, f"rule {rid}")
        if self.version < 1:
            raise ValueError("config version must be >= 1")

    def pair_for(self, rule: Rule) -> PointPair:
        """The (positive, negative) pair the precedence chain yields for a rule."""
        override = self.rule_overrides.get(rule.rule_id)
        if override is not None:
            return override
        layers = (
            (self.category_overrides.get(rule.category), self.severity_overrides.get(rule.severity))
            if self.category_precedes_severity
            else (self.severity_overrides.get(rule.severity), self.category_overrides.get(rule.category))
        )
        for layer in layers:
            if layer is not None:
                return layer
        return (self.default_positive, self.default_negative)

    def rule_disabled(self, rule_id: str) -> bool:
        return rule_id in self.disabled_rules


def resolve_points(config: ScoringConfig, rule: Rule, sign: Sign) -> int:
    """Signed point value an action on ``rule`` earns under ``config``."""
    pos, neg = config.pair_for(rule)
    return pos if sign is Sign.POSITIVE else neg


def config_to_doc(config: ScoringConfig) -> dict[str, Any]:
    return {
        "default_positive": config.default_positive,
        "default_negative": config.default_negative,
        "severity_overrides": {
            sev.value: list(pair) for sev, pair in sorted(config.severity_overrides.items(), key=lambda kv: kv[0].value)
        },
        "category_overrides": {cat: list(pair) for cat, pair in sorted(config.category_overrides.items())},
        "rule_overrides": {rid: list(pair) for rid, pair in sorted(config.rule_overrides.items())},
        "disabled_rules": sorted(config.disabled_rules),
        "category_precedes_severity": config.category_precedes_severity,
        "version": config.version,
        "effective_from": format_utc(config.effective_from) if config.effective_from else None,
    }


def _parse_pair(value: Any, where: str) -> PointPair:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, int) and not isinstance(x, bool) for x in value)
    ):
        raise SchemaMismatch(f"{where}: expected [positive, negative] integer pair", value=value)
    return (value[0], value[1])


def config_from_doc(doc: Mapping[str, Any], *, version: int, effective_from: datetime) -> ScoringConfig:
    """Parse a config document; ``version`` and ``effective_from`` are authoritative."""
    if not isinstance(doc, Mapping):
        raise SchemaMismatch("scoring config must be an object")
    unknown = set(doc) - {
        "default_positive",
        "default_negative",
        "severity_overrides",
        "category_overrides",
        "rule_overrides",
        "disabled_rules",
        "category_precedes_severity",
        "version",
        "effective_from",
    }
    if unknown:
        raise SchemaMismatch("unknown scoring config fields", fields=sorted(unknown))
    try:
        severity_overrides = {
            Severity(sev): _parse_pair(pair, f"severity {sev}")
            for sev, pair in dict(doc.get("severity_overrides") or {}).items()
        }
        config = ScoringConfig(
            default_positive=int(doc.get("default_positive", 0)),
            default_negative=int(doc.get("default_negative", 0)),
            severity_overrides=severity_overrides,
            category_overrides={
                str(cat): _parse_pair(pair, f"category {cat}")
                for cat, pair in dict(doc.get("category_overrides") or {}).items()
            },
            rule_overrides={
                str(rid): _parse_pair(pair, f"rule {rid}")
                for rid, pair in dict(doc.get("rule_overrides") or {}).items()
            },
            disabled_rules=frozenset(str(r) for r in doc.get("disabled_rules") or []),
            category_precedes_severity=bool(doc.get("category_precedes_severity", True)),
            version=version,
            effective_from=effective_from,
        )
    except SchemaMismatch:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaMismatch(f"invalid scoring config: {exc}") from exc
    return config


def config_active_at(configs: list[ScoringConfig], at: datetime) -> ScoringConfig:
    """Latest config whose effective_from is <= ``at``.

    Timestamps before the first version fall back to the first version, so
    history ingested retroactively still scores under the oldest known rules.
    """
    if not configs:
        raise ValueError("project has no scoring config")
    active = configs[0]
    for config in configs:
        if config.effective_from is not None and config.effective_from <= at:
            active = config
        else:
            break
    return active


@dataclass(frozen=True)
class ScoreAdjustment:
    """A manual score correction issued by a manager inside an open contest."""

    adjustment_id: str
    developer_id: str
    contest_id: str
    delta: int
    reason: str
    issued_by: str
    issued_at: datetime

    def to_doc(self) -> dict[str, Any]:
        return {
            "adjustment_id": self.adjustment_id,
            "developer_id": self.developer_id,
            "contest_id": self.contest_id,
            "delta": self.delta,
            "reason": self.reason,
            "issued_by": self.issued_by,
            "issued_at": format_utc(self.issued_at),
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "ScoreAdjustment":
        return cls(
            adjustment_id=doc["adjustment_id"],
            developer_id=doc["developer_id"],
            contest_id=doc["contest_id"],
            delta=int(doc["delta"]),
            reason=doc.get("reason", ""),
            issued_by=doc["issued_by"],
            issued_at=parse_utc(doc["issued_at"]),
        )
