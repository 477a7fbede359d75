"""Reward-potential rankings and treemap data over outstanding violations.

An outstanding violation is one still present in the latest ingested tree
state; its potential is the positive points a fix would earn under the current
config.  The treemap mirrors the directory tree with node weight equal to the
sum of descendant potentials, so the root weight always equals the total
outstanding potential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .model import Rule, Sign, Violation
from .scoring import ScoringConfig, resolve_points


@dataclass(frozen=True)
class OutstandingViolation:
    violation: Violation
    first_seen_commit: str
    potential_points: int

    def to_doc(self) -> dict:
        return {
            "rule_id": self.violation.rule_id,
            "file_path": self.violation.file_path,
            "line": self.violation.line,
            "snippet_hash": self.violation.snippet_hash,
            "ordinal": self.violation.ordinal,
            "first_seen_commit": self.first_seen_commit,
            "potential_points": self.potential_points,
        }


@dataclass
class TreemapNode:
    path: str
    name: str
    weight: int = 0
    violation_count: int = 0
    children: list["TreemapNode"] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "path": self.path,
            "name": self.name,
            "weight": self.weight,
            "violation_count": self.violation_count,
            "children": [child.to_doc() for child in self.children],
        }


def outstanding_with_potential(
    open_violations: Iterable[tuple[Violation, str]],
    rules: Mapping[str, Rule],
    config: ScoringConfig,
) -> list[OutstandingViolation]:
    """Attach fix rewards to the open violations of currently enabled rules."""
    result = []
    for violation, first_seen in open_violations:
        rule = rules.get(violation.rule_id)
        if rule is None or not rule.enabled or config.rule_disabled(rule.rule_id):
            continue
        result.append(
            OutstandingViolation(
                violation=violation,
                first_seen_commit=first_seen,
                potential_points=resolve_points(config, rule, Sign.POSITIVE),
            )
        )
    return result


def rule_reward_ranking(
    outstanding: Iterable[OutstandingViolation],
) -> list[tuple[str, int, int]]:
    """(rule_id, total_potential, open_count) sorted by total potential descending,
    ties by rule_id.  Rules with no open violations do not appear."""
    totals: dict[str, tuple[int, int]] = {}
    for ov in outstanding:
        total, count = totals.get(ov.violation.rule_id, (0, 0))
        totals[ov.violation.rule_id] = (total + ov.potential_points, count + 1)
    ranking = [(rule_id, total, count) for rule_id, (total, count) in totals.items()]
    ranking.sort(key=lambda row: (-row[1], row[0]))
    return ranking


def personalized_suggestions(
    outstanding: Iterable[OutstandingViolation],
    recent_paths: set[str],
) -> list[OutstandingViolation]:
    """Outstanding violations located in files the developer touched recently,
    best reward first."""
    picks = [ov for ov in outstanding if ov.violation.file_path in recent_paths]
    picks.sort(
        key=lambda ov: (
            -ov.potential_points,
            ov.violation.file_path,
            ov.violation.rule_id,
            ov.violation.ordinal,
        )
    )
    return picks


def build_treemap(outstanding: Iterable[OutstandingViolation]) -> TreemapNode:
    """Directory tree with weights summing upward; children ordered by weight
    descending then name."""
    root = TreemapNode(path="", name="")
    index: dict[str, TreemapNode] = {"": root}

    def node_for(path: str) -> TreemapNode:
        node = index.get(path)
        if node is not None:
            return node
        parent_path, _, name = path.rpartition("/")
        parent = node_for(parent_path)
        node = TreemapNode(path=path, name=name)
        parent.children.append(node)
        index[path] = node
        return node

    for ov in outstanding:
        leaf = node_for(ov.violation.file_path)
        leaf.weight += ov.potential_points
        leaf.violation_count += 1
        parent_path = ov.violation.file_path
        while parent_path:
            parent_path = parent_path.rpartition("/")[0]
            ancestor = index[parent_path]
            ancestor.weight += ov.potential_points
            ancestor.violation_count += 1

    def sort_children(node: TreemapNode) -> None:
        node.children.sort(key=lambda child: (-child.weight, child.name))
        for child in node.children:
            sort_children(child)

    sort_children(root)
    return root
