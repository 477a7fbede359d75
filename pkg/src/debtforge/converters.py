"""Convert linter reports into normalized violation inputs.

Supported formats: ESLint's JSON output, Checkstyle XML, and the SonarQube
generic issue-import JSON.  Output rows carry ``rule_id``, ``file_path`` and
``line``; ``source_line`` is read from the working tree when one is supplied,
since fingerprints are built from the offending text, not the report.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Any, Optional

from .errors import MalformedReport

FORMATS = ("sonar-generic", "checkstyle-xml", "eslint-json")


def _relative_path(raw: str, worktree: Optional[Path]) -> str:
    path = raw.replace("\\", "/")
    if worktree is not None:
        try:
            path = str(Path(raw).resolve().relative_to(worktree.resolve()))
        except ValueError:
            path = path.lstrip("/")
    return path.lstrip("/")


def _read_source_line(worktree: Optional[Path], file_path: str, line: int) -> str:
    if worktree is None:
        return ""
    target = worktree / file_path
    try:
        lines = target.read_text(encoding="utf-8", errors="replace").splitlines()
    except OSError:
        return ""
    if 1 <= line <= len(lines):
        return lines[line - 1]
    return ""


def _finish(
    rows: list[tuple[str, str, int]], worktree: Optional[Path]
) -> list[dict[str, Any]]:
    out = []
    for rule_id, file_path, line in rows:
        out.append(
            {
                "rule_id": rule_id,
                "file_path": file_path,
                "line": line,
                "source_line": _read_source_line(worktree, file_path, line),
            }
        )
    return out


def _convert_eslint(report: str, worktree: Optional[Path]) -> list[dict[str, Any]]:
    try:
        data = json.loads(report)
    except json.JSONDecodeError as exc:
        raise MalformedReport(f"eslint-json: {exc}") from exc
    if not isinstance(data, list):
        raise MalformedReport("eslint-json: top level must be a list of file results")
    rows: list[tuple[str, str, int]] = []
    for entry in data:
        if not isinstance(entry, dict) or "filePath" not in entry:
            raise MalformedReport("eslint-json: file result needs filePath")
        file_path = _relative_path(str(entry["filePath"]), worktree)
        for message in entry.get("messages", []):
            rule_id = message.get("ruleId")
            line = message.get("line")
            if not rule_id or not isinstance(line, int) or line < 1:
                continue  # parse errors and fatal messages carry no rule
            rows.append((rule_id, file_path, line))
    return _finish(rows, worktree)


def _convert_checkstyle(report: str, worktree: Optional[Path]) -> list[dict[str, Any]]:
    try:
        root = ET.fromstring(report)
    except ET.ParseError as exc:
        raise MalformedReport(f"checkstyle-xml: {exc}") from exc
    if root.tag != "checkstyle":
        raise MalformedReport("checkstyle-xml: root element must be <checkstyle>")
    rows: list[tuple[str, str, int]] = []
    for file_el in root.findall("file"):
        name = file_el.get("name")
        if not name:
            raise MalformedReport("checkstyle-xml: <file> needs a name attribute")
        file_path = _relative_path(name, worktree)
        for error in file_el.findall("error"):
            source = error.get("source") or error.get("severity") or "checkstyle"
            try:
                line = int(error.get("line", "0"))
            except ValueError:
                continue
            if line < 1:
                continue
            # the trailing segment of the check class is the usable rule key
            rule_id = source.rsplit(".", 1)[-1]
            rows.append((rule_id, file_path, line))
    return _finish(rows, worktree)


def _convert_sonar(report: str, worktree: Optional[Path]) -> list[dict[str, Any]]:
    try:
        data = json.loads(report)
    except json.JSONDecodeError as exc:
        raise MalformedReport(f"sonar-generic: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("issues"), list):
        raise MalformedReport("sonar-generic: expected an object with an issues list")
    rows: list[tuple[str, str, int]] = []
    for issue in data["issues"]:
        if not isinstance(issue, dict):
            raise MalformedReport("sonar-generic: issue must be an object")
        rule_id = issue.get("ruleId")
        location = issue.get("primaryLocation") or {}
        file_path = location.get("filePath")
        text_range = location.get("textRange") or {}
        line = text_range.get("startLine", 1)
        if not rule_id or not file_path:
            raise MalformedReport("sonar-generic: issue needs ruleId and filePath")
        if not isinstance(line, int) or line < 1:
            line = 1
        rows.append((rule_id, _relative_path(str(file_path), worktree), line))
    return _finish(rows, worktree)


def convert(
    report: str, fmt: str, worktree: Optional[str | Path] = None
) -> list[dict[str, Any]]:
    """Parse ``report`` in the named format into normalized violation inputs."""
    tree = Path(worktree) if worktree is not None else None
    if fmt == "eslint-json":
        return _convert_eslint(report, tree)
    if fmt == "checkstyle-xml":
        return _convert_checkstyle(report, tree)
    if fmt == "sonar-generic":
        return _convert_sonar(report, tree)
    raise MalformedReport(f"unknown report format {fmt!r}", supported=list(FORMATS))
