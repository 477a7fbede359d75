"""Command-line adapter: walk a repository, lint every revision, emit bundles.

``scan`` checks each revision of the range out into a temporary worktree, runs
the configured linter command (template with a ``{worktree}`` placeholder,
report read from stdout), converts the report, and produces one bundle per
revision in topological order with the range root declared as a baseline.
Bundles are POSTed to a running service (``--mode post``) or written as files
for offline replay (``--mode write``); written output is byte-deterministic.

Exit codes: 0 clean, 1 partial (some revisions failed), 2 fatal.
"""

from __future__ import annotations

import argparse
import json
import shlex
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import httpx

from .converters import FORMATS, convert
from .errors import (
    DebtForgeError,
    LinterFailure,
    MalformedReport,
    RepoUnreadable,
    ServiceUnreachable,
)

POST_RETRIES = 3
RETRY_BACKOFF_SECONDS = 0.5


def _git(repo: Path, *args: str) -> str:
    try:
        result = subprocess.run(
            ["git", "-C", str(repo), *args],
            check=True,
            capture_output=True,
            text=True,
        )
    except FileNotFoundError as exc:
        raise RepoUnreadable("git executable not found") from exc
    except subprocess.CalledProcessError as exc:
        raise RepoUnreadable(f"git {' '.join(args)} failed: {exc.stderr.strip()}") from exc
    return result.stdout


@dataclass
class RevisionFacts:
    commit_id: str
    parent_ids: list[str]
    author: str
    authored_at: str
    changed_files: list[dict[str, Any]]


@dataclass
class ScanReport:
    revisions: int = 0
    violations: int = 0
    skipped_merges: int = 0
    unmapped_authors: int = 0
    failed_revisions: list[str] = field(default_factory=list)
    written: list[str] = field(default_factory=list)
    posted: int = 0

    def to_doc(self) -> dict[str, Any]:
        return {
            "revisions": self.revisions,
            "violations": self.violations,
            "skipped_merges": self.skipped_merges,
            "unmapped_authors": self.unmapped_authors,
            "failed_revisions": list(self.failed_revisions),
            "written": list(self.written),
            "posted": self.posted,
        }


def list_revisions(repo: Path, range_spec: Optional[str], branch: str) -> list[str]:
    """Revision ids in topological order, parents before children.

    ``A..B`` scans the commits after A up to B with A as the baseline root;
    a plain revision (or the branch tip) scans its full history with the
    first commit as the root.
    """
    if range_spec and ".." in range_spec:
        base, _, tip = range_spec.partition("..")
        base = base or branch
        tip = tip or branch
        root = _git(repo, "rev-parse", base).strip()
        rest = _git(
            repo, "rev-list", "--topo-order", "--reverse", f"{base}..{tip}"
        ).split()
        return [root] + rest
    target = range_spec or branch
    return _git(repo, "rev-list", "--topo-order", "--reverse", target).split()


def revision_facts(repo: Path, commit_id: str) -> RevisionFacts:
    meta = _git(
        repo, "log", "-1", "--format=%P%x00%an <%ae>%x00%aI", commit_id
    ).strip("\n")
    parents_raw, author, authored_at = meta.split("\x00")
    parent_ids = parents_raw.split() if parents_raw else []

    changed: list[dict[str, Any]] = []
    if parent_ids:
        diff = _git(
            repo,
            "diff-tree",
            "-r",
            "-M",
            "--no-commit-id",
            "--name-status",
            f"{parent_ids[0]}",
            commit_id,
        )
    else:
        diff = _git(
            repo, "diff-tree", "-r", "--root", "--no-commit-id", "--name-status", commit_id
        )
    for line in diff.splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        status = parts[0]
        if status.startswith("R") and len(parts) >= 3:
            changed.append(
                {"path": parts[2], "kind": "renamed", "renamed_from": parts[1]}
            )
        elif status == "A":
            changed.append({"path": parts[1], "kind": "added"})
        elif status == "D":
            changed.append({"path": parts[1], "kind": "deleted"})
        else:  # M, T, C... treated as modification of the post-image path
            changed.append({"path": parts[-1], "kind": "modified"})
    return RevisionFacts(
        commit_id=commit_id,
        parent_ids=parent_ids,
        author=author,
        authored_at=authored_at,
        changed_files=changed,
    )


def lint_revision(
    repo: Path, commit_id: str, linter_cmd: str, fmt: str
) -> list[dict[str, Any]]:
    """Check the revision out into a temp worktree and run the linter there."""
    with tempfile.TemporaryDirectory(prefix="debtforge-wt-") as tmp:
        worktree = Path(tmp) / "tree"
        _git(repo, "worktree", "add", "--detach", str(worktree), commit_id)
        try:
            command = [
                part.replace("{worktree}", str(worktree))
                for part in shlex.split(linter_cmd)
            ]
            try:
                run = subprocess.run(command, capture_output=True, text=True)
            except OSError as exc:
                raise LinterFailure(f"cannot run linter: {exc}") from exc
            if run.returncode not in (0, 1):
                raise LinterFailure(
                    f"linter exited {run.returncode} on {commit_id}",
                    stderr=run.stderr[-2000:],
                )
            return convert(run.stdout, fmt, worktree=worktree)
        finally:
            subprocess.run(
                ["git", "-C", str(repo), "worktree", "remove", "--force", str(worktree)],
                capture_output=True,
            )


def build_documents(
    repo: Path,
    revisions: list[str],
    linter_cmd: str,
    fmt: str,
    workers: int,
    report: ScanReport,
) -> list[tuple[str, str, dict[str, Any]]]:
    """(kind, commit_id, document) per revision, range root first as baseline.

    Revisions may be analyzed in parallel; the returned order is always the
    submission (topological) order.  A linter failure skips that revision.
    """
    facts = {rev: revision_facts(repo, rev) for rev in revisions}

    def analyze(rev: str):
        return lint_revision(repo, rev, linter_cmd, fmt)

    results: dict[str, Any] = {}
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {rev: pool.submit(analyze, rev) for rev in revisions}
        for rev, future in futures.items():
            try:
                results[rev] = future.result()
            except DebtForgeError as exc:
                results[rev] = exc
    else:
        for rev in revisions:
            try:
                results[rev] = analyze(rev)
            except DebtForgeError as exc:
                results[rev] = exc

    documents: list[tuple[str, str, dict[str, Any]]] = []
    for index, rev in enumerate(revisions):
        outcome = results[rev]
        if isinstance(outcome, DebtForgeError):
            report.failed_revisions.append(rev)
            print(f"warning: {rev}: {outcome.message}", file=sys.stderr)
            continue
        report.revisions += 1
        report.violations += len(outcome)
        info = facts[rev]
        if len(info.parent_ids) >= 2:
            report.skipped_merges += 1
        if index == 0:
            documents.append(
                (
                    "baseline",
                    rev,
                    {
                        "schema_version": 1,
                        "commit_id": rev,
                        "snapshot": {"violations": outcome},
                    },
                )
            )
        else:
            documents.append(
                (
                    "commit",
                    rev,
                    {
                        "schema_version": 1,
                        "meta": {
                            "commit_id": rev,
                            "parent_ids": info.parent_ids,
                            "author": info.author,
                            "authored_at": info.authored_at,
                            "changed_files": info.changed_files,
                        },
                        "snapshot": {"violations": outcome},
                    },
                )
            )
    return documents


def write_documents(
    documents: list[tuple[str, str, dict[str, Any]]], out_dir: Path, report: ScanReport
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for index, (kind, commit_id, doc) in enumerate(documents):
        name = f"{index:04d}_{kind}_{commit_id}.json"
        path = out_dir / name
        path.write_text(
            json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        report.written.append(name)


def post_documents(
    documents: list[tuple[str, str, dict[str, Any]]],
    service_url: str,
    token: Optional[str],
    report: ScanReport,
) -> None:
    """Submit strictly in order; each document retries before giving up."""
    base = service_url.rstrip("/")
    headers = {"Authorization": f"Bearer {token}"} if token else {}
    with httpx.Client(timeout=30.0) as client:
        for kind, commit_id, doc in documents:
            endpoint = f"{base}/baseline" if kind == "baseline" else f"{base}/commits"
            receipt = _post_with_retry(client, endpoint, doc, headers)
            report.posted += 1
            if receipt.get("author_unmapped"):
                report.unmapped_authors += 1


def _post_with_retry(
    client: httpx.Client, url: str, doc: dict[str, Any], headers: dict[str, str]
) -> dict[str, Any]:
    last_error: Optional[str] = None
    for attempt in range(POST_RETRIES):
        try:
            response = client.post(url, json=doc, headers=headers)
        except httpx.HTTPError as exc:
            last_error = str(exc)
            time.sleep(RETRY_BACKOFF_SECONDS * (attempt + 1))
            continue
        if response.status_code >= 500:
            last_error = f"HTTP {response.status_code}"
            time.sleep(RETRY_BACKOFF_SECONDS * (attempt + 1))
            continue
        if response.status_code >= 400:
            raise ServiceUnreachable(
                f"service rejected {url}: {response.status_code} {response.text[:500]}"
            )
        return response.json()
    raise ServiceUnreachable(f"cannot reach {url}: {last_error}")


def cmd_scan(args: argparse.Namespace) -> int:
    repo = Path(args.repo)
    if not (repo / ".git").exists() and not (repo / "HEAD").exists():
        print(f"error: {repo} is not a git repository", file=sys.stderr)
        return 2
    report = ScanReport()
    try:
        revisions = list_revisions(repo, args.range, args.branch)
        if not revisions:
            print("error: empty revision range", file=sys.stderr)
            return 2
        documents = build_documents(
            repo, revisions, args.linter_cmd, args.format, args.workers, report
        )
        if args.mode == "write":
            write_documents(documents, Path(args.out_dir), report)
        else:
            if not args.service_url:
                print("error: --mode post requires --service-url", file=sys.stderr)
                return 2
            post_documents(documents, args.service_url, args.token, report)
    except DebtForgeError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    print(json.dumps(report.to_doc(), indent=2))
    return 1 if report.failed_revisions else 0


def cmd_convert(args: argparse.Namespace) -> int:
    try:
        text = Path(args.report).read_text(encoding="utf-8")
        rows = convert(text, args.format, worktree=args.worktree)
    except OSError as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return 2
    except MalformedReport as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    print(json.dumps(rows, indent=2))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .api import serve

    try:
        serve(
            data_dir=args.data_dir,
            host=args.host,
            port=args.port,
            admin_token=args.admin_token,
        )
    except DebtForgeError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="debtforge", description="technical-debt action tracking toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="lint a repository's history into bundles")
    scan.add_argument("--repo", required=True, help="path to the git repository")
    scan.add_argument(
        "--range",
        default=None,
        help="revision range: 'A..B' (A becomes the baseline) or a single tip",
    )
    scan.add_argument(
        "--linter-cmd",
        required=True,
        help="linter command template; {worktree} is replaced per revision, report read from stdout",
    )
    scan.add_argument("--format", choices=FORMATS, default="eslint-json")
    scan.add_argument("--mode", choices=("post", "write"), default="write")
    scan.add_argument(
        "--service-url",
        default=None,
        help="project base URL, e.g. http://host:8385/projects/my-project",
    )
    scan.add_argument("--token", default=None, help="bearer token for posting")
    scan.add_argument("--branch", default="HEAD")
    scan.add_argument("--workers", type=int, default=1)
    scan.add_argument("--out-dir", default="bundles", help="target directory in write mode")
    scan.set_defaults(func=cmd_scan)

    conv = sub.add_parser("convert", help="convert one linter report to violation inputs")
    conv.add_argument("--report", required=True)
    conv.add_argument("--format", choices=FORMATS, required=True)
    conv.add_argument("--worktree", default=None)
    conv.set_defaults(func=cmd_convert)

    serve_p = sub.add_parser("serve", help="run the HTTP service")
    serve_p.add_argument("--data-dir", required=True)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8385)
    serve_p.add_argument("--admin-token", default=None)
    serve_p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
