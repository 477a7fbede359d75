"""Append-only event storage, one log per project.

Every projection in the engine is a pure fold of this log, so the only
durability contract that matters is: an acknowledged append survives, and
replay yields exactly the acknowledged prefix in order.  The on-disk format is
a 16-byte magic header followed by length-prefixed canonical-JSON envelopes;
a torn trailing record (crash mid-write) is ignored on read.

The file store takes an exclusive directory lock so two service instances
cannot interleave writes into the same logs.
"""

from __future__ import annotations

import json
import os
import struct
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Protocol

from filelock import FileLock, Timeout

from .errors import StorageFailure

MAGIC = b"DEBTFORGE-LOG-v1"
_LEN = struct.Struct(">I")


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class EventEnvelope:
    sequence_no: int
    kind: str
    payload: dict[str, Any]
    recorded_at: str

    def to_doc(self) -> dict[str, Any]:
        return {
            "sequence_no": self.sequence_no,
            "kind": self.kind,
            "payload": self.payload,
            "recorded_at": self.recorded_at,
        }


class EventStore(Protocol):
    def append(self, project_id: str, kind: str, payload: dict[str, Any]) -> int:
        """Durably record an event; returns its dense per-project sequence number."""
        ...

    def replay(self, project_id: str, from_sequence: int = 1) -> Iterator[EventEnvelope]:
        """Events in sequence order starting at ``from_sequence``."""
        ...

    def project_ids(self) -> list[str]:
        ...

    def close(self) -> None:
        ...


class MemoryEventStore:
    """In-process store for tests and ephemeral runs."""

    def __init__(self) -> None:
        self._logs: dict[str, list[EventEnvelope]] = {}
        self._lock = threading.Lock()

    def append(self, project_id: str, kind: str, payload: dict[str, Any]) -> int:
        with self._lock:
            log = self._logs.setdefault(project_id, [])
            envelope = EventEnvelope(
                sequence_no=len(log) + 1,
                kind=kind,
                payload=payload,
                recorded_at=_timestamp(),
            )
            log.append(envelope)
            return envelope.sequence_no

    def replay(self, project_id: str, from_sequence: int = 1) -> Iterator[EventEnvelope]:
        if from_sequence < 1:
            raise StorageFailure("from_sequence must be >= 1")
        log = self._logs.get(project_id, [])
        for envelope in log[from_sequence - 1 :]:
            yield envelope

    def project_ids(self) -> list[str]:
        return sorted(self._logs)

    def close(self) -> None:
        pass


def _timestamp() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()) + "Z"


class FileEventStore:
    """One ``<project_id>.log`` per project under ``root``; exclusive dir lock."""

    def __init__(self, root: str | os.PathLike[str]) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._counts: dict[str, int] = {}
        self._dir_lock = FileLock(str(self.root / ".lock"))
        try:
            self._dir_lock.acquire(timeout=0)
        except Timeout as exc:
            raise StorageFailure(
                f"store at {self.root} is locked by another instance"
            ) from exc

    def _path(self, project_id: str) -> Path:
        return self.root / f"{project_id}.log"

    def append(self, project_id: str, kind: str, payload: dict[str, Any]) -> int:
        with self._lock:
            sequence_no = self._count(project_id) + 1
            envelope = EventEnvelope(
                sequence_no=sequence_no,
                kind=kind,
                payload=payload,
                recorded_at=_timestamp(),
            )
            data = canonical_json(envelope.to_doc()).encode("utf-8")
            path = self._path(project_id)
            is_new = not path.exists()
            try:
                with open(path, "ab") as fh:
                    if is_new:
                        fh.write(MAGIC)
                    fh.write(_LEN.pack(len(data)))
                    fh.write(data)
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                raise StorageFailure(f"append failed: {exc}") from exc
            self._counts[project_id] = sequence_no
            return sequence_no

    def _count(self, project_id: str) -> int:
        cached = self._counts.get(project_id)
        if cached is not None:
            return cached
        count = 0
        for _ in self._iter_records(project_id):
            count += 1
        self._counts[project_id] = count
        return count

    def _iter_records(self, project_id: str) -> Iterator[dict[str, Any]]:
        path = self._path(project_id)
        if not path.exists():
            return
        try:
            with open(path, "rb") as fh:
                header = fh.read(len(MAGIC))
                if header != MAGIC:
                    raise StorageFailure(f"bad log header in {path}")
                while True:
                    raw_len = fh.read(_LEN.size)
                    if len(raw_len) < _LEN.size:
                        return  # clean EOF or torn length prefix
                    (length,) = _LEN.unpack(raw_len)
                    data = fh.read(length)
                    if len(data) < length:
                        return  # torn record from an interrupted append
                    yield json.loads(data.decode("utf-8"))
        except OSError as exc:
            raise StorageFailure(f"replay failed: {exc}") from exc

    def replay(self, project_id: str, from_sequence: int = 1) -> Iterator[EventEnvelope]:
        if from_sequence < 1:
            raise StorageFailure("from_sequence must be >= 1")
        for doc in self._iter_records(project_id):
            envelope = EventEnvelope(
                sequence_no=doc["sequence_no"],
                kind=doc["kind"],
                payload=doc["payload"],
                recorded_at=doc["recorded_at"],
            )
            if envelope.sequence_no >= from_sequence:
                yield envelope

    def project_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.log"))

    def close(self) -> None:
        if self._dir_lock.is_locked:
            self._dir_lock.release()
