"""Exception hierarchy shared by every engine module.

Each error carries a stable ``code`` string that the HTTP layer maps onto the
uniform ``{code, message, details}`` body, so callers can branch on codes
without parsing messages.
"""

from __future__ import annotations

from typing import Any


class DebtForgeError(Exception):
    """Base class; ``code`` identifies the failure kind on the wire."""

    code = "Internal"

    def __init__(self, message: str = "", **details: Any) -> None:
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_doc(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


# -- project / ingestion ------------------------------------------------

class UnknownProject(DebtForgeError):
    code = "UnknownProject"


class SchemaMismatch(DebtForgeError):
    code = "SchemaMismatch"


class DanglingParent(DebtForgeError):
    code = "DanglingParent"


class DuplicateConflict(DebtForgeError):
    code = "DuplicateConflict"


class UnknownCommit(DebtForgeError):
    code = "UnknownCommit"


class PendingLimitExceeded(DebtForgeError):
    code = "PendingLimitExceeded"


# -- diffing -------------------------------------------------------------

class AuthorUnmapped(DebtForgeError):
    code = "AuthorUnmapped"


class SnapshotMissing(DebtForgeError):
    code = "SnapshotMissing"


# -- scoring / contests ---------------------------------------------------

class ContestClosed(DebtForgeError):
    code = "ContestClosed"


class ContestNotOpen(DebtForgeError):
    code = "ContestNotOpen"


class ContestAlreadyOpen(DebtForgeError):
    code = "ContestAlreadyOpen"


class InvalidWindow(DebtForgeError):
    code = "InvalidWindow"


class UnknownContest(DebtForgeError):
    code = "UnknownContest"


class NonParticipant(DebtForgeError):
    code = "NonParticipant"


class NotAManager(DebtForgeError):
    code = "NotAManager"


class UnknownDeveloper(DebtForgeError):
    code = "UnknownDeveloper"


# -- action plans ----------------------------------------------------------

class WindowOutsideContest(DebtForgeError):
    code = "WindowOutsideContest"


class EmptyObjectives(DebtForgeError):
    code = "EmptyObjectives"


class UnknownPlan(DebtForgeError):
    code = "UnknownPlan"


class AlreadySettled(DebtForgeError):
    code = "AlreadySettled"


class WindowNotEnded(DebtForgeError):
    code = "WindowNotEnded"


# -- suggestions -----------------------------------------------------------

class NoSnapshot(DebtForgeError):
    code = "NoSnapshot"


# -- service / storage -------------------------------------------------------

class Unauthenticated(DebtForgeError):
    code = "Unauthenticated"


class StorageFailure(DebtForgeError):
    code = "StorageFailure"


class BindFailure(DebtForgeError):
    code = "BindFailure"


# -- CLI adapter --------------------------------------------------------------

class MalformedReport(DebtForgeError):
    code = "MalformedReport"


class RepoUnreadable(DebtForgeError):
    code = "RepoUnreadable"


class LinterFailure(DebtForgeError):
    code = "LinterFailure"


class ServiceUnreachable(DebtForgeError):
    code = "ServiceUnreachable"
