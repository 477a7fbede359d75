"""DebtForge: gamified technical-debt tracking over commit-level lint results.

Commits are diffed against their parents to produce signed, author-attributed
actions; actions earn configurable points inside timeboxed contests with
leaderboards, manager-issued action plans, manual adjustments, and fix
suggestions.  See :mod:`debtforge.engine` for the orchestration entry point.
"""

from .engine import Engine
from .store import FileEventStore, MemoryEventStore

__version__ = "0.1.0"

__all__ = ["Engine", "FileEventStore", "MemoryEventStore", "__version__"]
