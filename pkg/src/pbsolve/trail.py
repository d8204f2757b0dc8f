"""The assignment stack: literals with decision levels and reasons.

Entries are kept in assignment order, which coincides with non-decreasing
decision level because backtracking is never chronological.  A ``None`` reason
marks a decision; propagated entries reference their propagating constraint.
Level 0 exists before any decision, so level-0 propagations are ordinary
entries with a reason.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .model import Constraint, lit_str, variable


class AlreadyAssigned(ValueError):
    """Raised when assigning a variable that already has a value."""


@dataclass(frozen=True)
class TrailEntry:
    lit: int                      # the literal made true
    level: int
    reason: Optional[Constraint]  # None = decision

    @property
    def is_decision(self) -> bool:
        return self.reason is None


class Trail:
    """Ordered assignment stack with O(1) per-variable lookup."""

    def __init__(self) -> None:
        self.entries: list[TrailEntry] = []
        self.current_level = 0
        self._state: dict[int, TrailEntry] = {}
        # single observer used by the propagation engine to keep slacks synced
        self.listener: Optional[Callable[[str, TrailEntry], None]] = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[TrailEntry]:
        return iter(self.entries)

    def assign(self, lit: int, reason: Optional[Constraint]) -> TrailEntry:
        """Append an assignment making ``lit`` true.

        Decisions (``reason is None``) open a new decision level; propagations
        join the current one.
        """
        v = variable(lit)
        if v in self._state:
            raise AlreadyAssigned(f"x{v} is already assigned")
        if reason is None:
            self.current_level += 1
        entry = TrailEntry(lit, self.current_level, reason)
        self.entries.append(entry)
        self._state[v] = entry
        if self.listener is not None:
            self.listener("assign", entry)
        return entry

    def top(self) -> TrailEntry:
        return self.entries[-1]

    def pop(self) -> TrailEntry:
        """Unassign the top entry (used by conflict analysis walks)."""
        entry = self.entries.pop()
        del self._state[variable(entry.lit)]
        if entry.is_decision:
            self.current_level -= 1
        elif not self.entries:
            self.current_level = 0
        else:
            self.current_level = self.entries[-1].level
        if self.listener is not None:
            self.listener("unassign", entry)
        return entry

    def backjump_to(self, level: int) -> None:
        """Remove every entry above ``level`` and unassign its variable."""
        if level > self.current_level:
            raise ValueError(f"cannot backjump up to level {level}")
        while self.entries and self.entries[-1].level > level:
            self.pop()
        self.current_level = level

    def query(self, var: int) -> Optional[tuple[bool, int, Optional[Constraint]]]:
        """Current assignment of a variable: ``(value, level, reason)`` or None."""
        entry = self._state.get(var)
        if entry is None:
            return None
        return (entry.lit > 0, entry.level, entry.reason)

    def value_of(self, lit: int) -> Optional[bool]:
        """Truth value of a literal under the current assignment, if any."""
        entry = self._state.get(variable(lit))
        if entry is None:
            return None
        return entry.lit == lit

    def level_of(self, var: int) -> Optional[int]:
        entry = self._state.get(var)
        return None if entry is None else entry.level

    def reason_of(self, var: int) -> Optional[Constraint]:
        entry = self._state.get(var)
        return None if entry is None else entry.reason

    def assignment(self) -> dict[int, bool]:
        """Snapshot of the full variable assignment."""
        return {v: e.lit > 0 for v, e in self._state.items()}

    def dump(self, id_of: Optional[Callable[[Constraint], str]] = None) -> str:
        """Debug dump, one entry per line: ``<lit> @<level> <reason-id|DEC>``."""
        lines = []
        for e in self.entries:
            if e.is_decision:
                rid = "DEC"
            elif id_of is not None:
                rid = str(id_of(e.reason))
            else:
                rid = "?"
            lines.append(f"{lit_str(e.lit)} @{e.level} {rid}")
        return "\n".join(lines)
