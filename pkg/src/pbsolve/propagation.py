"""Slack computation and the unit-propagation fixpoint.

The slack of a constraint under a (partial) assignment is the coefficient sum
of its non-falsified literals minus the degree.  A constraint propagates every
unassigned literal whose coefficient exceeds the slack and is conflicting when
the slack is negative.

``slack_current`` / ``slack_at_level`` are from-scratch evaluations over a
trail; the ``Engine`` additionally keeps per-constraint slacks incrementally
in sync with trail mutations and runs propagation to fixpoint with a
deterministic sweep (constraint-id order, term order within a constraint).
"""

from __future__ import annotations

from typing import Optional

from .model import Constraint, variable
from .trail import Trail, TrailEntry


def value_at_level(trail: Trail, lit: int, level: int) -> Optional[bool]:
    """Truth value of ``lit`` counting only assignments at or below ``level``."""
    st = trail.query(variable(lit))
    if st is None:
        return None
    value, at, _ = st
    if at > level:
        return None
    return value if lit > 0 else not value


def slack_current(c: Constraint, trail: Trail) -> int:
    """Slack under the current partial assignment (unassigned counts)."""
    return sum(coef for coef, lit in c.terms if trail.value_of(lit) is not False) - c.degree


def slack_at_level(c: Constraint, trail: Trail, level: int) -> int:
    """Slack treating every assignment above ``level`` as undone."""
    return (
        sum(coef for coef, lit in c.terms if value_at_level(trail, lit, level) is not False)
        - c.degree
    )


def propagating_literals(c: Constraint, trail: Trail, level: int) -> tuple[int, ...]:
    """Literals the constraint would propagate at ``level``: unassigned there
    and with a coefficient strictly greater than the slack at that level."""
    s = slack_at_level(c, trail, level)
    if s < 0:
        return ()
    return tuple(
        lit
        for coef, lit in c.terms
        if coef > s and value_at_level(trail, lit, level) is None
    )


class Engine:
    """Constraint database + trail with incrementally maintained slacks.

    All trail mutations should go through ``assign`` / ``pop`` /
    ``backjump_to`` (or any code holding ``engine.trail``, since the engine
    listens to trail events).  ``propagate`` runs the deterministic sweep.
    """

    def __init__(self) -> None:
        self.trail = Trail()
        self.trail.listener = self._on_trail_event
        self.constraints: list[Constraint] = []
        self.slacks: list[int] = []
        self._occs: dict[int, list[tuple[int, int]]] = {}  # assigned lit -> [(cid, coef)]
        self._ids: dict[int, int] = {}  # id(constraint) -> cid

    def add(self, c: Constraint) -> int:
        """Watch a constraint; its slack is initialized from the live trail."""
        cid = len(self.constraints)
        self.constraints.append(c)
        self.slacks.append(slack_current(c, self.trail))
        for coef, lit in c.terms:
            # assigning -lit falsifies the term
            self._occs.setdefault(-lit, []).append((cid, coef))
        self._ids[id(c)] = cid
        return cid

    def id_of(self, c: Constraint) -> Optional[int]:
        return self._ids.get(id(c))

    def _on_trail_event(self, kind: str, entry: TrailEntry) -> None:
        hits = self._occs.get(entry.lit)
        if not hits:
            return
        if kind == "assign":
            for cid, coef in hits:
                self.slacks[cid] -= coef
        else:
            for cid, coef in hits:
                self.slacks[cid] += coef

    # trail conveniences so callers can treat the engine as the mutable host
    def assign(self, lit: int, reason: Optional[Constraint]) -> TrailEntry:
        return self.trail.assign(lit, reason)

    def decide(self, lit: int) -> TrailEntry:
        return self.trail.assign(lit, None)

    def pop(self) -> TrailEntry:
        return self.trail.pop()

    def backjump_to(self, level: int) -> None:
        self.trail.backjump_to(level)

    def propagate(self) -> Optional[Constraint]:
        """Run unit propagation to fixpoint.

        Sweeps constraints in id order, re-sweeping until nothing changes.  A
        constraint found conflicting during the sweep is reported immediately;
        otherwise every unassigned literal with coefficient above the slack is
        assigned with the constraint as reason (a single constraint may
        propagate several literals in one visit, and may conflict at a later
        level after having propagated at an earlier one).
        """
        trail = self.trail
        while True:
            changed = False
            for cid, c in enumerate(self.constraints):
                s = self.slacks[cid]
                if s < 0:
                    return c
                for coef, lit in c.terms:
                    if coef > s and trail.value_of(lit) is None:
                        trail.assign(lit, c)
                        changed = True
            if not changed:
                return None


def validate_reasons(trail: Trail) -> None:
    """Debug check: every propagated entry's reason must propagate that
    literal under the prefix of the trail preceding the entry."""
    replay = Trail()
    for entry in trail:
        if not entry.is_decision:
            s = slack_current(entry.reason, replay)
            coef = entry.reason.coefficient(entry.lit)
            if not (coef > s >= 0):
                raise AssertionError(
                    f"reason {entry.reason} does not propagate "
                    f"{entry.lit} (slack {s})"
                )
        replay.assign(entry.lit, entry.reason)
