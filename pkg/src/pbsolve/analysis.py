"""Conflict analysis: backward trail walk with cancellation.

The walk follows the trail in reverse.  Each propagated entry whose negation
occurs in the current (conflicting) constraint contributes a cancellation
step; before cancelling, the reason may be reduced (weakened and saturated) so
the subadditive slack estimate guarantees the conflict is preserved.  Entries
that do not occur negated are skipped, but still unassigned.  The walk stops
at the first constraint that is assertive, i.e. propagates at least one
literal at some decision level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Union

from .model import Constraint, cancel, lit_str, saturate, weaken
from .propagation import slack_at_level, slack_current, value_at_level
from .trail import Trail


class MalformedState(RuntimeError):
    """Raised when the analysis walk reaches a state it cannot make progress
    from (e.g. a non-conflicting, non-assertive constraint with nothing left
    to cancel)."""


@dataclass(frozen=True)
class AssertionInfo:
    """First decision level at which a constraint propagates, plus the full
    set of literals it propagates there."""

    level: int
    propagated: tuple[int, ...]


@dataclass(frozen=True)
class ConflictingAt:
    """The constraint has negative slack from this level on."""

    level: int


# reduce_reason result meaning "ignore this cancellation step"
SKIP = object()


def first_assertive_level(
    c: Constraint, trail: Trail, up_to: Optional[int] = None
) -> Union[AssertionInfo, ConflictingAt, None]:
    """Scan levels 0..current (or ``up_to``) for the first at which ``c`` is
    conflicting or assertive.

    At each level the conflict test comes first: with negative slack every
    coefficient exceeds the slack, so propagation at that level is
    meaningless.  A constraint can be assertive at a low level and conflicting
    at a higher one; the scan reports whichever comes first.
    """
    limit = trail.current_level if up_to is None else up_to
    for level in range(limit + 1):
        s = slack_at_level(c, trail, level)
        if s < 0:
            return ConflictingAt(level)
        props = tuple(
            lit
            for coef, lit in c.terms
            if coef > s and value_at_level(trail, lit, level) is None
        )
        if props:
            return AssertionInfo(level, props)
    return None


def reduce_reason(
    reason: Constraint,
    conflict_slack: int,
    conflict_coef: int,
    trail: Trail,
    pivot: int,
) -> Union[Constraint, object]:
    """Weaken the reason until the sum of the scaled slacks goes negative.

    ``pivot`` is the literal of the conflict side; its negation occurs in the
    reason with coefficient beta.  While ``mu*slack(conflict) +
    nu*slack(reason) >= 0`` (mu, nu the LCM multipliers, recomputed after each
    weakening because saturation may shrink beta), a non-falsified, non-pivot
    literal is weakened away, smallest coefficient first (ties by variable
    index), and the reason saturated.  Returns the reduced reason, or ``SKIP``
    if it degenerates to a tautology.
    """
    while True:
        beta = reason.coefficient(-pivot)
        common = conflict_coef * beta // gcd(conflict_coef, beta)
        mu, nu = common // conflict_coef, common // beta
        if mu * conflict_slack + nu * slack_current(reason, trail) < 0:
            return reason
        candidates = [
            (coef, lit)
            for coef, lit in reason.terms
            if lit != -pivot and trail.value_of(lit) is not False
        ]
        if not candidates:
            return reason
        _, lit = min(candidates, key=lambda t: (t[0], abs(t[1])))
        reason = saturate(weaken(reason, lit))
        if reason.is_tautology:
            return SKIP


@dataclass
class AnalysisResult:
    """Outcome of one conflict analysis.

    ``info is None`` means unsatisfiability was derived.  ``committed`` is the
    sequence of assertion levels of the constraints committed along the way
    (starting with the first assertive one), used to audit that continuing the
    analysis never worsened the backjump level.
    """

    constraint: Constraint
    info: Optional[AssertionInfo]
    first_level: Optional[int] = None
    committed: tuple[int, ...] = ()
    cancellations: int = 0
    log: list[tuple[int, Constraint, Constraint]] = field(default_factory=list)

    @property
    def unsat(self) -> bool:
        return self.info is None

    def render_log(self, id_of=None) -> str:
        """Derivation log, one ``CANCEL <pivot> <reason-id> -> <constraint>``
        line per cancellation."""
        lines = []
        for pivot, reason, result in self.log:
            rid = "?" if id_of is None else str(id_of(reason))
            lines.append(f"CANCEL {lit_str(pivot)} {rid} -> {result}")
        return "\n".join(lines)


def conflict_step(current: Constraint, trail: Trail, result: AnalysisResult) -> Constraint:
    """One step of the backward walk while the current constraint conflicts.

    Pops the top entry; if its negation occurs in the current constraint and
    it was propagated, the (possibly reduced) reason is cancelled in.
    Skipped entries are unassigned too.
    """
    entry = trail.top()
    if entry.reason is not None:
        alpha = current.coefficient(-entry.lit)
        if alpha > 0:
            reduced = reduce_reason(
                entry.reason, slack_current(current, trail), alpha, trail, -entry.lit
            )
            if reduced is not SKIP:
                derived = cancel(current, reduced, -entry.lit)
                # with saturated reasons the estimate rules tautologies out;
                # guard anyway rather than lose the working constraint
                if not derived.is_tautology:
                    result.cancellations += 1
                    result.log.append((-entry.lit, entry.reason, derived))
                    current = derived
    trail.pop()
    return current


def _conflicting_now(current: Constraint, trail: Trail) -> bool:
    return slack_at_level(current, trail, trail.current_level) < 0


def analyze_conflict(conflict: Constraint, trail: Trail) -> AnalysisResult:
    """Regular conflict analysis: walk backward until the derived constraint
    is assertive, cancelling the reason of every falsified literal met.

    Returns an unsat result when a contradiction (``0 >= 1`` like) is derived
    or when the walk exhausts the trail with the constraint still conflicting
    -- in particular for conflicts at decision level 0, whose analysis still
    performs its cancellations so the full proof is derived.
    """
    result = AnalysisResult(conflict, None)
    current = conflict
    while True:
        if current.is_contradiction:
            result.constraint = current
            return result
        status = first_assertive_level(current, trail)
        if isinstance(status, AssertionInfo):
            result.constraint = current
            result.info = status
            result.first_level = status.level
            result.committed = (status.level,)
            return result
        if not trail.entries:
            if status is not None or slack_current(current, trail) < 0:
                result.constraint = current
                return result
            raise MalformedState(f"analysis stuck on non-assertive {current}")
        current = conflict_step(current, trail, result)
