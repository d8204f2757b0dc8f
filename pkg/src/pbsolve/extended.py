"""Extended conflict analysis: continue past the first assertive constraint.

Once an assertive constraint (level ``b``) is in hand, further cancellation
steps are only committed when the candidate result is still assertive at some
level <= b or conflicting at level b -- the non-worsening invariant.  When a
raw candidate violates it, the reason may be weakened (per the configured
strategy) until the invariant is restored or the reason degenerates to a
tautology, in which case the step is ignored.  A committed conflicting
candidate sends the walk back into regular conflict analysis; its next
assertive constraint resumes the extension.

Assignments are undone at each step, even ignored ones, so the analysis stops
(per the configured criterion) before the backjump could turn into a forejump.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional, Union

from .analysis import (
    SKIP,
    AnalysisResult,
    AssertionInfo,
    ConflictingAt,
    MalformedState,
    conflict_step,
    first_assertive_level,
)
from .model import Constraint, cancel, saturate, weaken
from .propagation import slack_at_level, value_at_level
from .trail import Trail


class WeakeningStrategy(enum.Enum):
    NEVER_WEAKEN = "never-weaken"
    WEAKEN_ANY = "weaken-any"
    WEAKEN_ORDERED = "weaken-ordered"

    @classmethod
    def from_name(cls, name: str) -> "WeakeningStrategy":
        aliases = {"never": cls.NEVER_WEAKEN, "any": cls.WEAKEN_ANY, "ordered": cls.WEAKEN_ORDERED}
        if name in aliases:
            return aliases[name]
        return cls(name)


class StopKind(enum.Enum):
    UNTIL_BJLEVEL = "until-bjlevel"
    UNTIL_TOPLEVEL = "until-toplevel"
    UNTIL_HIGHLEVEL = "until-highlevel"


@dataclass(frozen=True)
class StopCriterion:
    kind: StopKind
    fraction: Fraction = Fraction(1, 10)  # only used by until-highlevel

    def __post_init__(self) -> None:
        if not (0 < self.fraction <= 1):
            raise ValueError("fraction must be in (0, 1]")

    @classmethod
    def from_name(cls, name: str) -> "StopCriterion":
        aliases = {
            "bjlevel": StopKind.UNTIL_BJLEVEL,
            "toplevel": StopKind.UNTIL_TOPLEVEL,
            "highlevel": StopKind.UNTIL_HIGHLEVEL,
        }
        base, _, frac = name.partition(":")
        kind = aliases.get(base) or StopKind(base)
        if frac:
            return cls(kind, Fraction(frac))
        return cls(kind)

    @property
    def name(self) -> str:
        return self.kind.value


UNTIL_BJLEVEL = StopCriterion(StopKind.UNTIL_BJLEVEL)
UNTIL_TOPLEVEL = StopCriterion(StopKind.UNTIL_TOPLEVEL)
UNTIL_HIGHLEVEL = StopCriterion(StopKind.UNTIL_HIGHLEVEL)


@dataclass(frozen=True)
class AnalysisConfig:
    """Conflict-analysis configuration: regular, or extended with a weakening
    strategy and a stop criterion."""

    extended: bool = False
    weakening: WeakeningStrategy = WeakeningStrategy.WEAKEN_ANY
    stop: StopCriterion = UNTIL_BJLEVEL

    @classmethod
    def regular(cls) -> "AnalysisConfig":
        return cls(extended=False)

    @classmethod
    def from_name(cls, name: str) -> "AnalysisConfig":
        """Parse ``regular`` or ``extended/<weakening>/<stop>[:fraction]``."""
        if name == "regular":
            return cls.regular()
        parts = name.split("/")
        if parts[0] != "extended" or len(parts) > 3:
            raise ValueError(f"bad config {name!r}")
        weakening = WeakeningStrategy.from_name(parts[1]) if len(parts) > 1 else WeakeningStrategy.WEAKEN_ANY
        stop = StopCriterion.from_name(parts[2]) if len(parts) > 2 else UNTIL_BJLEVEL
        return cls(extended=True, weakening=weakening, stop=stop)

    @property
    def name(self) -> str:
        if not self.extended:
            return "regular"
        stop = self.stop.name
        if self.stop.kind is StopKind.UNTIL_HIGHLEVEL and self.stop.fraction != Fraction(1, 10):
            stop += f":{self.stop.fraction}"
        return f"extended/{self.weakening.value}/{stop}"


VIOLATED = object()


def candidate_result(current: Constraint, reason: Constraint, pivot: int) -> Constraint:
    """The constraint a cancellation step would produce, committing nothing."""
    return cancel(current, reason, pivot)


def invariant_holds(
    candidate: Constraint, trail: Trail, b: int
) -> Union[AssertionInfo, ConflictingAt, object]:
    """Classify a candidate against the non-worsening invariant at level ``b``.

    Assertive at some level <= b (the improved level is reported and must be
    used from then on), conflicting at <= b, or ``VIOLATED``.  Tautologies are
    never assertive, hence always violations.
    """
    if candidate.is_tautology:
        return VIOLATED
    status = first_assertive_level(candidate, trail, up_to=b)
    if status is None:
        return VIOLATED
    return status


def restore_invariant(
    current: Constraint,
    reason: Constraint,
    pivot: int,
    trail: Trail,
    b: int,
    strategy: WeakeningStrategy,
) -> Union[tuple[Constraint, Union[AssertionInfo, ConflictingAt]], object]:
    """Weaken the reason until the candidate satisfies the invariant.

    Only literals not falsified at level <= b (and not the pivot's negation)
    may be weakened; the reason is saturated after each weakening and the
    candidate re-tested.  Returns ``(candidate, status)`` on success, or
    ``SKIP`` when the strategy forbids weakening, the reason becomes a
    tautology, or no weakenable literal remains.
    """
    if strategy is WeakeningStrategy.NEVER_WEAKEN:
        return SKIP

    def order_key(term):
        coef, lit = term
        if strategy is WeakeningStrategy.WEAKEN_ANY:
            return abs(lit)
        # weaken-ordered: unassigned first, then lowest assignment level
        st = trail.query(abs(lit))
        if st is None:
            return (0, 0, abs(lit))
        return (1, st[1], abs(lit))

    while True:
        candidates = [
            (coef, lit)
            for coef, lit in reason.terms
            if lit != -pivot and value_at_level(trail, lit, b) is not False
        ]
        if not candidates:
            return SKIP
        _, lit = min(candidates, key=order_key)
        reason = saturate(weaken(reason, lit))
        if reason.is_tautology:
            return SKIP
        candidate = cancel(current, reason, pivot)
        status = invariant_holds(candidate, trail, b)
        if status is not VIOLATED:
            return candidate, status


def should_stop(
    trail: Trail, b: int, criterion: StopCriterion, current: Constraint
) -> bool:
    """Decide whether the extended analysis should end now.

    Always stops once every assignment above ``b`` has been undone (the
    backjump would otherwise become a forejump), or when the working
    constraint is conflicting at level 0 (the problem is unsatisfiable).  The
    top-level variant also stops at ``b == 0``; the high-level variant once
    ``b`` is within the configured fraction of the highest trail level.
    """
    if slack_at_level(current, trail, 0) < 0:
        return True
    if trail.current_level <= b:
        return True
    if criterion.kind is StopKind.UNTIL_TOPLEVEL:
        return b == 0
    if criterion.kind is StopKind.UNTIL_HIGHLEVEL:
        return b <= ceil(criterion.fraction * trail.current_level)
    return False


def continue_analysis(
    first: Constraint,
    info: AssertionInfo,
    trail: Trail,
    config: AnalysisConfig,
) -> AnalysisResult:
    """Extend the analysis past the first assertive constraint ``first``.

    The committed assertion levels never increase; the analysis returns the
    current constraint (always assertive) once the stop criterion fires, or an
    unsat result when a constraint conflicting at level 0 is derived.
    """
    result = AnalysisResult(first, info, first_level=info.level, committed=(info.level,))
    current = first
    while True:
        b = info.level
        if should_stop(trail, b, config.stop, current):
            if slack_at_level(current, trail, 0) < 0:
                return _unsat(result, current)
            result.constraint, result.info = current, info
            return result
        entry = trail.top()
        if entry.reason is not None and current.coefficient(-entry.lit) > 0:
            candidate = candidate_result(current, entry.reason, -entry.lit)
            status = invariant_holds(candidate, trail, b)
            if status is VIOLATED:
                restored = restore_invariant(
                    current, entry.reason, -entry.lit, trail, b, config.weakening
                )
                if restored is SKIP:
                    trail.pop()
                    continue
                candidate, status = restored
            result.cancellations += 1
            result.log.append((-entry.lit, entry.reason, candidate))
            current = candidate
            if isinstance(status, AssertionInfo):
                info = status
                result.committed += (status.level,)
            else:
                # conflicting at <= b: regular analysis starts again, then the
                # extension resumes from its assertive result
                trail.pop()
                resumed = _reanalyze(current, trail, result)
                if resumed is None:
                    return _unsat(result, result.constraint)
                current, info = resumed
                continue
        trail.pop()


def _unsat(result: AnalysisResult, current: Constraint) -> AnalysisResult:
    result.constraint = current
    result.info = None
    return result


def _reanalyze(
    current: Constraint, trail: Trail, result: AnalysisResult
) -> Optional[tuple[Constraint, AssertionInfo]]:
    """Regular-analysis walk used after a committed conflicting candidate.

    Shares the machinery of ``analyze_conflict`` (including reason reduction)
    but accumulates into the extended result.  Returns the next assertive
    constraint, or None when unsatisfiability is derived.
    """
    while True:
        if current.is_contradiction:
            result.constraint = current
            return None
        status = first_assertive_level(current, trail)
        if isinstance(status, AssertionInfo):
            result.committed += (status.level,)
            return current, status
        if not trail.entries:
            if status is None:
                raise MalformedState(f"analysis stuck on non-assertive {current}")
            result.constraint = current
            return None
        current = conflict_step(current, trail, result)
