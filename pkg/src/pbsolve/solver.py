"""CDCL driver: decisions, propagation, analysis, learning, backjumping.

No restarts and no learned-constraint deletion: runs are fully deterministic
given the configuration and the branching heuristic, which is what the
trace-replay and benchmark comparisons rely on.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .analysis import analyze_conflict
from .extended import AnalysisConfig, continue_analysis
from .model import Constraint, RawConstraint, normalize_raw, saturate
from .propagation import Engine

SAT = "sat"
UNSAT = "unsat"
TIMEOUT = "timeout"


class ScriptExhausted(RuntimeError):
    """A scripted heuristic ran out of decisions before the search ended."""


class FixedOrder:
    """Deterministic default: lowest unassigned variable, negative first."""

    def next_decision(self, solver: "Solver") -> Optional[int]:
        for v in range(1, solver.num_vars + 1):
            if solver.engine.trail.query(v) is None:
                return -v
        return None


class Scripted:
    """Replay an explicit decision list (for trace tests and scenarios).

    Entries whose variable is already assigned are skipped.  Once the script
    is exhausted, either fall back to fixed order or raise.
    """

    def __init__(self, decisions: Sequence[int], fallback: bool = False) -> None:
        self.decisions = list(decisions)
        self.fallback = fallback
        self._pos = 0

    def next_decision(self, solver: "Solver") -> Optional[int]:
        trail = solver.engine.trail
        while self._pos < len(self.decisions):
            lit = self.decisions[self._pos]
            self._pos += 1
            if trail.query(abs(lit)) is None:
                return lit
        if all(trail.query(v) is not None for v in range(1, solver.num_vars + 1)):
            return None
        if self.fallback:
            return FixedOrder().next_decision(solver)
        raise ScriptExhausted("decision script exhausted with variables unassigned")


@dataclass
class RunStats:
    """Counters for one solver run.

    ``improved_backjumps`` counts conflicts where the extension committed a
    level strictly below the first assertive level; ``commit_history`` keeps
    the committed-level sequence of every conflict for invariant audits.
    """

    conflicts: int = 0
    cancellations: int = 0
    improved_backjumps: int = 0
    total_backjumps: int = 0
    decisions: int = 0
    wall_time: float = 0.0
    learned: list[Constraint] = field(default_factory=list)
    commit_history: list[tuple[int, ...]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "conflicts": self.conflicts,
            "cancellations": self.cancellations,
            "improved_backjumps": self.improved_backjumps,
            "total_backjumps": self.total_backjumps,
            "decisions": self.decisions,
            "wall_time": self.wall_time,
        }


@dataclass
class SolveResult:
    status: str  # sat | unsat | timeout
    model: Optional[dict[int, bool]]
    stats: RunStats


@dataclass(frozen=True)
class Limits:
    max_conflicts: Optional[int] = None
    max_seconds: Optional[float] = None


class Solver:
    """One CDCL solver instance over a fixed constraint database."""

    def __init__(
        self,
        constraints: Iterable[Union[Constraint, RawConstraint]],
        num_vars: int = 0,
        config: AnalysisConfig = AnalysisConfig.regular(),
        heuristic=None,
    ) -> None:
        self.engine = Engine()
        self.config = config
        self.heuristic = heuristic or FixedOrder()
        self.stats = RunStats()
        self.num_vars = num_vars
        for c in constraints:
            if isinstance(c, RawConstraint):
                for n in normalize_raw(c):
                    self._add(n)
            else:
                self._add(c)

    def _add(self, c: Constraint) -> None:
        c = saturate(c)  # stored constraints are kept saturated
        for v in c.variables():
            self.num_vars = max(self.num_vars, v)
        if not c.is_tautology:
            self.engine.add(c)

    def learn(self, c: Constraint) -> int:
        """Add an assertive constraint to the database and watch it."""
        self.stats.learned.append(c)
        return self.engine.add(c)

    def analyze(self, conflict: Constraint):
        """Run the configured conflict analysis on ``conflict``."""
        result = analyze_conflict(conflict, self.engine.trail)
        if self.config.extended and not result.unsat:
            ext = continue_analysis(
                result.constraint, result.info, self.engine.trail, self.config
            )
            ext.cancellations += result.cancellations
            ext.first_level = result.first_level
            ext.log = result.log + ext.log
            result = ext
        self.stats.cancellations += result.cancellations
        self.stats.commit_history.append(result.committed)
        return result

    def solve(self, limits: Limits = Limits()) -> SolveResult:
        start = time.monotonic()
        stats = self.stats
        engine = self.engine
        status = None
        while status is None:
            conflict = engine.propagate()
            if conflict is not None:
                stats.conflicts += 1
                if limits.max_conflicts is not None and stats.conflicts > limits.max_conflicts:
                    status = TIMEOUT
                    break
                result = self.analyze(conflict)
                if result.unsat:
                    status = UNSAT
                    break
                self.learn(result.constraint)
                stats.total_backjumps += 1
                if result.info.level < result.first_level:
                    stats.improved_backjumps += 1
                engine.backjump_to(result.info.level)
            else:
                lit = self.heuristic.next_decision(self)
                if lit is None:
                    status = SAT
                    break
                stats.decisions += 1
                engine.decide(lit)
            if limits.max_seconds is not None and time.monotonic() - start > limits.max_seconds:
                status = TIMEOUT
        stats.wall_time = time.monotonic() - start
        model = engine.trail.assignment() if status == SAT else None
        return SolveResult(status, model, stats)


def solve(
    constraints: Iterable[Union[Constraint, RawConstraint]],
    config: AnalysisConfig = AnalysisConfig.regular(),
    heuristic=None,
    num_vars: int = 0,
    limits: Limits = Limits(),
) -> SolveResult:
    """Convenience wrapper: build a solver and run it."""
    return Solver(constraints, num_vars, config, heuristic).solve(limits)
