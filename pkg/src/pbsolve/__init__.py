"""pbsolve: a pseudo-Boolean CDCL solver with cutting-planes conflict
analysis and backjump-improving extended analysis."""

from .analysis import (
    SKIP,
    AnalysisResult,
    AssertionInfo,
    ConflictingAt,
    analyze_conflict,
    first_assertive_level,
    reduce_reason,
)
from .extended import (
    UNTIL_BJLEVEL,
    UNTIL_HIGHLEVEL,
    UNTIL_TOPLEVEL,
    VIOLATED,
    AnalysisConfig,
    StopCriterion,
    StopKind,
    WeakeningStrategy,
    candidate_result,
    continue_analysis,
    invariant_holds,
    restore_invariant,
    should_stop,
)
from .generators import FamilySpec, Scenario, gen_irrelevant_pattern, gen_pigeonhole, gen_random
from .model import (
    TAUTOLOGY,
    Constraint,
    LiteralAbsent,
    PivotAbsent,
    RawConstraint,
    cancel,
    constraint,
    is_tautology,
    lit_str,
    negate,
    normalize_raw,
    saturate,
    variable,
    weaken,
)
from .opb import OpbInstance, OpbError, OpbSyntaxError, UnsupportedFeature, parse_opb, write_opb
from .propagation import Engine, slack_at_level, slack_current
from .solver import (
    Limits,
    FixedOrder,
    RunStats,
    ScriptExhausted,
    Scripted,
    SolveResult,
    Solver,
    solve,
)
from .trail import AlreadyAssigned, Trail, TrailEntry

__all__ = [name for name in dir() if not name.startswith("_")]
