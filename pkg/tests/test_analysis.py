"""Regular conflict analysis: assertiveness detection, reason reduction and
the backward cancellation walk."""

import random

import pytest

from pbsolve.analysis import (
    SKIP,
    AssertionInfo,
    ConflictingAt,
    analyze_conflict,
    first_assertive_level,
    reduce_reason,
)
from pbsolve.model import Constraint, constraint, saturate
from pbsolve.propagation import Engine, slack_at_level, slack_current
from pbsolve.trail import Trail

from fixtures import branch_constraints, branch_trail, pigeonhole_conflict, unit
from helpers import entails, models, variables_of


def C(terms, degree):
    return constraint(terms, degree)


class TestFirstAssertiveLevel:
    def test_learned_pigeonhole_constraint_assertive_at_two(self):
        engine, _, _ = pigeonhole_conflict()
        learned = C([(1, -1), (1, -2), (1, -4), (1, -5), (1, 9), (1, 12)], 4)
        info = first_assertive_level(learned, engine.trail)
        assert info == AssertionInfo(2, (-4, -5))

    def test_assertive_at_level_zero(self):
        engine, _, _ = pigeonhole_conflict()
        c = C([(1, -1), (1, -2), (1, -3)], 3)
        info = first_assertive_level(c, engine.trail)
        assert info == AssertionInfo(0, (-1, -2, -3))

    def test_contradiction_conflicting_at_zero(self):
        assert first_assertive_level(Constraint((), 1), Trail()) == ConflictingAt(0)

    def test_branch_example_levels(self):
        cons = branch_constraints()
        trail = branch_trail()
        from pbsolve.model import cancel

        chi_p = cancel(cons["chi"], cons["rho1"], 6)
        assert slack_at_level(chi_p, trail, 20) == 7
        assert first_assertive_level(chi_p, trail) == AssertionInfo(20, (2,))
        via_rho2 = cancel(chi_p, cons["rho2"], 10)
        assert first_assertive_level(via_rho2, trail) == AssertionInfo(10, (2,))
        via_rho3 = cancel(chi_p, cons["rho3"], 16)
        assert slack_at_level(via_rho3, trail, 25) == 7
        assert via_rho3.coefficient(2) == 8
        assert first_assertive_level(via_rho3, trail) == AssertionInfo(25, (2,))

    def test_conflict_priority_within_level(self):
        # falsified by a root propagation: conflicting at 0, never assertive
        t = Trail()
        t.assign(1, unit(1))
        assert first_assertive_level(C([(1, -1)], 1), t) == ConflictingAt(0)

    def test_assertive_low_beats_conflicting_high(self):
        # the learned pigeonhole constraint is conflicting at level 3 but the
        # scan reports the level-2 assertion first
        engine, _, _ = pigeonhole_conflict()
        learned = C([(1, -1), (1, -2), (1, -4), (1, -5), (1, 9), (1, 12)], 4)
        assert slack_at_level(learned, engine.trail, 3) < 0
        assert first_assertive_level(learned, engine.trail).level == 2


class TestReduceReason:
    def test_clause_returned_unchanged(self):
        engine, cons, conflict = pigeonhole_conflict()
        p4 = cons[6]
        out = reduce_reason(p4, slack_current(conflict, engine.trail), 1, engine.trail, -10)
        assert out is p4

    def test_negative_estimate_skips_loop(self):
        reason = C([(3, 1), (2, -2)], 3)
        out = reduce_reason(reason, -5, 1, Trail(), 2)
        assert out is reason

    def test_worked_weakening_loop(self):
        # reason 3x + 3y + 2~p >= 5 for ~p; conflict slack 2 with multipliers 1,1
        reason = C([(3, 1), (3, 2), (2, -3)], 5)
        t = Trail()
        t.assign(-2, None)
        t.assign(-3, unit(-3))
        out = reduce_reason(reason, 2, 2, t, 3)
        assert out == C([(2, 2), (2, -3)], 2)

    def test_tautology_gives_skip(self):
        # every non-pivot literal unassigned: weakening eats the clause
        reason = C([(1, 1), (1, 2)], 1)
        out = reduce_reason(reason, 5, 1, Trail(), -2)
        assert out is SKIP


class TestAnalyzeConflict:
    def test_pigeonhole_regular_analysis(self):
        engine, _, conflict = pigeonhole_conflict()
        result = analyze_conflict(conflict, engine.trail)
        assert not result.unsat
        assert result.constraint == C([(1, -1), (1, -2), (1, -4), (1, -5), (1, 9), (1, 12)], 4)
        assert result.info == AssertionInfo(2, (-4, -5))
        assert result.cancellations == 3
        assert [str(c) for _, _, c in result.log] == [
            "+1 ~x1 +1 ~x4 +1 ~x7 +1 x11 +1 x12 >= 3",
            "+1 ~x1 +1 ~x4 +1 x8 +1 x9 +1 x11 +1 x12 >= 3",
            "+1 ~x1 +1 ~x2 +1 ~x4 +1 ~x5 +1 x9 +1 x12 >= 4",
        ]

    def test_already_assertive_returns_immediately(self):
        engine = Engine()
        engine.decide(1)  # x1 true at level 1
        conflict = C([(2, -1), (1, 2)], 2)  # conflicting now, assertive at 0
        result = analyze_conflict(conflict, engine.trail)
        assert result.cancellations == 0
        assert result.constraint is conflict
        assert result.info == AssertionInfo(0, (-1,))

    def test_level_zero_conflict_derives_contradiction(self):
        engine = Engine()
        engine.add(C([(1, 1)], 1))
        engine.add(C([(1, -1)], 1))
        conflict = engine.propagate()
        assert conflict is not None
        result = analyze_conflict(conflict, engine.trail)
        assert result.unsat
        assert result.constraint.is_contradiction
        assert result.cancellations == 1

    def test_conflict_preserved_along_walk(self):
        """After every cancellation the running constraint is still
        conflicting under what remains of the trail (the reduction loop's
        subadditive guarantee)."""
        from pbsolve.analysis import AnalysisResult, conflict_step

        rng = random.Random(17)
        checked = 0
        for _ in range(60):
            engine, cons, conflict = _random_conflict(rng)
            if conflict is None:
                continue
            trail = engine.trail
            current = conflict
            scratch = AnalysisResult(current, None)
            while not current.is_contradiction:
                if isinstance(first_assertive_level(current, trail), AssertionInfo):
                    break
                if not trail.entries:
                    break
                before = scratch.cancellations
                current = conflict_step(current, trail, scratch)
                if scratch.cancellations > before:
                    assert slack_current(current, trail) < 0
                    checked += 1
        assert checked >= 20

    def test_learned_entailed_by_inputs(self):
        rng = random.Random(23)
        tested = 0
        for _ in range(80):
            engine, cons, conflict = _random_conflict(rng)
            if conflict is None:
                continue
            result = analyze_conflict(conflict, engine.trail)
            variables = variables_of(*cons)
            if not result.unsat:
                assert entails(cons, result.constraint, variables)
                tested += 1
            else:
                assert models(cons, variables) == []
        assert tested >= 10

    def test_clausal_inputs_learn_the_first_uip_clause(self):
        rng = random.Random(31)
        compared = 0
        for _ in range(120):
            cons = _random_3cnf(rng)
            engine = Engine()
            for c in cons:
                engine.add(c)
            conflict = _drive(engine, rng)
            if conflict is None or engine.trail.current_level == 0:
                continue
            expected = _reference_first_uip(conflict, engine.trail)
            result = analyze_conflict(conflict, engine.trail)
            if expected is None:
                assert result.unsat
                continue
            assert not result.unsat
            got = {lit for _, lit in result.constraint.terms}
            assert result.constraint.degree == 1
            assert all(coef == 1 for coef, _ in result.constraint.terms)
            assert got == expected
            compared += 1
        assert compared >= 20


def _random_constraints(rng, nv=8, nc=10, max_coef=4):
    cons = []
    for _ in range(nc):
        vs = rng.sample(range(1, nv + 1), rng.randint(2, 4))
        terms = [(rng.randint(1, max_coef), v if rng.random() < 0.5 else -v) for v in vs]
        total = sum(c for c, _ in terms)
        # loose degrees so conflicts need a few decisions; stored constraints
        # are kept saturated, like the solver does on load
        c = saturate(constraint(terms, rng.randint(1, max(1, total * 2 // 3))))
        if not c.is_tautology:
            cons.append(c)
    return cons


def _drive(engine, rng, nv=8):
    """Random decisions + propagation until a conflict or all assigned."""
    while True:
        conflict = engine.propagate()
        if conflict is not None:
            return conflict
        free = [v for v in range(1, nv + 1) if engine.trail.query(v) is None]
        if not free:
            return None
        v = rng.choice(free)
        engine.decide(v if rng.random() < 0.5 else -v)


def _random_conflict(rng, cons=None):
    cons = cons or _random_constraints(rng)
    engine = Engine()
    for c in cons:
        engine.add(c)
    return engine, cons, _drive(engine, rng)


def _random_3cnf(rng, nv=9, nc=28):
    cons = []
    for _ in range(nc):
        vs = rng.sample(range(1, nv + 1), 3)
        cons.append(constraint([(1, v if rng.random() < 0.5 else -v) for v in vs], 1))
    return cons


def _reference_first_uip(conflict, trail):
    """Classic resolution-based 1-UIP computation, independent of slack
    machinery.  Returns the learned literal set, or None when the conflict
    resolves to the empty clause."""
    lits = {lit for _, lit in conflict.terms}
    level = trail.current_level
    position = len(trail.entries)

    def at_conflict_level(ls):
        return [l for l in ls if trail.level_of(abs(l)) == level]

    while len(at_conflict_level(lits)) > 1:
        position -= 1
        entry = trail.entries[position]
        if entry.reason is None or -entry.lit not in lits:
            continue
        lits = (lits | {l for _, l in entry.reason.terms if l != entry.lit}) - {
            -entry.lit,
            entry.lit,
        }
    front = at_conflict_level(lits)
    if not front:
        return None if not lits else lits
    return lits
