"""Brute-force truth-table oracles shared by the test suite.

Everything here enumerates full assignments, deliberately independent of the
solver's slack/propagation machinery.
"""

from __future__ import annotations

from itertools import product

from pbsolve.model import Constraint, RawConstraint


def lit_true(lit: int, assignment: dict[int, bool]) -> bool:
    value = assignment[abs(lit)]
    return value if lit > 0 else not value


def satisfies(c: Constraint, assignment: dict[int, bool]) -> bool:
    return sum(coef for coef, lit in c.terms if lit_true(lit, assignment)) >= c.degree


def satisfies_raw(raw: RawConstraint, assignment: dict[int, bool]) -> bool:
    lhs = sum(coef for coef, lit in raw.terms if lit_true(lit, assignment))
    return {
        "<": lhs < raw.bound,
        "<=": lhs <= raw.bound,
        "=": lhs == raw.bound,
        ">=": lhs >= raw.bound,
        ">": lhs > raw.bound,
    }[raw.relation]


def variables_of(*items) -> list[int]:
    out = set()
    for item in items:
        for _, lit in item.terms:
            out.add(abs(lit))
    return sorted(out)


def assignments(variables) -> list[dict[int, bool]]:
    variables = list(variables)
    return [
        dict(zip(variables, values))
        for values in product([False, True], repeat=len(variables))
    ]


def models(constraints, variables) -> list[dict[int, bool]]:
    return [
        a
        for a in assignments(variables)
        if all(satisfies(c, a) for c in constraints)
    ]


def entails(premises, conclusion: Constraint, variables) -> bool:
    """Every model of the premises satisfies the conclusion."""
    return all(satisfies(conclusion, a) for a in models(premises, variables))


def equivalent_sets(cons_a, cons_b, variables) -> bool:
    """The two constraint sets have identical model sets."""
    va = {tuple(sorted(m.items())) for m in models(cons_a, variables)}
    vb = {tuple(sorted(m.items())) for m in models(cons_b, variables)}
    return va == vb


def brute_force_verdict(constraints, num_vars: int) -> str:
    variables = range(1, num_vars + 1)
    for a in assignments(variables):
        if all(satisfies(c, a) for c in constraints):
            return "sat"
    return "unsat"


def ref_slack(c: Constraint, assignment: dict[int, bool | None]) -> int:
    """Slack by direct reading of the definition over a partial assignment
    given as var -> True/False/None."""
    total = 0
    for coef, lit in c.terms:
        value = assignment.get(abs(lit))
        falsified = value is not None and (value if lit < 0 else not value)
        if not falsified:
            total += coef
    return total - c.degree
