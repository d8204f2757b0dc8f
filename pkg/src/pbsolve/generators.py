"""Benchmark instance generators and scripted scenarios.

Three families:

* ``pigeonhole``  n pigeons into n-1 holes, emitted in normalized form; every
  instance is unsatisfiable and extended analysis refutes it in one conflict.
* ``pattern``     the irrelevant-literal scenario: one weighted at-most-half
  constraint plus star clauses, with a decision script that drives the solver
  into a conflict whose continued analysis collapses to ``x1 >= 1``.
* ``random``      seeded random PB instances small enough for brute-force
  oracles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator

from .model import RawConstraint
from .opb import OpbInstance


@dataclass
class Scenario:
    """Constraints plus an explicit decision script (not necessarily an
    unsatisfiable instance)."""

    instance: OpbInstance
    decisions: tuple[int, ...]


def gen_pigeonhole(n: int) -> OpbInstance:
    """n pigeons, n-1 holes; variable x_{(i-1)(n-1)+j} puts pigeon i in hole j.

    Hole constraints come first (at most one pigeon per hole, normalized to
    ``sum ~x >= n-1``), then the at-least-one-hole clauses per pigeon.
    """
    if n < 2:
        raise ValueError("need at least 2 pigeons")
    holes = n - 1

    def var(i: int, j: int) -> int:
        return (i - 1) * holes + j

    constraints = []
    for j in range(1, holes + 1):
        terms = tuple((1, -var(i, j)) for i in range(1, n + 1))
        constraints.append(RawConstraint(terms, ">=", holes))
    for i in range(1, n + 1):
        terms = tuple((1, var(i, j)) for j in range(1, holes + 1))
        constraints.append(RawConstraint(terms, ">=", 1))
    return OpbInstance(n * holes, constraints)


def gen_irrelevant_pattern(n: int) -> Scenario:
    """The star-pattern scenario on n variables.

    One constraint ``sum 2*~x_i >= n`` and the clauses ``x1 + xj >= 1`` for
    j = 2..n; deciding ``~x1`` propagates every other variable to true and
    falsifies the weighted constraint.  Continued analysis cancels all the
    clauses, committing exactly ``x1 >= 1``; a regular analysis stops earlier
    and keeps irrelevant literals.
    """
    if n < 3:
        raise ValueError("need at least 3 variables")
    constraints = [RawConstraint(tuple((2, -v) for v in range(1, n + 1)), ">=", n)]
    for j in range(2, n + 1):
        constraints.append(RawConstraint(((1, 1), (1, j)), ">=", 1))
    return Scenario(OpbInstance(n, constraints), (-1,))


def gen_random(
    seed: int, num_vars: int = 12, num_constraints: int = 15, max_coef: int = 8
) -> OpbInstance:
    """A seeded random instance, small enough for truth-table oracles."""
    rng = random.Random(seed)
    constraints = []
    for _ in range(num_constraints):
        width = rng.randint(2, min(5, num_vars))
        vs = rng.sample(range(1, num_vars + 1), width)
        terms = tuple(
            (rng.randint(1, max_coef), v if rng.random() < 0.5 else -v) for v in vs
        )
        total = sum(c for c, _ in terms)
        constraints.append(RawConstraint(terms, ">=", rng.randint(1, total)))
    return OpbInstance(num_vars, constraints)


@dataclass(frozen=True)
class FamilySpec:
    """A benchmark family and how many instances of it to run."""

    family: str  # pigeonhole | pattern | random
    params: tuple[int, ...] = ()
    count: int = 1
    seed: int = 0

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Parse specs like ``pigeonhole:4..8``, ``pattern:10`` or
        ``random:count=20,vars=12,cons=15,coef=8,seed=1``."""
        family, _, rest = text.partition(":")
        if family == "pigeonhole":
            if ".." in rest:
                lo, hi = rest.split("..")
                return cls("pigeonhole", tuple(range(int(lo), int(hi) + 1)))
            return cls("pigeonhole", (int(rest),))
        if family == "pattern":
            return cls("pattern", (int(rest),))
        if family == "random":
            opts = dict(kv.split("=") for kv in rest.split(",") if kv)
            return cls(
                "random",
                (
                    int(opts.get("vars", 12)),
                    int(opts.get("cons", 15)),
                    int(opts.get("coef", 8)),
                ),
                count=int(opts.get("count", 1)),
                seed=int(opts.get("seed", 0)),
            )
        raise ValueError(f"unknown family {family!r}")

    def instances(self) -> Iterator[tuple[str, OpbInstance, tuple[int, ...]]]:
        """Yield (instance_id, instance, decision_script) triples."""
        if self.family == "pigeonhole":
            for n in self.params:
                yield f"pigeonhole-{n}", gen_pigeonhole(n), ()
        elif self.family == "pattern":
            for n in self.params:
                scenario = gen_irrelevant_pattern(n)
                yield f"pattern-{n}", scenario.instance, scenario.decisions
        elif self.family == "random":
            vars_, cons, coef = self.params
            for k in range(self.count):
                seed = self.seed + k
                yield f"random-{seed}", gen_random(seed, vars_, cons, coef), ()
        else:
            raise ValueError(f"unknown family {self.family!r}")
