"""Shared instance/trail constructions used across the test modules.

The branch fixture rebuilds the 40-level trail of the worked
improve-vs-worsen example; the weakening fixture the 5-level trail of the
invariant-restoration example.  Dummy decision variables (>= 100) pad the
levels so the interesting assignments land exactly where the annotations put
them.
"""

from __future__ import annotations

from pbsolve.model import Constraint, constraint
from pbsolve.propagation import Engine
from pbsolve.trail import Trail


def unit(lit: int) -> Constraint:
    return constraint([(1, lit)], 1)


# variable naming for the branch example: a=1 b=2 c=3 d=4 e=5 f=6 g=7 h=8
# i=9 j=10 k=11 l=12 w=13 x=14 y=15 z=16
BRANCH_VARS = dict(
    a=1, b=2, c=3, d=4, e=5, f=6, g=7, h=8, i=9, j=10, k=11, l=12, w=13, x=14, y=15, z=16
)


def branch_constraints() -> dict[str, Constraint]:
    v = BRANCH_VARS
    return {
        "chi": constraint(
            [(4, v["a"]), (4, v["b"]), (3, v["c"]), (3, v["d"]), (2, v["e"]),
             (1, v["f"]), (1, v["g"]), (1, v["z"])], 8),
        "rho1": constraint(
            [(3, v["i"]), (3, v["j"]), (2, -v["f"]), (2, -v["g"]), (1, v["h"])], 5),
        "rho2": constraint(
            [(6, -v["c"]), (6, -v["d"]), (3, -v["j"]), (3, v["k"]), (3, v["l"])], 15),
        "rho3": constraint(
            [(10, v["w"]), (10, v["x"]), (1, v["y"]), (1, -v["z"])], 11),
    }


def branch_trail() -> Trail:
    """Trail matching the annotations: a(0@10) c(0@20) i(0@20) w(1@25)
    x(0@25) b(1@30) d(0@30) e(1@30) l(0@30) then the level-40 block with j
    and z carrying their real reasons."""
    cons = branch_constraints()
    v = BRANCH_VARS
    by_level = {
        10: [-v["a"]],
        20: [-v["c"], -v["i"]],
        25: [v["w"], -v["x"]],
        30: [v["b"], -v["d"], v["e"], -v["l"]],
    }
    reasons = {-v["j"]: cons["rho2"], -v["z"]: cons["rho3"],
               -v["f"]: cons["rho1"], -v["g"]: cons["rho1"]}
    t = Trail()
    for level in range(1, 41):
        t.assign(-(100 + level), None)  # dummy decision opening the level
        for lit in by_level.get(level, []):
            t.assign(lit, unit(lit))
    for lit in (-v["y"], v["h"], -v["k"], -v["z"], -v["f"], -v["g"], -v["j"]):
        t.assign(lit, reasons.get(lit, unit(lit)))
    return t


# weakening example: a=1 b=2 c=3 d=4 e=5 f=6 g=7 h=8
def weakening_fixture() -> tuple[Constraint, Constraint, Trail]:
    """(derived constraint, reason for a, trail) with e(0@1) f(0@2) b(1@3)
    d(1@3) c(1@4) g(0@4) h(0@5) a(1@5, propagated by the reason)."""
    current = constraint(
        [(4, -1), (4, -2), (4, -3), (4, -4), (1, 5), (1, 6), (1, -7), (1, -8)], 4
    )
    reason = constraint([(2, 1), (2, 2), (2, 3), (2, 7), (2, 8)], 5)
    t = Trail()
    t.assign(-5, None)
    t.assign(-6, None)
    t.assign(2, None)
    t.assign(4, unit(4))
    t.assign(3, None)
    t.assign(-7, unit(-7))
    t.assign(-8, None)
    t.assign(1, reason)
    return current, reason, t


def pigeonhole_engine() -> tuple[Engine, list[Constraint]]:
    """PHP(4,3) database in an engine, nothing assigned yet."""
    holes = [
        constraint([(1, -((i - 1) * 3 + j)) for i in range(1, 5)], 3)
        for j in range(1, 4)
    ]
    pigeons = [
        constraint([(1, (i - 1) * 3 + j) for j in range(1, 4)], 1)
        for i in range(1, 5)
    ]
    cons = holes + pigeons
    engine = Engine()
    for c in cons:
        engine.add(c)
    return engine, cons


def pigeonhole_conflict() -> tuple[Engine, list[Constraint], Constraint]:
    """PHP(4,3) driven into its first conflict by the decisions
    ~x1, ~x2, ~x4 (pigeon 1 out of holes 1 and 2, pigeon 2 out of hole 1)."""
    engine, cons = pigeonhole_engine()
    for lit in (-1, -2, -4):
        engine.decide(lit)
        conflict = engine.propagate()
    assert conflict is cons[0]
    return engine, cons, conflict
