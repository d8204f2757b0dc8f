"""Normalized pseudo-Boolean constraints and the cutting-planes inference rules.

A literal is a signed integer: ``+v`` is variable ``v``, ``-v`` its negation.
A normalized constraint has the shape ``sum(coef_i * lit_i) >= degree`` with
strictly positive integer coefficients, pairwise-distinct variables and a
non-negative degree.  Python integers are arbitrary precision, so coefficient
growth during derivations is handled natively.

The three inference rules used during conflict analysis live here:

* ``cancel``    adds two constraints scaled to eliminate a pivot variable,
* ``weaken``    drops a term and lowers the degree by its coefficient,
* ``saturate``  clamps every coefficient to the degree.

All operations are pure: constraints are immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator


def negate(lit: int) -> int:
    """Negation of a literal; an involution."""
    return -lit


def variable(lit: int) -> int:
    """The (positive) variable index of a literal."""
    return abs(lit)


def lit_str(lit: int) -> str:
    """Render a literal in OPB style: ``x3`` or ``~x3``."""
    return f"x{lit}" if lit > 0 else f"~x{-lit}"


class LiteralAbsent(ValueError):
    """Raised when weakening a literal that does not occur in the constraint."""


class PivotAbsent(ValueError):
    """Raised when a cancellation pivot is missing from one of the operands."""


@dataclass(frozen=True)
class Constraint:
    """An immutable normalized PB constraint ``sum(coef * lit) >= degree``.

    ``terms`` is sorted by variable index, which makes equality of derived
    constraints testable bit-exactly.  The canonical tautology is the empty
    constraint of degree 0; an empty constraint with positive degree is
    unsatisfiable.
    """

    terms: tuple[tuple[int, int], ...]  # (coefficient, literal)
    degree: int

    def __post_init__(self) -> None:
        seen = set()
        for coef, lit in self.terms:
            if coef <= 0:
                raise ValueError(f"non-positive coefficient {coef} on {lit_str(lit)}")
            v = variable(lit)
            if v in seen:
                raise ValueError(f"variable x{v} occurs twice")
            seen.add(v)
        if self.degree < 0:
            raise ValueError("negative degree")

    @property
    def _coef_map(self) -> dict[int, int]:
        # cached literal -> coefficient map (frozen dataclass: stash in __dict__)
        cached = self.__dict__.get("_coefs")
        if cached is None:
            cached = {lit: coef for coef, lit in self.terms}
            self.__dict__["_coefs"] = cached
        return cached

    def coefficient(self, lit: int) -> int:
        """Coefficient of ``lit`` in this constraint, 0 if absent."""
        return self._coef_map.get(lit, 0)

    def literals(self) -> Iterator[int]:
        return (lit for _, lit in self.terms)

    def variables(self) -> Iterator[int]:
        return (variable(lit) for _, lit in self.terms)

    @property
    def is_tautology(self) -> bool:
        return self.degree == 0

    @property
    def is_contradiction(self) -> bool:
        """True for constraints no assignment satisfies, e.g. ``0 >= 1``."""
        return sum(c for c, _ in self.terms) < self.degree

    @property
    def is_saturated(self) -> bool:
        return all(coef <= self.degree for coef, _ in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return f"0 >= {self.degree}"
        body = " ".join(f"+{coef} {lit_str(lit)}" for coef, lit in self.terms)
        return f"{body} >= {self.degree}"


TAUTOLOGY = Constraint((), 0)


@dataclass(frozen=True)
class RawConstraint:
    """A constraint as read from the input, before normalization.

    Duplicate variables, negative coefficients and any relation in
    ``< <= = >= >`` are allowed here.
    """

    terms: tuple[tuple[int, int], ...]  # (signed coefficient, literal)
    relation: str
    bound: int

    RELATIONS = ("<", "<=", "=", ">=", ">")

    def __post_init__(self) -> None:
        if self.relation not in self.RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        for _, lit in self.terms:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")


def _build(weights: dict[int, int], degree: int) -> Constraint:
    """Build a normalized constraint from net weights on positive literals.

    ``weights[v]`` is the net coefficient on literal ``+v`` (may be negative,
    meaning a weight on ``-v``).  Rewriting ``-k*v`` as ``k*~v - k`` raises the
    degree by ``k``.
    """
    terms = []
    for v in sorted(weights):
        w = weights[v]
        if w > 0:
            terms.append((w, v))
        elif w < 0:
            terms.append((-w, -v))
            degree += -w
    if degree <= 0:
        return TAUTOLOGY
    return Constraint(tuple(sorted(terms, key=lambda t: variable(t[1]))), degree)


def _accumulate(weights: dict[int, int], coef: int, lit: int) -> int:
    """Add ``coef * lit`` into variable-space weights; returns degree shift.

    ``c * ~v`` equals ``c - c*v``, so a weight on a negative literal
    contributes ``-c`` on the variable and lowers the right-hand side by ``c``.
    """
    v = variable(lit)
    if lit > 0:
        weights[v] = weights.get(v, 0) + coef
        return 0
    weights[v] = weights.get(v, 0) - coef
    return -coef


def normalize_raw(raw: RawConstraint) -> list[Constraint]:
    """Normalize a raw constraint into one or two ``>=`` constraints.

    Equalities split into a ``>=`` and a ``<=`` side; strict relations are
    rewritten over the integers; duplicate variables are merged; a constraint
    whose degree drops to zero or below becomes the canonical tautology.
    """
    sides: list[tuple[int, int]] = []  # (sign, bound) meaning sign*sum >= bound
    rel, bound = raw.relation, raw.bound
    if rel in (">=", ">", "="):
        sides.append((1, bound + 1 if rel == ">" else bound))
    if rel in ("<=", "<", "="):
        b = bound - 1 if rel == "<" else bound
        sides.append((-1, -b))

    out = []
    for sign, rhs in sides:
        weights: dict[int, int] = {}
        degree = rhs
        for coef, lit in raw.terms:
            degree += _accumulate(weights, sign * coef, lit)
        out.append(_build({v: w for v, w in weights.items() if w != 0}, degree))
    return out


def is_tautology(c: Constraint) -> bool:
    """True iff the constraint holds under every assignment (degree 0)."""
    return c.degree == 0


def saturate(c: Constraint) -> Constraint:
    """Clamp every coefficient to the degree.  Model set is unchanged."""
    if c.is_tautology:
        return TAUTOLOGY
    if c.is_saturated:
        return c
    return Constraint(
        tuple((min(c.degree, coef), lit) for coef, lit in c.terms), c.degree
    )


def weaken(c: Constraint, lit: int) -> Constraint:
    """Remove ``lit`` and lower the degree by its coefficient.

    Pure algebra: the side condition that only non-falsified literals may be
    weakened away is the caller's business.
    """
    coef = c.coefficient(lit)
    if coef == 0:
        raise LiteralAbsent(f"{lit_str(lit)} does not occur in {c}")
    degree = c.degree - coef
    if degree <= 0:
        return TAUTOLOGY
    return Constraint(tuple(t for t in c.terms if t[1] != lit), degree)


def _gcd_reduce(terms: list[tuple[int, int]], degree: int) -> tuple[list[tuple[int, int]], int]:
    """Divide through by the common factor of the coefficients (rounding the
    degree up), so derived constraints keep a canonical scale."""
    g = 0
    for coef, _ in terms:
        g = gcd(g, coef)
    if g > 1:
        terms = [(coef // g, lit) for coef, lit in terms]
        degree = -(-degree // g)
    return terms, degree


def cancel(c1: Constraint, c2: Constraint, pivot: int) -> Constraint:
    """Cancellation between ``c1`` (containing ``pivot``) and ``c2``
    (containing its negation).

    Both sides are scaled by the LCM multipliers so the pivot pair cancels
    exactly; variables occurring with opposite polarities on the two sides are
    merged, lowering the degree by the smaller weight.  The result is
    saturated and scale-reduced before it is returned; a non-positive degree
    yields the canonical tautology.
    """
    alpha = c1.coefficient(pivot)
    beta = c2.coefficient(-pivot)
    if alpha <= 0:
        raise PivotAbsent(f"{lit_str(pivot)} does not occur in {c1}")
    if beta <= 0:
        raise PivotAbsent(f"{lit_str(-pivot)} does not occur in {c2}")
    common = alpha * beta // gcd(alpha, beta)
    mu, nu = common // alpha, common // beta

    weights: dict[int, int] = {}
    degree = mu * c1.degree + nu * c2.degree - common
    for coef, lit in c1.terms:
        if lit != pivot:
            degree += _accumulate(weights, mu * coef, lit)
    for coef, lit in c2.terms:
        if lit != -pivot:
            degree += _accumulate(weights, nu * coef, lit)

    # _build handles the opposite-polarity merges; re-derive term list here to
    # apply saturation and scale reduction without an intermediate Constraint.
    merged = _build({v: w for v, w in weights.items() if w != 0}, degree)
    if merged.is_tautology:
        return TAUTOLOGY
    terms = [(min(merged.degree, coef), lit) for coef, lit in merged.terms]
    terms, degree = _gcd_reduce(terms, merged.degree)
    return Constraint(tuple(terms), degree)


def constraint(terms: Iterable[tuple[int, int]], degree: int) -> Constraint:
    """Convenience constructor: merges duplicates and sorts terms."""
    weights: dict[int, int] = {}
    for coef, lit in terms:
        degree += _accumulate(weights, coef, lit)
    return _build({v: w for v, w in weights.items() if w != 0}, degree)
