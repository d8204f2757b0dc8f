"""Reader and writer for the linear OPB input format.

Supported dialect: comment lines starting with ``*`` (including the customary
``* #variable= N #constraint= M`` header), constraint lines made of signed
integer coefficients and variable tokens ``x<k>`` / ``~x<k>``, a ``>=`` or
``=`` relation, an integer bound and a terminating ``;``.  Products
(nonlinear terms), objectives and soft constraints are rejected.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .model import Constraint, RawConstraint, lit_str


class OpbError(ValueError):
    pass


class OpbSyntaxError(OpbError):
    def __init__(self, line: int, column: int, reason: str) -> None:
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class UnsupportedFeature(OpbError):
    def __init__(self, line: int, column: int, reason: str) -> None:
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


@dataclass
class OpbInstance:
    variable_count: int
    constraints: list[RawConstraint] = field(default_factory=list)
    names: dict[int, str] = field(default_factory=dict)

    @property
    def constraint_count(self) -> int:
        return len(self.constraints)


_HEADER = re.compile(r"\*\s*#variable=\s*(\d+)\s+#constraint=\s*(\d+)")
_VAR = re.compile(r"(~?)x(\d+)$")
_INT = re.compile(r"[+-]?\d+$")


def _tokenize(line: str) -> list[tuple[str, int]]:
    """Split a line into (token, column) pairs, detaching a trailing ``;``."""
    tokens = []
    for m in re.finditer(r"\S+", line):
        tok, col = m.group(), m.start() + 1
        if tok != ";" and tok.endswith(";"):
            tokens.append((tok[:-1], col))
            tokens.append((";", col + len(tok) - 1))
        else:
            tokens.append((tok, col))
    return tokens


def parse_opb(text: str) -> OpbInstance:
    """Parse OPB text into raw constraints ready for normalization."""
    declared_vars: Optional[int] = None
    declared_cons: Optional[int] = None
    max_var = 0
    constraints: list[RawConstraint] = []

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("*"):
            m = _HEADER.search(stripped)
            if m:
                declared_vars = int(m.group(1))
                declared_cons = int(m.group(2))
            continue
        if stripped.startswith("min:") or stripped.startswith("max:"):
            raise UnsupportedFeature(lineno, 1, "objective functions are not supported")

        tokens = _tokenize(line)
        terms: list[tuple[int, int]] = []
        relation: Optional[str] = None
        bound: Optional[int] = None
        pending_coef: Optional[int] = None
        saw_semicolon = False

        for tok, col in tokens:
            if saw_semicolon:
                raise OpbSyntaxError(lineno, col, "content after ';'")
            if tok == ";":
                if relation is None or bound is None:
                    raise OpbSyntaxError(lineno, col, "constraint ended before relation/bound")
                saw_semicolon = True
                continue
            if relation is not None:
                if bound is not None:
                    raise OpbSyntaxError(lineno, col, "multiple bounds")
                if not _INT.match(tok):
                    raise OpbSyntaxError(lineno, col, f"expected integer bound, got {tok!r}")
                bound = int(tok)
                continue
            if tok in (">=", "="):
                if pending_coef is not None:
                    raise OpbSyntaxError(lineno, col, "coefficient without a variable")
                if not terms:
                    raise OpbSyntaxError(lineno, col, "empty left-hand side")
                relation = tok
                continue
            if tok in ("<=", "<", ">"):
                raise OpbSyntaxError(lineno, col, f"relation {tok!r} is not in the OPB dialect")
            m = _VAR.match(tok)
            if m:
                if pending_coef is None:
                    raise UnsupportedFeature(
                        lineno, col, "variable without coefficient (nonlinear product?)"
                    )
                v = int(m.group(2))
                if v == 0:
                    raise OpbSyntaxError(lineno, col, "variable indices start at 1")
                max_var = max(max_var, v)
                terms.append((pending_coef, -v if m.group(1) else v))
                pending_coef = None
                continue
            if _INT.match(tok):
                if pending_coef is not None:
                    raise OpbSyntaxError(lineno, col, "two coefficients in a row")
                pending_coef = int(tok)
                continue
            raise OpbSyntaxError(lineno, col, f"unrecognized token {tok!r}")

        if not saw_semicolon:
            raise OpbSyntaxError(lineno, len(line), "missing terminating ';'")
        constraints.append(RawConstraint(tuple(terms), relation, bound))

    variable_count = declared_vars if declared_vars is not None else max_var
    if declared_vars is not None and max_var > declared_vars:
        warnings.warn(
            f"header declares {declared_vars} variables but x{max_var} occurs",
            stacklevel=2,
        )
        variable_count = max_var
    if declared_cons is not None and declared_cons != len(constraints):
        warnings.warn(
            f"header declares {declared_cons} constraints but {len(constraints)} parsed",
            stacklevel=2,
        )
    return OpbInstance(variable_count, constraints)


def _format_terms(terms) -> str:
    return " ".join(f"{coef:+d} {lit_str(lit)}" for coef, lit in terms)


def write_opb(instance: OpbInstance) -> str:
    """Emit the instance in the accepted dialect; parse/write round-trips up
    to normalization-neutral formatting."""
    lines = [f"* #variable= {instance.variable_count} #constraint= {instance.constraint_count}"]
    for raw in instance.constraints:
        rel = raw.relation
        if rel not in (">=", "="):
            raise OpbError(f"relation {rel!r} cannot be written in the OPB dialect")
        lines.append(f"{_format_terms(raw.terms)} {rel} {raw.bound} ;")
    return "\n".join(lines) + "\n"


def constraint_to_raw(c: Constraint) -> RawConstraint:
    """View a normalized constraint as a raw ``>=`` line."""
    return RawConstraint(tuple(c.terms), ">=", c.degree)
