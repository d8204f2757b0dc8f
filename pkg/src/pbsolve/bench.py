"""Benchmark harness: run (instance, config) pairs, collect and emit rows.

Rows are ordered by (family, instance, config) no matter how the work was
scheduled; pairs that exceed the limits are kept as ``timeout`` rows.
Pairwise comparisons only ever include instances solved by both
configurations, because an incomplete proof has no comparable size.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Optional, Sequence

from .extended import AnalysisConfig
from .generators import FamilySpec
from .opb import OpbInstance
from .solver import Limits, Scripted, solve

CSV_HEADER = [
    "instance",
    "family",
    "config",
    "verdict",
    "conflicts",
    "cancellations",
    "improved_backjumps",
    "total_backjumps",
    "improved_percent",
    "wall_time",
]


@dataclass(frozen=True)
class StatsRow:
    instance: str
    family: str
    config: str
    verdict: str
    conflicts: int
    cancellations: int
    improved_backjumps: int
    total_backjumps: int
    improved_percent: float
    wall_time: float


def _run_one(job) -> StatsRow:
    instance_id, family, instance, script, config_name, limits = job
    config = AnalysisConfig.from_name(config_name)
    heuristic = Scripted(script, fallback=True) if script else None
    result = solve(
        instance.constraints,
        config=config,
        heuristic=heuristic,
        num_vars=instance.variable_count,
        limits=limits,
    )
    st = result.stats
    return StatsRow(
        instance=instance_id,
        family=family,
        config=config_name,
        verdict=result.status,
        conflicts=st.conflicts,
        cancellations=st.cancellations,
        improved_backjumps=st.improved_backjumps,
        total_backjumps=st.total_backjumps,
        improved_percent=100.0 * st.improved_backjumps / max(1, st.total_backjumps),
        wall_time=st.wall_time,
    )


def run_benchmark(
    specs: Sequence[FamilySpec],
    configs: Sequence[AnalysisConfig],
    limits: Limits = Limits(max_conflicts=10**6, max_seconds=60.0),
    jobs: int = 1,
) -> list[StatsRow]:
    """Run every (instance, config) pair and return ordered stat rows."""
    work = []
    for spec in specs:
        for instance_id, instance, script in spec.instances():
            for config in configs:
                work.append(
                    (instance_id, spec.family, instance, script, config.name, limits)
                )
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one, work))
    else:
        rows = [_run_one(job) for job in work]
    rows.sort(key=lambda r: (r.family, r.instance, r.config))
    return rows


def solved(row: StatsRow) -> bool:
    return row.verdict in ("sat", "unsat")


def pairwise_solved(
    rows: Iterable[StatsRow], config_a: str, config_b: str
) -> list[tuple[StatsRow, StatsRow]]:
    """Per-instance (row_a, row_b) pairs for instances solved by both."""
    by_instance: dict[str, dict[str, StatsRow]] = {}
    for row in rows:
        by_instance.setdefault(row.instance, {})[row.config] = row
    pairs = []
    for instance in sorted(by_instance):
        group = by_instance[instance]
        a, b = group.get(config_a), group.get(config_b)
        if a is not None and b is not None and solved(a) and solved(b):
            pairs.append((a, b))
    return pairs


def emit_stats(rows: Sequence[StatsRow], fmt: str = "csv", destination=None) -> str:
    """Serialize rows to CSV or JSON; returns the text and optionally writes
    it to a path or file object.  Byte-deterministic for a given row list."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow([getattr(r, name) for name in CSV_HEADER])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps([{name: getattr(r, name) for name in CSV_HEADER} for r in rows], indent=2)
        text += "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(text)
        else:
            with open(destination, "w", encoding="utf-8") as fh:
                fh.write(text)
    return text


def read_stats(text: str, fmt: str = "csv") -> list[StatsRow]:
    """Parse rows back from ``emit_stats`` output (round-trip support)."""
    types = {f.name: f.type for f in fields(StatsRow)}

    def coerce(name: str, value):
        t = types[name]
        if t == "int":
            return int(value)
        if t == "float":
            return float(value)
        return str(value)

    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        records = list(reader)
    elif fmt == "json":
        records = json.loads(text)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return [
        StatsRow(**{name: coerce(name, rec[name]) for name in CSV_HEADER})
        for rec in records
    ]
