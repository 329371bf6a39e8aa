"""Benchmark harness: run the solver over a manifest of instances and
compare achieved efficacy against recorded expectations at 4 decimals.

Manifest format (CSV with a header): columns `path,regime,expected` and
optionally `name`. Paths are resolved relative to the manifest file.
Regime is `no-residual` or `allow-residual`; expected is a rational or a
decimal like `0.6957`. Lines starting with `#` are skipped. Missing
instance files produce an error row but do not stop the run; the exit
code goes to 1 only when an instance solved to Optimal misses its
expectation.
"""

from __future__ import annotations

import csv
import io
import time
import zlib
from dataclasses import dataclass
from pathlib import Path

from .dinkelbach import SolveStatus, solve
from .heuristic import SearchConfig, heuristic_solve
from .instances import load_instance
from .rational import Ratio, parse_ratio
from .solutions import Regime

CSV_COLUMNS = ("name", "m", "p", "regime", "expected", "achieved", "match",
               "status", "iters", "nodes", "time_ms")

_REGIMES = {"no-residual": Regime.NO_RESIDUAL,
            "allow-residual": Regime.ALLOW_RESIDUAL}


@dataclass
class ManifestEntry:
    path: Path
    regime: Regime
    expected: Ratio
    name: str


@dataclass
class BenchRow:
    name: str
    m: int
    p: int
    regime: str
    expected: str
    achieved: str
    match: str      # yes / no / - (not comparable)
    status: str
    iters: int
    nodes: int
    time_ms: int
    error: str = ""


def regime_from_string(text: str) -> Regime:
    try:
        return _REGIMES[text.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown regime {text!r} (expected no-residual or allow-residual)"
        ) from None


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    path = Path(path)
    rows = [line for line in path.read_text().splitlines()
            if line.strip() and not line.lstrip().startswith("#")]
    entries: list[ManifestEntry] = []
    if not rows:
        return entries
    reader = csv.DictReader(rows)
    required = {"path", "regime", "expected"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise ValueError(
            f"manifest needs columns path,regime,expected; got {reader.fieldnames}")
    for rec in reader:
        file = (path.parent / rec["path"]).resolve()
        name = (rec.get("name") or "").strip() or file.stem
        entries.append(ManifestEntry(
            file, regime_from_string(rec["regime"]),
            parse_ratio(rec["expected"]), name))
    return entries


def _instance_seed(name: str) -> int:
    return zlib.crc32(name.encode()) & 0x7FFFFFFF


def run_entry(entry: ManifestEntry, time_limit: float | None,
              restarts: int, heuristic_time: float | None) -> BenchRow:
    regime_str = next(s for s, r in _REGIMES.items() if r is entry.regime)
    try:
        inst = load_instance(entry.path)
    except (OSError, ValueError) as exc:
        return BenchRow(entry.name, 0, 0, regime_str, entry.expected.to_4dp(),
                        "-", "-", "Error", 0, 0, 0, error=str(exc))
    t0 = time.time()
    seed = heuristic_solve(inst, SearchConfig(
        regime=entry.regime, restarts=restarts, time_budget=heuristic_time,
        rng_seed=_instance_seed(entry.name)))
    budget = None
    if time_limit is not None:
        budget = max(0.0, time_limit - (time.time() - t0))
    out = solve(inst, entry.regime, seed_solution=seed, time_limit=budget)
    achieved = out.solution.efficacy
    match = "yes" if achieved.to_4dp() == entry.expected.to_4dp() else "no"
    return BenchRow(
        entry.name, inst.m, inst.p, regime_str,
        entry.expected.to_4dp(), achieved.to_4dp(), match,
        out.status.value, out.iterations, out.nodes,
        int(round((time.time() - t0) * 1000)))


def run_bench(entries, time_limit: float | None = None, restarts: int = 8,
              heuristic_time: float | None = None) -> list[BenchRow]:
    return [run_entry(e, time_limit, restarts, heuristic_time)
            for e in entries]


def failed(rows) -> bool:
    """Expectation failure: an Optimal solve that misses its target."""
    return any(r.status == SolveStatus.OPTIMAL.value and r.match == "no"
               for r in rows)


def format_text(rows) -> str:
    header = ("name", "m", "p", "regime", "expected", "achieved", "match",
              "status", "iters", "nodes", "time_ms")
    table = [header]
    for r in rows:
        table.append((r.name, str(r.m), str(r.p), r.regime, r.expected,
                      r.achieved, r.match, r.status, str(r.iters),
                      str(r.nodes), str(r.time_ms)))
    widths = [max(len(row[c]) for row in table) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in table]
    matches = sum(1 for r in rows if r.match == "yes")
    comparable = sum(1 for r in rows if r.match in ("yes", "no"))
    lines.append(f"matched {matches}/{comparable} expectations"
                 f" ({len(rows)} rows)")
    for r in rows:
        if r.error:
            lines.append(f"error: {r.name}: {r.error}")
    return "\n".join(lines)


def format_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.name, r.m, r.p, r.regime, r.expected, r.achieved,
                         r.match, r.status, r.iters, r.nodes, r.time_ms])
    return buf.getvalue()
