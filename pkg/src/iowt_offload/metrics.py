"""Per-run summaries, multi-run pooling and CSV/JSON export.

Quartiles use linear interpolation between closest ranks (numpy's default
``linear`` percentile method), so [1, 2, 3, 4] gives Q1=1.75, median=2.5, Q3=3.25.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:
    from .sim import TaskOutcome

__all__ = [
    "SUMMARY_COLUMNS",
    "TRACE_COLUMNS",
    "RunSummary",
    "Distribution",
    "AggregateSummary",
    "SummaryRow",
    "quartiles",
    "summarize",
    "aggregate",
    "emit_csv",
    "emit_json",
    "emit_trace_csv",
    "read_csv",
]

SUMMARY_COLUMNS = (
    "strategy", "app", "beta_e", "beta_t", "runs", "tasks_per_run",
    "mean_time_s", "q1_time_s", "median_time_s", "q3_time_s",
    "mean_energy_j", "q1_energy_j", "median_energy_j", "q3_energy_j",
    "offload_percent", "mean_cost", "total_cost",
)  # fmt: skip

TRACE_COLUMNS = (
    "run", "task_index", "app", "action", "explored",
    "transmit_s", "exec_s", "total_s",
    "tx_j", "rx_j", "exec_j", "idle_j", "total_j", "cost",
)  # fmt: skip


def quartiles(values: Sequence[float]) -> tuple[float, float, float]:
    q1, med, q3 = np.percentile(np.asarray(values, dtype=float), [25, 50, 75])
    return float(q1), float(med), float(q3)


@dataclass(frozen=True)
class RunSummary:
    run_index: int
    seed: int
    n_tasks: int
    mean_time_s: float
    q1_time_s: float
    median_time_s: float
    q3_time_s: float
    mean_energy_j: float
    q1_energy_j: float
    median_energy_j: float
    q3_energy_j: float
    offloaded: int
    offload_percent: float
    mean_cost: float
    total_cost: float


def summarize(outcomes: Sequence["TaskOutcome"], run_index: int = 0, seed: int = 0) -> RunSummary:
    if not outcomes:
        raise ValueError("cannot summarize an empty outcome list")
    times = [o.time.total_s for o in outcomes]
    energies = [o.energy.total_j for o in outcomes]
    costs = [o.cost for o in outcomes]
    offloaded = sum(1 for o in outcomes if o.action == 1)
    n = len(outcomes)
    t1, t2, t3 = quartiles(times)
    e1, e2, e3 = quartiles(energies)
    total_cost = float(np.sum(costs))
    return RunSummary(
        run_index=run_index,
        seed=seed,
        n_tasks=n,
        mean_time_s=float(np.mean(times)),
        q1_time_s=t1,
        median_time_s=t2,
        q3_time_s=t3,
        mean_energy_j=float(np.mean(energies)),
        q1_energy_j=e1,
        median_energy_j=e2,
        q3_energy_j=e3,
        offloaded=offloaded,
        offload_percent=100.0 * offloaded / n,
        mean_cost=total_cost / n,
        total_cost=total_cost,
    )


@dataclass(frozen=True)
class Distribution:
    mean: float
    min: float
    q1: float
    median: float
    q3: float
    max: float

    @classmethod
    def of(cls, values: Sequence[float], mean: float | None = None) -> "Distribution":
        arr = np.asarray(values, dtype=float)
        q1, med, q3 = quartiles(arr)
        return cls(
            mean=float(arr.mean()) if mean is None else mean,
            min=float(arr.min()),
            q1=q1,
            median=med,
            q3=q3,
            max=float(arr.max()),
        )


@dataclass(frozen=True)
class AggregateSummary:
    """Statistics over several runs: means are means of per-run means, quartiles are pooled."""

    n_runs: int
    tasks_per_run: int
    time_s: Distribution
    energy_j: Distribution
    cost: Distribution
    offload_percent: float
    offload_percent_std: float
    offloaded_per_run: tuple[int, ...]
    total_cost: float


def aggregate(runs: Iterable[tuple[RunSummary, Sequence["TaskOutcome"]]]) -> AggregateSummary:
    runs = list(runs)
    if not runs:
        raise ValueError("aggregate needs at least one run")
    summaries = [s for s, _ in runs]
    pooled = [o for _, trace in runs for o in trace]
    if not pooled:
        raise ValueError("aggregate needs per-task traces")
    offload = np.array([s.offload_percent for s in summaries])
    return AggregateSummary(
        n_runs=len(summaries),
        tasks_per_run=summaries[0].n_tasks,
        time_s=Distribution.of(
            [o.time.total_s for o in pooled], float(np.mean([s.mean_time_s for s in summaries]))
        ),
        energy_j=Distribution.of(
            [o.energy.total_j for o in pooled], float(np.mean([s.mean_energy_j for s in summaries]))
        ),
        cost=Distribution.of([o.cost for o in pooled], float(np.mean([s.mean_cost for s in summaries]))),
        offload_percent=float(offload.mean()),
        offload_percent_std=float(offload.std()),
        offloaded_per_run=tuple(s.offloaded for s in summaries),
        total_cost=float(np.mean([s.total_cost for s in summaries])),
    )


@dataclass(frozen=True)
class SummaryRow:
    strategy: str
    app: str
    beta_e: float
    beta_t: float
    summary: AggregateSummary

    def record(self) -> dict:
        s = self.summary
        return {
            "strategy": self.strategy,
            "app": self.app,
            "beta_e": self.beta_e,
            "beta_t": self.beta_t,
            "runs": s.n_runs,
            "tasks_per_run": s.tasks_per_run,
            "mean_time_s": s.time_s.mean,
            "q1_time_s": s.time_s.q1,
            "median_time_s": s.time_s.median,
            "q3_time_s": s.time_s.q3,
            "mean_energy_j": s.energy_j.mean,
            "q1_energy_j": s.energy_j.q1,
            "median_energy_j": s.energy_j.median,
            "q3_energy_j": s.energy_j.q3,
            "offload_percent": s.offload_percent,
            "mean_cost": s.cost.mean,
            "total_cost": s.total_cost,
        }


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _write_rows(path: Path, columns: Sequence[str], records: Iterable[dict]) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for rec in records:
                writer.writerow([_fmt(rec[c]) for c in columns])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(rows: Iterable[SummaryRow], destination: str | Path) -> None:
    _write_rows(Path(destination), SUMMARY_COLUMNS, (r.record() for r in rows))


def emit_json(rows: Iterable[SummaryRow], destination: str | Path) -> None:
    """Same fields as the summary CSV, plus the pooled min/max and per-run offload counts."""
    path = Path(destination)
    payload = []
    for r in rows:
        rec = r.record()
        rec["distribution"] = {
            "time_s": asdict(r.summary.time_s),
            "energy_j": asdict(r.summary.energy_j),
            "cost": asdict(r.summary.cost),
        }
        rec["offloaded_per_run"] = list(r.summary.offloaded_per_run)
        payload.append(rec)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def trace_records(run: int, trace: Iterable["TaskOutcome"]) -> Iterable[dict]:
    for o in trace:
        yield {
            "run": run,
            "task_index": o.task_index,
            "app": o.app,
            "action": "offload" if o.action == 1 else "local",
            "explored": o.explored,
            "transmit_s": o.time.transmit_s,
            "exec_s": o.time.exec_s,
            "total_s": o.time.total_s,
            "tx_j": o.energy.tx_wearable_j,
            "rx_j": o.energy.rx_smartphone_j,
            "exec_j": o.energy.exec_j,
            "idle_j": o.energy.idle_wearable_j,
            "total_j": o.energy.total_j,
            "cost": o.cost,
        }


def emit_trace_csv(traces: Iterable[tuple[int, Sequence["TaskOutcome"]]], destination: str | Path) -> None:
    records = (rec for run, trace in traces for rec in trace_records(run, trace))
    _write_rows(Path(destination), TRACE_COLUMNS, records)


_INT_COLUMNS = {"runs", "tasks_per_run", "run", "task_index", "explored", "offloaded_tasks"}
_STR_COLUMNS = {"strategy", "app", "action", "metric"}


def read_csv(path: str | Path) -> list[dict]:
    """Parse a summary or trace CSV back into typed records."""
    out = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            rec = {}
            for key, value in row.items():
                if key in _STR_COLUMNS:
                    rec[key] = value
                elif key in _INT_COLUMNS:
                    rec[key] = int(value)
                else:
                    rec[key] = float(value)
            out.append(rec)
    return out
