"""Verification harness: pairs bound evaluators with exact or Monte-Carlo
oracles over parameter grids, aggregates three-valued verdicts, and emits
deterministic reports.

Verdicts: ``pass`` when the bound provably covers the oracle, ``fail`` when
a valid bound lies on the wrong side beyond the slack, ``inapplicable`` when
preconditions are violated, and ``inconclusive`` when a Monte-Carlo interval
straddles the bound.  Only exact-oracle cells should ever hard-fail; the
slack absorbs double-precision evaluation error and oracle truncation.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .bounds.result import BoundResult, LOWER_BOUND, UPPER_BOUND
from .dist import MonteCarloEstimate, wilson_interval
from .processes import ProcessSpec, Trace, simulate_runs, tail_frequency

SCHEMA = "conckit.report/1"

PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"
INCONCLUSIVE = "inconclusive"

EXACT_MODE = "exact"
MC_MODE = "monte_carlo"


@dataclass(frozen=True)
class VerificationRecord:
    cell_id: str
    bound_id: str
    section: str
    oracle: float
    oracle_lo: float
    oracle_hi: float
    oracle_mode: str
    bound: float
    bound_kind: str  # upper | lower (direction of the claim on the oracle)
    valid: bool
    verdict: str
    query: str = ""
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "cell_id": self.cell_id,
            "bound_id": self.bound_id,
            "section": self.section,
            "oracle": self.oracle,
            "oracle_lo": self.oracle_lo,
            "oracle_hi": self.oracle_hi,
            "oracle_mode": self.oracle_mode,
            "bound": self.bound,
            "bound_kind": self.bound_kind,
            "valid": self.valid,
            "verdict": self.verdict,
            "query": self.query,
            "note": self.note,
        }


def _verdict(
    kind: str,
    valid: bool,
    bound: float,
    lo: float,
    hi: float,
    mode: str,
    slack: float,
) -> str:
    if not valid:
        return INAPPLICABLE
    if kind == UPPER_BOUND:
        if bound < lo - slack:
            return FAIL
        if mode == MC_MODE and bound < hi:
            return INCONCLUSIVE
        return PASS
    # lower-bound claims: the guaranteed value must not exceed the oracle
    if bound > hi + slack:
        return FAIL
    if mode == MC_MODE and bound > lo:
        return INCONCLUSIVE
    return PASS


@dataclass(frozen=True)
class Cell:
    """One grid cell: an oracle closure plus the bounds asked about it."""

    cell_id: str
    section: str
    query: str
    oracle_mode: str
    oracle_fn: Callable[[], tuple[float, float, float]]  # value, lo, hi
    bounds: tuple[tuple[str, Callable[[], tuple[float, str, bool, str]]], ...]
    # each bound closure returns (value, kind, valid, note)


def bound_eval(fn: Callable[[], BoundResult]) -> Callable[[], tuple[float, str, bool, str]]:
    """Adapt a BoundResult-producing closure to the cell protocol."""

    def run():
        r = fn()
        note = "; ".join(r.violated_preconditions)
        return r.value, r.kind, r.valid, note

    return run


def raw_eval(value: float, kind: str = UPPER_BOUND, valid: bool = True, note: str = ""):
    return lambda: (value, kind, valid, note)


@dataclass
class Report:
    name: str
    metadata: dict
    records: list[VerificationRecord] = field(default_factory=list)

    def sorted_records(self) -> list[VerificationRecord]:
        return sorted(self.records, key=lambda r: (r.cell_id, r.bound_id))

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, INAPPLICABLE: 0, INCONCLUSIVE: 0}
        for r in self.records:
            counts[r.verdict] += 1
        counts["records"] = len(self.records)
        return counts

    @property
    def failures(self) -> list[VerificationRecord]:
        return [r for r in self.records if r.verdict == FAIL]

    def extend(self, other: "Report") -> None:
        self.records.extend(other.records)

    # -- serialization -------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": SCHEMA,
                "name": self.name,
                "metadata": self.metadata,
                "summary": self.summary(),
                "records": [r.to_dict() for r in self.sorted_records()],
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "Report":
        obj = json.loads(text)
        if obj.get("schema") != SCHEMA:
            raise ValueError(f"unknown report schema {obj.get('schema')!r}")
        records = [
            VerificationRecord(
                cell_id=r["cell_id"],
                bound_id=r["bound_id"],
                section=r["section"],
                oracle=r["oracle"],
                oracle_lo=r["oracle_lo"],
                oracle_hi=r["oracle_hi"],
                oracle_mode=r["oracle_mode"],
                bound=r["bound"],
                bound_kind=r["bound_kind"],
                valid=r["valid"],
                verdict=r["verdict"],
                query=r.get("query", ""),
                note=r.get("note", ""),
            )
            for r in obj["records"]
        ]
        return Report(obj["name"], obj.get("metadata", {}), records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["cell_id", "bound_id", "oracle", "oracle_lo", "oracle_hi", "bound", "verdict"])
        for r in self.sorted_records():
            writer.writerow(
                [
                    r.cell_id,
                    r.bound_id,
                    f"{r.oracle:.12g}",
                    f"{r.oracle_lo:.12g}",
                    f"{r.oracle_hi:.12g}",
                    f"{r.bound:.12g}",
                    r.verdict,
                ]
            )
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [f"# Verification report: {self.name}", ""]
        meta = ", ".join(f"{k}={v}" for k, v in sorted(self.metadata.items()))
        if meta:
            lines += [f"_{meta}_", ""]
        s = self.summary()
        lines += [
            f"**{s['records']} records: {s[PASS]} pass, {s[FAIL]} fail, "
            f"{s[INCONCLUSIVE]} inconclusive, {s[INAPPLICABLE]} inapplicable.**",
            "",
        ]
        by_section: dict[str, list[VerificationRecord]] = {}
        for r in self.sorted_records():
            by_section.setdefault(r.section, []).append(r)
        for section in sorted(by_section):
            lines += [f"## {section}", ""]
            lines += ["| cell | bound | oracle | bound value | verdict |", "|---|---|---|---|---|"]
            for r in by_section[section]:
                lines.append(
                    f"| {r.cell_id} | {r.bound_id} | {r.oracle:.6g} | {r.bound:.6g} | {r.verdict} |"
                )
            lines.append("")
        return "\n".join(lines)

    def emit(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "markdown":
            return self.to_markdown()
        raise ValueError(f"unknown format {fmt!r}")


def run_grid(
    cells: Sequence[Cell], name: str, slack: float = 1e-9, metadata: dict | None = None, jobs: int = 1
) -> Report:
    """Evaluate every (cell x bound) pair; cells are independent, so they may
    run concurrently; aggregation sorts records before serialization."""

    def run_cell(cell: Cell) -> list[VerificationRecord]:
        value, lo, hi = cell.oracle_fn()
        out = []
        for bound_id, ev in cell.bounds:
            b_value, kind, valid, note = ev()
            verdict = _verdict(kind, valid, b_value, lo, hi, cell.oracle_mode, slack)
            out.append(
                VerificationRecord(
                    cell_id=cell.cell_id,
                    bound_id=bound_id,
                    section=cell.section,
                    oracle=value,
                    oracle_lo=lo,
                    oracle_hi=hi,
                    oracle_mode=cell.oracle_mode,
                    bound=b_value,
                    bound_kind=kind,
                    valid=valid,
                    verdict=verdict,
                    query=cell.query,
                    note=note,
                )
            )
        return out

    meta = dict(metadata or {})
    meta.setdefault("slack", slack)
    report = Report(name, meta)
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for recs in pool.map(run_cell, cells):
                report.records.extend(recs)
    else:
        for cell in cells:
            report.records.extend(run_cell(cell))
    return report


def check_ordering(
    family: Sequence[tuple[str, Callable[[], BoundResult]]],
    cell_id: str,
    section: str = "ordering",
    slack: float = 1e-12,
) -> VerificationRecord:
    """Verify that the family's values are pointwise non-decreasing in the
    declared (strongest first) order; the record's bound value is the worst
    inversion found (0 when the chain is monotone)."""
    values = []
    for bound_id, fn in family:
        r = fn()
        if r.valid:
            values.append((bound_id, r.value))
    worst = 0.0
    for (_, a), (_, b) in zip(values, values[1:]):
        worst = max(worst, a - b)
    verdict = PASS if worst <= slack else FAIL
    ids = ">".join(bound_id for bound_id, _ in family)
    return VerificationRecord(
        cell_id=cell_id,
        bound_id=f"ordering:{ids}",
        section=section,
        oracle=0.0,
        oracle_lo=0.0,
        oracle_hi=0.0,
        oracle_mode=EXACT_MODE,
        bound=worst,
        bound_kind=LOWER_BOUND,
        valid=len(values) >= 2,
        verdict=verdict if len(values) >= 2 else PASS,
        query="pointwise monotone chain",
    )


@dataclass(frozen=True)
class ProcessEvent:
    """Which trace statistic an empirical cell estimates."""

    kind: str  # runtime_ge | runtime_le | early_hamming | cga_converged
    threshold: float | None = None
    radius: int | None = None
    within: int | None = None


def empirical_vs_bound(
    spec: ProcessSpec,
    event: ProcessEvent,
    bound: BoundResult,
    runs: int,
    confidence: float = 0.999,
    cell_id: str | None = None,
    jobs: int = 1,
) -> VerificationRecord:
    """Simulate, form the Wilson interval of the event frequency, and compare
    it against the bound: fail only when the whole interval lies above an
    upper bound (resp. below a lower bound)."""
    if runs < 10**3:
        raise ValueError("need at least 1000 runs for an empirical cell")
    if event.kind == "cga_converged":
        from .processes import simulate_cga_neutral

        seeds = np.random.SeedSequence(spec.seed).spawn(runs)
        hits = sum(
            1 for i in range(runs) if simulate_cga_neutral(spec.K, spec.horizon, spec.seed, _seed_seq=seeds[i]).converged
        )
        lo, hi = wilson_interval(hits, runs, confidence)
        point = hits / runs
    else:
        traces = simulate_runs(spec, runs, jobs=jobs)
        if event.kind == "runtime_ge":
            stat = tail_frequency(traces, event.threshold, "upper", confidence)
        elif event.kind == "runtime_le":
            stat = tail_frequency(traces, event.threshold, "lower", confidence)
        elif event.kind == "early_hamming":
            hits = sum(
                1
                for t in traces
                if any(e <= event.within and hd <= event.radius for e, _, hd in t.checkpoints)
                or (not t.censored and t.runtime <= event.within)
            )
            lo, hi = wilson_interval(hits, runs, confidence)
            stat = {"point": hits / runs, "lo": lo, "hi": hi}
        else:
            raise ValueError(f"unknown event kind {event.kind!r}")
        point, lo, hi = stat["point"], stat["lo"], stat["hi"]
    verdict = _verdict(bound.kind, bound.valid, bound.value, lo, hi, MC_MODE, 0.0)
    return VerificationRecord(
        cell_id=cell_id or f"process:{spec.kind}:{spec.objective}:n={spec.n}",
        bound_id=bound.bound_id,
        section="process-empirical",
        oracle=point,
        oracle_lo=lo,
        oracle_hi=hi,
        oracle_mode=MC_MODE,
        bound=bound.value,
        bound_kind=bound.kind,
        valid=bound.valid,
        verdict=verdict,
        query=f"{event.kind} {event.threshold if event.threshold is not None else ''}".strip(),
    )


def mean_consistency(
    traces: Sequence[Trace], target: float, cell_id: str, sigmas: float = 3.0
) -> VerificationRecord:
    """Two-sided check that the empirical mean is within `sigmas` standard
    errors of a known exact expectation."""
    finished = [t.runtime for t in traces if not t.censored]
    mean = float(np.mean(finished))
    stderr = float(np.std(finished, ddof=1) / math.sqrt(len(finished)))
    lo, hi = mean - sigmas * stderr, mean + sigmas * stderr
    ok = lo <= target <= hi
    return VerificationRecord(
        cell_id=cell_id,
        bound_id="expectation.exact",
        section="process-empirical",
        oracle=mean,
        oracle_lo=lo,
        oracle_hi=hi,
        oracle_mode=MC_MODE,
        bound=target,
        bound_kind=UPPER_BOUND,
        valid=True,
        verdict=PASS if ok else FAIL,
        query=f"empirical mean within {sigmas:g} standard errors of the exact expectation",
        note=f"{len(traces) - len(finished)} censored" if len(finished) < len(traces) else "",
    )


def mean_vs_bound(
    traces: Sequence[Trace], bound_value: float, cell_id: str, sigmas: float = 3.0
) -> VerificationRecord:
    """Compare the empirical mean runtime against an upper bound on the
    expectation; censoring above 1% of runs makes the cell inconclusive."""
    finished = [t.runtime for t in traces if not t.censored]
    censored = len(traces) - len(finished)
    mean = float(np.mean(finished)) if finished else math.inf
    stderr = float(np.std(finished, ddof=1) / math.sqrt(len(finished))) if len(finished) > 1 else 0.0
    lo, hi = mean - sigmas * stderr, mean + sigmas * stderr
    if censored > 0.01 * len(traces):
        verdict = INCONCLUSIVE
        note = f"{censored} of {len(traces)} runs censored"
    else:
        verdict = _verdict(UPPER_BOUND, True, bound_value, lo, hi, MC_MODE, 0.0)
        note = ""
    return VerificationRecord(
        cell_id=cell_id,
        bound_id="expectation.upper",
        section="process-empirical",
        oracle=mean,
        oracle_lo=lo,
        oracle_hi=hi,
        oracle_mode=MC_MODE,
        bound=bound_value,
        bound_kind=UPPER_BOUND,
        valid=True,
        verdict=verdict,
        query=f"mean runtime vs bound ({sigmas:g} sigma)",
        note=note,
    )
