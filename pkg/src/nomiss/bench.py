"""Run algorithms by name and collect recount-verified run reports."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from . import baselines, greedy, maxcol, rowcol
from .mask import Selection, ValidityMask, as_fraction, feasibility_check, orient, recount

__all__ = ["ALGORITHMS", "GAMMA0_ONLY", "RunReport", "make_report", "run_algorithm", "run_bench",
           "REPORT_SCHEMA_VERSION"]

REPORT_SCHEMA_VERSION = 1

ALGORITHMS = ("mrclean-greedy", "nomiss-greedy", "combined", "rowcol-lp", "maxcol",
              "listwise", "featurewise", "naive", "automiss")
GAMMA0_ONLY = frozenset({"nomiss-greedy", "combined", "rowcol-lp", "maxcol"})
# algorithms that solve the transposed matrix when it has more rows than columns
_ORIENTED = frozenset({"mrclean-greedy", "nomiss-greedy", "combined", "rowcol-lp", "maxcol"})
# algorithms whose output must satisfy the cap; naive and automiss need not
_FEASIBLE_BY_CONTRACT = frozenset({"mrclean-greedy", "nomiss-greedy", "combined", "rowcol-lp",
                                   "maxcol"})


@dataclass
class RunReport:
    dataset: str
    m: int
    n: int
    percent_missing: float
    algorithm: str
    gamma: float
    status: str = "ok"  # ok | timeout | not-applicable
    kept_rows_count: Optional[int] = None
    kept_cols_count: Optional[int] = None
    objective: Optional[int] = None
    percent_valid_retained: Optional[float] = None
    feasible: Optional[bool] = None
    runtime_seconds: Optional[float] = None
    proven_optimal: Optional[bool] = None
    transposed: bool = False
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)


def run_algorithm(name: str, mask: ValidityMask, gamma=0, *, workers: int = 1,
                  time_budget: Optional[float] = None, deterministic: bool = False,
                  warm_start: str = "combined", tau=None) -> Selection:
    """Run algorithm *name* on *mask* as given (no orientation)."""
    g = as_fraction(gamma)
    if name in GAMMA0_ONLY and g != 0:
        raise ValueError(f"{name} only supports gamma = 0")
    if name == "mrclean-greedy":
        return greedy.mrclean_greedy(mask, g)
    if name == "nomiss-greedy":
        return greedy.nomiss_greedy(mask)
    if name == "combined":
        return greedy.combined_greedy(mask)
    if name == "rowcol-lp":
        return rowcol.solve_rowcol_nomiss(mask)
    if name == "maxcol":
        warm = {"combined": greedy.combined_greedy,
                "nomiss": greedy.nomiss_greedy,
                "mrclean": lambda mk: greedy.mrclean_greedy(mk, 0),
                "none": lambda mk: Selection((), (), 0, "empty")}[warm_start](mask)
        return maxcol.solve_maxcol(mask, warm_start=warm, workers=workers,
                                   deterministic=deterministic, time_budget=time_budget)
    if name == "listwise":
        return baselines.listwise(mask)
    if name == "featurewise":
        return baselines.featurewise(mask)
    if name == "naive":
        return baselines.naive(mask, g)
    if name == "automiss":
        return baselines.automiss(mask, g if tau is None else tau)
    raise ValueError(f"unknown algorithm {name!r}")


def make_report(dataset: str, mask: ValidityMask, sel: Optional[Selection], algorithm: str,
                gamma, runtime: Optional[float], transposed: bool,
                status: str = "ok") -> RunReport:
    """Build a report for *sel* (indices of *mask*), recounting everything."""
    g = as_fraction(gamma)
    rep = RunReport(dataset=dataset, m=mask.m, n=mask.n,
                    percent_missing=mask.total_missing / (mask.m * mask.n),
                    algorithm=algorithm, gamma=float(g), status=status,
                    runtime_seconds=runtime, transposed=transposed)
    if sel is None:
        return rep
    sel = recount(mask, sel)
    rep.kept_rows_count, rep.kept_cols_count = sel.shape
    rep.objective = sel.objective
    total = mask.total_valid
    rep.percent_valid_retained = sel.objective / total if total else 1.0
    rep.feasible = not feasibility_check(mask, sel, g)
    rep.proven_optimal = sel.optimal
    if algorithm in _FEASIBLE_BY_CONTRACT and not rep.feasible:
        raise AssertionError(f"{algorithm} returned an infeasible selection on {dataset}")
    if g == 0 and rep.feasible and rep.objective != rep.kept_rows_count * rep.kept_cols_count:
        raise AssertionError("all-valid selection with objective != rows * cols")
    return rep


def timed_run(name, mask, gamma, **kw):
    """Orient, run and map back.  Returns ``(selection, seconds, transposed)``.

    Baselines are defined in terms of samples (rows) and features
    (columns), so they always see the matrix as given.
    """
    if name in _ORIENTED:
        work, transposed = orient(mask)
    else:
        work, transposed = mask, False
    t0 = time.perf_counter()
    sel = run_algorithm(name, work, gamma, **kw)
    elapsed = time.perf_counter() - t0
    if transposed:
        sel = sel.transposed()
    return sel, elapsed, transposed


def run_bench(datasets, gammas, algorithms, timeout: float = 300.0, workers: int = 1):
    """One :class:`RunReport` per (dataset, gamma, algorithm), in that nesting order.

    *datasets* is an iterable of ``(name, mask)``.  Algorithms that cannot
    handle a gamma yield ``not-applicable`` rows.  Only ``maxcol`` can be
    interrupted; any other run that overshoots *timeout* is recorded as a
    ``timeout`` row without a solution.
    """
    reports = []
    for name, mask in datasets:
        for gamma in gammas:
            g = as_fraction(gamma)
            for alg in algorithms:
                if alg in GAMMA0_ONLY and g != 0:
                    reports.append(make_report(name, mask, None, alg, g, None,
                                               alg in _ORIENTED and mask.m > mask.n,
                                               "not-applicable"))
                    continue
                budget = timeout if alg == "maxcol" else None
                sel, secs, tr = timed_run(alg, mask, g, workers=workers, time_budget=budget)
                if alg != "maxcol" and secs > timeout:
                    reports.append(make_report(name, mask, None, alg, g, secs, tr, "timeout"))
                    continue
                reports.append(make_report(name, mask, sel, alg, g, secs, tr))
    return reports


def summarize(reports) -> list:
    """Per (dataset, gamma): best feasible algorithm and each algorithm's gap to it."""
    groups = {}
    for r in reports:
        groups.setdefault((r.dataset, r.gamma), []).append(r)
    lines = []
    for (ds, g), rows in groups.items():
        solved = [r for r in rows if r.objective is not None and r.feasible]
        if not solved:
            lines.append(f"{ds} gamma={g}: no feasible solutions")
            continue
        best = max(solved, key=lambda r: r.objective)
        gaps = []
        for r in rows:
            if r.objective is None:
                gaps.append(f"{r.algorithm}={r.status}")
            elif not r.feasible:
                gaps.append(f"{r.algorithm}=infeasible")
            else:
                gap = 0.0 if best.objective == 0 else 1 - r.objective / best.objective
                gaps.append(f"{r.algorithm}={gap:.2%}")
        lines.append(f"{ds} gamma={g}: best={best.algorithm} ({best.objective}); "
                     + ", ".join(gaps))
    return lines


def write_reports(reports, csv_path=None, jsonl_path=None) -> None:
    fields = list(RunReport.__dataclass_fields__)
    if jsonl_path:
        with open(jsonl_path, "w", encoding="utf-8") as fh:
            for r in reports:
                fh.write(json.dumps(r.to_dict()) + "\n")
    if csv_path:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            for r in reports:
                w.writerow(r.to_dict())


def parse_gammas(text: str):
    return [as_fraction(Fraction(tok.strip())) for tok in text.split(",") if tok.strip()]
