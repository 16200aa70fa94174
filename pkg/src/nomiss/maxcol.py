"""Exact largest all-valid submatrix by partitioning on the kept-row count.

For each row count ``R`` the search keeps exactly ``R`` rows and as many
columns as are fully valid on them, so the objective is ``R * |C(S)|``.
Sub-problems are shrunk with column/row filters and a row-pair rule,
skipped when they cannot beat the incumbent, and otherwise solved by a
depth-first branch-and-bound over row inclusion.  All sub-problems share
one monotone :class:`Incumbent`.
"""

from __future__ import annotations

import heapq
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .greedy import combined_greedy
from .mask import Selection, ValidityMask

__all__ = [
    "Incumbent",
    "MaxColRules",
    "SubProblem",
    "min_columns",
    "prepare_subproblem",
    "row_pair_prune",
    "solve_maxcol",
    "solve_subproblem",
]

log = logging.getLogger(__name__)

_DEADLINE_CHECK_EVERY = 64


class BudgetExpired(Exception):
    pass


def min_columns(obj_star: int, R: int) -> int:
    """Fewest columns an ``R``-row solution needs to strictly beat *obj_star*."""
    if R < 1:
        raise ValueError("R must be at least 1")
    return obj_star // R + 1


@dataclass(frozen=True)
class MaxColRules:
    """Switches for the reduction rules; all on by default.

    Turning a rule off never changes the optimum, only the work done.
    """

    column_filter: bool = True
    row_filter: bool = True
    pair_prune: bool = True
    skip: bool = True


@dataclass
class SubProblem:
    R: int
    minC: int
    candidate_rows: list
    candidate_cols: list
    status: str = "ready"
    reason: str = ""

    @property
    def ready(self) -> bool:
        return self.status == "ready"


class Incumbent:
    """Best known all-valid selection, shared between workers.

    ``offer`` is an atomic compare-and-improve; the objective never
    decreases.  ``history`` records every accepted objective.
    """

    def __init__(self, best: Optional[Selection] = None):
        if best is None:
            best = Selection((), (), 0, "empty")
        self._lock = threading.Lock()
        self.best = best
        self.objective = best.objective
        self.history = [best.objective]

    def offer(self, sel: Selection) -> bool:
        with self._lock:
            if sel.objective > self.objective:
                self.best = sel
                self.objective = sel.objective
                self.history.append(sel.objective)
                return True
            return False


def prepare_subproblem(mask: ValidityMask, R: int, incumbent: Incumbent,
                       rules: MaxColRules = MaxColRules()) -> SubProblem:
    if not 1 <= R <= mask.m:
        raise ValueError(f"R must lie in [1, {mask.m}]")
    minC = min_columns(incumbent.objective, R)
    if rules.column_filter:
        cols = np.flatnonzero(mask.beta >= R).tolist()
    else:
        cols = list(range(mask.n))
    if rules.row_filter:
        rows = np.flatnonzero(mask.alpha >= minC).tolist()
    else:
        rows = list(range(mask.m))
    sub = SubProblem(R, minC, rows, cols)
    if minC > mask.n:
        sub.status, sub.reason = "skipped", "minC>n"
    elif len(rows) < R:
        sub.status, sub.reason = "skipped", "rows"
    elif len(cols) < minC:
        sub.status, sub.reason = "skipped", "cols"
    return sub


def row_pair_prune(sub: SubProblem, mask: ValidityMask) -> SubProblem:
    """Drop rows sharing ``minC`` valid columns with fewer than ``R - 1`` other rows.

    Repeated until no row is dropped, since each drop can shrink the
    partner sets of the remaining rows.
    """
    rows = list(sub.candidate_rows)
    R, minC = sub.R, sub.minC
    if R == 1 or not rows:
        return replace(sub, candidate_rows=rows)
    colbits = mask.bits_of(sub.candidate_cols)
    bits = [mask.row_bits[i] & colbits for i in rows]
    k = len(rows)
    partners = [[] for _ in range(k)]
    for a in range(k):
        ba = bits[a]
        for c in range(a + 1, k):
            if (ba & bits[c]).bit_count() >= minC:
                partners[a].append(c)
                partners[c].append(a)
    degree = [len(p) for p in partners]
    alive = [True] * k
    queue = [a for a in range(k) if degree[a] < R - 1]
    for a in queue:
        alive[a] = False
    while queue:
        a = queue.pop()
        for c in partners[a]:
            if alive[c]:
                degree[c] -= 1
                if degree[c] < R - 1:
                    alive[c] = False
                    queue.append(c)
    kept = [rows[a] for a in range(k) if alive[a]]
    out = replace(sub, candidate_rows=kept)
    if len(kept) < R and out.ready:
        out.status, out.reason = "skipped", "pairs"
    return out


def _exclusion_bound(block: np.ndarray, e: int) -> int:
    """Upper bound on columns surviving when exactly *e* rows of *block* are left out.

    *block* holds validity of the remaining candidate rows over the current
    common columns.  A column survives only if every row missing in it is
    left out; spreading each column's unit weight over its missing rows and
    taking the ``e`` heaviest rows bounds the survivors.
    """
    miss = ~block
    cnt = miss.sum(axis=0)
    free = int((cnt == 0).sum())
    if e == 0:
        return free
    usable = (cnt > 0) & (cnt <= e)
    if not usable.any():
        return free
    w = miss[:, usable] @ (1.0 / cnt[usable])
    top = np.partition(w, w.size - e)[w.size - e:] if e < w.size else w
    return free + int(np.floor(top.sum() + 1e-9))


class _Search:
    """Depth-first branch-and-bound for one sub-problem."""

    def __init__(self, mask, sub, incumbent, deadline):
        self.mask = mask
        self.sub = sub
        self.inc = incumbent
        self.deadline = deadline
        self.R = sub.R
        cols = np.asarray(sub.candidate_cols, dtype=np.int64)
        self.cols = cols
        # high-valid rows first, then by index
        order = sorted(sub.candidate_rows, key=lambda i: (-int(mask.alpha[i]), i))
        self.rows = order
        self.block = mask.b[np.ix_(np.asarray(order, dtype=np.int64), cols)] if order else None
        pos_bits = []
        for i in order:
            packed = np.packbits(mask.b[i, cols], bitorder="little") if cols.size else b""
            pos_bits.append(int.from_bytes(bytes(packed), "little"))
        self.bits = pos_bits  # bit k refers to candidate column cols[k]
        self.full = (1 << cols.size) - 1
        self.best = None
        self.nodes = 0

    def need(self) -> int:
        # columns required to strictly beat the current shared incumbent
        return max(self.sub.minC, self.inc.objective // self.R + 1)

    def _accept(self, chosen, cbits):
        size = cbits.bit_count()
        if self.R * size <= self.inc.objective or size < self.sub.minC:
            return
        keep = self.cols[self._bit_positions(cbits)]
        rows = [self.rows[p] for p in chosen]
        sel = Selection.from_mask(self.mask, rows, keep, "maxcol")
        if self.inc.offer(sel):
            self.best = sel

    def run(self):
        R = self.R
        stack = [((), tuple(range(len(self.rows))), self.full)]
        while stack:
            self.nodes += 1
            if self.deadline is not None and self.nodes % _DEADLINE_CHECK_EVERY == 0:
                if time.monotonic() > self.deadline:
                    raise BudgetExpired
            chosen, rest, cbits = stack.pop()
            t = R - len(chosen)
            if t == 0:
                self._accept(chosen, cbits)
                continue
            need = self.need()
            if cbits.bit_count() < need:
                continue
            bits = self.bits
            counts = [(bits[p] & cbits).bit_count() for p in rest]
            live = [(p, c) for p, c in zip(rest, counts) if c >= need]
            if len(live) < t:
                continue
            if len(live) == t:
                for p, _ in live:
                    cbits &= bits[p]
                self._accept(chosen + tuple(p for p, _ in live), cbits)
                continue
            ub = heapq.nlargest(t, (c for _, c in live))[-1]
            if ub < need:
                continue
            e = len(live) - t
            if e <= 16 or len(live) * cbits.bit_count() <= 1 << 22:
                sub_cols = self._bit_positions(cbits)
                block = self.block[np.ix_([p for p, _ in live], sub_cols)]
                ub = min(ub, _exclusion_bound(block, e))
                if ub < need:
                    continue
            # fail first: branch on the row keeping the fewest columns
            live.sort(key=lambda pc: pc[1])
            nxt = tuple(p for p, _ in live)
            head, tail = nxt[0], nxt[1:]
            # exclude pushed first so include is explored first
            stack.append((chosen, tail, cbits))
            stack.append((chosen + (head,), tail, cbits & bits[head]))
        return self.best

    def _bit_positions(self, cbits):
        n = self.cols.size
        raw = cbits.to_bytes((n + 7) // 8, "little")
        flags = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n]
        return np.flatnonzero(flags)


def solve_subproblem(sub: SubProblem, mask: ValidityMask, incumbent: Incumbent,
                     deadline: Optional[float] = None) -> Optional[Selection]:
    """Best ``R``-row all-valid selection strictly better than the incumbent, or ``None``.

    Improvements are offered to *incumbent* as they are found.  Raises
    :class:`BudgetExpired` if ``time.monotonic()`` passes *deadline*.
    """
    if len(sub.candidate_rows) < sub.R or not sub.candidate_cols:
        return None
    return _Search(mask, sub, incumbent, deadline).run()


def _r_order(mask: ValidityMask, deterministic: bool):
    Rs = list(range(1, mask.m + 1))
    if deterministic:
        return Rs
    beta_sorted = np.sort(mask.beta)
    # R * #{j : beta_j >= R}
    ub = {R: R * int(mask.n - np.searchsorted(beta_sorted, R, side="left")) for R in Rs}
    return sorted(Rs, key=lambda R: (-ub[R], -R))


@dataclass
class MaxColStats:
    solved: list = field(default_factory=list)
    skipped: dict = field(default_factory=dict)
    nodes: int = 0


def solve_maxcol(mask: ValidityMask, warm_start: Optional[Selection] = None, workers: int = 1,
                 deterministic: bool = False, time_budget: Optional[float] = None,
                 rules: MaxColRules = MaxColRules(), incumbent: Optional[Incumbent] = None
                 ) -> Selection:
    """Largest all-valid submatrix of *mask*.

    Parameters
    ----------
    warm_start : Selection, optional
        Initial incumbent; must contain no missing cell.  Defaults to
        :func:`~nomiss.greedy.combined_greedy`.
    workers : int
        Threads solving sub-problems concurrently.  The optimum found does
        not depend on it; the particular optimal selection may.
    deterministic : bool
        Visit ``R = 1..m`` in order on one worker for reproducible output.
    time_budget : float, optional
        Seconds.  On expiry the incumbent is returned with
        ``optimal=False``.

    Returns
    -------
    Selection
        ``optimal`` is ``True`` when every sub-problem was closed.
        ``info`` carries ``history`` (incumbent objectives in order of
        acceptance), ``skipped`` (reason counts) and ``nodes``.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if incumbent is None:
        if warm_start is None:
            warm_start = combined_greedy(mask)
        incumbent = Incumbent(warm_start)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    stats = MaxColStats()
    lock = threading.Lock()
    expired = threading.Event()

    def work(R):
        if expired.is_set():
            return
        sub = prepare_subproblem(mask, R, incumbent, rules)
        if sub.ready or not rules.skip:
            if rules.pair_prune and sub.ready:
                sub = row_pair_prune(sub, mask)
        if not sub.ready and rules.skip:
            with lock:
                stats.skipped[sub.reason] = stats.skipped.get(sub.reason, 0) + 1
            return
        search = _Search(mask, sub, incumbent, deadline)
        try:
            if len(sub.candidate_rows) >= R and sub.candidate_cols:
                search.run()
        except BudgetExpired:
            expired.set()
        with lock:
            stats.solved.append(R)
            stats.nodes += search.nodes

    order = _r_order(mask, deterministic)
    if deterministic or workers == 1:
        for R in order:
            work(R)
            if expired.is_set():
                break
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, order))

    best = incumbent.best
    optimal = not expired.is_set()
    log.debug("maxcol: objective=%d optimal=%s nodes=%d skipped=%s", incumbent.objective,
              optimal, stats.nodes, stats.skipped)
    return Selection(best.kept_rows, best.kept_cols, best.objective, "maxcol", optimal,
                     {"history": list(incumbent.history), "skipped": dict(stats.skipped),
                      "nodes": stats.nodes, "warm_start": incumbent.history[0]})


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("NOMISS_WORKERS", "1")))
    except ValueError:
        return 1
