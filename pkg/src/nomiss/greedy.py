"""Greedy row/column deletion heuristics.

``mrclean_greedy`` handles any missingness cap; ``nomiss_greedy`` targets
the all-valid case; ``combined_greedy`` runs both and keeps the better one.
"""

from __future__ import annotations

import numpy as np

from .mask import Selection, ValidityMask, as_fraction

__all__ = ["combined_greedy", "mrclean_greedy", "nomiss_greedy", "SIMILARITY_WINDOW"]

SIMILARITY_WINDOW = 3


def _worst_line(miss, total, alive):
    """Index of the alive line with the largest ``miss/total`` (first on ties).

    Returns ``(index, miss, total)`` or ``None``.  Float division is safe for
    ordering: equal rationals map to equal doubles and distinct ones with
    denominators below 2**26 map to distinct doubles.
    """
    ok = alive & (total > 0)
    if not ok.any():
        return None
    frac = np.where(ok, miss / np.maximum(total, 1), -1.0)
    k = int(np.argmax(frac))
    return k, int(miss[k]), int(total[k])


def mrclean_greedy(mask: ValidityMask, gamma=0) -> Selection:
    """Remove rows/columns until no kept line has a missing fraction above *gamma*.

    Each iteration picks the kept line with the largest missing fraction
    (rows win ties against columns, then the lowest index), computes ``k``,
    the fewest of its missing cells that must go, and either drops the line
    or the ``k`` crossing lines with the fewest valid cells, whichever
    loses fewer valid cells.  Equal losses drop the column side.
    """
    g = as_fraction(gamma)
    p, q = g.numerator, g.denominator
    b, bT = mask.b, mask.bT
    rows_alive = np.ones(mask.m, dtype=bool)
    cols_alive = np.ones(mask.n, dtype=bool)
    row_valid = mask.alpha.astype(np.int64)
    row_miss = mask.lam.astype(np.int64)
    col_valid = mask.beta.astype(np.int64)
    col_miss = (mask.m - mask.beta).astype(np.int64)

    def drop_row(i):
        rows_alive[i] = False
        v = b[i] & cols_alive
        col_valid[v] -= 1
        col_miss[~b[i] & cols_alive] -= 1

    def drop_col(j):
        cols_alive[j] = False
        v = bT[j] & rows_alive
        row_valid[v] -= 1
        row_miss[~bT[j] & rows_alive] -= 1

    while rows_alive.any() and cols_alive.any():
        r = _worst_line(row_miss, row_valid + row_miss, rows_alive)
        c = _worst_line(col_miss, col_valid + col_miss, cols_alive)
        if r is None or c is None:
            break
        # rows first on equal fractions
        if r[1] * c[2] >= c[1] * r[2]:
            is_row, (idx, miss, tot) = True, r
        else:
            is_row, (idx, miss, tot) = False, c
        if miss * q <= p * tot:
            break
        k = -(-(q * miss - p * tot) // (q - p))

        if is_row:
            cand = np.flatnonzero(cols_alive & ~b[idx])
            order = np.argsort(col_valid[cand], kind="stable")[:k]
            cross = cand[order]
            if row_valid[idx] < col_valid[cross].sum():
                drop_row(idx)
            else:
                for j in cross:
                    drop_col(j)
        else:
            cand = np.flatnonzero(rows_alive & ~bT[idx])
            order = np.argsort(row_valid[cand], kind="stable")[:k]
            cross = cand[order]
            if col_valid[idx] <= row_valid[cross].sum():
                drop_col(idx)
            else:
                for i in cross:
                    drop_row(i)

    rows = np.flatnonzero(rows_alive)
    cols = np.flatnonzero(cols_alive)
    if rows.size == 0 or cols.size == 0:
        rows = cols = ()
    return Selection.from_mask(mask, rows, cols, "mrclean-greedy")


def nomiss_greedy(mask: ValidityMask, similarity_window: int = SIMILARITY_WINDOW) -> Selection:
    """Grow an all-valid submatrix one row at a time and keep the best snapshot.

    Starting from every column and no rows, repeatedly add the row with
    the most valid cells among kept columns, dropping the columns where it
    is missing.  Ties go to the row whose column drops would delete the
    most missing cells of the not-yet-added rows within
    *similarity_window* of the leading count, then to the lowest index.

    ``info["order"]`` lists rows in the order added and ``info["trace"]``
    the objective after each addition.
    """
    m, n = mask.shape
    b, bT = mask.b, mask.bT
    cols_alive = np.ones(n, dtype=bool)
    added = np.zeros(m, dtype=bool)
    counts = mask.alpha.astype(np.int64)
    removed_at = np.full(n, m, dtype=np.int64)
    order = []
    trace = []
    best_obj, best_step = 0, -1
    n_alive = n

    for step in range(m):
        live = np.where(added, -1, counts)
        top = int(live.max())
        tied = np.flatnonzero(live == top)
        if tied.size == 1:
            pick = int(tied[0])
        else:
            similar = np.flatnonzero(~added & (counts >= top - similarity_window))
            # missing cells of the similar rows, per kept column
            col_hits = (~b[np.ix_(similar, np.flatnonzero(cols_alive))]).sum(axis=0)
            hits = np.zeros(n, dtype=np.int64)
            hits[cols_alive] = col_hits
            scores = [int(hits[~b[t] & cols_alive].sum()) for t in tied]
            pick = int(tied[int(np.argmax(scores))])

        added[pick] = True
        order.append(pick)
        gone = np.flatnonzero(cols_alive & ~b[pick])
        if gone.size:
            cols_alive[gone] = False
            removed_at[gone] = step
            n_alive -= gone.size
            counts -= bT[gone].sum(axis=0)
        obj = (step + 1) * n_alive
        trace.append(obj)
        if obj > best_obj:
            best_obj, best_step = obj, step

    if best_step < 0:
        return Selection((), (), 0, "nomiss-greedy", None, {"order": order, "trace": trace})
    rows = order[: best_step + 1]
    cols = np.flatnonzero(removed_at > best_step)
    return Selection.from_mask(mask, rows, cols, "nomiss-greedy", order=order, trace=trace)


def combined_greedy(mask: ValidityMask, similarity_window: int = SIMILARITY_WINDOW) -> Selection:
    """Better of ``mrclean_greedy(mask, 0)`` and ``nomiss_greedy(mask)``; ties keep the latter."""
    a = nomiss_greedy(mask, similarity_window)
    c = mrclean_greedy(mask, 0)
    best = c if c.objective > a.objective else a
    return Selection(best.kept_rows, best.kept_cols, best.objective, "combined-greedy",
                     None, {"source": best.algorithm})
