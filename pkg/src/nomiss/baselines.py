"""Classical deletion strategies used as comparators."""

from __future__ import annotations

import numpy as np

from .mask import Selection, ValidityMask, as_fraction

__all__ = ["automiss", "featurewise", "listwise", "naive"]


def listwise(mask: ValidityMask) -> Selection:
    """Drop every row containing a missing cell."""
    rows = np.flatnonzero(mask.lam == 0)
    cols = range(mask.n)
    return Selection.from_mask(mask, rows, cols, "listwise")


def featurewise(mask: ValidityMask) -> Selection:
    """Drop every column containing a missing cell."""
    cols = np.flatnonzero(mask.beta == mask.m)
    rows = range(mask.m)
    return Selection.from_mask(mask, rows, cols, "featurewise")


def naive(mask: ValidityMask, gamma=0) -> Selection:
    """One pass over the original matrix: drop rows and columns above *gamma*.

    Fractions are taken on the full matrix, so the kept cross-section may
    still violate *gamma* after the other side has been trimmed.
    """
    g = as_fraction(gamma)
    p, q = g.numerator, g.denominator
    rows = np.flatnonzero(mask.lam * q <= p * mask.n)
    cols = np.flatnonzero((mask.m - mask.beta) * q <= p * mask.m)
    return Selection.from_mask(mask, rows, cols, "naive")


def automiss(mask: ValidityMask, tau=0) -> Selection:
    """Remove the worst row or column until overall missingness is at most *tau*.

    Missing fractions are recomputed on the kept cross-section after each
    removal.  Ties go to rows, then the lowest index.
    """
    t = as_fraction(tau, "tau")
    p, q = t.numerator, t.denominator
    b, bT = mask.b, mask.bT
    rows_alive = np.ones(mask.m, dtype=bool)
    cols_alive = np.ones(mask.n, dtype=bool)
    row_miss = mask.lam.astype(np.int64)
    col_miss = (mask.m - mask.beta).astype(np.int64)
    nr, nc = mask.m, mask.n
    missing = int(row_miss.sum())

    while nr and nc and missing * q > p * nr * nc:
        # every kept row spans nc cells and every kept column nr cells
        i = int(np.argmax(np.where(rows_alive, row_miss, -1)))
        j = int(np.argmax(np.where(cols_alive, col_miss, -1)))
        if row_miss[i] * nr >= col_miss[j] * nc:
            rows_alive[i] = False
            missing -= int(row_miss[i])
            col_miss[~b[i] & cols_alive] -= 1
            nr -= 1
        else:
            cols_alive[j] = False
            missing -= int(col_miss[j])
            row_miss[~bT[j] & rows_alive] -= 1
            nc -= 1

    rows = np.flatnonzero(rows_alive)
    cols = np.flatnonzero(cols_alive)
    return Selection.from_mask(mask, rows, cols, "automiss")
