"""Brute-force reference solvers, independent of the package's algorithms.

They only use the mask's raw boolean array, never the solvers under test.
"""

from fractions import Fraction
from itertools import product
import re

import numpy as np


def _row_ints(b):
    return [sum(1 << j for j in range(b.shape[1]) if b[i, j]) for i in range(b.shape[0])]


def max_allvalid(b):
    """Largest R * |common valid columns| over all non-empty row subsets."""
    b = np.asarray(b, dtype=bool)
    m, n = b.shape
    rows = _row_ints(b)
    inter = [0] * (1 << m)
    size = [0] * (1 << m)
    inter[0] = (1 << n) - 1
    best = 0
    for S in range(1, 1 << m):
        low = (S & -S).bit_length() - 1
        inter[S] = inter[S & (S - 1)] & rows[low]
        size[S] = size[S & (S - 1)] + 1
        best = max(best, size[S] * bin(inter[S]).count("1"))
    return best


def max_weight_independent_set(b):
    """Max sum(alpha[rows]) + sum(beta[cols]) with no kept (row, col) pair missing."""
    b = np.asarray(b, dtype=bool)
    m, n = b.shape
    alpha = b.sum(axis=1)
    beta = b.sum(axis=0)
    best = 0
    for S in range(1 << m):
        rows = [i for i in range(m) if S >> i & 1]
        ok = b[rows].all(axis=0) if rows else np.ones(n, dtype=bool)
        best = max(best, int(alpha[rows].sum() + beta[ok].sum()))
    return best


def min_vertex_cover(b):
    """Cheapest set of lines (row weight alpha, column weight beta) touching every missing cell."""
    b = np.asarray(b, dtype=bool)
    m, n = b.shape
    alpha = b.sum(axis=1)
    beta = b.sum(axis=0)
    best = None
    for S in range(1 << m):
        rows = [i for i in range(m) if S >> i & 1]
        rest = [i for i in range(m) if not S >> i & 1]
        # every missing cell in an uncovered row needs its column
        need = ~b[rest].all(axis=0) if rest else np.zeros(n, dtype=bool)
        cost = int(alpha[rows].sum() + beta[need].sum())
        best = cost if best is None else min(best, cost)
    return best


def max_elements(b, gamma):
    """Best valid-cell count over all (rows, cols) meeting the per-line cap exactly."""
    b = np.asarray(b, dtype=bool)
    m, n = b.shape
    g = Fraction(gamma)
    best = 0
    for rs in range(1, 1 << m):
        rows = [i for i in range(m) if rs >> i & 1]
        for cs in range(1, 1 << n):
            cols = [j for j in range(n) if cs >> j & 1]
            sub = b[np.ix_(rows, cols)]
            miss_r = (~sub).sum(axis=1)
            miss_c = (~sub).sum(axis=0)
            if any(Fraction(int(k), len(cols)) > g for k in miss_r):
                continue
            if any(Fraction(int(k), len(rows)) > g for k in miss_c):
                continue
            best = max(best, int(sub.sum()))
    return best


# -- minimal LP-format reader ------------------------------------------------

_TERM = re.compile(r"([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][\w.]*)")


def _linear(expr):
    out = {}
    expr = expr.strip()
    pos = 0
    while pos < len(expr):
        mt = _TERM.match(expr, pos)
        if not mt:
            raise ValueError(f"cannot parse {expr[pos:]!r}")
        sign = -1 if mt.group(1) == "-" else 1
        coef = Fraction(mt.group(2)) if mt.group(2) else Fraction(1)
        out[mt.group(3)] = out.get(mt.group(3), 0) + sign * coef
        pos = mt.end()
        while pos < len(expr) and expr[pos] == " ":
            pos += 1
    return out


def parse_lp(text):
    """Return (objective dict, [(coef dict, sense, rhs)], binaries) for our LP dialect."""
    section = None
    chunks = {"obj": [], "st": [], "bin": []}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low == "maximize":
            section = "obj"
            continue
        if low == "subject to":
            section = "st"
            continue
        if low == "binary":
            section = "bin"
            continue
        if low == "end":
            break
        if raw.startswith("   ") and chunks[section]:
            chunks[section][-1] += " " + line
        else:
            chunks[section].append(line)
    obj = _linear(chunks["obj"][0].split(":", 1)[1]) if chunks["obj"] else {}
    cons = []
    for c in chunks["st"]:
        body = c.split(":", 1)[1]
        lhs, rhs = body.split("<=")
        cons.append((_linear(lhs), "<=", Fraction(rhs.strip())))
    binaries = " ".join(chunks["bin"]).split()
    return obj, cons, binaries


def lp_brute_force(text, tol=Fraction(1, 10**12)):
    """Enumerate all binary assignments of the model; feasibility with tolerance *tol*.

    The tolerance absorbs the rounding of printed decimal coefficients, as a
    MIP solver's feasibility tolerance would.
    """
    obj, cons, names = parse_lp(text)
    idx = {v: k for k, v in enumerate(names)}
    A = np.array([[float(c.get(v, 0)) for v in names] for c, _, _ in cons])
    rhs = np.array([float(r) for _, _, r in cons])
    w = np.array([float(obj.get(v, 0)) for v in names])
    X = np.array(list(product((0, 1), repeat=len(names))), dtype=float)
    ok = (X @ A.T <= rhs + float(tol)).all(axis=1) if cons else np.ones(len(X), dtype=bool)
    return float((X[ok] @ w).max()), idx
