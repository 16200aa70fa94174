"""Row/column weight model: exact all-valid solver and LP-format export.

With no missing data allowed, the row/column weight model reduces to a
maximum-weight independent set on the bipartite *conflict graph* whose
edges are the missing cells.  That is solved exactly by a minimum cut.
For other caps the integer programs are written out in LP text format for
an external MIP solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .mask import Selection, ValidityMask, as_fraction

__all__ = [
    "ConflictGraph",
    "build_conflict_graph",
    "export_element_ip",
    "export_rowcol_ip",
    "rowcol_weight",
    "solve_rowcol_nomiss",
]

_INT32_MAX = 2**31 - 1


@dataclass(frozen=True)
class ConflictGraph:
    row_weights: np.ndarray
    col_weights: np.ndarray
    edges: np.ndarray  # shape (E, 2): (row, col) of each missing cell

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])


def build_conflict_graph(mask: ValidityMask) -> ConflictGraph:
    rows, cols = np.nonzero(~mask.b)
    edges = np.stack([rows, cols], axis=1).astype(np.int64)
    return ConflictGraph(mask.alpha.copy(), mask.beta.copy(), edges)


def rowcol_weight(mask: ValidityMask, sel: Selection) -> int:
    """Sum of original row and column valid counts over the kept lines."""
    return int(mask.alpha[list(sel.kept_rows)].sum() + mask.beta[list(sel.kept_cols)].sum())


def solve_rowcol_nomiss(mask: ValidityMask) -> Selection:
    """Maximize ``sum(alpha[kept rows]) + sum(beta[kept cols])`` with no missing cell kept.

    Network: source -> row ``i`` (capacity ``alpha[i]``), column ``j`` ->
    sink (capacity ``beta[j]``), row ``i`` -> column ``j`` with a capacity
    larger than any finite cut for every missing cell.  Rows on the source
    side of the minimum cut nearest the source are kept, as are columns on
    the sink side.  The returned objective is the recounted number of valid
    cells; the weight is in ``info["weight"]`` and the cut value in
    ``info["cut"]``.
    """
    g = build_conflict_graph(mask)
    m, n = mask.shape
    total = int(g.row_weights.sum() + g.col_weights.sum())
    big = 1 + total
    if big > _INT32_MAX:
        # any value above the cheapest finite cut works
        big = 1 + min(int(g.row_weights.sum()), int(g.col_weights.sum()))
    if big > _INT32_MAX:
        raise OverflowError("matrix too large for 32-bit flow capacities")

    src, sink = m + n, m + n + 1
    e_rows, e_cols = g.edges[:, 0], g.edges[:, 1]
    tail = np.concatenate([np.full(m, src), e_rows, m + np.arange(n)])
    head = np.concatenate([np.arange(m), m + e_cols, np.full(n, sink)])
    cap = np.concatenate([g.row_weights, np.full(e_rows.size, big), g.col_weights])
    keep = cap > 0
    graph = csr_matrix((cap[keep].astype(np.int32), (tail[keep], head[keep])),
                       shape=(m + n + 2, m + n + 2))
    graph.sum_duplicates()
    res = maximum_flow(graph, src, sink, method="dinic")

    # residual capacities: cap - flow, flow is antisymmetric
    residual = (graph.astype(np.int64) - res.flow.astype(np.int64)).tocsr()
    residual.data[residual.data < 0] = 0
    residual.eliminate_zeros()
    reach = np.zeros(m + n + 2, dtype=bool)
    reach[breadth_first_order(residual, src, directed=True, return_predecessors=False)] = True

    kept_rows = np.flatnonzero(reach[:m])
    kept_cols = np.flatnonzero(~reach[m:m + n])
    weight = total - int(res.flow_value)
    return Selection.from_mask(mask, kept_rows, kept_cols, "rowcol-lp", True,
                               weight=weight, cut=int(res.flow_value))


# -- LP text export ---------------------------------------------------------

DIGITS = 15
_WRAP = 200  # expression width; LP readers cap lines at 255


def _num(q: Fraction, digits: int = DIGITS) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


def _expr(terms, digits=DIGITS, keep_zero=False) -> str:
    """Render ``[(coef, name), ...]`` as ``a x + b y - c z``."""
    parts = []
    for coef, name in terms:
        if coef == 0 and not keep_zero:
            continue
        mag = abs(coef)
        txt = name if mag == 1 else f"{_num(mag, digits)} {name}"
        if not parts:
            parts.append(txt if coef >= 0 else f"- {txt}")
        else:
            parts.append(("- " if coef < 0 else "+ ") + txt)
    if not parts:
        return "0"
    lines, cur = [], ""
    for part in parts:
        if cur and len(cur) + len(part) + 1 > _WRAP:
            lines.append(cur)
            cur = part
        else:
            cur = f"{cur} {part}" if cur else part
    lines.append(cur)
    return "\n   ".join(lines)


def _row_col_constraints(mask: ValidityMask, g: Fraction, digits: int):
    m, n = mask.shape
    b = mask.b
    out = []
    for i in range(m):
        terms = [(Fraction(1), f"r{i}")]
        terms += [((1 - int(b[i, j]) - g) / n, f"c{j}") for j in range(n)]
        out.append(f" row_{i}: {_expr(terms, digits)} <= 1")
    for j in range(n):
        terms = [(Fraction(1), f"c{j}")]
        terms += [((1 - int(b[i, j]) - g) / m, f"r{i}") for i in range(m)]
        out.append(f" col_{j}: {_expr(terms, digits)} <= 1")
    return out


def _binary_section(names):
    out = ["Binary"]
    for k in range(0, len(names), 10):
        out.append(" " + " ".join(names[k:k + 10]))
    return out


def export_rowcol_ip(mask: ValidityMask, gamma=0, digits: int = DIGITS) -> str:
    """Row/column weight integer program as LP text.

    Coefficients ``(1 - b_ij - gamma) / n`` (rows) and ``/ m`` (columns)
    are exact rationals printed to *digits* significant digits; evaluate
    the model with a feasibility tolerance of at least ``1e-12``.
    """
    g = as_fraction(gamma)
    m, n = mask.shape
    obj = [(Fraction(int(mask.alpha[i])), f"r{i}") for i in range(m)]
    obj += [(Fraction(int(mask.beta[j])), f"c{j}") for j in range(n)]
    lines = [f"\\ row/column weight model, gamma = {g}",
             "Maximize",
             f" obj: {_expr(obj, digits, keep_zero=True)}",
             "Subject To"]
    lines += _row_col_constraints(mask, g, digits)
    lines += _binary_section([f"r{i}" for i in range(m)] + [f"c{j}" for j in range(n)])
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_element_ip(mask: ValidityMask, gamma=0, digits: int = DIGITS) -> str:
    """Element-level integer program (``m + n + m*n`` binaries) as LP text."""
    g = as_fraction(gamma)
    m, n = mask.shape
    b = mask.b
    half = Fraction(1, 2)
    obj = [(Fraction(1), f"x_{i}_{j}") for i in range(m) for j in range(n) if b[i, j]]
    lines = [f"\\ element model, gamma = {g}",
             "Maximize",
             f" obj: {_expr(obj, digits) if obj else '0 x_0_0'}",
             "Subject To"]
    for i in range(m):
        for j in range(n):
            terms = [(Fraction(1), f"x_{i}_{j}"), (-half, f"r{i}"), (-half, f"c{j}")]
            lines.append(f" link_{i}_{j}: {_expr(terms, digits)} <= 0")
    lines += _row_col_constraints(mask, g, digits)
    names = [f"x_{i}_{j}" for i in range(m) for j in range(n)]
    names += [f"r{i}" for i in range(m)] + [f"c{j}" for j in range(n)]
    lines += _binary_section(names)
    lines.append("End")
    return "\n".join(lines) + "\n"
