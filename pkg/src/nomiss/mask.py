"""Validity masks, selections and delimited-file I/O.

A data matrix is reduced to a boolean *validity mask* ``b`` where
``b[i, j]`` is true iff cell ``(i, j)`` holds a value.  Every algorithm in
the package consumes a :class:`ValidityMask` and produces a
:class:`Selection` (kept rows and kept columns).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

__all__ = [
    "CleanConfig",
    "EmptyInputError",
    "MaskError",
    "ParseError",
    "Selection",
    "ValidityMask",
    "Violation",
    "apply_selection",
    "as_fraction",
    "feasibility_check",
    "load_matrix",
    "orient",
]

DEFAULT_MISSING_TOKENS = ("NA", "", "?")

Rational = Union[int, float, str, Fraction]


class MaskError(ValueError):
    """Base class for data errors raised while reading or writing matrices."""


class ParseError(MaskError):
    pass


class EmptyInputError(MaskError):
    pass


def as_fraction(value: Rational, name: str = "gamma") -> Fraction:
    """Convert *value* to an exact fraction in ``[0, 1)``.

    Floats go through their shortest ``repr`` so that ``0.05`` becomes
    exactly ``1/20`` rather than the nearest binary double.
    """
    if isinstance(value, Fraction):
        q = value
    elif isinstance(value, float):
        q = Fraction(repr(value))
    else:
        q = Fraction(value)
    if not 0 <= q < 1:
        raise ValueError(f"{name} must lie in [0, 1), got {value!r}")
    return q


@dataclass(frozen=True)
class CleanConfig:
    gamma: Fraction = Fraction(0)
    missing_tokens: tuple = DEFAULT_MISSING_TOKENS
    has_header: bool = False
    has_row_ids: bool = False
    delimiter: str = ","

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        object.__setattr__(self, "missing_tokens", tuple(self.missing_tokens))
        if len(self.delimiter) != 1:
            raise ValueError("delimiter must be a single character")
        if not self.missing_tokens:
            raise ValueError("missing_tokens must not be empty")


class ValidityMask:
    """Immutable ``m x n`` boolean validity matrix with cached counts.

    Attributes
    ----------
    b : ndarray of bool, shape (m, n)
        Read-only validity flags.
    alpha : ndarray of int64
        Valid elements per row.
    beta : ndarray of int64
        Valid elements per column.
    lam : ndarray of int64
        Missing elements per row (``n - alpha``).
    """

    def __init__(self, b, row_labels=None, col_labels=None):
        arr = np.array(b, dtype=bool, copy=True)
        if arr.ndim != 2:
            raise ValueError("validity mask must be two-dimensional")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise EmptyInputError("validity mask must have at least one row and one column")
        arr.setflags(write=False)
        self.b = arr
        self.m, self.n = arr.shape
        self.alpha = arr.sum(axis=1, dtype=np.int64)
        self.beta = arr.sum(axis=0, dtype=np.int64)
        self.lam = self.n - self.alpha
        for a in (self.alpha, self.beta, self.lam):
            a.setflags(write=False)
        self.row_labels = None if row_labels is None else tuple(row_labels)
        self.col_labels = None if col_labels is None else tuple(col_labels)
        if self.row_labels is not None and len(self.row_labels) != self.m:
            raise ValueError("row_labels length does not match row count")
        if self.col_labels is not None and len(self.col_labels) != self.n:
            raise ValueError("col_labels length does not match column count")

    @property
    def shape(self):
        return (self.m, self.n)

    @property
    def total_valid(self) -> int:
        return int(self.alpha.sum())

    @property
    def total_missing(self) -> int:
        return self.m * self.n - self.total_valid

    @cached_property
    def bT(self) -> np.ndarray:
        # contiguous transpose for fast column access
        t = np.ascontiguousarray(self.b.T)
        t.setflags(write=False)
        return t

    @cached_property
    def row_bits(self) -> tuple:
        """Rows packed into Python integers; bit ``j`` is set iff ``b[i, j]``.

        Intersections of rows are then ``a & b`` and their sizes
        ``(a & b).bit_count()``.
        """
        packed = np.packbits(self.b, axis=1, bitorder="little")
        return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)

    def bits_of(self, cols) -> int:
        """Pack a column index collection into a bitset integer."""
        flags = np.zeros(self.n, dtype=bool)
        flags[np.asarray(list(cols), dtype=np.int64)] = True
        return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")

    def transpose(self) -> "ValidityMask":
        return ValidityMask(self.b.T, row_labels=self.col_labels, col_labels=self.row_labels)

    def count_valid(self, rows, cols) -> int:
        rows = np.asarray(sorted(rows), dtype=np.int64)
        cols = np.asarray(sorted(cols), dtype=np.int64)
        if rows.size == 0 or cols.size == 0:
            return 0
        return int(self.b[np.ix_(rows, cols)].sum())

    def __eq__(self, other):
        if not isinstance(other, ValidityMask):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.b, other.b))

    def __hash__(self):
        return hash((self.shape, self.b.tobytes()))

    def __repr__(self):
        return f"ValidityMask(m={self.m}, n={self.n}, missing={self.total_missing})"


@dataclass(frozen=True)
class Selection:
    """Kept rows and columns of a mask.

    ``objective`` is always the number of valid cells in the kept
    cross-section; use :meth:`from_mask` so it is recounted rather than
    taken from the producing algorithm.  ``optimal`` is ``True`` only when an
    exact solver finished, ``False`` when it stopped early, ``None`` for
    heuristics.
    """

    kept_rows: tuple
    kept_cols: tuple
    objective: int
    algorithm: str = ""
    optimal: Optional[bool] = None
    info: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_mask(cls, mask: ValidityMask, rows, cols, algorithm="", optimal=None, **info):
        rows = tuple(sorted(int(i) for i in set(rows)))
        cols = tuple(sorted(int(j) for j in set(cols)))
        if rows and not (0 <= rows[0] and rows[-1] < mask.m):
            raise IndexError("kept row index out of range")
        if cols and not (0 <= cols[0] and cols[-1] < mask.n):
            raise IndexError("kept column index out of range")
        return cls(rows, cols, mask.count_valid(rows, cols), algorithm, optimal, dict(info))

    @property
    def shape(self):
        return (len(self.kept_rows), len(self.kept_cols))

    def transposed(self) -> "Selection":
        return Selection(self.kept_cols, self.kept_rows, self.objective, self.algorithm,
                         self.optimal, dict(self.info))


def orient(mask: ValidityMask):
    """Return ``(mask, transposed)`` with the mask having no more rows than columns."""
    if mask.m > mask.n:
        return mask.transpose(), True
    return mask, False


class Violation(NamedTuple):
    kind: str  # "row" or "col"
    index: int
    missing: int
    total: int


def feasibility_check(mask: ValidityMask, sel: Selection, gamma: Rational = 0) -> list:
    """List kept rows/columns whose missing fraction in the kept cross-section exceeds *gamma*.

    Comparison is exact: a line with ``k`` missing cells out of ``t`` violates
    iff ``k * q > p * t`` where ``gamma = p / q``.
    """
    g = as_fraction(gamma)
    p, q = g.numerator, g.denominator
    rows = np.asarray(sel.kept_rows, dtype=np.int64)
    cols = np.asarray(sel.kept_cols, dtype=np.int64)
    if rows.size == 0 or cols.size == 0:
        return []
    sub = ~mask.b[np.ix_(rows, cols)]
    out = []
    row_miss = sub.sum(axis=1)
    for i, k in zip(rows, row_miss):
        if int(k) * q > p * cols.size:
            out.append(Violation("row", int(i), int(k), int(cols.size)))
    col_miss = sub.sum(axis=0)
    for j, k in zip(cols, col_miss):
        if int(k) * q > p * rows.size:
            out.append(Violation("col", int(j), int(k), int(rows.size)))
    return out


# -- delimited files --------------------------------------------------------

_WS = " \t\r\n\f\v"


def _split_lines(text: str):
    """Split into (content, line_ending) pairs, dropping trailing blank lines."""
    lines = text.splitlines(keepends=True)
    while lines and not lines[-1].strip(_WS):
        lines.pop()
    out = []
    for line in lines:
        body = line.rstrip("\r\n")
        out.append((body, line[len(body):]))
    return out


def _read_table(path, config: CleanConfig):
    with open(path, "r", newline="", encoding="utf-8") as fh:
        text = fh.read()
    lines = _split_lines(text)
    header = None
    if config.has_header and lines:
        header = lines[0]
        lines = lines[1:]
    rows = [body.split(config.delimiter) for body, _ in lines]
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    width = len(rows[0])
    offset = 2 if config.has_header else 1
    for k, fields in enumerate(rows):
        if len(fields) != width:
            raise ParseError(
                f"{path}: line {k + offset} has {len(fields)} fields, expected {width}")
    ncols = width - (1 if config.has_row_ids else 0)
    if ncols < 1:
        raise EmptyInputError(f"{path}: no data columns")
    if header is not None:
        hfields = header[0].split(config.delimiter)
        if len(hfields) != width:
            raise ParseError(f"{path}: header has {len(hfields)} fields, expected {width}")
        header = (hfields, header[1])
    return header, rows, lines


def load_matrix(path, config: Optional[CleanConfig] = None) -> ValidityMask:
    """Read a delimited text file into a :class:`ValidityMask`.

    A cell is missing iff its whitespace-trimmed text is one of
    ``config.missing_tokens`` (exact, case-sensitive match).
    """
    config = config or CleanConfig()
    header, rows, _ = _read_table(path, config)
    tokens = frozenset(config.missing_tokens)
    start = 1 if config.has_row_ids else 0
    b = np.array([[f.strip(_WS) not in tokens for f in fields[start:]] for fields in rows],
                 dtype=bool)
    row_labels = [fields[0].strip(_WS) for fields in rows] if config.has_row_ids else None
    col_labels = [h.strip(_WS) for h in header[0][start:]] if header is not None else None
    return ValidityMask(b, row_labels=row_labels, col_labels=col_labels)


def apply_selection(path, config: Optional[CleanConfig], sel: Selection, out_path) -> None:
    """Write the kept rows/columns of *path* to *out_path*, preserving cell text.

    Indices in *sel* refer to the file as read (before any orientation).
    Row order, column order, line endings, the header and the row-id column
    are kept.
    """
    config = config or CleanConfig()
    header, rows, lines = _read_table(path, config)
    start = 1 if config.has_row_ids else 0
    ncols = len(rows[0]) - start
    if sel.kept_rows and (min(sel.kept_rows) < 0 or max(sel.kept_rows) >= len(rows)):
        raise IndexError("selection row index out of range for file")
    if sel.kept_cols and (min(sel.kept_cols) < 0 or max(sel.kept_cols) >= ncols):
        raise IndexError("selection column index out of range for file")
    keep = list(range(start)) + [start + j for j in sorted(sel.kept_cols)]
    d = config.delimiter

    out = []
    if header is not None:
        out.append((d.join(header[0][k] for k in keep), header[1]))
    for i in sorted(sel.kept_rows):
        out.append((d.join(rows[i][k] for k in keep), lines[i][1]))
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        for idx, (body, end) in enumerate(out):
            # a line that was last in the source may now be followed by others
            if not end and idx < len(out) - 1:
                end = "\n"
            fh.write(body + end)


def recount(mask: ValidityMask, sel: Selection) -> Selection:
    """Rebuild *sel* with its objective recounted against *mask*."""
    return Selection.from_mask(mask, sel.kept_rows, sel.kept_cols, sel.algorithm,
                               sel.optimal, **sel.info)


def full_selection(mask: ValidityMask, algorithm: str = "") -> Selection:
    return Selection(tuple(range(mask.m)), tuple(range(mask.n)), mask.total_valid, algorithm)


def mask_from_rows(rows: Sequence[str]) -> ValidityMask:
    """Build a mask from strings such as ``["1.1", "11."]`` ('.' marks missing)."""
    return ValidityMask([[ch != "." for ch in r] for r in rows])
