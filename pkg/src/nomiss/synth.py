"""Synthetic data with controlled missingness.

MCAR
    each cell is missing independently with probability ``rate``.
MAR
    column 0 is an always-observed covariate; cells of row ``i`` in the
    other columns go missing with probability ``rate * w_i`` where ``w_i``
    grows linearly with the rank of row ``i``'s covariate (mean 1, clipped
    to probability 1).
MNAR
    the ``floor(rate * m * n)`` smallest values are missing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mask import ValidityMask

__all__ = ["MaskSpec", "generate", "random_mask", "write_delimited"]

MECHANISMS = ("MCAR", "MAR", "MNAR")


@dataclass(frozen=True)
class MaskSpec:
    mechanism: str = "MCAR"
    rate: float = 0.05
    seed: int = 0
    m: int = 100
    n: int = 20

    def __post_init__(self):
        mech = self.mechanism.upper()
        if mech not in MECHANISMS:
            raise ValueError(f"unknown mechanism {self.mechanism!r}")
        object.__setattr__(self, "mechanism", mech)
        if not 0 <= self.rate < 1:
            raise ValueError("rate must lie in [0, 1)")
        if self.m < 1 or self.n < 1:
            raise ValueError("shape must be at least 1 x 1")


def generate(spec: MaskSpec):
    """Return ``(values, valid)``: standard-normal values and the validity flags."""
    rng = np.random.default_rng(spec.seed)
    m, n = spec.m, spec.n
    values = rng.standard_normal((m, n))
    if spec.mechanism == "MCAR":
        missing = rng.random((m, n)) < spec.rate
    elif spec.mechanism == "MAR":
        ranks = np.argsort(np.argsort(values[:, 0], kind="stable"), kind="stable")
        w = 2.0 * ranks / (m - 1) if m > 1 else np.ones(1)
        prob = np.clip(spec.rate * w, 0.0, 1.0)
        missing = rng.random((m, n)) < prob[:, None]
        missing[:, 0] = False
    else:
        k = int(np.floor(spec.rate * m * n))
        flat = np.zeros(m * n, dtype=bool)
        flat[np.argsort(values, axis=None, kind="stable")[:k]] = True
        missing = flat.reshape(m, n)
    return values, ~missing


def random_mask(m: int, n: int, rate: float, seed: int) -> ValidityMask:
    """MCAR validity mask, a shortcut for tests and demos."""
    return ValidityMask(generate(MaskSpec("MCAR", rate, seed, m, n))[1])


def write_delimited(path, values, valid, token: str = "NA", delimiter: str = ",",
                    fmt: str = "{:.6g}") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for vrow, ok in zip(values, valid):
            fh.write(delimiter.join(fmt.format(v) if o else token for v, o in zip(vrow, ok)))
            fh.write("\n")
