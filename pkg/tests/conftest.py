import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from nomiss.mask import ValidityMask  # noqa: E402
from nomiss.synth import random_mask  # noqa: E402

SUITE_RATES = (0.01, 0.10, 0.40, 0.80)


def mask_of(*rows):
    """``mask_of("1.1", "111")``: '.' marks a missing cell."""
    return ValidityMask([[ch != "." for ch in r] for r in rows])


M1_TEXT = "1,NA,3\n4,5,6"
M2_TEXT = "1,2,3,NA\n4,5,NA,6\n7,8,9,10\n"
M3_TEXT = "1,2,3\n4,5,NA\n6,7,8\nNA,9,10\n"


@pytest.fixture
def M1():
    return mask_of("1.1", "111")


@pytest.fixture
def M2():
    return mask_of("111.", "11.1", "1111")


@pytest.fixture
def M3():
    return mask_of("111", "11.", "111", ".11")


def suite_mask(seed, max_dim=12, rates=SUITE_RATES):
    """Seeded random mask with each side in [1, max_dim], rate cycling through *rates*."""
    rng = np.random.default_rng(10_000 + seed)
    m = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_dim + 1))
    return random_mask(m, n, rates[seed % len(rates)], seed)


@pytest.fixture
def write(tmp_path):
    def _write(text, name="data.csv"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p
    return _write


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
