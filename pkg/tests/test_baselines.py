from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from nomiss.baselines import automiss, featurewise, listwise, naive
from nomiss.mask import ValidityMask, feasibility_check

from conftest import mask_of
from oracles import max_allvalid

masks = st.tuples(st.integers(1, 8), st.integers(1, 8)).flatmap(
    lambda s: arrays(bool, s)).map(ValidityMask)
ALL_VALID = ValidityMask(np.ones((3, 4)))


def test_listwise_m1(M1):
    s = listwise(M1)
    assert (s.kept_rows, s.kept_cols, s.objective) == ((1,), (0, 1, 2), 3)


def test_listwise_every_row_missing():
    s = listwise(mask_of("1.", ".1"))
    assert s.kept_rows == () and s.objective == 0


def test_featurewise_m1(M1):
    s = featurewise(M1)
    assert (s.kept_rows, s.kept_cols, s.objective) == ((0, 1), (0, 2), 4)


def test_featurewise_every_column_missing():
    assert featurewise(mask_of("1.", ".1")).objective == 0


@pytest.mark.parametrize("fn", [listwise, featurewise, lambda mk: naive(mk, 0.3),
                                lambda mk: automiss(mk, 0)])
def test_all_valid_keeps_everything(fn):
    s = fn(ALL_VALID)
    assert s.shape == (3, 4) and s.objective == 12


def test_naive_m1(M1):
    s = naive(M1, 0.05)
    assert (s.kept_rows, s.kept_cols, s.objective) == ((1,), (0, 2), 2)
    assert naive(M1, 0.5).objective == 5


def test_naive_can_overshoot():
    # column 2 is 2/5 missing on the full matrix but 2/4 once row 4 goes
    mk = mask_of("11.", "11.", "111", "111", "..1")
    s = naive(mk, "0.4")
    assert s.kept_rows == (0, 1, 2, 3) and s.kept_cols == (0, 1, 2)
    assert feasibility_check(mk, s, "0.4") != []


def test_automiss_m1(M1):
    s = automiss(M1, 0)
    assert (s.kept_rows, s.kept_cols, s.objective) == ((0, 1), (0, 2), 4)
    assert automiss(M1, 0.2).objective == 5


@settings(max_examples=150, deadline=None)
@given(masks)
def test_baselines_never_beat_the_optimum(mk):
    best = max_allvalid(mk.b)
    for s in (listwise(mk), featurewise(mk), automiss(mk, 0)):
        assert feasibility_check(mk, s, 0) == []
        assert s.objective <= best


@settings(max_examples=100, deadline=None)
@given(masks, st.sampled_from(["0", "0.1", "0.3", "0.6"]))
def test_automiss_meets_overall_target(mk, tau):
    s = automiss(mk, tau)
    cells = len(s.kept_rows) * len(s.kept_cols)
    missing = cells - s.objective
    assert missing <= Fraction(tau) * cells
