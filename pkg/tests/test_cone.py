"""Cone-order classification: examples plus property tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vvilab.cone import ConeStatus, classify, in_set, membership_slack


def test_classify_basic_examples():
    assert classify([-1.0, -2.0], 0.0) is ConeStatus.STRICTLY_NEGATIVE
    assert classify([0.0, 0.0], 0.0) is ConeStatus.ZERO
    assert classify([1.0, -1.0], 0.0) is ConeStatus.INCOMPARABLE
    assert classify([-1.0, 0.0], 0.0) is ConeStatus.NEGATIVE_DOMINATED
    assert classify([2.0, 0.0], 0.0) is ConeStatus.POSITIVE_DOMINATED
    assert classify([0.5, 3.0], 0.0) is ConeStatus.STRICTLY_POSITIVE


def test_tolerance_band_absorbs_small_entries():
    assert classify([1e-12, -1e-12], 1e-9) is ConeStatus.ZERO
    assert classify([1e-12, -1.0], 1e-9) is ConeStatus.NEGATIVE_DOMINATED
    assert classify([2e-9, -1.0], 1e-9) is ConeStatus.INCOMPARABLE


def test_in_set_boundary_examples():
    assert in_set([-1.0, 0.0], "neg_cone_minus_zero", 0.0)
    assert not in_set([-1.0, 0.0], "neg_interior", 0.0)
    assert in_set([-1.0, -0.5], "neg_interior", 0.0)
    assert not in_set([0.0, 0.0], "neg_cone_minus_zero", 0.0)


def test_monotone_example_sum_not_in_positive_cone():
    # the worked value at p=1, q=e: (-1-e, -1)
    v = [-1.0 - math.e, -1.0]
    assert not in_set(v, "pos_cone_minus_zero", 0.0)


def test_extended_values():
    assert classify([math.inf, math.inf]) is ConeStatus.STRICTLY_POSITIVE
    assert classify([-math.inf, -1.0]) is ConeStatus.STRICTLY_NEGATIVE
    assert classify([math.inf, -math.inf]) is ConeStatus.INCOMPARABLE
    assert classify([math.inf, 0.0]) is ConeStatus.POSITIVE_DOMINATED


def test_nan_rejected():
    with pytest.raises(ValueError):
        classify([math.nan, 1.0])
    with pytest.raises(ValueError):
        in_set([0.0, math.nan], "neg_interior")


def test_negative_tol_rejected():
    with pytest.raises(ValueError):
        classify([1.0], -1e-3)


_MIRROR = {
    ConeStatus.STRICTLY_NEGATIVE: ConeStatus.STRICTLY_POSITIVE,
    ConeStatus.NEGATIVE_DOMINATED: ConeStatus.POSITIVE_DOMINATED,
    ConeStatus.ZERO: ConeStatus.ZERO,
    ConeStatus.POSITIVE_DOMINATED: ConeStatus.NEGATIVE_DOMINATED,
    ConeStatus.STRICTLY_POSITIVE: ConeStatus.STRICTLY_NEGATIVE,
    ConeStatus.INCOMPARABLE: ConeStatus.INCOMPARABLE,
}

finite_vectors = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=5)
tols = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@given(finite_vectors, tols)
@settings(max_examples=300, deadline=None)
def test_mirror_symmetry(v, tol):
    arr = np.asarray(v)
    assert classify(-arr, tol) is _MIRROR[classify(arr, tol)]


@given(finite_vectors, tols)
@settings(max_examples=300, deadline=None)
def test_partition_exactly_one_status(v, tol):
    status = classify(v, tol)
    assert status in ConeStatus
    # membership of the four sets follows the single status
    member_count = sum(in_set(v, name, tol) for name in
                       ("neg_cone_minus_zero", "pos_cone_minus_zero"))
    assert member_count <= 1


@given(finite_vectors, st.floats(min_value=1e-9, max_value=1.0), st.floats(min_value=0.0, max_value=0.999))
@settings(max_examples=300, deadline=None)
def test_interior_membership_monotone_in_tol(v, t1, frac):
    t2 = t1 * frac  # t2 < t1
    for name in ("neg_interior", "pos_interior"):
        if in_set(v, name, t1):
            assert in_set(v, name, t2)


@given(finite_vectors, tols)
@settings(max_examples=200, deadline=None)
def test_membership_slack_sign_agrees(v, tol):
    for name in ("neg_interior", "pos_interior", "neg_cone_minus_zero", "pos_cone_minus_zero"):
        slack = membership_slack(v, name, tol)
        if slack > 0:
            assert in_set(v, name, tol)
        elif slack < 0:
            assert not in_set(v, name, tol)
