"""Metric function tests."""

import math

import pytest

from orbitsampler import l1_l2, nrmse, topk_detection


def test_nrmse_examples():
    assert nrmse([9, 11], 10) == pytest.approx(0.1)
    assert nrmse([10, 10, 10], 10) == 0.0
    assert nrmse([1, 2], 0) is None
    with pytest.raises(ValueError):
        nrmse([5], 5)


def test_l1_l2_examples():
    assert l1_l2([1, 1], [2, 2]) == (0.0, 0.0)
    l1, l2 = l1_l2([0.6, 0.4], [0.5, 0.5])
    assert l1 == pytest.approx(0.2)
    assert l2 == pytest.approx(math.sqrt(2 * 0.1**2))
    # moving eps of normalized mass doubles into the L1 distance
    eps = 0.01
    l1, _ = l1_l2([0.5 + eps, 0.5 - eps], [0.5, 0.5])
    assert l1 == pytest.approx(2 * eps)
    with pytest.raises(ValueError):
        l1_l2([0, 0], [1, 1])
    with pytest.raises(ValueError):
        l1_l2([1, 2, 3], [1, 2])


def test_topk_examples():
    exact = list(range(30, 0, -1))  # orbit 1 is largest
    assert topk_detection(exact, exact, 5) == 5
    est = list(exact)
    est[0], est[5] = est[5], est[0]  # swap ranks 1 and 6
    assert topk_detection(est, exact, 5) == 4
    assert topk_detection(est, exact, 30) == 30
    with pytest.raises(ValueError):
        topk_detection(exact, exact, 31)


def test_topk_tie_breaks_by_orbit_id():
    # two tied values: the smaller orbit id wins the last slot in both
    # rankings, so identical vectors always agree
    vec = [5, 5, 1]
    assert topk_detection(vec, vec, 1) == 1
    est = [5, 5, 1]
    exact = [5, 5, 1]
    assert topk_detection(est, exact, 2) == 2
    # ordering is (value desc, id asc): orbit 1 beats orbit 2 at equal value
    assert topk_detection([5, 5, 6], [6, 5, 5], 1) == 0
