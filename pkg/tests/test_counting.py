import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_partitions
from locograph.counting import (
    BigCountTable,
    count_graphs,
    count_table,
    euler_transform_per_type,
    euler_transform_recurrence,
    find_power_partition,
    log_big,
    partition_numbers,
    restricted_partition_count,
    restricted_partition_table,
)
from locograph.errors import ConsistencyError, ParameterError


def brute_multisets(gamma, n):
    """Count multisets of typed pieces (weight j has gamma[j] types) of total weight n."""
    types = [(j, t) for j in range(1, n + 1) for t in range(gamma[j] if j < len(gamma) else 0)]
    count = 0

    def rec(i, rem):
        nonlocal count
        if rem == 0:
            count += 1
            return
        if i == len(types):
            return
        w = types[i][0]
        for k in range(rem // w + 1):
            rec(i + 1, rem - k * w)

    rec(0, n)
    return count


@pytest.mark.parametrize("route", [euler_transform_per_type, euler_transform_recurrence])
def test_examples(route):
    assert route([0, 1], 10).b == (1,) * 11
    assert route([0] + [1] * 10, 10).b[5] == 7
    assert route([0] + [1] * 10, 10).b[8] == 22
    assert route([0] + [int(j >= 4) for j in range(1, 11)], 10).b[10] == 3


def test_brute_force_multisets():
    rng = random.Random(3)
    for _ in range(5):
        gamma = [0] + [rng.randint(0, 2) for _ in range(9)]
        want = [brute_multisets(gamma, n) for n in range(10)]
        assert list(euler_transform_per_type(gamma, 9).b) == want
        assert list(euler_transform_recurrence(gamma, 9).b) == want


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=60))
def test_routes_agree_on_random_gamma(vals):
    gamma = [0] + vals
    n = len(vals) + 5
    assert euler_transform_per_type(gamma, n).b == euler_transform_recurrence(gamma, n).b


def test_partitions_against_brute_force():
    p = partition_numbers(100)
    for n in range(0, 26):
        assert p[n] == len(brute_partitions(n))
    assert p[5] == 7 and p[8] == 22 and p[100] == 190569292


def test_restricted_partitions():
    assert restricted_partition_count(5, 1) == 7
    assert restricted_partition_count(10, 4) == 3
    assert all(restricted_partition_count(n, n) == 1 for n in range(1, 30))
    for s in (1, 2, 4, 7):
        for n in range(0, 22):
            assert restricted_partition_count(n, s) == len(brute_partitions(n, s))
    # both internal routes (small vs large min_part) agree
    assert restricted_partition_table(60, 20) == tuple(
        euler_transform_recurrence([0] + [int(j >= 20) for j in range(1, 61)], 60).b
    )
    assert restricted_partition_count(100, 4) == 1237284
    assert restricted_partition_count(1000, 4) == 7689741909994010189877860653


def test_count_graphs():
    assert count_graphs(1, 1, 8) == 2
    assert count_graphs(1, 1, 3) == 0
    assert count_graphs(2, 2, 17) == 0
    assert count_graphs(2, 2, 18) == 2
    assert count_graphs(2, 2, 36) == 17
    assert count_graphs(2, 2, 100) == 46462
    assert count_graphs(2, 2, 200) == 3706658966
    for n in (10, 57, 200):
        assert count_graphs(1, 1, n) == restricted_partition_count(n, 4)
        assert count_graphs(1, 2, n) == restricted_partition_count(n, 6)


def test_count_table_methods(census22):
    t = count_table(2, 2, 300, method="both", census=census22)
    assert t.b[:18] == (1,) + (0,) * 17 and t.b[18] == census22.gamma[18]
    assert t.monotone_step_holds(36)
    assert count_table(1, 1, 500, method="both").monotone_step_holds(4)
    with pytest.raises(ParameterError):
        count_table(1, 1, 5, method="bogus")


def test_recurrence_detects_corruption(monkeypatch):
    import locograph.counting as counting

    with pytest.raises(ParameterError):
        euler_transform_recurrence([0, -1], 3)
    real = counting._divisor_weights

    def corrupt(g):
        c = real(g)
        c[3] += 1
        return c

    monkeypatch.setattr(counting, "_divisor_weights", corrupt)
    with pytest.raises(ConsistencyError):
        euler_transform_recurrence([0, 1, 1], 6)


def brute_power_partitions(n, parts):
    """All partitions of n into the given parts, each as a non-increasing list."""
    out = []

    def rec(rem, i, acc):
        if rem == 0:
            out.append(list(acc))
            return
        for k in range(i, len(parts)):
            if parts[k] <= rem:
                acc.append(parts[k])
                rec(rem - parts[k], k, acc)
                acc.pop()

    rec(n, 0, [])
    return out


def test_power_partitions():
    assert find_power_partition(9, 2, 2) == [9]
    assert find_power_partition(26, 2, 2) is None
    assert find_power_partition(100, 2, 2) == [100]
    assert find_power_partition(0, 2, 2) == []
    squares = sorted((m * m for m in range(3, 12)), reverse=True)
    for n in range(0, 121):
        parts = find_power_partition(n, 2, 2)
        brute = brute_power_partitions(n, squares)
        if parts is None:
            assert not brute
        else:
            assert parts == max(brute)


def test_power_partition_witnesses_positive_counts(census22):
    # a torus C_m x C_m with m >= 6 lies in the census, so a decomposition
    # into squares of side >= 6 forces b(n) > 0
    t = count_table(2, 2, 400, census=census22)
    hits = [n for n in range(1, 401) if find_power_partition(n, 2, 5) is not None]
    assert hits[:4] == [36, 49, 64, 72]
    assert all(t.b[n] > 0 for n in hits)


def test_log_big():
    assert log_big(1) == 0
    assert log_big(10**400) == pytest.approx(400 * math.log(10), rel=1e-15)
    assert BigCountTable("x", (1, 0, 2), "t").log_b(1) == float("-inf")
