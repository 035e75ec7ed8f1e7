"""Exact counts of graphs in the model via the multiset (Euler) transform.

A gamma sequence is indexed by weight: ``gamma[j]`` is the number of connected
types of weight j; entry 0 is ignored and missing entries count as 0.  The
counts b(n) are the coefficients of prod_j (1 - z^j)^(-gamma[j]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, ParameterError

__all__ = [
    "BigCountTable",
    "euler_transform_per_type",
    "euler_transform_recurrence",
    "model_gamma",
    "count_table",
    "count_graphs",
    "partition_numbers",
    "restricted_partition_table",
    "restricted_partition_count",
    "find_power_partition",
    "log_big",
]


def log_big(x: int) -> float:
    """Natural log of a positive integer of any size."""
    if x <= 0:
        raise ValueError("log of non-positive integer")
    bits = x.bit_length()
    if bits < 1000:
        return math.log(x)
    shift = bits - 64
    return math.log(x >> shift) + shift * math.log(2)


@dataclass(frozen=True)
class BigCountTable:
    gamma_source: str
    b: tuple[int, ...]
    method: str

    @property
    def n_max(self) -> int:
        return len(self.b) - 1

    def __getitem__(self, n: int) -> int:
        return self.b[n]

    def log_b(self, n: int) -> float:
        return log_big(self.b[n]) if self.b[n] > 0 else float("-inf")

    def cumulative(self) -> list[int]:
        """B(n) = sum_{k <= n} b(k)."""
        out, acc = [], 0
        for v in self.b:
            acc += v
            out.append(acc)
        return out

    def monotone_step_holds(self, step: int) -> bool:
        """b(n) >= b(n - step) across the table; holds when a component of
        order ``step`` always exists."""
        return all(self.b[n] >= self.b[n - step] for n in range(step, len(self.b)))


def _gamma_list(gamma: Sequence[int], n_max: int) -> list[int]:
    g = [int(gamma[j]) if j < len(gamma) else 0 for j in range(n_max + 1)]
    if any(v < 0 for v in g):
        raise ParameterError("gamma must be non-negative")
    g[0] = 0
    return g


def euler_transform_per_type(gamma: Sequence[int], n_max: int, source: str = "synthetic") -> BigCountTable:
    """Fold in (1 - z^j)^(-gamma_j) one weight class at a time.

    The factor's series is sum_k C(gamma_j + k - 1, k) z^(jk)."""
    g = _gamma_list(gamma, n_max)
    b = np.zeros(n_max + 1, dtype=object)
    b[:] = 0
    b[0] = 1
    for j in range(1, n_max + 1):
        gj = g[j]
        if gj == 0:
            continue
        old = b.copy()
        coef = 1
        for k in range(1, n_max // j + 1):
            coef = coef * (gj + k - 1) // k
            shift = j * k
            b[shift:] += coef * old[: n_max + 1 - shift]
    return BigCountTable(source, tuple(int(v) for v in b), "per-type DP")


def _divisor_weights(g: list[int]) -> list[int]:
    """c(m) = sum_{j | m} j g[j]."""
    n_max = len(g) - 1
    c = [0] * (n_max + 1)
    for j in range(1, n_max + 1):
        if g[j]:
            for m in range(j, n_max + 1, j):
                c[m] += j * g[j]
    return c


def euler_transform_recurrence(gamma: Sequence[int], n_max: int, source: str = "synthetic") -> BigCountTable:
    """n b(n) = sum_{m=1}^{n} c(m) b(n-m) with c(m) = sum_{j | m} j gamma_j."""
    c = _divisor_weights(_gamma_list(gamma, n_max))
    b = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        total = sum(c[m] * b[n - m] for m in range(1, n + 1) if c[m])
        q, rem = divmod(total, n)
        if rem:
            raise ConsistencyError(f"non-exact division at n={n}; gamma is corrupt")
        b[n] = q
    return BigCountTable(source, tuple(b), "euler-recurrence")


def model_gamma(d: int, r: int, n_max: int, census=None) -> list[int]:
    """gamma(0..n_max) of the (d, r) model, building the census if needed."""
    if census is None or census.max_index < n_max:
        from .census import build_census

        census = build_census(d, r, n_max)
    return list(census.gamma[: n_max + 1])


def count_table(d: int, r: int, n_max: int, *, method: str = "recurrence", census=None) -> BigCountTable:
    """b(0..n_max) for the (d, r) model.

    ``method`` is "recurrence", "per-type", or "both" (computes both and
    raises ConsistencyError unless they agree)."""
    g = model_gamma(d, r, n_max, census)
    src = f"census d={d} r={r}"
    if method == "recurrence":
        return euler_transform_recurrence(g, n_max, src)
    if method == "per-type":
        return euler_transform_per_type(g, n_max, src)
    if method == "both":
        t1 = euler_transform_per_type(g, n_max, src)
        t2 = euler_transform_recurrence(g, n_max, src)
        if t1.b != t2.b:
            raise ConsistencyError("Euler transform routes disagree")
        return t2
    raise ParameterError(f"unknown method {method!r}")


def count_graphs(d: int, r: int, n: int, *, census=None) -> int:
    """Number of unlabelled n-vertex graphs in the (d, r) model."""
    if n < 0:
        raise ParameterError("n must be >= 0")
    return count_table(d, r, n, census=census).b[n]


@lru_cache(maxsize=8)
def partition_numbers(n_max: int) -> tuple[int, ...]:
    """p(0..n_max) by Euler's pentagonal number recurrence."""
    p = [1] + [0] * n_max
    pents = []
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n_max:
            break
        sign = 1 if k % 2 else -1
        pents.append((g1, sign))
        g2 = k * (3 * k + 1) // 2
        if g2 <= n_max:
            pents.append((g2, sign))
        k += 1
    for n in range(1, n_max + 1):
        total = 0
        for g, sign in pents:
            if g > n:
                break
            total += sign * p[n - g]
        p[n] = total
    return tuple(p)


@lru_cache(maxsize=8)
def restricted_partition_table(n_max: int, min_part: int) -> tuple[int, ...]:
    """p_{>=min_part}(0..n_max)."""
    if min_part < 1:
        raise ParameterError("min_part must be >= 1")
    if min_part - 1 <= n_max - min_part + 1:
        # p(n) times prod_{j < min_part} (1 - z^j)
        q = list(partition_numbers(n_max))
        for j in range(1, min_part):
            for m in range(n_max, j - 1, -1):
                q[m] -= q[m - j]
        return tuple(q)
    q = [1] + [0] * n_max
    for j in range(min_part, n_max + 1):
        for m in range(j, n_max + 1):
            q[m] += q[m - j]
    return tuple(q)


def restricted_partition_count(n: int, min_part: int) -> int:
    if n < 0:
        raise ParameterError("n must be >= 0")
    return restricted_partition_table(n, min_part)[n]


def find_power_partition(n: int, d: int, s: int) -> list[int] | None:
    """Lexicographically greatest partition of n into d-th powers m^d, m > s.

    Returns the parts in non-increasing order, or None if none exists."""
    if n < 0:
        raise ParameterError("n must be >= 0")
    parts = []
    m = s + 1
    while m**d <= n:
        parts.append(m**d)
        m += 1
    ok = [False] * (n + 1)
    ok[0] = True
    for v in range(1, n + 1):
        ok[v] = any(p <= v and ok[v - p] for p in parts)
    if not ok[n]:
        return None
    out, rem = [], n
    while rem:
        # Greedy is lex-greatest: a feasible remainder never needs a part
        # larger than the one just taken, or that part would have come first.
        p = max(p for p in parts if p <= rem and ok[rem - p])
        out.append(p)
        rem -= p
    return out
