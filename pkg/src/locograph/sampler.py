"""Exact uniform sampling from the (pure-translation) r-locally L^d model.

A sample is a multiset of connected types, i.e. a weight profile
{j: k_j} with sum j k_j = n plus, per weight class, a multiset of k_j types
out of gamma(j).  Two exact engines produce it:

* ``staged``: walk j = n..1 choosing k_j with probability
  C(gamma_j + k - 1, k) N_{<j}(m - jk) / N_{<=j}(m), then unrank the types.
  Rows N_{<=j} are checkpointed every ~sqrt(n) weights and recomputed per
  block, so memory is O(n^1.5) and all samples of a batch share one pass.
* ``pointing``: the Nijenhuis-Wilf recursion m b(m) = sum_t c(t) b(m - t).
  Choices are located with floats and certified exactly; uncertain cases
  fall back to an exact big-integer scan.  Needs only b(0..n).

All randomness comes from PCG64 streams seeded by SeedSequence([seed, index]);
every probability is a ratio of exact integers realised by rejection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Sequence

import numpy as np

from .census import CensusTable, build_census
from .counting import euler_transform_recurrence, log_big, restricted_partition_table
from .errors import ConsistencyError, EmptySupportError, ParameterError
from .lattice import OrbitClass
from .quotient import LocalGraph, aut_lower_bound_log, build_quotient, disjoint_union, is_r_locally_lattice

__all__ = [
    "make_rng",
    "randbelow",
    "unrank_multiset",
    "SampleSpec",
    "SampleReport",
    "GraphSampler",
    "sample_graph",
    "sample_restricted_partition",
    "PartitionSampler",
    "batch_experiment",
    "BatchResult",
    "aggregate_reports",
    "expected_local_limit_fraction",
]

STAGED_MAX_N = 3000
_EPS = 1e-9


# -- exact randomness --------------------------------------------------------


def make_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent PCG64 stream for sample ``index`` of a run seeded by ``seed``."""
    if seed < 0 or index < 0:
        raise ParameterError("seed and index must be non-negative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def randbelow(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in [0, n) for arbitrary-size n, by rejection on raw 64-bit words."""
    if n <= 0:
        raise ValueError("randbelow needs n >= 1")
    if n == 1:
        return 0
    bits = n.bit_length()
    words = (bits + 63) // 64
    drop = 64 * words - bits
    bg = rng.bit_generator
    while True:
        if words == 1:
            x = int(bg.random_raw()) >> drop
        else:
            raw = np.asarray(bg.random_raw(words), dtype="<u8")
            x = int.from_bytes(raw.tobytes(), "little") >> drop
        if x < n:
            return x


def _largest_below(i: int, lo: int, hi: int, u: int) -> int:
    """Largest c in [lo, hi] with C(c, i) <= u (C(lo, i) <= u assumed)."""
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if math.comb(mid, i) <= u:
            lo = mid
        else:
            hi = mid - 1
    return lo


def unrank_multiset(g: int, k: int, rank: int) -> list[int]:
    """The rank-th k-multiset of {0..g-1}, 0 <= rank < C(g+k-1, k), sorted.

    Multisets correspond to k-subsets of {0..g+k-2}, unranked in colex order."""
    total = math.comb(g + k - 1, k)
    if not 0 <= rank < total:
        raise ValueError("rank out of range")
    top = g + k - 2
    picks = []
    for i in range(k, 0, -1):
        c = _largest_below(i, i - 1, top, rank)
        picks.append(c)
        rank -= math.comb(c, i)
        top = c - 1
    picks.reverse()
    return [c - pos for pos, c in enumerate(picks)]


# -- engines -----------------------------------------------------------------


def _fold(row: list[int], j: int, g: int, n: int) -> list[int]:
    """row * (1 - z^j)^(-g), truncated at degree n."""
    if g == 0:
        return row
    src = np.array(row, dtype=object)
    out = src.copy()
    coef = 1
    for k in range(1, n // j + 1):
        coef = coef * (g + k - 1) // k
        out[j * k :] += coef * src[: n + 1 - j * k]
    return out.tolist()


class _StagedEngine:
    def __init__(self, gamma: Sequence[int], n: int, check: bool = False) -> None:
        self.n = n
        self.g = [int(gamma[j]) if 0 < j < len(gamma) else 0 for j in range(n + 1)]
        self.block = max(1, math.isqrt(n))
        self.check = check
        row = [1] + [0] * n
        self.checkpoints = {0: row}
        for j in range(1, n + 1):
            row = _fold(row, j, self.g[j], n)
            if j % self.block == 0:
                self.checkpoints[j] = row
        self.total = row[n]

    def _rows(self, lo: int, hi: int) -> list[list[int]]:
        rows = [self.checkpoints[lo]]
        for j in range(lo + 1, hi + 1):
            rows.append(_fold(rows[-1], j, self.g[j], self.n))
        return rows

    def profiles(self, rngs: Sequence[np.random.Generator]) -> list[dict[int, int]]:
        n, g = self.n, self.g
        rem = [n] * len(rngs)
        out: list[dict[int, int]] = [{} for _ in rngs]
        top_block = (n - 1) // self.block if n else -1
        for blk in range(top_block, -1, -1):
            lo = blk * self.block
            hi = min(lo + self.block, n)
            rows = None
            for j in range(hi, lo, -1):
                if g[j] == 0:
                    continue
                live = [s for s in range(len(rngs)) if rem[s] >= j]
                if not live:
                    continue
                if rows is None:
                    rows = self._rows(lo, hi)
                prev, cur = rows[j - 1 - lo], rows[j - lo]
                for s in live:
                    k = self._choose(rngs[s], prev, cur, j, g[j], rem[s])
                    if k:
                        out[s][j] = k
                        rem[s] -= j * k
        if any(rem):
            raise ConsistencyError("weight profile does not sum to n")
        return out

    def _choose(self, rng, prev, cur, j, gj, m) -> int:
        total = cur[m]
        u = randbelow(rng, total)
        acc = 0
        coef = 1
        chosen = None
        for k in range(m // j + 1):
            if k:
                coef = coef * (gj + k - 1) // k
            acc += coef * prev[m - j * k]
            if chosen is None and u < acc:
                chosen = k
                if not self.check:
                    return k
        if self.check and acc != total:
            raise ConsistencyError(f"stage-1 probabilities at (j={j}, m={m}) do not sum to 1")
        if chosen is None:
            raise ConsistencyError("stage-1 draw fell outside the support")
        return chosen


class _PointingEngine:
    def __init__(self, gamma: Sequence[int], n: int, b: Sequence[int] | None = None) -> None:
        self.n = n
        self.g = [int(gamma[j]) if 0 < j < len(gamma) else 0 for j in range(n + 1)]
        self.b = list(b[: n + 1]) if b is not None else list(euler_transform_recurrence(self.g, n).b)
        c = [0] * (n + 1)
        self.parts: list[list[int]] = [[] for _ in range(n + 1)]
        for j in range(1, n + 1):
            if self.g[j]:
                for t in range(j, n + 1, j):
                    c[t] += j * self.g[j]
                    self.parts[t].append(j)
        self.c = c
        self.cf = np.array([float(x) for x in c])
        self.logb = np.array([log_big(x) if x > 0 else -np.inf for x in self.b])
        self.total = self.b[n]

    def profiles(self, rngs: Sequence[np.random.Generator]) -> list[dict[int, int]]:
        return [self._one(rng) for rng in rngs]

    def _one(self, rng) -> dict[int, int]:
        prof: dict[int, int] = {}
        m = self.n
        while m:
            t = self._pick_t(rng, m)
            v = randbelow(rng, self.c[t])
            for j in self.parts[t]:
                v -= j * self.g[j]
                if v < 0:
                    break
            prof[j] = prof.get(j, 0) + t // j
            m -= t
        return prof

    def _pick_t(self, rng, m: int) -> int:
        norm = m * self.b[m]
        u_int = randbelow(rng, norm)
        u = u_int / norm
        top = min(m, 12 * math.isqrt(m) + 50)
        ts = np.arange(1, top + 1)
        w = self.cf[1 : top + 1] * np.exp(self.logb[m - ts] - self.logb[m]) / m
        cum = np.cumsum(w)
        i = int(np.searchsorted(cum, u, side="right"))
        if i < top:
            low = cum[i - 1] if i else 0.0
            high = math.inf if (i == top - 1 and top == m) else cum[i]
            if (i == 0 or u >= low + _EPS) and u < high - _EPS:
                return i + 1
        acc = 0
        for t in range(1, m + 1):
            acc += self.c[t] * self.b[m - t]
            if u_int < acc:
                return t
        raise ConsistencyError("pointing draw fell outside the support")


def _engine(gamma, n, method, b=None, check=False):
    if method == "auto":
        method = "staged" if n <= STAGED_MAX_N else "pointing"
    if method == "staged":
        return _StagedEngine(gamma, n, check=check)
    if method == "pointing":
        return _PointingEngine(gamma, n, b)
    raise ParameterError(f"unknown sampling method {method!r}")


# -- graphs ------------------------------------------------------------------


@dataclass(frozen=True)
class SampleSpec:
    d: int
    r: int
    n: int
    seed: int = 0
    census: CensusTable | None = field(default=None, compare=False, repr=False)
    method: str = "auto"


@dataclass(frozen=True)
class SampleReport:
    d: int
    r: int
    n: int
    seed: int
    index: int
    component_orders: tuple[int, ...]
    orbit_ids: tuple[tuple[int, int], ...]
    aut_log_lower_bound: float
    local_limit_radius: int
    local_limit_fraction: float

    @property
    def largest_component(self) -> int:
        return max(self.component_orders, default=0)

    @property
    def num_components(self) -> int:
        return len(self.component_orders)

    def to_json(self) -> dict[str, Any]:
        return {
            "d": self.d,
            "r": self.r,
            "n": self.n,
            "seed": self.seed,
            "index": self.index,
            "component_orders": list(self.component_orders),
            "largest_component": self.largest_component,
            "num_components": self.num_components,
            "orbit_ids": [list(x) for x in self.orbit_ids],
            "aut_log_lower_bound": round(self.aut_log_lower_bound, 12),
            "local_limit_radius": self.local_limit_radius,
            "local_limit_fraction": round(self.local_limit_fraction, 12),
        }


@lru_cache(maxsize=4096)
def _quotient(orbit: OrbitClass) -> LocalGraph:
    return build_quotient(orbit.rep, orbit)


@lru_cache(maxsize=16384)
def _locally_ok(orbit: OrbitClass, radius: int) -> bool:
    return is_r_locally_lattice(_quotient(orbit), orbit.d, radius, use_transitivity=True)


class GraphSampler:
    """Uniform sampler for n-vertex graphs of the (d, r) model; reusable across seeds."""

    def __init__(self, d: int, r: int, n: int, *, census: CensusTable | None = None,
                 method: str = "auto", check: bool = False) -> None:
        if n < 1:
            raise ParameterError("n must be >= 1")
        if census is None or census.max_index < n:
            census = build_census(d, r, n)
        if (census.d, census.r) != (d, r):
            raise ParameterError("census parameters do not match")
        self.d, self.r, self.n = d, r, n
        self.census = census
        self.engine = _engine(census.gamma, n, method, check=check)
        if self.engine.total == 0:
            raise EmptySupportError("empty support")

    @property
    def support_size(self) -> int:
        return self.engine.total

    def _types(self, rng, prof: dict[int, int]) -> list[tuple[int, int]]:
        ids = []
        for j in sorted(prof, reverse=True):
            k, gj = prof[j], self.census.gamma[j]
            rank = randbelow(rng, math.comb(gj + k - 1, k))
            ids.extend((j, t) for t in unrank_multiset(gj, k, rank))
        return ids

    def orbit_ids_many(self, seed: int, indices: Iterable[int]) -> list[tuple[tuple[int, int], ...]]:
        """Stages 1 and 2 only: the chosen (weight, type index) pairs per sample."""
        indices = list(indices)
        rngs = [make_rng(seed, i) for i in indices]
        profs = self.engine.profiles(rngs)
        return [tuple(self._types(rng, p)) for rng, p in zip(rngs, profs)]

    def realize(self, ids: Sequence[tuple[int, int]]) -> LocalGraph:
        return disjoint_union(_quotient(self.census.orbits(j)[t]) for j, t in ids)

    def report(self, ids: Sequence[tuple[int, int]], seed: int, index: int, radius: int | None = None) -> SampleReport:
        radius = self.r + 1 if radius is None else radius
        orbits = [self.census.orbits(j)[t] for j, t in ids]
        good = sum(o.index for o in orbits if _locally_ok(o, radius))
        return SampleReport(
            d=self.d, r=self.r, n=self.n, seed=seed, index=index,
            component_orders=tuple(o.index for o in orbits),
            orbit_ids=tuple(ids),
            aut_log_lower_bound=math.fsum(math.log(o.index) for o in orbits),
            local_limit_radius=radius,
            local_limit_fraction=good / self.n,
        )

    def sample(self, seed: int = 0, index: int = 0, radius: int | None = None) -> tuple[LocalGraph, SampleReport]:
        ids = self.orbit_ids_many(seed, [index])[0]
        g = self.realize(ids)
        rep = self.report(ids, seed, index, radius)
        if not math.isclose(rep.aut_log_lower_bound, aut_lower_bound_log(g)):
            raise ConsistencyError("automorphism bound disagrees with realised graph")
        return g, rep


_SAMPLERS: dict[tuple, GraphSampler] = {}


def _cached_sampler(spec: SampleSpec) -> GraphSampler:
    key = (spec.d, spec.r, spec.n, spec.method, id(spec.census))
    if key not in _SAMPLERS:
        if len(_SAMPLERS) > 8:
            _SAMPLERS.clear()
        _SAMPLERS[key] = GraphSampler(spec.d, spec.r, spec.n, census=spec.census, method=spec.method)
    return _SAMPLERS[key]


def sample_graph(spec: SampleSpec, index: int = 0, radius: int | None = None) -> tuple[LocalGraph, SampleReport]:
    """One exactly uniform graph of the model, plus its observables."""
    return _cached_sampler(spec).sample(spec.seed, index, radius)


# -- partitions --------------------------------------------------------------


class PartitionSampler:
    """Uniform partitions of n with every part >= min_part."""

    def __init__(self, n: int, min_part: int, method: str = "auto", check: bool = False) -> None:
        if n < 0 or min_part < 1:
            raise ParameterError("need n >= 0 and min_part >= 1")
        self.n, self.min_part = n, min_part
        gamma = [0] + [int(j >= min_part) for j in range(1, n + 1)]
        b = restricted_partition_table(n, min_part) if method != "staged" else None
        self.engine = _engine(gamma, n, method, b=b, check=check)
        if self.engine.total == 0:
            raise EmptySupportError("empty support")

    def sample(self, seed: int = 0, index: int = 0) -> list[int]:
        return self.sample_many(seed, [index])[0]

    def sample_many(self, seed: int, indices: Iterable[int]) -> list[list[int]]:
        rngs = [make_rng(seed, i) for i in indices]
        return [
            [j for j in sorted(p, reverse=True) for _ in range(p[j])]
            for p in self.engine.profiles(rngs)
        ]


def sample_restricted_partition(n: int, min_part: int, seed: int = 0, method: str = "auto") -> list[int]:
    """Exactly uniform partition of n into parts >= min_part, non-increasing."""
    return PartitionSampler(n, min_part, method).sample(seed)


# -- experiments -------------------------------------------------------------


@dataclass
class BatchResult:
    reports: list[SampleReport]
    aggregate: dict[str, Any]


def _quantile(sorted_vals: Sequence[float], q: float) -> float:
    """Nearest-rank style (lower) quantile of a sorted list."""
    idx = min(len(sorted_vals) - 1, max(0, math.ceil(q * len(sorted_vals)) - 1))
    return sorted_vals[idx]


def aggregate_reports(reports: Sequence[SampleReport], n: int) -> dict[str, Any]:
    if not reports:
        return {"samples": 0, "n": n}
    largest = sorted(r.largest_component for r in reports)
    threshold = n ** (5 / 6)
    return {
        "samples": len(reports),
        "n": n,
        "largest_component": {
            "min": largest[0],
            "q10": _quantile(largest, 0.1),
            "median": _quantile(largest, 0.5),
            "q90": _quantile(largest, 0.9),
            "max": largest[-1],
        },
        "frac_largest_le_n56": sum(x <= threshold for x in largest) / len(largest),
        "mean_local_limit_fraction": math.fsum(r.local_limit_fraction for r in reports) / len(reports),
        "local_limit_radius": reports[0].local_limit_radius,
        "mean_aut_log_lower_bound": math.fsum(r.aut_log_lower_bound for r in reports) / len(reports),
        "mean_components": math.fsum(r.num_components for r in reports) / len(reports),
    }


def batch_experiment(spec: SampleSpec, samples: int, radius: int | None = None,
                     *, start: int = 0) -> BatchResult:
    """Reports for sample indices start..start+samples-1 and their aggregate.

    Each sample has its own stream (seed, index), so results do not depend on
    batching or ordering."""
    if samples < 0:
        raise ParameterError("samples must be >= 0")
    if samples == 0:
        return BatchResult([], aggregate_reports([], spec.n))
    sampler = _cached_sampler(spec)
    indices = range(start, start + samples)
    all_ids = sampler.orbit_ids_many(spec.seed, indices)
    reports = [sampler.report(ids, spec.seed, i, radius) for i, ids in zip(indices, all_ids)]
    return BatchResult(reports, aggregate_reports(reports, spec.n))


def expected_local_limit_fraction(d: int, r: int, n: int, radius: int, census: CensusTable | None = None) -> float:
    """Exact mean of the local-limit fraction under the uniform model.

    A type T of order j appears at least k times in exactly b(n - kj) of the
    b(n) graphs, so E[copies of T] = sum_{k >= 1} b(n - kj) / b(n)."""
    from fractions import Fraction

    from .census import orbit_counts_with_min_distance

    if census is None or census.max_index < n:
        census = build_census(d, r, n)
    b = euler_transform_recurrence(census.gamma, n).b
    if b[n] == 0:
        raise EmptySupportError("empty support")
    t = max(2 * radius + 2, 2 * r + 2)
    good = orbit_counts_with_min_distance(d, t, n)
    num = sum(j * good[j] * sum(b[n - k * j] for k in range(1, n // j + 1)) for j in range(1, n + 1) if good[j])
    return float(Fraction(num, n * b[n]))
