"""Census of connected pure-translation quotients and lattice rarity counts.

gamma(n) counts B_d-orbits of index-n sublattices with minimum distance at
least 2r+2.  Each such orbit is one connected unlabelled n-vertex graph that
is r-locally L^d.  For d >= 2 only translation subgroups are counted; the
highly symmetric classes are left out on purpose.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _lattice2d as k2
from .errors import CensusRangeError, ParameterError
from .lattice import (
    OrbitClass,
    SignedPermutation,
    SublatticeHNF,
    has_min_distance_at_least,
    is_invariant,
    iter_hnf,
    orbits_at_index,
    sublattice_count_table,
)

__all__ = [
    "CensusTable",
    "r_star",
    "build_census",
    "census_orbits",
    "orbits_with_min_distance",
    "orbit_counts_with_min_distance",
    "count_invariant_lattices",
    "count_small_distance_lattices",
    "count_orbits",
    "orbit_count_vs_cd",
    "total_lattices",
    "SHARD_SIZE",
]

SHARD_SIZE = 500
CACHE_ENV = "LOCOGRAPH_CACHE"


def r_star(d: int) -> int:
    """Smallest radius at which the pure-translation census is asymptotically exact."""
    if d < 2:
        raise ParameterError("r_star is defined for d >= 2")
    if d == 2:
        return 2
    if d <= 7:
        return 3
    return math.ceil((d - 1) / 2)


def _check_params(d: int, r: int) -> None:
    if d < 1:
        raise ParameterError("d must be >= 1")
    if d == 1:
        if r < 1:
            raise ParameterError("r must be >= 1")
        return
    if r < r_star(d):
        raise ParameterError(
            f"pure-translation census not asymptotically exact below r*(d): r*({d}) = {r_star(d)}"
        )


def census_orbits(d: int, r: int, n: int) -> list[OrbitClass]:
    """Orbits at index n with minimum distance >= 2r+2, sorted by representative."""
    return orbits_with_min_distance(d, n, 2 * r + 2)


def orbits_with_min_distance(d: int, n: int, t: int) -> list[OrbitClass]:
    """Orbits at index n with minimum distance >= t, sorted by representative."""
    if d == 1:
        if n < t:
            return []
        return [OrbitClass(SublatticeHNF.diagonal(n), n, n, 1, 2)]
    if d == 2:
        a, b, c = k2.hnf_at_index(n)
        keep = k2.min_distance(a, b, c, cap=t) >= t
        a, b, c = a[keep], b[keep], c[keep]
        is_rep, size = k2.orbit_data(a, b, c)
        a, b, c, size = a[is_rep], b[is_rep], c[is_rep], size[is_rep]
        md = k2.min_distance(a, b, c)
        out = [
            OrbitClass(SublatticeHNF._trusted(((ai, bi), (0, ci))), n, mi, si, 8 // si)
            for ai, bi, ci, mi, si in zip(a.tolist(), b.tolist(), c.tolist(), md.tolist(), size.tolist())
        ]
        out.sort(key=lambda o: o.rep.sort_key())
        return out
    return orbits_at_index(d, n, min_dist=t)


def _gamma_shard(d: int, t: int, lo: int, hi: int) -> list[int]:
    """Orbit counts with minimum distance >= t for indices lo..hi."""
    if d == 1:
        return [int(n >= t) for n in range(lo, hi + 1)]
    if d == 2:
        a, b, c = k2.all_hnf(hi, min_index=lo)
        keep = k2.min_distance(a, b, c, cap=t) >= t
        a, b, c = a[keep], b[keep], c[keep]
        is_rep, _ = k2.orbit_data(a, b, c)
        return np.bincount((a * c)[is_rep] - lo, minlength=hi - lo + 1).tolist()
    return [len(orbits_at_index(d, n, min_dist=t)) for n in range(lo, hi + 1)]


def orbit_counts_with_min_distance(d: int, t: int, max_index: int) -> list[int]:
    """[0, g(1), ..., g(max_index)] with g(n) the number of index-n orbits of
    minimum distance >= t.  No radius precondition; see build_census."""
    out = [0]
    for lo in range(1, max_index + 1, SHARD_SIZE):
        out.extend(_gamma_shard(d, t, lo, min(lo + SHARD_SIZE - 1, max_index)))
    return out


@dataclass
class CensusTable:
    """gamma[n] for 1 <= n <= max_index (gamma[0] is 0); orbits on demand."""

    d: int
    r: int
    max_index: int
    gamma: tuple[int, ...]
    _orbits: dict[int, list[OrbitClass]] = field(default_factory=dict, repr=False, compare=False)

    def gamma_at(self, n: int) -> int:
        self._check_range(n)
        return self.gamma[n]

    def orbits(self, n: int) -> list[OrbitClass]:
        self._check_range(n)
        if n not in self._orbits:
            orbs = census_orbits(self.d, self.r, n)
            if len(orbs) != self.gamma[n]:
                raise AssertionError(f"orbit list at {n} disagrees with gamma")
            self._orbits[n] = orbs
        return self._orbits[n]

    def _check_range(self, n: int) -> None:
        if not 1 <= n <= self.max_index:
            raise CensusRangeError(f"index {n} outside census range 1..{self.max_index}")

    def records(self):
        """Per-index records for census.jsonl."""
        for n in range(1, self.max_index + 1):
            yield {"n": n, "gamma": self.gamma[n], "orbits": [o.to_json() for o in self.orbits(n)]}


def _shard_path(cache_dir: Path, d: int, r: int, lo: int, hi: int) -> Path:
    return cache_dir / f"gamma_d{d}_r{r}_{lo}_{hi}.json"


def build_census(
    d: int,
    r: int,
    max_index: int,
    *,
    cache_dir: str | Path | None = None,
    threads: int = 1,
) -> CensusTable:
    """Compute gamma(1..max_index).

    Work is split into index shards of SHARD_SIZE.  Complete shards are
    stored under ``cache_dir`` (default: $LOCOGRAPH_CACHE if set) and reused."""
    _check_params(d, r)
    if max_index < 0:
        raise ParameterError("max_index must be >= 0")
    if cache_dir is None and os.environ.get(CACHE_ENV):
        cache_dir = os.environ[CACHE_ENV]
    cache = Path(cache_dir) if cache_dir is not None else None
    if cache is not None:
        cache.mkdir(parents=True, exist_ok=True)

    bounds = [(lo, min(lo + SHARD_SIZE - 1, max_index)) for lo in range(1, max_index + 1, SHARD_SIZE)]

    def run(bound: tuple[int, int]) -> list[int]:
        lo, hi = bound
        full = hi - lo + 1 == SHARD_SIZE
        path = _shard_path(cache, d, r, lo, hi) if cache is not None and full else None
        if path is not None and path.exists():
            return json.loads(path.read_text())["gamma"]
        vals = _gamma_shard(d, 2 * r + 2, lo, hi)
        if path is not None:
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps({"d": d, "r": r, "lo": lo, "hi": hi, "gamma": vals}))
            tmp.replace(path)
        return vals

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    gamma = [0]
    for p in parts:
        gamma.extend(int(v) for v in p)
    return CensusTable(d, r, max_index, tuple(gamma))


# -- rarity counts -----------------------------------------------------------


def _coset_2d(sigma: SignedPermutation) -> int:
    """Index of sigma's coset in B_2 / {±Id}, in the order of k2.coset_images."""
    equal_signs = sigma.signs[0] == sigma.signs[1]
    if sigma.perm == (0, 1):
        return 0 if equal_signs else 1
    return 2 if equal_signs else 3


def count_invariant_lattices(d: int, sigma: SignedPermutation, x: int) -> int:
    """Number of sublattices of index <= x fixed by sigma."""
    if sigma.d != d:
        raise ParameterError("sigma acts on the wrong dimension")
    if d == 2:
        a, b, c = k2.all_hnf(x)
        img = k2.coset_images(a, b, c)[_coset_2d(sigma)]
        return int(np.count_nonzero((img[0] == a) & (img[1] == b) & (img[2] == c)))
    return sum(is_invariant(sigma, lat) for n in range(1, x + 1) for lat in iter_hnf(d, n))


def count_small_distance_lattices(d: int, r: int, x: int) -> int:
    """Number of sublattices of index <= x with minimum distance <= r."""
    if r <= 0:
        return 0
    if d == 2:
        a, b, c = k2.all_hnf(x)
        return int(np.count_nonzero(k2.min_distance(a, b, c, cap=r + 1) <= r))
    return sum(
        not has_min_distance_at_least(lat, r + 1) for n in range(1, x + 1) for lat in iter_hnf(d, n)
    )


def count_orbits(d: int, x: int) -> int:
    """Number of B_d-orbits of sublattices with index <= x."""
    if d == 2:
        a, b, c = k2.all_hnf(x)
        return int(np.count_nonzero(k2.orbit_data(a, b, c)[0]))
    return sum(len(orbits_at_index(d, n)) for n in range(1, x + 1))


def orbit_count_vs_cd(d: int, x: int) -> tuple[int, float, float]:
    """(orbit count up to x, c_d x^d, their ratio)."""
    from .asymptotics import c_constant

    if d < 2:
        raise ParameterError("d must be >= 2")
    count = count_orbits(d, x)
    model = c_constant(d) * x**d
    return count, model, count / model


def total_lattices(d: int, x: int) -> int:
    return sum(sublattice_count_table(d, x))
