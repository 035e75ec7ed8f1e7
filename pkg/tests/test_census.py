import json

import pytest

from locograph.census import (
    SHARD_SIZE,
    build_census,
    census_orbits,
    count_invariant_lattices,
    count_orbits,
    count_small_distance_lattices,
    orbit_count_vs_cd,
    r_star,
    total_lattices,
)
from locograph.errors import CensusRangeError, ParameterError
from locograph.lattice import (
    SignedPermutation,
    enumerate_hnf,
    has_min_distance_at_least,
    hyperoctahedral_group,
    is_invariant,
    lattice_from_generators,
    min_distance,
    orbit_of,
    orbits_at_index,
)

SWAP = SignedPermutation((1, 0), (1, 1))


def test_r_star():
    assert [r_star(d) for d in (2, 3, 7, 8, 9, 12)] == [2, 3, 3, 4, 4, 6]


def test_parameter_checks():
    with pytest.raises(ParameterError, match=r"r\*\(2\) = 2"):
        build_census(2, 1, 10)
    with pytest.raises(ParameterError):
        build_census(3, 2, 10)
    with pytest.raises(ParameterError):
        build_census(1, 0, 10)


def test_d1_closed_form():
    c = build_census(1, 1, 10)
    assert c.gamma[1:] == (0, 0, 0, 1, 1, 1, 1, 1, 1, 1)
    assert c.orbits(4)[0].rep.matrix == ((4,),)
    assert build_census(1, 3, 12).gamma[1:] == (0,) * 7 + (1,) * 5


def test_d2_examples(census22):
    assert census22.gamma[1:18] == (0,) * 17
    assert census22.gamma[18] == 2
    witness = lattice_from_generators([(3, 3), (3, -3)])
    assert witness.index == 18 and min_distance(witness) == 6
    assert orbit_of(witness) in census22.orbits(18)


def test_frozen_values(census22):
    assert census22.gamma[18:30] == (2, 0, 1, 2, 2, 1, 6, 1, 4, 4, 5, 3)
    assert sum(census22.gamma[:101]) == 1473
    assert sum(census22.gamma[:401]) == 30701
    assert sum(census22.gamma) == 813038


def test_gamma_matches_generic_orbits(census22):
    for n in range(1, 61):
        generic = orbits_at_index(2, n, min_dist=6)
        assert census22.orbits(n) == generic
        assert census22.gamma[n] == len(generic)


def test_gamma_is_orbit_counted(census22):
    for n in (18, 36, 60, 97, 120):
        passing = sum(has_min_distance_at_least(lat, 6) for lat in enumerate_hnf(2, n))
        assert sum(o.orbit_size for o in census22.orbits(n)) == passing


def test_d3_generic_path():
    c = build_census(3, 3, 40)
    assert all(g == 0 for g in c.gamma)  # min distance 8 needs a much larger index in Z^3
    orbs = census_orbits(3, 3, 40)
    assert orbs == []


def test_range_error(census22):
    with pytest.raises(CensusRangeError):
        census22.orbits(2001)


def test_shard_cache_and_threads(tmp_path):
    x = SHARD_SIZE * 2 + 17
    ref = build_census(2, 2, x)
    cached = build_census(2, 2, x, cache_dir=tmp_path, threads=3)
    assert cached.gamma == ref.gamma
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == [f"gamma_d2_r2_1_{SHARD_SIZE}.json", f"gamma_d2_r2_{SHARD_SIZE + 1}_{2 * SHARD_SIZE}.json"]
    # a resumed run reads the shard instead of recomputing it
    shard = tmp_path / files[0]
    data = json.loads(shard.read_text())
    data["gamma"][0] = 99
    shard.write_text(json.dumps(data))
    assert build_census(2, 2, x, cache_dir=tmp_path).gamma[1] == 99


def test_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("LOCOGRAPH_CACHE", str(tmp_path))
    build_census(2, 2, SHARD_SIZE)
    assert any(tmp_path.iterdir())


def test_records(census22):
    small = build_census(2, 2, 20)
    recs = list(small.records())
    assert recs[17]["n"] == 18 and recs[17]["gamma"] == 2
    assert recs[17]["orbits"][0] == {"d": 2, "index": 18, "min_distance": 6, "orbit_size": 1, "rep": [[6, 3], [0, 3]]}


def test_invariant_counts():
    assert count_invariant_lattices(2, SignedPermutation.identity(2), 4) == 15
    assert count_invariant_lattices(2, SWAP, 2) == 2
    for s in hyperoctahedral_group(2):
        brute = sum(is_invariant(s, lat) for n in range(1, 26) for lat in enumerate_hnf(2, n))
        assert count_invariant_lattices(2, s, 25) == brute
    assert count_invariant_lattices(3, SignedPermutation.negation(3), 6) == total_lattices(3, 6)


def test_small_distance_counts():
    # Z^2 itself (md 1) plus diag(1,2), diag(2,1); the checkerboard has md 2
    assert count_small_distance_lattices(2, 1, 2) == 3
    assert count_small_distance_lattices(2, 0, 50) == 0
    assert count_small_distance_lattices(3, 0, 5) == 0
    brute = sum(min_distance(lat) <= 3 for n in range(1, 31) for lat in enumerate_hnf(2, n))
    assert count_small_distance_lattices(2, 3, 30) == brute
    brute3 = sum(min_distance(lat) <= 2 for n in range(1, 9) for lat in enumerate_hnf(3, n))
    assert count_small_distance_lattices(3, 2, 8) == brute3


def test_rarity_trends():
    xs = (100, 250, 1000)
    inv = [count_invariant_lattices(2, SWAP, x) / total_lattices(2, x) for x in xs]
    small = [count_small_distance_lattices(2, 5, x) / x**2 for x in (250, 500, 1000)]
    assert inv[0] > inv[1] > inv[2]
    assert small[0] > small[1] > small[2]


def test_orbit_counts():
    assert count_orbits(2, 2) == 3
    assert count_orbits(2, 150) == 5142
    assert count_orbits(3, 4) == sum(len(orbits_at_index(3, n)) for n in range(1, 5))
    count, model, ratio = orbit_count_vs_cd(2, 150)
    assert count == 5142 and model == pytest.approx(0.2056167583560321 * 150**2)
    assert ratio == pytest.approx(count / model)
