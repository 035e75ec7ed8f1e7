import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locograph.errors import QuotientNotSimpleError
from locograph.lattice import SublatticeHNF, enumerate_hnf, lattice_from_generators, min_distance, orbit_of
from locograph.quotient import (
    LocalGraph,
    RootedBall,
    aut_lower_bound_log,
    ball,
    build_quotient,
    coset_representatives,
    cycle_graph,
    disjoint_union,
    failing_vertices,
    graph_isomorphic,
    is_r_locally_lattice,
    reference_ball,
    rooted_isomorphic,
)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def relabel(g, seed):
    perm = list(range(g.n))
    random.Random(seed).shuffle(perm)
    return LocalGraph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


def torus(m, d=2):
    return build_quotient(SublatticeHNF.scaled(d, m))


def test_local_graph_validation():
    with pytest.raises(ValueError):
        LocalGraph([[1], []])
    with pytest.raises(ValueError):
        LocalGraph([[0]])
    with pytest.raises(ValueError):
        LocalGraph([[1, 1], [0, 0]])
    g = LocalGraph.from_edges(4, [(0, 1), (2, 3)])
    assert g.components == ((0, 1), (2, 3))
    with pytest.raises(ValueError):
        LocalGraph(g.adjacency, [(0, 1, 2, 3)])


def test_quotient_examples():
    c5 = cycle_graph(5)
    assert c5.edges() == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    t3 = torus(3)
    assert (t3.n, t3.num_edges) == (9, 18)
    assert all(t3.degree(v) == 4 for v in range(9))
    assert nx.is_isomorphic(to_nx(t3), nx.grid_2d_graph(3, 3, periodic=True))
    with pytest.raises(QuotientNotSimpleError):
        build_quotient(SublatticeHNF.from_rows([[2, 1], [0, 1]]))


def test_coset_representatives_are_distinct_cosets():
    lat = SublatticeHNF.from_rows([[6, 4], [0, 3]])
    reps = coset_representatives(lat)
    assert len(reps) == 18
    assert len({tuple(r) for r in reps.tolist()}) == 18


def test_quotients_are_regular_and_match_networkx():
    for n in range(1, 31):
        for lat in enumerate_hnf(2, n):
            if min_distance(lat) < 3:
                with pytest.raises(QuotientNotSimpleError):
                    build_quotient(lat)
                continue
            g = build_quotient(lat)
            assert g.num_edges == 2 * n
            assert all(g.degree(v) == 4 for v in range(n))
            assert len(g.components) == 1
    for m in (3, 4, 5):
        g = torus(m, 3)
        assert nx.is_isomorphic(to_nx(g), nx.grid_graph([m, m, m], periodic=True))


def test_balls():
    t = torus(6)
    assert ball(t, 0, 0).size == 1 and ball(t, 0, 0).graph.num_edges == 0
    assert [ball(t, 0, r).size for r in (1, 2)] == [5, 13]
    b = ball(cycle_graph(8), 3, 2)
    assert nx.is_isomorphic(to_nx(b.graph), nx.path_graph(5))
    assert [reference_ball(2, r).size for r in (1, 2, 3)] == [5, 13, 25]
    assert reference_ball(3, 2).size == 25


def test_rooted_isomorphism_examples():
    c5 = cycle_graph(5)
    assert rooted_isomorphic(ball(c5, 0, 2), ball(c5, 0, 2))
    assert not rooted_isomorphic(ball(c5, 0, 2), reference_ball(1, 2))
    t = torus(3)
    assert all(rooted_isomorphic(ball(t, 0, 2), ball(t, v, 2)) for v in range(9))
    # same graph, different roots: path rooted at an end vs at the centre
    p = LocalGraph.from_edges(3, [(0, 1), (1, 2)])
    assert not rooted_isomorphic(RootedBall(p, 0, 2), RootedBall(p, 1, 1))


def nx_rooted_iso(a, b):
    ga, gb = to_nx(a.graph), to_nx(b.graph)
    nx.set_node_attributes(ga, {v: v == a.root for v in ga}, "root")
    nx.set_node_attributes(gb, {v: v == b.root for v in gb}, "root")
    return nx.is_isomorphic(ga, gb, node_match=lambda x, y: x["root"] == y["root"])


def test_rooted_isomorphism_against_networkx():
    graphs = [build_quotient(lat) for n in range(9, 31) for lat in enumerate_hnf(2, n) if min_distance(lat) >= 3]
    ref = reference_ball(2, 2)
    for g in graphs[::7]:
        b = ball(g, 0, 2)
        assert rooted_isomorphic(b, ref) == nx_rooted_iso(b, ref)
        b2 = ball(relabel(g, 1), 3, 2)
        assert rooted_isomorphic(b, b2) == nx_rooted_iso(b, b2)


def test_r_locally_examples():
    assert is_r_locally_lattice(torus(6), 2, 2)
    assert not is_r_locally_lattice(torus(5), 2, 2)
    assert not is_r_locally_lattice(cycle_graph(5), 1, 2)
    assert failing_vertices(cycle_graph(5), 1, 2) == [0, 1, 2, 3, 4]
    assert is_r_locally_lattice(cycle_graph(6), 1, 2)
    assert is_r_locally_lattice(torus(4, 3), 3, 1)


def test_r_locally_iff_min_distance():
    # exhaustive equivalence for d=2, index <= 60, r in {2, 3}
    for n in range(1, 61):
        for lat in enumerate_hnf(2, n):
            md = min_distance(lat)
            if md < 3:
                continue
            g = build_quotient(lat)
            for r in (2, 3):
                assert is_r_locally_lattice(g, 2, r, use_transitivity=True) == (md >= 2 * r + 2)
            if md >= 2 * 2 + 2:
                assert ball(g, 0, 2).size == reference_ball(2, 2).size


def test_graph_isomorphism_examples():
    t = torus(3)
    assert graph_isomorphic(t, t)
    assert not graph_isomorphic(cycle_graph(9), t)
    assert graph_isomorphic(t, relabel(t, 5))


def test_graph_isomorphism_against_networkx():
    graphs = [build_quotient(lat) for n in (16, 18, 20, 24) for lat in enumerate_hnf(2, n) if min_distance(lat) >= 3]
    rng = random.Random(0)
    pairs = [(rng.choice(graphs), rng.choice(graphs)) for _ in range(60)]
    for g, h in pairs:
        assert graph_isomorphic(g, h) == nx.is_isomorphic(to_nx(g), to_nx(h))


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 30).flatmap(lambda n: st.sampled_from(
    [lat for lat in enumerate_hnf(2, n) if min_distance(lat) >= 3] or [SublatticeHNF.scaled(2, 4)])),
    st.integers(0, 10**6))
def test_isomorphism_invariant_under_relabelling(lat, seed):
    g = build_quotient(lat)
    h = relabel(g, seed)
    assert graph_isomorphic(g, h) and graph_isomorphic(h, g)
    v = seed % g.n
    assert rooted_isomorphic(ball(g, 0, 2), ball(h, v, 2))  # vertex-transitive


def test_aut_lower_bound():
    assert aut_lower_bound_log(torus(4)) == pytest.approx(math.log(16))
    u = disjoint_union([torus(4), torus(6)])
    assert aut_lower_bound_log(u) == pytest.approx(math.log(16) + math.log(36))
    assert aut_lower_bound_log(LocalGraph.from_edges(3, [(0, 1)])) == 0
    assert u.component_orders() == [16, 36]


def test_provenance_tag():
    lat = lattice_from_generators([(3, 3), (3, -3)])
    g = build_quotient(lat)
    assert g.provenance[0].orbit == orbit_of(lat)
    assert g.provenance[0].d == 2
