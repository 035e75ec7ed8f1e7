"""Quotient graphs Z^d / L and small-graph utilities.

Vertices of Z^d / L are the coset representatives in the box
prod_i [0, h_i) where h is the HNF diagonal; vertex ids are the mixed-radix
encoding of those representatives.  Edges join x and x + e_i.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import QuotientNotSimpleError
from .lattice import OrbitClass, SublatticeHNF, has_min_distance_at_least, orbit_of

__all__ = [
    "ComponentTag",
    "LocalGraph",
    "RootedBall",
    "build_quotient",
    "coset_representatives",
    "disjoint_union",
    "cycle_graph",
    "ball",
    "rooted_isomorphic",
    "reference_ball",
    "is_r_locally_lattice",
    "failing_vertices",
    "graph_isomorphic",
    "aut_lower_bound_log",
]


@dataclass(frozen=True)
class ComponentTag:
    """Marks a component built as the quotient of Z^d by ``lattice``."""

    d: int
    orbit: OrbitClass
    lattice: SublatticeHNF


class LocalGraph:
    """Finite simple undirected graph with a component partition.

    ``provenance[i]`` is a :class:`ComponentTag` or ``None`` for component i.
    """

    __slots__ = ("n", "adjacency", "components", "provenance")

    def __init__(
        self,
        adjacency: Sequence[Sequence[int]],
        components: Sequence[Sequence[int]] | None = None,
        provenance: Sequence[ComponentTag | None] | None = None,
        *,
        validate: bool = True,
    ) -> None:
        self.n = len(adjacency)
        self.adjacency = tuple(tuple(sorted(nb)) for nb in adjacency)
        if validate:
            self._check_simple()
        found = _bfs_components(self.adjacency)
        if components is None:
            comps = found
        else:
            comps = [tuple(sorted(c)) for c in components]
            if validate and sorted(comps) != sorted(found):
                raise ValueError("component partition disagrees with adjacency")
        self.components = tuple(comps)
        if provenance is None:
            provenance = (None,) * len(self.components)
        if len(provenance) != len(self.components):
            raise ValueError("one provenance entry per component required")
        self.provenance = tuple(provenance)

    def _check_simple(self) -> None:
        for v, nbrs in enumerate(self.adjacency):
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate neighbor at vertex {v}")
            for w in nbrs:
                if w == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if not 0 <= w < self.n:
                    raise ValueError(f"neighbor {w} of {v} out of range")
                if v not in self.adjacency[w]:
                    raise ValueError(f"asymmetric edge {v}-{w}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> LocalGraph:
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        return cls(adj)

    def edges(self) -> list[tuple[int, int]]:
        """Sorted (u, v) pairs with u < v."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def component_orders(self) -> list[int]:
        return [len(c) for c in self.components]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LocalGraph) and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash(self.adjacency)

    def __repr__(self) -> str:
        return f"LocalGraph(n={self.n}, edges={self.num_edges}, components={len(self.components)})"


def _bfs_components(adj: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    seen = [False] * len(adj)
    comps = []
    for s in range(len(adj)):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


@dataclass(frozen=True)
class RootedBall:
    graph: LocalGraph
    root: int
    radius: int

    @property
    def size(self) -> int:
        return self.graph.n


# -- quotients ---------------------------------------------------------------


def coset_representatives(lat: SublatticeHNF) -> np.ndarray:
    """Array of shape (index, d); row k is the representative with id k."""
    diag = lat.diag
    grids = np.meshgrid(*[np.arange(h, dtype=np.int64) for h in reversed(diag)], indexing="ij")
    # Reversed meshgrid makes coordinate 0 vary fastest, matching the id encoding.
    return np.stack([g.ravel() for g in reversed(grids)], axis=1)


def _reduce(lat: SublatticeHNF, pts: np.ndarray) -> np.ndarray:
    pts = pts.copy()
    m = lat.matrix
    for i in range(lat.d - 1, -1, -1):
        q = pts[:, i] // m[i][i]
        for k in range(i + 1):
            if m[k][i]:
                pts[:, k] -= q * m[k][i]
    return pts


def _encode(lat: SublatticeHNF, pts: np.ndarray) -> np.ndarray:
    ids = np.zeros(len(pts), dtype=np.int64)
    for i in range(lat.d - 1, -1, -1):
        ids = ids * lat.diag[i] + pts[:, i]
    return ids


def build_quotient(lat: SublatticeHNF, orbit: OrbitClass | None = None) -> LocalGraph:
    """The Cayley-type quotient Z^d / L as a simple 2d-regular graph."""
    if not has_min_distance_at_least(lat, 3):
        raise QuotientNotSimpleError("quotient not simple")
    reps = coset_representatives(lat)
    nbr_ids = []
    for i in range(lat.d):
        shifted = reps.copy()
        shifted[:, i] += 1
        nbr_ids.append(_encode(lat, _reduce(lat, shifted)))
    n = len(reps)
    adj: list[list[int]] = [[] for _ in range(n)]
    for ids in nbr_ids:
        for u, v in enumerate(ids.tolist()):
            adj[u].append(v)
            adj[v].append(u)
    tag = ComponentTag(lat.d, orbit if orbit is not None else orbit_of(lat), lat)
    return LocalGraph(adj, [tuple(range(n))], [tag], validate=False)


def cycle_graph(m: int) -> LocalGraph:
    """C_m as the quotient Z / mZ."""
    return build_quotient(SublatticeHNF.diagonal(m))


def disjoint_union(graphs: Iterable[LocalGraph]) -> LocalGraph:
    adj: list[tuple[int, ...]] = []
    comps: list[tuple[int, ...]] = []
    prov: list[ComponentTag | None] = []
    offset = 0
    for g in graphs:
        adj.extend(tuple(w + offset for w in nb) for nb in g.adjacency)
        comps.extend(tuple(v + offset for v in c) for c in g.components)
        prov.extend(g.provenance)
        offset += g.n
    return LocalGraph(adj, comps, prov, validate=False)


# -- balls -------------------------------------------------------------------


def ball(g: LocalGraph, v: int, r: int) -> RootedBall:
    """Induced subgraph on vertices within distance r of v, root relabelled 0.

    Vertices are numbered in BFS order, so ``dist`` is non-decreasing."""
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} not in graph")
    order = [v]
    dist = {v: 0}
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        if dist[u] == r:
            continue
        for w in g.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                order.append(w)
    label = {u: i for i, u in enumerate(order)}
    adj = [[label[w] for w in g.adjacency[u] if w in label] for u in order]
    return RootedBall(LocalGraph(adj, validate=False), 0, r)


@lru_cache(maxsize=None)
def reference_ball(d: int, r: int) -> RootedBall:
    """Ball of radius r around the origin in the lattice graph L^d."""
    pts = [p for p in product(range(-r, r + 1), repeat=d) if sum(map(abs, p)) <= r]
    pts.sort(key=lambda p: (sum(map(abs, p)), p))
    index = {p: i for i, p in enumerate(pts)}
    adj: list[list[int]] = [[] for _ in pts]
    for p, i in index.items():
        for k in range(d):
            for s in (1, -1):
                q = p[:k] + (p[k] + s,) + p[k + 1 :]
                j = index.get(q)
                if j is not None:
                    adj[i].append(j)
    return RootedBall(LocalGraph(adj, validate=False), index[(0,) * d], r)


# -- isomorphism -------------------------------------------------------------


def _refine(adj: Sequence[Sequence[int]], colors: list[int]) -> list[int]:
    """Colour refinement to the coarsest equitable partition.

    Colour ids are assigned by sorting signatures, so any two vertex sets
    refined together receive comparable colours."""
    ncolors = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(len(adj))]
        ids = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [ids[s] for s in sigs]
        if len(ids) == ncolors:
            return colors
        ncolors = len(ids)


def _joint_search(adj: Sequence[Sequence[int]], colors: list[int], n1: int) -> bool:
    """Is there an isomorphism from vertices [0, n1) onto [n1, 2*n1) respecting colours?"""
    colors = _refine(adj, colors)
    left: dict[int, list[int]] = {}
    right: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        (left if v < n1 else right).setdefault(c, []).append(v)
    if {c: len(vs) for c, vs in left.items()} != {c: len(vs) for c, vs in right.items()}:
        return False
    open_cells = [(len(vs), c) for c, vs in left.items() if len(vs) > 1]
    if not open_cells:
        phi = {left[c][0]: right[c][0] for c in left}
        return all(
            {phi[w] for w in adj[v]} == set(adj[phi[v]]) for v in range(n1)
        )
    c = min(open_cells)[1]
    v = left[c][0]
    fresh = max(colors) + 1
    for w in right[c]:
        trial = list(colors)
        trial[v] = trial[w] = fresh
        if _joint_search(adj, trial, n1):
            return True
    return False


def _distances_from(adj: Sequence[Sequence[int]], s: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _combined(a: LocalGraph, b: LocalGraph) -> list[tuple[int, ...]]:
    off = a.n
    return list(a.adjacency) + [tuple(w + off for w in nb) for nb in b.adjacency]


def rooted_isomorphic(a: RootedBall, b: RootedBall) -> bool:
    """True iff some graph isomorphism a.graph -> b.graph sends root to root."""
    ga, gb = a.graph, b.graph
    if ga.n != gb.n or ga.num_edges != gb.num_edges:
        return False
    da = _distances_from(ga.adjacency, a.root)
    db = _distances_from(gb.adjacency, b.root)
    init_a = [(da[v], ga.degree(v)) for v in range(ga.n)]
    init_b = [(db[v], gb.degree(v)) for v in range(gb.n)]
    if sorted(init_a) != sorted(init_b):
        return False
    ids = {s: i for i, s in enumerate(sorted(set(init_a)))}
    return _joint_search(_combined(ga, gb), [ids[s] for s in init_a + init_b], ga.n)


def graph_isomorphic(g1: LocalGraph, g2: LocalGraph) -> bool:
    """Exact isomorphism test for small graphs.

    Vertices start coloured by their distance profile, then the search
    individualises one vertex per side and refines until a bijection is forced."""
    if g1.n != g2.n or g1.num_edges != g2.num_edges:
        return False
    if g1.n == 0:
        return True

    def profile(g: LocalGraph, v: int) -> tuple[int, ...]:
        dist = _distances_from(g.adjacency, v)
        top = max(dist)
        counts = [0] * (top + 2)
        for x in dist:
            counts[x] += 1  # unreachable vertices land in counts[-1]
        return tuple(counts)

    p1 = [profile(g1, v) for v in range(g1.n)]
    p2 = [profile(g2, v) for v in range(g2.n)]
    if sorted(p1) != sorted(p2):
        return False
    ids = {s: i for i, s in enumerate(sorted(set(p1)))}
    return _joint_search(_combined(g1, g2), [ids[s] for s in p1 + p2], g1.n)


# -- local checks ------------------------------------------------------------


def _ball_matches(g: LocalGraph, v: int, ref: RootedBall) -> bool:
    b = ball(g, v, ref.radius)
    return b.size == ref.size and rooted_isomorphic(b, ref)


def failing_vertices(
    g: LocalGraph, d: int, r: int, limit: int | None = None, *, use_transitivity: bool = False
) -> list[int]:
    """Vertices whose radius-r ball is not the L^d ball, in increasing order.

    With ``use_transitivity`` a component tagged as a lattice quotient is
    decided by its first vertex alone; such components are vertex-transitive."""
    ref = reference_ball(d, r)
    bad: list[int] = []
    for comp, tag in zip(g.components, g.provenance):
        if use_transitivity and tag is not None:
            if not _ball_matches(g, comp[0], ref):
                bad.extend(comp)
        else:
            bad.extend(v for v in comp if not _ball_matches(g, v, ref))
        if limit is not None and len(bad) >= limit:
            break
    bad.sort()
    return bad if limit is None else bad[:limit]


def is_r_locally_lattice(g: LocalGraph, d: int, r: int, *, use_transitivity: bool = False) -> bool:
    return not failing_vertices(g, d, r, limit=1, use_transitivity=use_transitivity)


def aut_lower_bound_log(g: LocalGraph) -> float:
    """log of prod |H| over lattice-quotient components H.

    Translations by Z^d / L act on each such component, so this bounds
    log |Aut(G)| from below."""
    return sum(math.log(len(c)) for c, tag in zip(g.components, g.provenance) if tag is not None)
