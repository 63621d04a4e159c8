"""Shared graph families for the tests."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

import networkx as nx

from minhlt.graph import Graph, RootedTree


def from_nx(G) -> Graph:
    mapping = {v: i for i, v in enumerate(sorted(G.nodes()))}
    return Graph.from_edges(len(mapping), [(mapping[u], mapping[v]) for u, v in G.edges()])


@lru_cache(maxsize=None)
def atlas_connected(max_n: int = 7) -> tuple[Graph, ...]:
    """All connected graphs up to isomorphism with 1..max_n vertices (max_n <= 7)."""
    out = []
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() <= max_n and nx.is_connected(G):
            out.append(from_nx(G))
    return tuple(out)


def spanning_trees(g: Graph):
    """Edge sets of all spanning trees of ``g``, by include/exclude backtracking."""
    edges = g.edges()
    n = g.n
    if n == 1:
        yield ()
        return

    def find(uf, x):
        while uf[x] != x:
            x = uf[x]
        return x

    def rec(i, chosen, uf):
        if len(chosen) == n - 1:
            yield tuple(chosen)
            return
        if len(edges) - i < n - 1 - len(chosen):
            return
        u, v = edges[i]
        ru, rv = find(uf, u), find(uf, v)
        if ru != rv:
            uf2 = list(uf)
            uf2[ru] = rv
            chosen.append((u, v))
            yield from rec(i + 1, chosen, uf2)
            chosen.pop()
        yield from rec(i + 1, chosen, uf)

    yield from rec(0, [], list(range(n)))


def all_rooted_spanning_trees(g: Graph):
    """Every spanning tree of ``g`` rooted at every vertex."""
    for tree_edges in spanning_trees(g):
        adj = {v: [] for v in range(g.n)}
        for u, v in tree_edges:
            adj[u].append(v)
            adj[v].append(u)
        for root in range(g.n):
            parent = {root: None}
            stack = [root]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in parent:
                        parent[y] = x
                        stack.append(y)
            yield RootedTree(parent, root)


def relabel_random(g: Graph, rng) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


def k5_pendant() -> Graph:
    edges = [(u, v) for u, v in combinations(range(5), 2)] + [(0, 5)]
    return Graph.from_edges(6, edges)


def six_vertex_moderate() -> Graph:
    """K_4 plus vertex 4 adjacent to {0,1} and vertex 5 adjacent to {1,2}."""
    edges = [(u, v) for u, v in combinations(range(4), 2)] + [(0, 4), (1, 4), (1, 5), (2, 5)]
    return Graph.from_edges(6, edges)


def all_permutations(n: int):
    return permutations(range(n))


def nauty_certificate(g: Graph) -> bytes:
    import pynauty

    adj = {v: list(g.neighbors(v)) for v in range(g.n)}
    return pynauty.certificate(pynauty.Graph(g.n, adjacency_dict=adj))


@lru_cache(maxsize=None)
def connected_chordal(max_n: int) -> tuple[Graph, ...]:
    """All connected chordal graphs up to isomorphism with 1..max_n vertices.

    Every chordal graph has a simplicial vertex, so each one arises from a
    smaller connected chordal graph by adding a vertex joined to a clique.
    """
    from minhlt.chordal import is_chordal

    layer = {nauty_certificate(Graph(1, ((),))): Graph(1, ((),))}
    out = list(layer.values())
    for n in range(2, max_n + 1):
        nxt: dict = {}
        for g in layer.values():
            for size in range(1, g.n + 1):
                for clique in combinations(range(g.n), size):
                    if not g.is_clique(list(clique)):
                        continue
                    h = Graph.from_edges(n, g.edges() + [(c, n - 1) for c in clique])
                    nxt.setdefault(nauty_certificate(h), h)
        layer = nxt
        assert all(is_chordal(h) for h in layer.values())
        out.extend(layer.values())
    return tuple(out)
