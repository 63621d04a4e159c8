"""Instance generators: blown-up weighted trees, random chordal graphs, and friends.

All randomness comes from an explicit integer seed.
"""

from __future__ import annotations

import heapq
import random
from typing import Optional

from .graph import (
    DfsTree,
    Graph,
    GraphError,
    complete_bipartite,
    complete_graph,
    connected_components,
    cycle_graph,
    verify_dfs_tree,
)
from .oracle import WeightedDecomposition, WeightedTree, brute_weighted_treedepth

MAX_BLOWUP_VERTICES = 1_000_000


def blowup(t: WeightedTree, m: int) -> tuple[Graph, tuple[int, ...]]:
    """Replace each tree vertex x by a clique of w(x)*m vertices, join along edges.

    Returns the graph and ``origin[v]``, the tree vertex that v stands for.
    The cliques occupy consecutive id blocks in order of x.
    """
    if not isinstance(m, int) or m < 1:
        raise GraphError("m must be a positive integer")
    sizes = [w * m for w in t.weights]
    total = sum(sizes)
    if total > MAX_BLOWUP_VERTICES:
        raise GraphError(f"blowup would have {total} vertices (limit {MAX_BLOWUP_VERTICES})")
    origin: list[int] = []
    blocks: list[range] = []
    for x, size in enumerate(sizes):
        blocks.append(range(len(origin), len(origin) + size))
        origin.extend([x] * size)
    edges = []
    for x, block in enumerate(blocks):
        for i in block:
            for j in range(i + 1, block.stop):
                edges.append((i, j))
    for x, y in t.tree.edges():
        for i in blocks[x]:
            for j in blocks[y]:
                edges.append((i, j))
    return Graph.from_edges(total, edges), tuple(origin)


def recursively_optimal_decomposition(t: WeightedTree) -> WeightedDecomposition:
    """Optimal weighted decomposition whose every rooted subtree is optimal too."""
    return brute_weighted_treedepth(t)


def _tree_path(t: Graph, a: int, b: int, within: set) -> list[int]:
    prev = {a: None}
    stack = [a]
    while stack:
        u = stack.pop()
        for w in t.neighbors(u):
            if w in within and w not in prev:
                prev[w] = u
                stack.append(w)
    path = []
    x: Optional[int] = b
    while x is not None:
        path.append(x)
        x = prev[x]
    return path[::-1]


def construct_witness(t: WeightedTree, m: int) -> DfsTree:
    """DFS tree of the blowup with height at most m*td(t, w) + |V(t)|^2.

    The walk visits the whole clique of the current decomposition root, then
    for each child component it steps along the tree path to that child, one
    vertex per intermediate clique, and recurses there.  Choices are made by
    ascending vertex id.
    """
    n = t.n
    if m < n:
        raise GraphError(f"construct_witness needs m >= |V(t)| = {n}, got {m}")
    g, origin = blowup(t, m)
    dec = recursively_optimal_decomposition(t)
    d_children: dict[int, list[int]] = {x: [] for x in range(n)}
    for x, p in dec.parent.items():
        if p is not None:
            d_children[p].append(x)
    remaining: list[list[int]] = [[] for _ in range(n)]
    for v, x in enumerate(origin):
        remaining[x].append(v)
    parent: dict[int, Optional[int]] = {}

    def take(x: int, above: Optional[int]) -> int:
        v = remaining[x].pop(0)
        parent[v] = above
        return v

    # explicit stack of (vertex set S, decomposition root v, attach point)
    stack = [(frozenset(range(n)), dec.root, None)]
    while stack:
        sub, v, attach = stack.pop()
        last = attach
        while remaining[v]:
            last = take(v, last)
        rest = set(sub) - {v}
        tree_rest = connected_components(t.tree, rest)
        for comp in tree_rest:
            comp_set = set(comp)
            x = next(c for c in sorted(d_children[v]) if c in comp_set)
            path = _tree_path(t.tree, v, x, comp_set | {v})
            z = last
            for y in path[1:-1]:
                z = take(y, z)
            stack.append((frozenset(comp_set), x, z))
    tree = DfsTree(parent, next(u for u, p in parent.items() if p is None), host=g)
    check = verify_dfs_tree(g, tree)
    if not check:
        raise GraphError(f"internal error: witness is not a DFS tree ({check.reason})")
    return tree


def random_chordal(n: int, density: float = 0.5, seed: int = 0) -> Graph:
    """Connected chordal graph grown by adding simplicial vertices.

    Each new vertex picks a random maximal clique built so far and attaches
    to a random non-empty part of it (each member kept with probability
    ``density``).  density=1 therefore gives K_n.
    """
    if n < 1:
        raise GraphError("n must be positive")
    rng = random.Random(seed)
    cliques: list[list[int]] = [[0]]
    edges = []
    for v in range(1, n):
        ci = rng.randrange(len(cliques))
        base = cliques[ci]
        part = [u for u in base if rng.random() < density]
        if not part:
            part = [base[rng.randrange(len(base))]]
        edges.extend((u, v) for u in part)
        if len(part) == len(base):
            cliques[ci] = base + [v]
        else:
            cliques.append(part + [v])
    return Graph.from_edges(n, edges)


def _prufer_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((a, b))
    return edges


def random_weighted_tree(n: int, wmax: int = 3, seed: int = 0) -> WeightedTree:
    """Uniform labelled tree via a Pruefer sequence, weights uniform in [1, wmax]."""
    if n < 1 or wmax < 1:
        raise GraphError("need n >= 1 and wmax >= 1")
    rng = random.Random(seed)
    edges = _prufer_tree(n, rng)
    weights = tuple(rng.randint(1, wmax) for _ in range(n))
    return WeightedTree(Graph.from_edges(n, edges), weights)


def traceable_graph(kind: str, m: int) -> Graph:
    """K_m, C_m or K_{m,m}; every DFS of these is a Hamiltonian path."""
    kind = kind.lower()
    if m < 1:
        raise GraphError("m must be positive")
    if kind == "km":
        return complete_graph(m)
    if kind == "cm":
        return cycle_graph(m)
    if kind == "kmm":
        return complete_bipartite(m, m)
    raise GraphError(f"unknown traceable kind {kind!r} (use km, cm or kmm)")


def random_subcubic_tree_plus_chords(n: int, chords: Optional[int] = None, seed: int = 0) -> Graph:
    """Random tree of maximum degree 3 plus short chords, staying subcubic.

    Chords join vertices at tree distance 2 or 3, so the treewidth stays small.
    """
    if n < 1:
        raise GraphError("n must be positive")
    rng = random.Random(seed)
    if chords is None:
        chords = n // 10
    adj: list[list[int]] = [[] for _ in range(n)]
    open_slots = [0]
    for v in range(1, n):
        i = rng.randrange(len(open_slots))
        u = open_slots[i]
        adj[u].append(v)
        adj[v].append(u)
        if len(adj[u]) == 3:
            open_slots[i] = open_slots[-1]
            open_slots.pop()
        open_slots.append(v)
    tree_adj = [list(a) for a in adj]
    edges = {(min(u, v), max(u, v)) for u in range(n) for v in tree_adj[u]}
    attempts = 0
    added = 0
    while added < chords and attempts < 20 * chords + 100:
        attempts += 1
        u = rng.randrange(n)
        if len(adj[u]) >= 3:
            continue
        w = u
        prev = -1
        for _ in range(rng.choice((2, 3))):
            options = [x for x in tree_adj[w] if x != prev]
            if not options:
                break
            prev, w = w, rng.choice(options)
        if w == u or len(adj[w]) >= 3 or (min(u, w), max(u, w)) in edges:
            continue
        edges.add((min(u, w), max(u, w)))
        adj[u].append(w)
        adj[w].append(u)
        added += 1
    return Graph.from_edges(n, sorted(edges))
