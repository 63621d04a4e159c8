"""Exhaustive ground-truth computations for small graphs.

Everything here is exponential and guarded by soft size limits; pass
``force=True`` to go beyond them deliberately.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .graph import DfsTree, Graph, GraphError, require_connected


class SizeGuardError(GraphError):
    pass


def _guard(n: int, limit: int, force: bool, what: str) -> None:
    if n > limit and not force:
        raise SizeGuardError(f"{what}: {n} vertices exceeds the guard of {limit} (use force=True)")


@dataclass(frozen=True)
class WeightedTree:
    tree: Graph
    weights: tuple[int, ...]

    def __post_init__(self):
        t = self.tree
        if len(self.weights) != t.n:
            raise GraphError("one weight per vertex required")
        if any(w < 1 for w in self.weights):
            raise GraphError("weights must be positive")
        if t.n == 0 or t.edge_count != t.n - 1:
            raise GraphError("weighted tree must be a non-empty tree")
        require_connected(t)

    @property
    def n(self) -> int:
        return self.tree.n


def enumerate_dfs_trees(g: Graph, limit: Optional[int] = None) -> Iterator[DfsTree]:
    """Every distinct DFS tree of ``g``, produced by simulating DFS runs.

    Each run branches over the start vertex and, at every step, over which
    unvisited neighbour of the current vertex is entered next.  Runs that
    differ only in the order of sibling subtrees give the same tree; those
    are removed by parent-array fingerprint.
    """
    require_connected(g)
    n = g.n
    seen: set[tuple] = set()
    parent: list[Optional[int]] = [None] * n
    visited = [False] * n
    emitted = 0

    def run(stack: tuple[int, ...], count: int) -> Iterator[tuple]:
        while stack and all(visited[w] for w in g.adjacency[stack[-1]]):
            stack = stack[:-1]
        if not stack:
            if count == n:
                yield tuple(parent)
            return
        u = stack[-1]
        for w in g.adjacency[u]:
            if visited[w]:
                continue
            visited[w] = True
            parent[w] = u
            yield from run(stack + (w,), count + 1)
            visited[w] = False
            parent[w] = None

    for r in range(n):
        visited[r] = True
        for fp in run((r,), 1):
            if fp in seen:
                continue
            seen.add(fp)
            yield DfsTree(dict(enumerate(fp)), r, host=g)
            emitted += 1
            if limit is not None and emitted >= limit:
                return
        visited[r] = False


def _components(masks: tuple[int, ...], within: int) -> list[int]:
    comps = []
    rest = within
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= masks[b.bit_length() - 1]
                f ^= b
            nxt &= within & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def brute_minhlt(g: Graph, force: bool = False) -> int:
    """Minimum height of a DFS tree of ``g``.

    Exhaustive over DFS trees via the exact decomposition of a DFS tree at
    its root: the child subtrees of the root ``r`` are the components of
    ``G - r``, each a DFS tree rooted at a neighbour of ``r``.  Memoised on
    (vertex subset, root).
    """
    require_connected(g)
    _guard(g.n, 12, force, "brute_minhlt")
    masks = tuple(g.neighbor_mask(v) for v in range(g.n))

    @lru_cache(maxsize=None)
    def rooted(sub: int, r: int) -> int:
        rest = sub & ~(1 << r)
        worst = 0
        for comp in _components(masks, rest):
            best = min(rooted(comp, c) for c in _bits(comp & masks[r]))
            worst = max(worst, best)
        return 1 + worst

    full = (1 << g.n) - 1
    return min(rooted(full, r) for r in range(g.n))


def brute_treedepth(g: Graph, force: bool = False) -> int:
    """Exact treedepth; ``td(G) = 1 + min_v td(G - v)`` on connected pieces."""
    _guard(g.n, 12, force, "brute_treedepth")
    if g.n == 0:
        return 0
    masks = tuple(g.neighbor_mask(v) for v in range(g.n))

    @lru_cache(maxsize=None)
    def connected_td(sub: int) -> int:
        if sub & (sub - 1) == 0:
            return 1
        best = None
        for v in _bits(sub):
            rest = sub & ~(1 << v)
            val = max(connected_td(c) for c in _components(masks, rest))
            if best is None or val < best:
                best = val
        return 1 + best

    return max(connected_td(c) for c in _components(masks, (1 << g.n) - 1))


@dataclass(frozen=True)
class WeightedDecomposition:
    """Rooted treedepth decomposition of a weighted tree and its value."""

    value: int
    root: int
    parent: dict


def brute_weighted_treedepth(t: WeightedTree, force: bool = False) -> WeightedDecomposition:
    """Weighted treedepth of a tree with a recursively optimal decomposition.

    Every subproblem (a connected vertex subset) is solved optimally with the
    smallest optimal root, so each rooted subtree of the result is optimal
    for the subtree of ``t`` it spans.
    """
    _guard(t.n, 12, force, "brute_weighted_treedepth")
    g = t.tree
    w = t.weights
    masks = tuple(g.neighbor_mask(v) for v in range(g.n))

    @lru_cache(maxsize=None)
    def solve(sub: int) -> tuple[int, int]:
        best = None
        for v in _bits(sub):
            rest = sub & ~(1 << v)
            val = w[v] + max((solve(c)[0] for c in _components(masks, rest)), default=0)
            if best is None or val < best[0]:
                best = (val, v)
        return best

    parent: dict = {}
    full = (1 << g.n) - 1
    value, root = solve(full)
    parent[root] = None
    stack = [(full, root)]
    while stack:
        sub, r = stack.pop()
        for comp in _components(masks, sub & ~(1 << r)):
            _, c = solve(comp)
            parent[c] = r
            stack.append((comp, c))
    return WeightedDecomposition(value, root, parent)


def brute_leaf_extremes(g: Graph, force: bool = False) -> tuple[int, int]:
    """(fewest, most) leaves over all DFS trees of ``g``."""
    _guard(g.n, 10, force, "brute_leaf_extremes")
    lo = None
    hi = None
    for t in enumerate_dfs_trees(g):
        has_child = set(p for p in t.parent.values() if p is not None)
        leaves = g.n - len(has_child)
        lo = leaves if lo is None else min(lo, leaves)
        hi = leaves if hi is None else max(hi, leaves)
    return lo, hi
