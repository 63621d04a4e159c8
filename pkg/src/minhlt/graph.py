"""Graphs, rooted trees, DFS execution and DFS-tree verification.

Vertices are dense integers ``0..n-1``.  Heights follow the convention that a
single vertex has height 1, and ``is_ancestor`` is reflexive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs or inputs that violate a precondition."""


class NotConnectedError(GraphError):
    def __init__(self, message: str = "graph not connected"):
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with sorted adjacency lists."""

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    _sets: tuple[frozenset, ...] = field(init=False, repr=False, compare=False)
    _masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.vertex_count
        if n < 0 or len(self.adjacency) != n:
            raise GraphError("adjacency length does not match vertex_count")
        sets = []
        for v, nbrs in enumerate(self.adjacency):
            s = frozenset(nbrs)
            if len(s) != len(nbrs):
                raise GraphError(f"duplicate neighbor at vertex {v}")
            if v in s:
                raise GraphError(f"self-loop at vertex {v}")
            if any(u < 0 or u >= n for u in nbrs):
                raise GraphError(f"neighbor id out of range at vertex {v}")
            if list(nbrs) != sorted(nbrs):
                raise GraphError(f"adjacency of {v} not sorted")
            sets.append(s)
        for v in range(n):
            for u in self.adjacency[v]:
                if v not in sets[u]:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
        object.__setattr__(self, "_sets", tuple(sets))
        masks = []
        for nbrs in self.adjacency:
            m = 0
            for u in nbrs:
                m |= 1 << u
            masks.append(m)
        object.__setattr__(self, "_masks", tuple(masks))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(tuple(sorted(a)) for a in adj))

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def neighbor_set(self, v: int) -> frozenset:
        return self._sets[v]

    def neighbor_mask(self, v: int) -> int:
        return self._masks[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..len-1``; also returns the old ids."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        edges = [
            (index[u], index[v])
            for u in old
            for v in self.adjacency[u]
            if v in index and u < v
        ]
        return Graph.from_edges(len(old), edges), old

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def is_clique(self, vertices: Optional[Iterable[int]] = None) -> bool:
        vs = range(self.n) if vertices is None else list(vertices)
        vs = list(vs)
        for i, u in enumerate(vs):
            nu = self._sets[u]
            for v in vs[i + 1:]:
                if v not in nu:
                    return False
        return True


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree given by parent pointers; the root maps to ``None``.

    ``order`` optionally records the DFS discovery index of each vertex.
    """

    parent: Mapping[int, Optional[int]]
    root: int
    order: Optional[Mapping[int, int]] = None

    def __post_init__(self):
        if self.root not in self.parent or self.parent[self.root] is not None:
            raise GraphError("root must be a vertex with no parent")
        for v, p in self.parent.items():
            if p is None and v != self.root:
                raise GraphError(f"vertex {v} has no parent but is not the root")
            if p is not None and p not in self.parent:
                raise GraphError(f"parent {p} of {v} is not a tree vertex")
        # acyclicity: every vertex reaches the root
        state: dict[int, int] = {self.root: 2}
        for v in self.parent:
            path = []
            x = v
            while x not in state:
                state[x] = 1
                path.append(x)
                x = self.parent[x]
            if state[x] == 1:
                raise GraphError(f"parent pointers contain a cycle through {x}")
            for y in path:
                state[y] = 2

    @classmethod
    def from_parent_list(cls, parent: Sequence[Optional[int]]) -> "RootedTree":
        roots = [v for v, p in enumerate(parent) if p is None]
        if len(roots) != 1:
            raise GraphError(f"expected exactly one root, found {len(roots)}")
        return cls(dict(enumerate(parent)), roots[0])

    def vertices(self) -> list[int]:
        return sorted(self.parent)

    def __len__(self) -> int:
        return len(self.parent)

    def children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {v: [] for v in self.parent}
        for v in sorted(self.parent):
            p = self.parent[v]
            if p is not None:
                ch[p].append(v)
        return ch

    def depths(self) -> dict[int, int]:
        """Depth of each vertex, root at depth 1."""
        depth = {self.root: 1}
        for v in self.parent:
            path = []
            x = v
            while x not in depth:
                path.append(x)
                x = self.parent[x]
            d = depth[x]
            for y in reversed(path):
                d += 1
                depth[y] = d
        return depth

    def parent_list(self, n: int) -> list[Optional[int]]:
        return [self.parent.get(v) for v in range(n)]

    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in self.parent.items() if p is not None]


@dataclass(frozen=True)
class DfsTree(RootedTree):
    """A rooted tree known to be a DFS tree of ``host``."""

    host: Optional[Graph] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: Optional[str] = None
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


def connected_components(g: Graph, within: Optional[Iterable[int]] = None) -> list[list[int]]:
    """Components of ``g`` (or of ``g[within]``), each sorted, ordered by minimum."""
    if within is None:
        allowed = None
        candidates: Iterable[int] = range(g.n)
    else:
        allowed = set(within)
        candidates = sorted(allowed)
    seen: set[int] = set()
    comps = []
    for s in candidates:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w not in seen and (allowed is None or w in allowed):
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def require_connected(g: Graph) -> None:
    if g.n == 0 or not is_connected(g):
        raise NotConnectedError()


def run_dfs(g: Graph, root: int, priority: Optional[Sequence[int]] = None) -> DfsTree:
    """Deterministic DFS from ``root``.

    ``priority`` lists the vertices from most to least preferred; among the
    unvisited neighbours of the current vertex the most preferred one is
    entered next.  ``None`` means ascending vertex id.
    """
    require_connected(g)
    if not 0 <= root < g.n:
        raise GraphError(f"root {root} out of range")
    if priority is None:
        ordered = g.adjacency
    else:
        if sorted(priority) != list(range(g.n)):
            raise GraphError("priority must be a permutation of the vertices")
        rank = [0] * g.n
        for i, v in enumerate(priority):
            rank[v] = i
        ordered = tuple(tuple(sorted(a, key=rank.__getitem__)) for a in g.adjacency)
    parent: dict[int, Optional[int]] = {root: None}
    order = {root: 0}
    pointer = [0] * g.n
    stack = [root]
    while stack:
        u = stack[-1]
        nbrs = ordered[u]
        i = pointer[u]
        while i < len(nbrs) and nbrs[i] in parent:
            i += 1
        pointer[u] = i
        if i == len(nbrs):
            stack.pop()
            continue
        w = nbrs[i]
        parent[w] = u
        order[w] = len(order)
        stack.append(w)
    return DfsTree(parent, root, order, host=g)


def _intervals(t: RootedTree) -> tuple[dict[int, int], dict[int, int]]:
    ch = t.children()
    tin: dict[int, int] = {}
    tout: dict[int, int] = {}
    clock = 0
    stack = [(t.root, 0)]
    while stack:
        v, i = stack.pop()
        if i == 0:
            tin[v] = clock
            clock += 1
        if i < len(ch[v]):
            stack.append((v, i + 1))
            stack.append((ch[v][i], 0))
        else:
            tout[v] = clock
            clock += 1
    return tin, tout


def verify_dfs_tree(g: Graph, t: RootedTree) -> VerifyResult:
    """Check that ``t`` is a DFS tree of ``g``; on failure report a witness.

    Witnesses: ``("missing-vertex", v)``, ``("extra-vertex", v)``,
    ``("non-graph-edge", (p, v))`` or ``("cross-edge", (u, v))``.
    """
    verts = set(t.parent)
    for v in range(g.n):
        if v not in verts:
            return VerifyResult(False, "missing-vertex", (v,))
    for v in sorted(verts):
        if not (isinstance(v, int) and 0 <= v < g.n):
            return VerifyResult(False, "extra-vertex", (v,))
    # cross-edges are reported first: they are the defining obstruction
    tin, tout = _intervals(t)
    for u, v in g.edges():
        if not (tin[u] <= tin[v] and tout[v] <= tout[u]) and not (
            tin[v] <= tin[u] and tout[u] <= tout[v]
        ):
            return VerifyResult(False, "cross-edge", (u, v))
    for v in sorted(verts):
        p = t.parent[v]
        if p is not None and not g.has_edge(p, v):
            return VerifyResult(False, "non-graph-edge", (min(p, v), max(p, v)))
    return VerifyResult(True)


def tree_height(t: RootedTree) -> int:
    """Number of vertices on a longest root-to-leaf path."""
    return max(t.depths().values())


def is_ancestor(t: RootedTree, u: int, v: int) -> bool:
    """True iff ``u`` lies on the root-to-``v`` path (reflexive)."""
    if u not in t.parent or v not in t.parent:
        raise GraphError("vertex not in tree")
    x: Optional[int] = v
    while x is not None:
        if x == u:
            return True
        x = t.parent[x]
    return False


def longest_vertical_path_check(g: Graph, t: RootedTree, bound: int) -> bool:
    return tree_height(t) <= bound


# small named graphs used across the package and its tests

def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])
