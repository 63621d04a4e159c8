"""Tree decompositions: validation, nice form, construction, balanced separators."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import Graph, GraphError, VerifyResult, connected_components

INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"

# make_nice emits at most NICE_NODE_FACTOR * (width + 1) * n nodes
NICE_NODE_FACTOR = 5


class DecompositionError(GraphError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    """Unrooted tree of bags; ``edges`` index into ``bags``."""

    bags: tuple[frozenset, ...]
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, bags: Iterable[Iterable[int]], edges: Iterable[tuple[int, int]]) -> "TreeDecomposition":
        return cls(tuple(frozenset(b) for b in bags), tuple((int(a), int(b)) for a, b in edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted binary decomposition; node ids are in post-order.

    ``kind[i]`` is INTRODUCE, FORGET or JOIN; ``vertex[i]`` is the vertex
    introduced or forgotten (-1 for joins); ``bag[i]`` is the sorted bag.
    """

    kind: tuple[str, ...]
    vertex: tuple[int, ...]
    bag: tuple[tuple[int, ...], ...]
    children: tuple[tuple[int, ...], ...]
    root: int

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bag) - 1

    def parents(self) -> list[int]:
        par = [-1] * len(self.kind)
        for i, ch in enumerate(self.children):
            for c in ch:
                par[c] = i
        return par

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = [(c, i) for i, ch in enumerate(self.children) for c in ch]
        return TreeDecomposition.build(self.bag, edges)

    def check_node_algebra(self) -> Optional[str]:
        """Return a description of the first node violating the nice-form rules."""
        for i, k in enumerate(self.kind):
            bag = set(self.bag[i])
            ch = self.children[i]
            v = self.vertex[i]
            if k == INTRODUCE:
                if len(ch) == 0:
                    if bag != {v}:
                        return f"leaf {i} bag must be {{{v}}}"
                elif len(ch) != 1 or bag != set(self.bag[ch[0]]) | {v} or v in self.bag[ch[0]]:
                    return f"introduce node {i} malformed"
            elif k == FORGET:
                if len(ch) != 1 or set(self.bag[ch[0]]) != bag | {v} or v in bag:
                    return f"forget node {i} malformed"
            elif k == JOIN:
                if len(ch) != 2 or any(set(self.bag[c]) != bag for c in ch):
                    return f"join node {i} malformed"
            else:
                return f"unknown node kind {k!r}"
        if len(self.bag[self.root]) != 1:
            return "root bag must be a singleton"
        return None


def validate_decomposition(g: Graph, td: TreeDecomposition) -> VerifyResult:
    """Check the three decomposition conditions (plus that the bag graph is a tree)."""
    nb = len(td.bags)
    if nb == 0:
        return VerifyResult(g.n == 0, None if g.n == 0 else "coverage", None if g.n == 0 else (0,))
    adj: list[list[int]] = [[] for _ in range(nb)]
    for a, b in td.edges:
        if not (0 <= a < nb and 0 <= b < nb) or a == b:
            return VerifyResult(False, "not-a-tree", (a, b))
        adj[a].append(b)
        adj[b].append(a)
    if len(td.edges) != nb - 1 or len(_reach(adj, 0, None)) != nb:
        return VerifyResult(False, "not-a-tree", None)
    for bag in td.bags:
        for v in bag:
            if not 0 <= v < g.n:
                return VerifyResult(False, "coverage", (v,))
    covered = set().union(*td.bags)
    for v in range(g.n):
        if v not in covered:
            return VerifyResult(False, "coverage", (v,))
    holders: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders[v].append(i)
    for u, v in g.edges():
        hv = set(holders[v])
        if not any(i in hv for i in holders[u]):
            return VerifyResult(False, "edge-coverage", (u, v))
    for v in range(g.n):
        hs = set(holders[v])
        if len(_reach(adj, holders[v][0], hs)) != len(hs):
            return VerifyResult(False, "connectivity", (v,))
    return VerifyResult(True)


def _reach(adj: list[list[int]], start: int, allowed: Optional[set]) -> set:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen and (allowed is None or y in allowed):
                seen.add(y)
                stack.append(y)
    return seen


def _clean(td: TreeDecomposition) -> tuple[dict[int, frozenset], dict[int, set]]:
    """Contract tree edges whose one bag contains the other."""
    bags = dict(enumerate(td.bags))
    adj: dict[int, set] = {i: set() for i in bags}
    for a, b in td.edges:
        adj[a].add(b)
        adj[b].add(a)
    work = list(td.edges)
    while work:
        a, b = work.pop()
        if a not in bags or b not in bags or b not in adj[a]:
            continue
        if bags[a] <= bags[b]:
            small, big = a, b
        elif bags[b] <= bags[a]:
            small, big = b, a
        else:
            continue
        for c in adj.pop(small):
            adj[c].discard(small)
            if c != big:
                adj[c].add(big)
                adj[big].add(c)
                work.append((c, big))
        del bags[small]
    return bags, adj


def make_nice(g: Graph, td: TreeDecomposition) -> NiceTreeDecomposition:
    """Convert a valid decomposition of a connected graph to nice form.

    Within each bag difference vertices are forgotten, then introduced, in
    ascending order; the root bag is forgotten down to its largest vertex.
    """
    check = validate_decomposition(g, td)
    if not check:
        raise DecompositionError(f"invalid tree decomposition: {check.reason} {check.witness}")
    if g.n == 0:
        raise DecompositionError("empty graph has no nice decomposition")
    bags, adj = _clean(td)
    root_bag = min(bags)

    kind: list[str] = []
    vertex: list[int] = []
    nbag: list[tuple[int, ...]] = []
    children: list[tuple[int, ...]] = []

    def add(k: str, v: int, bag: frozenset, ch: tuple[int, ...]) -> int:
        kind.append(k)
        vertex.append(v)
        nbag.append(tuple(sorted(bag)))
        children.append(ch)
        return len(kind) - 1

    def chain(node: int, cur: frozenset, target: frozenset) -> int:
        for v in sorted(cur - target):
            cur = cur - {v}
            if not cur:
                raise DecompositionError("adjacent bags are disjoint; graph is not connected")
            node = add(FORGET, v, cur, (node,))
        for v in sorted(target - cur):
            cur = cur | {v}
            node = add(INTRODUCE, v, cur, (node,))
        return node

    top: dict[int, int] = {}
    stack: list[tuple[int, int, bool]] = [(root_bag, -1, False)]
    while stack:
        b, par, expanded = stack.pop()
        kids = sorted(c for c in adj[b] if c != par)
        if not expanded:
            stack.append((b, par, True))
            for c in reversed(kids):
                stack.append((c, b, False))
            continue
        bag = bags[b]
        if not kids:
            vs = sorted(bag)
            node = add(INTRODUCE, vs[0], frozenset(vs[:1]), ())
            node = chain(node, frozenset(vs[:1]), bag)
        else:
            tops = [chain(top[c], bags[c], bag) for c in kids]
            node = tops[0]
            for other in tops[1:]:
                node = add(JOIN, -1, bag, (node, other))
        top[b] = node
    node = top[root_bag]
    cur = bags[root_bag]
    for v in sorted(cur)[:-1]:
        cur = cur - {v}
        node = add(FORGET, v, cur, (node,))
    return NiceTreeDecomposition(tuple(kind), tuple(vertex), tuple(nbag), tuple(children), node)


def decomposition_from_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Bags of the elimination game along ``order``."""
    n = g.n
    if sorted(order) != list(range(n)):
        raise DecompositionError("ordering must be a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(a) for a in g.adjacency]
    bags = []
    parent = []
    for v in order:
        nb = adj[v]
        bags.append(frozenset(nb | {v}))
        parent.append(pos[min(nb, key=pos.__getitem__)] if nb else -1)
        for a in nb:
            adj[a].discard(v)
            adj[a] |= nb - {a}
        adj[v] = set()
    edges = [(i, p) for i, p in enumerate(parent) if p >= 0]
    roots = [i for i, p in enumerate(parent) if p < 0]
    edges += [(roots[i], roots[i + 1]) for i in range(len(roots) - 1)]
    if n == 0:
        return TreeDecomposition((), ())
    return TreeDecomposition.build(bags, edges)


def ordering_width(g: Graph, order: Sequence[int]) -> int:
    return decomposition_from_ordering(g, order).width


def min_fill_ordering(g: Graph) -> list[int]:
    """Greedy min-fill elimination order; ties by degree, then vertex id."""
    adj = [set(a) for a in g.adjacency]
    alive = [True] * g.n

    def fill(v: int) -> int:
        nb = list(adj[v])
        missing = 0
        for i, a in enumerate(nb):
            na = adj[a]
            for b in nb[i + 1:]:
                if b not in na:
                    missing += 1
        return missing

    current = [fill(v) for v in range(g.n)]
    heap = [(current[v], len(adj[v]), v) for v in range(g.n)]
    heapq.heapify(heap)
    order = []
    while heap:
        f, d, v = heapq.heappop(heap)
        if not alive[v] or f != current[v] or d != len(adj[v]):
            continue
        order.append(v)
        alive[v] = False
        nb = adj[v]
        for a in nb:
            adj[a].discard(v)
            adj[a] |= nb - {a}
        adj[v] = set()
        touched = set(nb)
        for a in nb:
            touched |= adj[a]
        for u in touched:
            if alive[u]:
                current[u] = fill(u)
                heapq.heappush(heap, (current[u], len(adj[u]), u))
    return order


def heuristic_decomposition(g: Graph) -> TreeDecomposition:
    """Min-fill decomposition; no optimality guarantee."""
    return decomposition_from_ordering(g, min_fill_ordering(g))


def _degeneracy(g: Graph) -> int:
    deg = [g.degree(v) for v in range(g.n)]
    alive = set(range(g.n))
    best = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        best = max(best, deg[v])
        alive.discard(v)
        for u in g.adjacency[v]:
            if u in alive:
                deg[u] -= 1
    return best


def exact_treewidth_ordering(g: Graph) -> tuple[int, list[int]]:
    """Optimal elimination ordering by memoised search over eliminated sets.

    For each candidate width ``w`` (from the degeneracy lower bound up to the
    min-fill upper bound) decide whether all vertices can be eliminated with
    every elimination degree at most ``w``.
    """
    n = g.n
    if n == 0:
        return -1, []
    masks = [g.neighbor_mask(v) for v in range(n)]
    full = (1 << n) - 1
    heur = min_fill_ordering(g)
    ub = ordering_width(g, heur)
    lb = _degeneracy(g)

    def degree_after(eliminated: int, v: int) -> int:
        # vertices outside eliminated+{v} reachable from v through eliminated ones
        seen = 1 << v
        frontier = masks[v]
        outside = 0
        while frontier:
            seen |= frontier
            outside |= frontier & ~eliminated
            inside = frontier & eliminated
            nxt = 0
            while inside:
                low = inside & -inside
                nxt |= masks[low.bit_length() - 1]
                inside ^= low
            frontier = nxt & ~seen
        return bin(outside).count("1")

    def feasible(w: int) -> Optional[list[int]]:
        failed: set[int] = set()
        choice: dict[int, int] = {}

        def go(eliminated: int) -> bool:
            remaining = full & ~eliminated
            if bin(remaining).count("1") <= w + 1:
                return True
            if eliminated in failed:
                return False
            rest = remaining
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                if degree_after(eliminated, v) <= w and go(eliminated | low):
                    choice[eliminated] = v
                    return True
            failed.add(eliminated)
            return False

        if not go(0):
            return None
        order = []
        eliminated = 0
        while eliminated in choice:
            v = choice[eliminated]
            order.append(v)
            eliminated |= 1 << v
        order += [v for v in range(n) if not eliminated >> v & 1]
        return order

    for w in range(min(lb, ub), ub):
        order = feasible(w)
        if order is not None:
            return w, order
    return ub, heur


def exact_decomposition(g: Graph, limit: int = 20) -> Optional[TreeDecomposition]:
    """Minimum-width decomposition, or ``None`` when ``g`` has more than ``limit`` vertices."""
    if g.n > limit:
        return None
    _, order = exact_treewidth_ordering(g)
    return decomposition_from_ordering(g, order)


def balanced_separator(g: Graph, td: TreeDecomposition) -> frozenset:
    """A subset K of some bag with 2*max|C| <= sum|C| over components C of G-K.

    Works on the nice form, where adjacent bags differ by at most one vertex.
    Each decomposition edge is oriented towards the side holding more than
    half of the vertices outside its adhesion.  An edge with no heavy side
    yields its adhesion; otherwise the walk from the root follows the unique
    outgoing edge until reaching the sink, whose bag is returned.  Runs in
    O(#nice nodes * width) plus one final component check.
    """
    if g.n <= 1:
        raise DecompositionError("balanced separator needs at least two vertices")
    nice = make_nice(g, td)
    n = g.n
    below = [0] * len(nice)
    for i in range(len(nice)):  # post-order
        below[i] = sum(below[c] for c in nice.children[i])
        if nice.kind[i] == FORGET:
            below[i] += 1
    below_root = below[nice.root] + len(nice.bag[nice.root])

    def sides(p: int, c: int) -> tuple[int, int, frozenset]:
        adhesion = frozenset(nice.bag[p]) & frozenset(nice.bag[c])
        lower = below[c] + (1 if nice.kind[p] == FORGET else 0)
        upper = n - len(adhesion) - lower
        return upper, lower, adhesion

    assert below_root == n
    t = nice.root
    result: Optional[frozenset] = None
    while result is None:
        step = None
        for c in nice.children[t]:
            upper, lower, adhesion = sides(t, c)
            rest = n - len(adhesion)
            if 2 * lower > rest:
                step = c
                break
            if 2 * upper <= rest:
                result = adhesion
                break
        if result is not None:
            break
        if step is None:
            result = frozenset(nice.bag[t])
        else:
            t = step
    comps = connected_components(g, set(range(n)) - result)
    total = sum(len(c) for c in comps)
    if 2 * max((len(c) for c in comps), default=0) > total:
        raise DecompositionError("internal error: separator is not balanced")
    return result
