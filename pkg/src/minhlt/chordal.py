"""Chordal graphs and the dual problem: is there a DFS tree of height <= n - k?

Recognition via LexBFS, clique trees, and the three-way split on the size of
a balanced clique separator K.  Small K gives a YES directly: start the DFS
along K.  Large K gives NO, since K must lie on one vertical path.  The
moderate case enumerates compressed candidate trees.

Compressed candidates
---------------------
Let R be the vertices outside K.  A vertex of R has its own type; a vertex
of K has type ``N(v) & R``, and vertices of K with equal type are
interchangeable.  In every DFS tree all of K lies on one vertical path.
Contracting the K-vertices that are neither the root, nor the deepest
K-vertex X, nor tree-adjacent to R leaves a tree on at most 3r+2 vertices.
Its K-K edges are *amendable*, meaning lost K-vertices can be reinserted
into them.

The enumeration exploits that shape.  The root-to-X path (the *spine*) is a
sequence of R-vertices and K-types.  The remaining R-vertices split into the
components of ``G[R - spine]``.  Each component hangs below the deepest
spine entry adjacent to it, because a DFS subtree hangs at its deepest
neighbour, and internally it is a DFS tree of the component.  Lost vertices
of type S go into the deepest amendable edge that stays above every
component adjacent to S.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, NamedTuple, Optional, Sequence, Union

from .decomp import TreeDecomposition, balanced_separator
from .fpt import SolveResult, Verdict
from .graph import (
    DfsTree,
    Graph,
    GraphError,
    RootedTree,
    VerifyResult,
    require_connected,
    tree_height,
    verify_dfs_tree,
)

DEFAULT_SEARCH_BUDGET = 2_000_000


class NotChordalError(GraphError):
    pass


class ParameterTooLarge(GraphError):
    pass


@dataclass(frozen=True)
class PerfectEliminationOrder:
    order: tuple[int, ...]
    chordal = True


@dataclass(frozen=True)
class NotChordal:
    hole: tuple[int, ...]
    chordal = False


def lexbfs(g: Graph) -> list[int]:
    """Lexicographic BFS by partition refinement; ties go to the smaller id."""
    n = g.n
    if n == 0:
        return []
    parts: list[list[int]] = [list(range(n))]
    out: list[int] = []
    done = [False] * n
    while parts:
        first = parts[0]
        v = first.pop(0)
        if not first:
            parts.pop(0)
        done[v] = True
        out.append(v)
        nbrs = g.neighbor_set(v)
        refined: list[list[int]] = []
        for part in parts:
            inside = [u for u in part if u in nbrs]
            if inside and len(inside) < len(part):
                refined.append(inside)
                refined.append([u for u in part if u not in nbrs])
            else:
                refined.append(part)
        parts = refined
    return out


def _simplicial_violation(g: Graph, order: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """First (v, a, b) with a, b later non-adjacent neighbours of v."""
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = sorted(u for u in g.neighbors(v) if pos[u] > pos[v])
        if not later:
            continue
        # it suffices to check against the earliest later neighbour
        first = min(later, key=pos.__getitem__)
        for u in later:
            if u != first and not g.has_edge(first, u):
                return v, min(first, u), max(first, u)
    return None


def _hole_through(g: Graph, v: int, a: int, b: int) -> Optional[list[int]]:
    blocked = set(g.neighbor_set(v)) - {a, b}
    blocked.add(v)
    prev = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in g.neighbors(x):
            if y not in prev and y not in blocked:
                prev[y] = x
                queue.append(y)
    if b not in prev:
        return None
    path = []
    x: Optional[int] = b
    while x is not None:
        path.append(x)
        x = prev[x]
    path.reverse()
    return [v] + path


def _normalise_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    i = cycle.index(min(cycle))
    rot = list(cycle[i:]) + list(cycle[:i])
    if len(rot) > 2 and rot[-1] < rot[1]:
        rot = [rot[0]] + rot[1:][::-1]
    return tuple(rot)


def find_hole(g: Graph, hint: Optional[tuple[int, int, int]] = None) -> Optional[tuple[int, ...]]:
    """An induced cycle of length >= 4, or None if ``g`` is chordal."""
    tries = [hint] if hint else []
    for v in range(g.n):
        nb = g.neighbors(v)
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                if not g.has_edge(a, b):
                    tries.append((v, a, b))
    for v, a, b in tries:
        cyc = _hole_through(g, v, a, b)
        if cyc is not None:
            return _normalise_cycle(cyc)
    return None


def recognize_chordal(g: Graph) -> Union[PerfectEliminationOrder, NotChordal]:
    """A verified perfect elimination order, or an induced hole as witness."""
    order = lexbfs(g)[::-1]
    bad = _simplicial_violation(g, order)
    if bad is None:
        return PerfectEliminationOrder(tuple(order))
    hole = find_hole(g, bad)
    if hole is None:
        raise GraphError("internal error: elimination order failed but no hole found")
    return NotChordal(hole)


def is_chordal(g: Graph) -> bool:
    return recognize_chordal(g).chordal


def require_chordal(g: Graph) -> PerfectEliminationOrder:
    res = recognize_chordal(g)
    if not res.chordal:
        raise NotChordalError(f"graph not chordal, induced cycle {res.hole}")
    return res


def maximal_cliques(g: Graph, peo: PerfectEliminationOrder) -> list[frozenset]:
    """Maximal cliques read off a perfect elimination order, sorted."""
    order = peo.order
    if sorted(order) != list(range(g.n)):
        raise GraphError("order is not a permutation of the vertices")
    if _simplicial_violation(g, order) is not None:
        raise GraphError("not a perfect elimination order")
    pos = {v: i for i, v in enumerate(order)}
    later = {v: [u for u in g.neighbors(v) if pos[u] > pos[v]] for v in order}
    follower = {v: min(later[v], key=pos.__getitem__) for v in order if later[v]}
    # C(u) is not maximal iff some v has follower u and |C(v)| = |C(u)| + 1
    dominated = set()
    for v, u in follower.items():
        if len(later[v]) == len(later[u]) + 1:
            dominated.add(u)
    cliques = [frozenset([v] + later[v]) for v in order if v not in dominated]
    return sorted(cliques, key=lambda c: tuple(sorted(c)))


def clique_tree(g: Graph, peo: PerfectEliminationOrder) -> TreeDecomposition:
    """Maximum-weight spanning tree of the clique intersection graph."""
    cliques = maximal_cliques(g, peo)
    holders: dict[int, list[int]] = {}
    for i, c in enumerate(cliques):
        for v in c:
            holders.setdefault(v, []).append(i)
    pairs: dict[tuple[int, int], int] = {}
    for ids in holders.values():
        for x in range(len(ids)):
            for y in range(x + 1, len(ids)):
                key = (ids[x], ids[y])
                pairs[key] = pairs.get(key, 0) + 1
    uf = list(range(len(cliques)))

    def find(x: int) -> int:
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    edges = []
    for (a, b), w in sorted(pairs.items(), key=lambda kv: (-kv[1], kv[0])):
        ra, rb = find(a), find(b)
        if ra != rb:
            uf[ra] = rb
            edges.append((a, b))
    if len(edges) != len(cliques) - 1:
        raise GraphError("graph not connected")
    return TreeDecomposition(tuple(cliques), tuple(edges))


# --- small clique case ----------------------------------------------------


def dfs_from_hamiltonian_separator(g: Graph, s, hampath: Sequence[int]) -> DfsTree:
    """DFS that first walks ``hampath`` through ``s``, then continues greedily.

    Vertices of different components of ``G - s`` end up incomparable, which
    bounds the height by ``|s|`` plus the largest component.
    """
    require_connected(g)
    s = frozenset(s)
    path = list(hampath)
    if len(set(path)) != len(path) or set(path) != s or not path:
        raise GraphError("hampath must list every vertex of s exactly once")
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise GraphError(f"hampath step {a}-{b} is not an edge")
    parent: dict[int, Optional[int]] = {path[0]: None}
    for a, b in zip(path, path[1:]):
        parent[b] = a
    stack = list(path)
    pointer = {v: 0 for v in path}
    while stack:
        u = stack[-1]
        nb = g.adjacency[u]
        i = pointer[u]
        while i < len(nb) and nb[i] in parent:
            i += 1
        pointer[u] = i
        if i == len(nb):
            stack.pop()
            continue
        w = nb[i]
        parent[w] = u
        pointer[w] = 0
        stack.append(w)
    return DfsTree(parent, path[0], host=g)


# --- moderate clique case -------------------------------------------------


class VertexType(NamedTuple):
    """``("R", v)`` for a vertex outside the clique, ``("K", S)`` inside it."""

    tag: str
    value: object

    def __str__(self) -> str:
        if self.tag == "R":
            return f"R{self.value}"
        return "K{" + ",".join(map(str, sorted(self.value))) + "}"


def InR(v: int) -> VertexType:
    return VertexType("R", v)


def InK(s) -> VertexType:
    return VertexType("K", frozenset(s))


@dataclass(frozen=True)
class CompressedCandidate:
    """Rooted tree with type labels; ``amendable`` holds child ends of K-K edges."""

    parent: tuple[int, ...]
    types: tuple[VertexType, ...]
    amendable: frozenset
    kclique: frozenset

    def __len__(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.parent]
        for u, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(u)
        return ch

    def canonical(self) -> str:
        """AHU encoding with type labels and amendable marks, child-order free."""
        ch = self.children()
        code: dict[int, str] = {}
        order = [self.root]
        for u in order:
            order.extend(ch[u])
        for u in reversed(order):
            mark = "*" if u in self.amendable else ""
            inner = "".join(sorted(code[c] for c in ch[u]))
            code[u] = "(" + mark + str(self.types[u]) + inner + ")"
        return code[self.root]


class ModerateInstance:
    """Precomputed types and ``g_S`` counts for a clique K of ``g``."""

    def __init__(self, g: Graph, kclique):
        self.g = g
        self.kclique = frozenset(kclique)
        if not self.kclique or not g.is_clique(sorted(self.kclique)):
            raise GraphError("kclique must be a non-empty clique of g")
        self.rset = tuple(v for v in range(g.n) if v not in self.kclique)
        self.r = len(self.rset)
        self.ridx = {v: i for i, v in enumerate(self.rset)}
        # R-graph as bitmasks over R indices
        self.rmask = tuple(
            sum(1 << self.ridx[u] for u in g.neighbors(v) if u in self.ridx) for v in self.rset
        )
        members: dict[int, list[int]] = {}
        for v in sorted(self.kclique):
            mask = sum(1 << self.ridx[u] for u in g.neighbors(v) if u in self.ridx)
            members.setdefault(mask, []).append(v)
        self.type_masks = tuple(sorted(members))
        self.members = {m: tuple(members[m]) for m in self.type_masks}
        self.g_s = {m: len(members[m]) for m in self.type_masks}

    def mask_to_set(self, mask: int) -> frozenset:
        return frozenset(self.rset[i] for i in range(self.r) if mask >> i & 1)

    def set_to_mask(self, s) -> int:
        return sum(1 << self.ridx[v] for v in s)

    def type_of(self, v: int) -> VertexType:
        if v in self.ridx:
            return InR(v)
        return InK(frozenset(u for u in self.g.neighbors(v) if u in self.ridx))

    def adjacent_types(self, a: VertexType, b: VertexType) -> bool:
        if a.tag == "K" and b.tag == "K":
            return True
        if a.tag == "R" and b.tag == "R":
            return self.g.has_edge(a.value, b.value)
        v, s = (a.value, b.value) if a.tag == "R" else (b.value, a.value)
        return v in s


def _intervals(parent: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
    ch: list[list[int]] = [[] for _ in parent]
    root = -1
    for u, p in enumerate(parent):
        if p < 0:
            root = u
        else:
            ch[p].append(u)
    tin = [0] * len(parent)
    tout = [0] * len(parent)
    depth = [1] * len(parent)
    clock = 0
    stack = [(root, False)]
    while stack:
        u, closing = stack.pop()
        if closing:
            tout[u] = clock
            continue
        tin[u] = clock
        clock += 1
        if parent[u] >= 0:
            depth[u] = depth[parent[u]] + 1
        stack.append((u, True))
        for c in reversed(ch[u]):
            stack.append((c, False))
    return tin, tout, depth


def check_candidate(g: Graph, c: CompressedCandidate, instance: Optional[ModerateInstance] = None) -> VerifyResult:
    """Necessary and sufficient conditions for some DFS tree to compress to ``c``.

    Besides the type-count, adjacency and comparability checks, every type S
    with lost vertices needs an amendable edge above all ``tau^-1(v)`` for v
    in H(S).  At least one such edge must exist even when H(S) is empty,
    because the lost vertices have to go somewhere.
    """
    inst = instance or ModerateInstance(g, c.kclique)
    m = len(c.parent)
    if m == 0 or len(c.types) != m:
        return VerifyResult(False, "malformed", ())
    if m > 3 * inst.r + 2:
        return VerifyResult(False, "too-many-vertices", (m,))
    try:
        RootedTree(
            {u: (p if p >= 0 else None) for u, p in enumerate(c.parent)}, c.parent.index(-1)
        )
    except (GraphError, ValueError):
        return VerifyResult(False, "not-a-tree", ())
    r_node: dict[int, int] = {}
    k_count: dict[int, int] = {}
    for u, t in enumerate(c.types):
        if t.tag == "R":
            if t.value not in inst.ridx:
                return VerifyResult(False, "unknown-type", (u,))
            if t.value in r_node:
                return VerifyResult(False, "r-multiplicity", (t.value,))
            r_node[t.value] = u
        elif t.tag == "K":
            if not set(t.value) <= set(inst.rset):
                return VerifyResult(False, "unknown-type", (u,))
            mask = inst.set_to_mask(t.value)
            k_count[mask] = k_count.get(mask, 0) + 1
            if k_count[mask] > inst.g_s.get(mask, 0):
                return VerifyResult(False, "k-multiplicity", (t,))
        else:
            return VerifyResult(False, "unknown-type", (u,))
    if len(r_node) != inst.r:
        missing = sorted(set(inst.rset) - set(r_node))
        return VerifyResult(False, "r-multiplicity", (missing[0],))
    for u in c.amendable:
        p = c.parent[u] if 0 <= u < m else -1
        if p < 0 or c.types[u].tag != "K" or c.types[p].tag != "K":
            return VerifyResult(False, "bad-amendable", (u,))
    for u, p in enumerate(c.parent):
        if p >= 0 and not inst.adjacent_types(c.types[u], c.types[p]):
            return VerifyResult(False, "non-adjacent-edge", (p, u))
    tin, tout, depth = _intervals(c.parent)

    def anc(a: int, b: int) -> bool:
        return tin[a] <= tin[b] and tout[b] <= tout[a]

    for a in range(m):
        for b in range(a + 1, m):
            if not anc(a, b) and not anc(b, a) and inst.adjacent_types(c.types[a], c.types[b]):
                return VerifyResult(False, "incomparable-adjacent", (a, b))
    knodes = [u for u in range(m) if c.types[u].tag == "K"]
    if not knodes:
        return VerifyResult(False, "no-clique-vertex", ())
    x = max(knodes, key=depth.__getitem__)
    for u in knodes:
        if not anc(u, x):
            return VerifyResult(False, "clique-not-vertical", (u,))
    for mask in inst.type_masks:
        if k_count.get(mask, 0) >= inst.g_s[mask]:
            continue
        if not _eligible_edges(inst, c, mask, r_node, anc, x)[0]:
            return VerifyResult(False, "no-amendable-edge", (InK(inst.mask_to_set(mask)),))
    return VerifyResult(True)


def _path_amendable(c: CompressedCandidate, u: int) -> list[int]:
    out = []
    while c.parent[u] >= 0:
        if u in c.amendable:
            out.append(u)
        u = c.parent[u]
    return out


def _eligible_edges(inst, c, mask, r_node, anc, x) -> tuple[list[int], list[list[int]]]:
    """Amendable edges allowed for lost vertices of type ``mask``, plus the per-v sets."""
    sets = []
    for i in range(inst.r):
        if not mask >> i & 1:
            continue
        node = r_node[inst.rset[i]]
        if anc(node, x):
            continue
        sets.append(_path_amendable(c, node))
    if not sets:
        return sorted(c.amendable), sets
    common = set(sets[0])
    for s in sets[1:]:
        common &= set(s)
    return sorted(common), sets


def _distribution(g: Graph, c: CompressedCandidate, inst: ModerateInstance) -> dict[int, list[int]]:
    """Lost-vertex counts per amendable edge: the deepest allowed edge per type."""
    m = len(c.parent)
    tin, tout, depth = _intervals(c.parent)

    def anc(a: int, b: int) -> bool:
        return tin[a] <= tin[b] and tout[b] <= tout[a]

    r_node = {t.value: u for u, t in enumerate(c.types) if t.tag == "R"}
    k_count: dict[int, int] = {}
    for t in c.types:
        if t.tag == "K":
            mk = inst.set_to_mask(t.value)
            k_count[mk] = k_count.get(mk, 0) + 1
    x = max((u for u in range(m) if c.types[u].tag == "K"), key=depth.__getitem__)
    slots: dict[int, list[int]] = {}
    for mask in inst.type_masks:
        lost = inst.g_s[mask] - k_count.get(mask, 0)
        if lost <= 0:
            continue
        common, sets = _eligible_edges(inst, c, mask, r_node, anc, x)
        if sets:
            smallest = min(sets, key=len)
            if set(smallest) != set(common):
                raise GraphError(
                    "amendable edge sets on the paths to H(S) are not nested; "
                    f"type {InK(inst.mask_to_set(mask))}"
                )
        if not common:
            raise GraphError("candidate has no amendable edge for its lost vertices")
        deepest = max(common, key=depth.__getitem__)
        slots.setdefault(deepest, []).extend([mask] * lost)
    return slots


def candidate_height(g: Graph, c: CompressedCandidate, instance: Optional[ModerateInstance] = None) -> int:
    """Height of the decompressed tree, computed without building it."""
    inst = instance or ModerateInstance(g, c.kclique)
    extra = {u: len(v) for u, v in _distribution(g, c, inst).items()}
    _, _, depth = _intervals(c.parent)
    ch = c.children()
    best = 0
    stack = [(c.root, 1 + extra.get(c.root, 0))]
    while stack:
        u, d = stack.pop()
        best = max(best, d)
        for w in ch[u]:
            stack.append((w, d + 1 + extra.get(w, 0)))
    return best


def decompress_candidate(g: Graph, c: CompressedCandidate, instance: Optional[ModerateInstance] = None) -> DfsTree:
    """Materialise a DFS tree whose compression is ``c``.

    Candidate vertices of type S take the smallest ids of S in preorder; the
    remaining ids of S fill the chosen amendable edge from the top.
    """
    inst = instance or ModerateInstance(g, c.kclique)
    slots = _distribution(g, c, inst)
    pools = {mask: list(inst.members[mask]) for mask in inst.type_masks}
    ch = c.children()
    order = [c.root]
    for u in order:
        order.extend(ch[u])
    real: dict[int, int] = {}
    for u in order:
        t = c.types[u]
        if t.tag == "R":
            real[u] = t.value
        else:
            real[u] = pools[inst.set_to_mask(t.value)].pop(0)
    parent: dict[int, Optional[int]] = {}
    for u in order:
        p = c.parent[u]
        above = real[p] if p >= 0 else None
        for mask in slots.get(u, ()):
            v = pools[mask].pop(0)
            parent[v] = above
            above = v
        parent[real[u]] = above
    tree = DfsTree(parent, real[c.root], host=g)
    check = verify_dfs_tree(g, tree)
    if not check:
        raise GraphError(f"internal error: decompression is not a DFS tree ({check.reason})")
    return tree


class _SpineSearch:
    """Enumerates spines and evaluates the candidates they determine.

    Codes: ``0..r-1`` are R-vertices by index, ``r + j`` is the j-th K-type.
    """

    def __init__(self, inst: ModerateInstance, budget: int):
        self.inst = inst
        self.budget = budget
        self.steps = 0
        r = inst.r
        self.r = r
        self.codes = list(range(r + len(inst.type_masks)))
        # adjacency into R for each code, as an R-index mask
        self.nbr_r = [inst.rmask[i] for i in range(r)] + list(inst.type_masks)
        self.cap = [1] * r + [inst.g_s[m] for m in inst.type_masks]
        self._rooted = lru_cache(maxsize=None)(self._rooted_impl)

    def is_k(self, code: int) -> bool:
        return code >= self.r

    def adjacent(self, a: int, b: int) -> bool:
        if a >= self.r and b >= self.r:
            return True
        if a >= self.r:
            return bool(self.nbr_r[a] >> b & 1)
        return bool(self.nbr_r[b] >> a & 1)

    def vtype(self, code: int) -> VertexType:
        if code < self.r:
            return InR(self.inst.rset[code])
        return InK(self.inst.mask_to_set(self.inst.type_masks[code - self.r]))

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise ParameterTooLarge(
                "parameter too large for moderate-case enumeration: "
                f"search exceeded the guard of {self.budget} steps "
                f"(r={self.r}, {len(self.inst.type_masks)} clique types)"
            )

    def spines(self, bound: Optional[list]) -> Iterator[tuple[int, ...]]:
        """Spines ending in a K-type; ``bound[0]`` caps the height when given.

        Two necessary conditions prune prefixes.  All of K ends up on the
        spine path, so a prefix using j R-vertices needs height >= |K| + j.
        A K entry between two K entries must be the deepest spine neighbour
        of some off-spine vertex, so it keeps a witness mask of candidate
        vertices not yet used or adjacent to a later entry.
        """
        full_r = (1 << self.r) - 1
        ksize = len(self.inst.kclique)
        counts = [0] * len(self.codes)
        seq: list[int] = []
        witnesses: list[list[int]] = []  # [position, mask] of constrained K entries

        def rec(used_r: int, n_r: int) -> Iterator[tuple[int, ...]]:
            self.tick()
            if seq and self.is_k(seq[-1]):
                yield tuple(seq)
            for code in self.codes:
                if counts[code] >= self.cap[code]:
                    continue
                if seq and not self.adjacent(seq[-1], code):
                    continue
                is_r = code < self.r
                new_used = used_r | (1 << code) if is_r else used_r
                new_nr = n_r + (1 if is_r else 0)
                if bound is not None:
                    if max(ksize + new_nr, len(seq) + 1) > bound[0]:
                        continue
                kill = self.nbr_r[code] | (1 << code if is_r else 0)
                saved = [w[1] for w in witnesses]
                ok = True
                for w in witnesses:
                    w[1] &= ~kill
                    if not w[1]:
                        ok = False
                added = False
                if ok and not is_r and len(seq) >= 2 and self.is_k(seq[-1]) and self.is_k(seq[-2]):
                    mask = self.nbr_r[seq[-1]] & full_r & ~new_used & ~self.nbr_r[code]
                    if mask:
                        witnesses.append([len(seq) - 1, mask])
                        added = True
                    else:
                        ok = False
                if ok:
                    counts[code] += 1
                    seq.append(code)
                    yield from rec(new_used, new_nr)
                    seq.pop()
                    counts[code] -= 1
                if added:
                    witnesses.pop()
                for w, old in zip(witnesses, saved):
                    w[1] = old

        for code in self.codes:
            is_r = code < self.r
            if bound is not None and ksize + (1 if is_r else 0) > bound[0]:
                continue
            counts[code] += 1
            seq.append(code)
            yield from rec(1 << code if is_r else 0, 1 if is_r else 0)
            seq.pop()
            counts[code] -= 1

    def components(self, within: int) -> list[int]:
        comps = []
        rest = within
        while rest:
            comp = rest & -rest
            frontier = comp
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = self.inst.rmask[b.bit_length() - 1] & within & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        return comps

    def _rooted_impl(self, sub: int, q: int) -> tuple[int, tuple]:
        """Min-height DFS tree of G[sub] rooted at q: (height, parent pairs)."""
        rest = sub & ~(1 << q)
        worst = 0
        pairs: list = []
        for comp in self.components(rest):
            best = None
            cand = comp & self.inst.rmask[q]
            while cand:
                b = cand & -cand
                cand ^= b
                c = b.bit_length() - 1
                h, sub_pairs = self._rooted(comp, c)
                if best is None or h < best[0]:
                    best = (h, c, sub_pairs)
            worst = max(worst, best[0])
            pairs.append((best[1], q))
            pairs.extend(best[2])
        return 1 + worst, tuple(pairs)

    def all_rooted(self, sub: int, q: int) -> Iterator[tuple]:
        """Every DFS tree of G[sub] rooted at q, as parent pairs."""
        rest = sub & ~(1 << q)
        per_comp = []
        for comp in self.components(rest):
            options = []
            cand = comp & self.inst.rmask[q]
            while cand:
                b = cand & -cand
                cand ^= b
                c = b.bit_length() - 1
                for sub_pairs in self.all_rooted(comp, c):
                    options.append(((c, q),) + sub_pairs)
            per_comp.append(options)
        for combo in product(*per_comp):
            yield tuple(p for part in combo for p in part)

    def evaluate(self, spine: tuple[int, ...]):
        """Structure of the spine's candidate, or None if it is not valid.

        Returns (hangs, lost) where hangs lists (component, hang index,
        allowed roots) and lost maps a spine index to the K-type codes
        inserted into the edge above it.
        """
        r = self.r
        length = len(spine)
        used = 0
        counts: dict[int, int] = {}
        for code in spine:
            if code < r:
                used |= 1 << code
            else:
                counts[code] = counts.get(code, 0) + 1
        off = ((1 << r) - 1) & ~used
        hangs = []
        hang_at = set()
        for comp in self.components(off):
            d = -1
            for i in range(length - 1, -1, -1):
                if self.nbr_r[spine[i]] & comp:
                    d = i
                    break
            if d < 0:
                return None
            hangs.append((comp, d, comp & self.nbr_r[spine[d]]))
            hang_at.add(d)
        for i, code in enumerate(spine):
            if code < r or i == 0 or i == length - 1 or i in hang_at:
                continue
            if spine[i - 1] < r or spine[i + 1] < r:
                continue
            return None
        lost: dict[int, list[int]] = {}
        for j, mask in enumerate(self.inst.type_masks):
            code = r + j
            missing = self.inst.g_s[mask] - counts.get(code, 0)
            if missing <= 0:
                continue
            limit = length - 1
            for comp, d, _ in hangs:
                if comp & mask:
                    limit = min(limit, d)
            slot = -1
            for i in range(limit, 0, -1):
                if spine[i] >= r and spine[i - 1] >= r:
                    slot = i
                    break
            if slot < 0:
                return None
            lost.setdefault(slot, []).extend([code] * missing)
        return hangs, lost

    def height(self, spine, hangs, lost, trees) -> int:
        depth = []
        acc = 0
        for i in range(len(spine)):
            acc += 1 + len(lost.get(i, ()))
            depth.append(acc)
        best = depth[-1]
        for (comp, d, _), (h, _) in zip(hangs, trees):
            best = max(best, depth[d] + h)
        return best

    def build(self, spine, hangs, trees) -> CompressedCandidate:
        parent = [i - 1 for i in range(len(spine))]
        types = [self.vtype(code) for code in spine]
        amendable = frozenset(
            i for i in range(1, len(spine)) if spine[i] >= self.r and spine[i - 1] >= self.r
        )
        for (comp, d, _), (_, pairs) in zip(hangs, trees):
            local: dict[int, int] = {}
            members = [i for i in range(self.r) if comp >> i & 1]
            for i in members:
                local[i] = len(parent)
                parent.append(-2)
                types.append(InR(self.inst.rset[i]))
            child_of = dict(pairs)
            for i in members:
                p = child_of.get(i)
                parent[local[i]] = local[p] if p is not None else d
        return CompressedCandidate(tuple(parent), tuple(types), amendable, self.inst.kclique)

    def tree_options(self, hangs, full: bool) -> list[list[tuple[int, tuple]]]:
        options = []
        for comp, _, roots in hangs:
            opts = []
            cand = roots
            while cand:
                b = cand & -cand
                cand ^= b
                q = b.bit_length() - 1
                if full:
                    for pairs in self.all_rooted(comp, q):
                        opts.append((_pairs_height(pairs, q), pairs))
                else:
                    opts.append(self._rooted(comp, q))
            if not full:
                opts = [min(opts, key=lambda o: o[0])]
            options.append(opts)
        return options


def _pairs_height(pairs, root) -> int:
    parent = dict(pairs)
    best = 1
    for v in parent:
        d = 1
        while v != root:
            v = parent[v]
            d += 1
        best = max(best, d)
    return best


def _check_moderate_pre(g: Graph, k: int, kclique) -> ModerateInstance:
    require_connected(g)
    if not isinstance(k, int) or k < 1:
        raise GraphError("k must be a positive integer")
    inst = ModerateInstance(g, kclique)
    n = g.n
    size = len(inst.kclique)
    if not (n - 2 * k < size <= n - k):
        raise GraphError(f"moderate case needs n-2k < |K| <= n-k, got |K|={size}, n={n}, k={k}")
    return inst


def enumerate_candidates(
    g: Graph, kclique, budget: int = DEFAULT_SEARCH_BUDGET, complete: bool = True
) -> Iterator[CompressedCandidate]:
    """Every valid compressed candidate for the clique ``kclique``.

    With ``complete=False`` each spine yields a single candidate, using a
    minimum-height internal tree for every hanging component.
    """
    inst = ModerateInstance(g, kclique)
    if inst.r == 0:
        raise GraphError("moderate case needs at least one vertex outside the clique")
    search = _SpineSearch(inst, budget)
    for spine in search.spines(None):
        res = search.evaluate(spine)
        if res is None:
            continue
        hangs, _ = res
        for trees in product(*search.tree_options(hangs, complete)):
            yield search.build(spine, hangs, trees)


def solve_moderate_case(
    g: Graph, k: int, kclique, budget: int = DEFAULT_SEARCH_BUDGET
) -> SolveResult:
    """Minimum height over all candidates, compared against ``n - k``.

    Every DFS tree compresses to some candidate, and decompressing greedily
    never increases the height, so the optimum equals the minimum DFS tree
    height.  Only strictly worse partial spines are pruned.  Ties go to the
    smallest canonical encoding.
    """
    inst = _check_moderate_pre(g, k, kclique)
    search = _SpineSearch(inst, budget)
    # any DFS tree gives a valid upper bound for pruning
    start = dfs_from_hamiltonian_separator(g, inst.kclique, sorted(inst.kclique))
    bound = [tree_height(start)]
    best = None  # (height, key, candidate)
    for spine in search.spines(bound):
        res = search.evaluate(spine)
        if res is None:
            continue
        hangs, lost = res
        trees = [opts[0] for opts in search.tree_options(hangs, False)]
        h = search.height(spine, hangs, lost, trees)
        if h > bound[0]:
            continue
        cand = search.build(spine, hangs, trees)
        key = cand.canonical()
        if best is None or (h, key) < (best[0], best[1]):
            best = (h, key, cand)
            bound[0] = h
    stats = {"case": "moderate", "search_steps": search.steps}
    if best is None:
        raise GraphError("internal error: no candidate found although a DFS tree exists")
    h, _, cand = best
    if not check_candidate(g, cand, inst):
        raise GraphError("internal error: best candidate fails check_candidate")
    if candidate_height(g, cand, inst) != h:
        raise GraphError("internal error: symbolic height disagrees with the search")
    stats["best_height"] = h
    if h > g.n - k:
        return SolveResult(Verdict.NO, None, stats)
    tree = decompress_candidate(g, cand, inst)
    if tree_height(tree) != h:
        raise GraphError("internal error: decompressed height differs")
    stats["height"] = h
    return SolveResult(Verdict.YES, tree, stats)


def dual_minhlt_chordal(g: Graph, k: int, budget: int = DEFAULT_SEARCH_BUDGET) -> SolveResult:
    """Decide whether the chordal graph ``g`` has a DFS tree of height <= n - k."""
    require_connected(g)
    if not isinstance(k, int) or not 1 <= k <= g.n:
        raise GraphError("k must satisfy 1 <= k <= n")
    peo = require_chordal(g)
    n = g.n
    if g.is_clique():
        # every DFS tree of a clique is a path on all n vertices
        return SolveResult(Verdict.NO, None, {"case": "clique"})
    ct = clique_tree(g, peo)
    kset = balanced_separator(g, ct)
    size = len(kset)
    if size <= n - 2 * k:
        tree = dfs_from_hamiltonian_separator(g, kset, sorted(kset))
        h = tree_height(tree)
        if not verify_dfs_tree(g, tree) or h > n - k:
            raise GraphError("internal error: separator DFS exceeds the bound")
        return SolveResult(Verdict.YES, tree, {"case": "small", "separator": sorted(kset), "height": h})
    if size > n - k:
        return SolveResult(Verdict.NO, None, {"case": "large", "separator": sorted(kset)})
    res = solve_moderate_case(g, k, kset, budget)
    res.stats["separator"] = sorted(kset)
    return res
