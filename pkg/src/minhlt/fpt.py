"""Deciding whether a graph has a DFS tree of height at most k.

Dynamic programming over a nice tree decomposition.  A state at node ``t``
is a triple ``(D, tau, S)``:

* ``D`` is a rooted tree of height at most ``k``, the ancestral closure of
  the images of the bag vertices inside some partial DFS tree;
* ``tau`` maps the bag vertices (in ascending order) injectively into ``D``;
* ``S`` is the set of ``D``-vertices already used by forgotten vertices.

``D``-vertices that are neither images nor in ``S`` are placeholders for
vertices introduced later.  Only *promising* states are kept: no edge of
``D`` joins ``S`` to a placeholder, since a forgotten vertex is never adjacent
to a vertex introduced later.

States are stored in a normal form: ``D`` is renumbered in preorder with
siblings ordered by the smallest bag index found in their subtrees.  Every
leaf of ``D`` is an image and images carry distinct labels, so this order is
total and two states are equal exactly when they are related by a
root-preserving, ``tau``-compatible isomorphism.  The certificate extension
map is applied as "tau first, then the embedding" throughout.
"""

from __future__ import annotations

import time
from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional, Sequence

from .decomp import (
    FORGET,
    INTRODUCE,
    JOIN,
    NiceTreeDecomposition,
    TreeDecomposition,
    exact_decomposition,
    heuristic_decomposition,
    make_nice,
)
from .graph import (
    DfsTree,
    Graph,
    GraphError,
    RootedTree,
    require_connected,
    tree_height,
    verify_dfs_tree,
)

EXACT_DECOMPOSITION_LIMIT = 20


class Verdict(str, Enum):
    YES = "YES"
    NO = "NO"


@dataclass
class SolveResult:
    verdict: Verdict
    certificate: Optional[DfsTree] = None
    stats: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.verdict is Verdict.YES

    @property
    def height(self) -> Optional[int]:
        return self.stats.get("height")


class PartialSolution(NamedTuple):
    """Normalised DP state; ``parent[0] == -1`` and ``parent[i] < i``."""

    parent: tuple[int, ...]
    tau: tuple[int, ...]
    s: int

    @property
    def size(self) -> int:
        return len(self.parent)

    def depths(self) -> list[int]:
        d = [1] * len(self.parent)
        for i in range(1, len(self.parent)):
            d[i] = d[self.parent[i]] + 1
        return d

    def height(self) -> int:
        return max(self.depths())

    def tree_part(self) -> tuple:
        return self.parent, self.tau


class CanonicalKey(NamedTuple):
    tree: bytes
    s: bytes


def normalize(parent: Sequence[int], tau: Sequence[int], s: int) -> tuple[PartialSolution, list[int]]:
    """Renumber an arbitrary state into normal form.

    ``parent`` uses -1 for the root; returns the state and the old-to-new id map.
    """
    m = len(parent)
    children: list[list[int]] = [[] for _ in range(m)]
    root = -1
    for u, p in enumerate(parent):
        if p < 0:
            root = u
        else:
            children[p].append(u)
    big = len(tau)
    label = [big] * m
    for j, x in enumerate(tau):
        label[x] = j
    order = [root]
    for u in order:
        order.extend(children[u])
    low = label[:]
    for u in reversed(order):
        p = parent[u]
        if p >= 0 and low[u] < low[p]:
            low[p] = low[u]
    new_id = [-1] * m
    new_parent = [0] * m
    stack = [root]
    nxt = 0
    while stack:
        u = stack.pop()
        new_id[u] = nxt
        p = parent[u]
        new_parent[nxt] = new_id[p] if p >= 0 else -1
        nxt += 1
        ch = children[u]
        if len(ch) > 1:
            ch = sorted(ch, key=low.__getitem__, reverse=True)
        stack.extend(ch)
    new_s = 0
    while s:
        b = s & -s
        new_s |= 1 << new_id[b.bit_length() - 1]
        s ^= b
    return PartialSolution(tuple(new_parent), tuple(new_id[x] for x in tau), new_s), new_id


def _subtree_sizes(parent: Sequence[int]) -> list[int]:
    size = [1] * len(parent)
    for i in range(len(parent) - 1, 0, -1):
        size[parent[i]] += size[i]
    return size


def _marks(ps: PartialSolution) -> int:
    m = 0
    for x in ps.tau:
        m |= 1 << x
    return m


def is_promising(ps: PartialSolution) -> bool:
    """No D-edge joins a vertex of S to a placeholder vertex."""
    marks = _marks(ps)
    s = ps.s
    for u in range(1, len(ps.parent)):
        p = ps.parent[u]
        if (marks >> u | marks >> p) & 1:
            continue
        if (s >> u & 1) != (s >> p & 1):
            return False
    return True


def ancestral_closure(t: RootedTree, x) -> RootedTree:
    """Subtree induced on ``x`` and all ancestors of ``x``."""
    keep: dict = {}
    for v in x:
        if v not in t.parent:
            raise GraphError(f"{v} is not a tree vertex")
        while v is not None and v not in keep:
            keep[v] = t.parent[v]
            v = t.parent[v]
    if not keep:
        raise GraphError("closure of an empty set is empty")
    return RootedTree(keep, t.root)


def canonical_key(ps: PartialSolution, bag_order: Sequence[int]) -> CanonicalKey:
    """AHU encoding of ``(D, tau)`` with S membership flags kept separately.

    Vertices are labelled by the position of their preimage in ``bag_order``
    (``*`` when unmarked); children are sorted by their encodings.  The S part
    lists membership flags in the resulting canonical preorder.
    """
    if len(bag_order) != len(ps.tau):
        raise GraphError("bag_order must list exactly the bag vertices")
    m = len(ps.parent)
    label = ["*"] * m
    for j, x in enumerate(ps.tau):
        label[x] = str(j)
    children: list[list[int]] = [[] for _ in range(m)]
    for u in range(1, m):
        children[ps.parent[u]].append(u)
    code = [""] * m
    ordered: list[list[int]] = [[] for _ in range(m)]
    for u in range(m - 1, -1, -1):
        ordered[u] = sorted(children[u], key=code.__getitem__)
        code[u] = "(" + label[u] + "".join(code[c] for c in ordered[u]) + ")"
    flags = []
    stack = [0]
    while stack:
        u = stack.pop()
        flags.append("1" if ps.s >> u & 1 else "0")
        stack.extend(reversed(ordered[u]))
    return CanonicalKey(code[0].encode(), "".join(flags).encode())


def leaf_states(k: int) -> list[PartialSolution]:
    """Root paths of 1..k vertices whose deepest vertex is the image."""
    return [
        PartialSolution(tuple(range(-1, length - 1)), (length - 1,), 0)
        for length in range(1, k + 1)
    ]


def transitions_introduce(
    ps: Optional[PartialSolution],
    v: int,
    new_bag: Sequence[int],
    g: Graph,
    k: int,
    maps: Optional[list] = None,
) -> list[PartialSolution]:
    """Successor states when ``v`` is introduced; ``ps=None`` for a leaf node.

    The image of ``v`` either takes a placeholder vertex of D, or ends a
    fresh path hung below an existing vertex.  D never grows above its root:
    the child bag is non-empty, so its closure already contains the root of
    any full solution.  When ``maps`` is given, it receives for every
    returned state the map from child D-ids to new ids.
    """
    if ps is None:
        out = leaf_states(k)
        if maps is not None:
            maps.extend([None] * len(out))
        return out
    parent = ps.parent
    tau = ps.tau
    s = ps.s
    m = len(parent)
    pos = bisect_left(new_bag, v)
    old_bag = tuple(new_bag[:pos]) + tuple(new_bag[pos + 1:])
    adjv = g.neighbor_set(v)
    pre = [-1] * m
    for j, x in enumerate(tau):
        pre[x] = old_bag[j]
    depth = [1] * m
    for i in range(1, m):
        depth[i] = depth[parent[i]] + 1
    size = _subtree_sizes(parent)
    children: list[list[int]] = [[] for _ in range(m)]
    for i in range(1, m):
        children[parent[i]].append(i)
    nbr_imgs = [tau[j] for j, w in enumerate(old_bag) if w in adjv]
    out: list[PartialSolution] = []

    def emit(par, u_img):
        new_tau = tau[:pos] + (u_img,) + tau[pos:]
        state, new_id = normalize(par, new_tau, s)
        out.append(state)
        if maps is not None:
            maps.append(new_id)

    for u in range(m):
        if s >> u & 1:
            continue
        # every neighbour image must be an ancestor of the new image
        above_all = all(x <= u < x + size[x] for x in nbr_imgs)
        if pre[u] < 0:
            # (a) v takes the placeholder u
            ok = True
            for x in nbr_imgs:
                if not (x <= u < x + size[x] or u <= x < u + size[u]):
                    ok = False
                    break
            if ok:
                p = parent[u]
                if p >= 0 and pre[p] >= 0 and pre[p] not in adjv:
                    ok = False
                for c in children[u]:
                    if pre[c] >= 0 and pre[c] not in adjv:
                        ok = False
                        break
            if ok:
                emit(parent, u)
        if not above_all:
            continue
        # (b) fresh path of `length` vertices below u, image at its end
        for length in range(1, k - depth[u] + 1):
            if length == 1 and pre[u] >= 0 and pre[u] not in adjv:
                continue
            par = parent + (u,) + tuple(range(m, m + length - 1))
            emit(par, m + length - 1)
    return out


def transitions_forget(
    ps: PartialSolution, v: int, bag: Sequence[int], with_map: bool = False
):
    """State after forgetting ``v`` from ``bag``, or ``None`` if illegal.

    The image of ``v`` joins S, D shrinks to the closure of the remaining
    images, and every dropped vertex must already be in S.
    """
    j = bisect_left(bag, v)
    if j >= len(bag) or bag[j] != v:
        raise GraphError(f"{v} is not in the bag")
    parent = ps.parent
    m = len(parent)
    x = ps.tau[j]
    new_tau = ps.tau[:j] + ps.tau[j + 1:]
    if not new_tau:
        raise GraphError("cannot forget the last bag vertex")
    s = ps.s | (1 << x)
    keep = 0
    for y in new_tau:
        while not keep >> y & 1:
            keep |= 1 << y
            if y == 0:
                break
            y = parent[y]
    full = (1 << m) - 1
    dropped = full & ~keep
    if dropped & ~s:
        result = None
    else:
        s &= keep
        marks = 0
        for y in new_tau:
            marks |= 1 << y
        result = ()
        for u in range(1, m):
            if not keep >> u & 1:
                continue
            p = parent[u]
            if (marks >> u | marks >> p) & 1:
                continue
            if (s >> u & 1) != (s >> p & 1):
                result = None
                break
    if result is None:
        return (None, None) if with_map else None
    kept = [u for u in range(m) if keep >> u & 1]
    compact = {u: i for i, u in enumerate(kept)}
    par = [compact[parent[u]] if parent[u] >= 0 else -1 for u in kept]
    ctau = [compact[y] for y in new_tau]
    cs = 0
    for u in kept:
        if s >> u & 1:
            cs |= 1 << compact[u]
    state, new_id = normalize(par, ctau, cs)
    if not with_map:
        return state
    old_to_new = [-1] * m
    for u in kept:
        old_to_new[u] = new_id[compact[u]]
    return state, old_to_new


def transitions_join(
    ps1: PartialSolution, ps2: PartialSolution, bag_order: Optional[Sequence[int]] = None
) -> Optional[PartialSolution]:
    """Merge two states of a join node; ``None`` unless isomorphic with disjoint S."""
    if ps1.parent != ps2.parent or ps1.tau != ps2.tau:
        return None
    if ps1.s & ps2.s:
        return None
    return PartialSolution(ps1.parent, ps1.tau, ps1.s | ps2.s)


def accepts_at_root(ps: PartialSolution) -> bool:
    """Every vertex of D is an image or in S."""
    return (ps.s | _marks(ps)) == (1 << len(ps.parent)) - 1


def choose_decomposition(g: Graph) -> TreeDecomposition:
    if g.n <= EXACT_DECOMPOSITION_LIMIT:
        td = exact_decomposition(g, EXACT_DECOMPOSITION_LIMIT)
        if td is not None:
            return td
    return heuristic_decomposition(g)


def run_dp(g: Graph, k: int, nice: NiceTreeDecomposition):
    """Fill the DP tables bottom-up; returns (tables, accepting root state or None, stats).

    ``tables[i]`` maps each stored state of node ``i`` to its backpointer.
    Stops early with an empty table, which already implies NO.
    """
    tables: list[dict] = [None] * len(nice)
    peak = 0
    total = 0
    for i in range(len(nice)):
        kind = nice.kind[i]
        ch = nice.children[i]
        bag = nice.bag[i]
        table: dict = {}
        if kind == INTRODUCE:
            v = nice.vertex[i]
            if not ch:
                for st in leaf_states(k):
                    table.setdefault(st, None)
            else:
                src = tables[ch[0]]
                for st in src:
                    maps: list = []
                    for new, mp in zip(transitions_introduce(st, v, bag, g, k, maps), maps):
                        if new not in table:
                            table[new] = (st, mp)
        elif kind == FORGET:
            v = nice.vertex[i]
            child_bag = nice.bag[ch[0]]
            for st in tables[ch[0]]:
                new, mp = transitions_forget(st, v, child_bag, with_map=True)
                if new is not None and new not in table:
                    table[new] = (st, mp)
        elif kind == JOIN:
            right: dict = {}
            for st in tables[ch[1]]:
                right.setdefault((st.parent, st.tau), []).append(st)
            for st in tables[ch[0]]:
                for other in right.get((st.parent, st.tau), ()):
                    if st.s & other.s:
                        continue
                    new = PartialSolution(st.parent, st.tau, st.s | other.s)
                    if new not in table:
                        table[new] = (st, other)
        else:
            raise GraphError(f"unknown node kind {kind}")
        tables[i] = table
        peak = max(peak, len(table))
        total += len(table)
        if not table:
            return tables, None, {"peak_table": peak, "states": total, "stopped_at": i}
    root_state = None
    for st in tables[nice.root]:
        if accepts_at_root(st):
            root_state = st
            break
    return tables, root_state, {"peak_table": peak, "states": total}


def reconstruct_certificate(
    g: Graph, nice: NiceTreeDecomposition, tables: list, root_state: PartialSolution
) -> DfsTree:
    """Materialise a DFS tree by walking the transitions back from the root."""
    f_parent: list[int] = []
    f_label: list[Optional[int]] = []

    def new_node(p: int) -> int:
        f_parent.append(p)
        f_label.append(None)
        return len(f_parent) - 1

    fmap: list[int] = []
    for p in root_state.parent:
        fmap.append(new_node(fmap[p] if p >= 0 else -1))
    for j, x in enumerate(root_state.tau):
        f_label[fmap[x]] = nice.bag[nice.root][j]
    stack = [(nice.root, root_state, fmap)]
    while stack:
        node, st, fmap = stack.pop()
        back = tables[node][st]
        kind = nice.kind[node]
        ch = nice.children[node]
        if kind == INTRODUCE:
            if not ch:
                continue
            child_st, old_to_new = back
            stack.append((ch[0], child_st, [fmap[old_to_new[i]] for i in range(child_st.size)]))
        elif kind == FORGET:
            child_st, old_to_new = back
            cmap = [0] * child_st.size
            for i in range(child_st.size):
                if old_to_new[i] >= 0:
                    cmap[i] = fmap[old_to_new[i]]
                else:
                    cmap[i] = new_node(cmap[child_st.parent[i]])
            v = nice.vertex[node]
            x = child_st.tau[bisect_left(nice.bag[ch[0]], v)]
            f_label[cmap[x]] = v
            stack.append((ch[0], child_st, cmap))
        else:
            left, right = back
            stack.append((ch[0], left, fmap))
            stack.append((ch[1], right, fmap))
    if any(lab is None for lab in f_label) or sorted(f_label) != list(range(g.n)):
        raise GraphError("internal error: certificate does not label every vertex once")
    parent: dict = {}
    root = None
    for f, lab in enumerate(f_label):
        p = f_parent[f]
        parent[lab] = f_label[p] if p >= 0 else None
        if p < 0:
            root = lab
    return DfsTree(parent, root, host=g)


def solve_minhlt(
    g: Graph, k: int, td: Optional[TreeDecomposition] = None, certify: bool = True
) -> SolveResult:
    """Decide whether ``g`` has a DFS tree of height at most ``k``.

    Without ``td`` an exact decomposition is used up to 20 vertices and a
    min-fill one beyond.  The width affects running time only, never the answer.
    """
    require_connected(g)
    if not isinstance(k, int) or k < 1:
        raise GraphError("k must be a positive integer")
    started = time.perf_counter()
    if td is None:
        td = choose_decomposition(g)
    nice = make_nice(g, td)
    tables, root_state, stats = run_dp(g, k, nice)
    stats.update(width=nice.width, nice_nodes=len(nice), k=k, n=g.n)
    if root_state is None:
        stats["time_ms"] = (time.perf_counter() - started) * 1000
        return SolveResult(Verdict.NO, None, stats)
    cert = None
    if certify:
        cert = reconstruct_certificate(g, nice, tables, root_state)
        check = verify_dfs_tree(g, cert)
        h = tree_height(cert)
        if not check or h > k:
            raise GraphError(f"internal error: certificate rejected ({check.reason}, height {h})")
        stats["height"] = h
    stats["time_ms"] = (time.perf_counter() - started) * 1000
    return SolveResult(Verdict.YES, cert, stats)


def minhlt_value(g: Graph, upper: Optional[int] = None) -> int:
    """Smallest k with a YES answer, by increasing k."""
    require_connected(g)
    top = g.n if upper is None else upper
    for k in range(1, top + 1):
        if solve_minhlt(g, k, certify=False).yes:
            return k
    raise GraphError("no DFS tree within the given upper bound")
