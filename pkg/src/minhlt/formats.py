"""Text formats.

``.gr``   (PACE)   ``p tdp <n> <m>`` then ``u v`` per edge, 1-based, ``c`` comments.
``.td``   (PACE)   ``s td <bags> <width+1> <n>``, ``b <id> v...`` lines, then
                   ``a b`` bag-tree edges; all ids 1-based.
``.tree``          ``root <r>`` then ``parent <v> <p>`` for every non-root
                   vertex in ascending order of v, 1-based.
``.wt``            ``p wt <n>``, ``w <v> <weight>`` for every vertex, then
                   ``u v`` tree edges, 1-based.

Readers accept ``c`` comment lines and blank lines anywhere.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .decomp import TreeDecomposition
from .graph import Graph, GraphError, RootedTree
from .oracle import WeightedTree


class FormatError(GraphError):
    pass


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        yield no, parts


def _ints(parts: list[str], no: int) -> list[int]:
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise FormatError(f"line {no}: expected integers, got {' '.join(parts)!r}") from None


def _vertex(x: int, n: int, no: int) -> int:
    if not 1 <= x <= n:
        raise FormatError(f"line {no}: vertex {x} out of range 1..{n}")
    return x - 1


def _header(text: str) -> list[str]:
    return [f"c {line}" if line else "c" for line in text.splitlines()]


def write_gr(g: Graph, comment: Optional[str] = None) -> str:
    out = _header(comment) if comment else []
    out.append(f"p tdp {g.n} {g.edge_count}")
    out.extend(f"{u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def read_gr(text: str) -> Graph:
    n = m = None
    edges = []
    for no, parts in _lines(text):
        if parts[0] == "p":
            if n is not None:
                raise FormatError(f"line {no}: duplicate header")
            if len(parts) != 4 or parts[1] != "tdp":
                raise FormatError(f"line {no}: header must be 'p tdp <n> <m>'")
            n, m = _ints(parts[2:], no)
            continue
        if n is None:
            raise FormatError(f"line {no}: edge before header")
        if len(parts) != 2:
            raise FormatError(f"line {no}: edge line needs two vertices")
        u, v = _ints(parts, no)
        edges.append((_vertex(u, n, no), _vertex(v, n, no)))
    if n is None:
        raise FormatError("missing 'p tdp' header")
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    try:
        return Graph.from_edges(n, edges)
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def write_td(td: TreeDecomposition, n: int) -> str:
    width1 = max((len(b) for b in td.bags), default=0)
    out = [f"s td {len(td.bags)} {width1} {n}"]
    for i, bag in enumerate(td.bags, 1):
        out.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
    out.extend(f"{a + 1} {b + 1}" for a, b in td.edges)
    return "\n".join(out) + "\n"


def read_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset] = {}
    edges = []
    for no, parts in _lines(text):
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise FormatError(f"line {no}: header must be 's td <bags> <width+1> <n>'")
            header = _ints(parts[2:], no)
            continue
        if header is None:
            raise FormatError(f"line {no}: content before header")
        nb, _, n = header
        if parts[0] == "b":
            vals = _ints(parts[1:], no)
            if not vals:
                raise FormatError(f"line {no}: bag line needs an id")
            bid = vals[0]
            if not 1 <= bid <= nb or bid in bags:
                raise FormatError(f"line {no}: bad or repeated bag id {bid}")
            bags[bid] = frozenset(_vertex(v, n, no) for v in vals[1:])
        else:
            if len(parts) != 2:
                raise FormatError(f"line {no}: tree edge needs two bag ids")
            a, b = _ints(parts, no)
            for x in (a, b):
                if not 1 <= x <= nb:
                    raise FormatError(f"line {no}: bag id {x} out of range")
            edges.append((a - 1, b - 1))
    if header is None:
        raise FormatError("missing 's td' header")
    if len(bags) != header[0]:
        raise FormatError(f"header announces {header[0]} bags, found {len(bags)}")
    return TreeDecomposition(tuple(bags[i] for i in range(1, header[0] + 1)), tuple(edges))


def write_tree(t: RootedTree) -> str:
    out = [f"root {t.root + 1}"]
    for v in sorted(t.parent):
        p = t.parent[v]
        if p is not None:
            out.append(f"parent {v + 1} {p + 1}")
    return "\n".join(out) + "\n"


def read_tree(text: str) -> RootedTree:
    root = None
    parent: dict = {}
    for no, parts in _lines(text):
        if parts[0] == "root":
            if root is not None or len(parts) != 2:
                raise FormatError(f"line {no}: expected a single 'root <r>' line")
            root = _ints(parts[1:], no)[0] - 1
        elif parts[0] == "parent":
            if len(parts) != 3:
                raise FormatError(f"line {no}: expected 'parent <v> <p>'")
            v, p = _ints(parts[1:], no)
            if v < 1 or p < 1:
                raise FormatError(f"line {no}: ids are 1-based")
            if v - 1 in parent:
                raise FormatError(f"line {no}: vertex {v} has two parents")
            parent[v - 1] = p - 1
        else:
            raise FormatError(f"line {no}: unknown directive {parts[0]!r}")
    if root is None:
        raise FormatError("missing 'root' line")
    if root in parent:
        raise FormatError("root cannot have a parent")
    parent[root] = None
    for p in list(parent.values()):
        if p is not None and p not in parent:
            parent[p] = None
    try:
        return RootedTree(parent, root)
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def write_wt(t: WeightedTree) -> str:
    out = [f"p wt {t.n}"]
    out.extend(f"w {v + 1} {w}" for v, w in enumerate(t.weights))
    out.extend(f"{u + 1} {v + 1}" for u, v in t.tree.edges())
    return "\n".join(out) + "\n"


def read_wt(text: str) -> WeightedTree:
    n = None
    weights: dict[int, int] = {}
    edges = []
    for no, parts in _lines(text):
        if parts[0] == "p":
            if len(parts) != 3 or parts[1] != "wt":
                raise FormatError(f"line {no}: header must be 'p wt <n>'")
            n = _ints(parts[2:], no)[0]
        elif n is None:
            raise FormatError(f"line {no}: content before header")
        elif parts[0] == "w":
            v, w = _ints(parts[1:], no) if len(parts) == 3 else (None, None)
            if v is None:
                raise FormatError(f"line {no}: expected 'w <v> <weight>'")
            weights[_vertex(v, n, no)] = w
        else:
            if len(parts) != 2:
                raise FormatError(f"line {no}: edge line needs two vertices")
            u, v = _ints(parts, no)
            edges.append((_vertex(u, n, no), _vertex(v, n, no)))
    if n is None:
        raise FormatError("missing 'p wt' header")
    if sorted(weights) != list(range(n)):
        raise FormatError("every vertex needs exactly one weight line")
    try:
        return WeightedTree(Graph.from_edges(n, edges), tuple(weights[v] for v in range(n)))
    except GraphError as exc:
        raise FormatError(str(exc)) from None
