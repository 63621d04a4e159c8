import pytest
from hypothesis import given, settings, strategies as st

from minhlt.decomp import heuristic_decomposition
from minhlt.formats import (
    FormatError,
    read_gr,
    read_td,
    read_tree,
    read_wt,
    write_gr,
    write_td,
    write_tree,
    write_wt,
)
from minhlt.gen import random_chordal, random_weighted_tree
from minhlt.graph import RootedTree, cycle_graph, run_dfs


def test_gr_layout():
    text = write_gr(cycle_graph(3), "hello")
    assert text == "c hello\np tdp 3 3\n1 2\n1 3\n2 3\n"


def test_tree_layout():
    t = RootedTree.from_parent_list([1, None, 1])
    assert write_tree(t) == "root 2\nparent 1 2\nparent 3 2\n"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.floats(0, 1), st.integers(0, 1000))
def test_gr_round_trip(n, density, seed):
    g = random_chordal(n, density, seed)
    h = read_gr(write_gr(g, f"seed={seed}"))
    assert h.n == g.n and h.edges() == g.edges()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 1000))
def test_td_and_tree_round_trip(n, seed):
    g = random_chordal(n, 0.5, seed)
    td = heuristic_decomposition(g)
    back = read_td(write_td(td, g.n))
    assert back.bags == td.bags and sorted(back.edges) == sorted(td.edges)
    t = run_dfs(g, seed % n)
    t2 = read_tree(write_tree(t))
    assert t2.root == t.root and t2.parent == dict(t.parent)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(1, 5), st.integers(0, 1000))
def test_wt_round_trip(n, wmax, seed):
    t = random_weighted_tree(n, wmax, seed)
    back = read_wt(write_wt(t))
    assert back.weights == t.weights and back.tree.edges() == t.tree.edges()


def test_comments_and_blank_lines():
    g = read_gr("c top\n\np tdp 2 1\nc mid\n1 2\n")
    assert g.edges() == [(0, 1)]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "1 2\n",
        "p tdp 2 1\n",
        "p tdp 2 1\n1 3\n",
        "p tdp 2 1\n1 x\n",
        "p td 2 1\n1 2\n",
        "p tdp 2 1\n1 1\n",
        "p tdp 2 1\np tdp 2 1\n1 2\n",
    ],
)
def test_bad_gr(text):
    with pytest.raises(FormatError):
        read_gr(text)


@pytest.mark.parametrize(
    "text",
    ["", "parent 2 1\n", "root 1\nroot 2\n", "root 1\nparent 1 2\n", "root 1\nparent 2 1\nparent 2 1\n", "root 1\nleaf 2\n"],
)
def test_bad_tree(text):
    with pytest.raises(FormatError):
        read_tree(text)


@pytest.mark.parametrize(
    "text",
    ["", "b 1 1\n", "s td 1 2 2\n", "s td 1 2 2\nb 2 1 2\n", "s td 2 2 2\nb 1 1\nb 2 2\n1 3\n"],
)
def test_bad_td(text):
    with pytest.raises(FormatError):
        read_td(text)


@pytest.mark.parametrize("text", ["", "p wt 2\nw 1 1\n1 2\n", "p wt 1\nw 1\n", "w 1 1\n"])
def test_bad_wt(text):
    with pytest.raises(FormatError):
        read_wt(text)
