import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from helpers import connected_chordal, k5_pendant, six_vertex_moderate
from minhlt.chordal import (
    CompressedCandidate,
    InK,
    InR,
    ModerateInstance,
    NotChordalError,
    ParameterTooLarge,
    candidate_height,
    check_candidate,
    clique_tree,
    decompress_candidate,
    dfs_from_hamiltonian_separator,
    dual_minhlt_chordal,
    enumerate_candidates,
    is_chordal,
    lexbfs,
    maximal_cliques,
    recognize_chordal,
    solve_moderate_case,
)
from minhlt.decomp import balanced_separator, validate_decomposition
from minhlt.gen import blowup, random_chordal
from minhlt.graph import (
    Graph,
    GraphError,
    complete_graph,
    connected_components,
    cycle_graph,
    path_graph,
    star_graph,
    tree_height,
    verify_dfs_tree,
)
from minhlt.oracle import WeightedTree, brute_minhlt, enumerate_dfs_trees


def compress(g, t, kset):
    """Reference compression of a DFS tree, written independently of the solver.

    Kept vertices: all of R, the root, the deepest clique vertex X, and clique
    vertices with a tree neighbour in R.  Every clique-clique edge left after
    contraction is amendable.
    """
    inst = ModerateInstance(g, kset)
    ch = t.children()
    depth = {t.root: 1}
    order = [t.root]
    for u in order:
        for c in ch[u]:
            depth[c] = depth[u] + 1
            order.append(c)
    x = max((v for v in range(g.n) if v in kset), key=depth.__getitem__)

    def important(v):
        if v not in kset or v in (t.root, x):
            return True
        p = t.parent[v]
        return (p is not None and p not in kset) or any(c not in kset for c in ch[v])

    kept = [v for v in order if important(v)]
    idx = {v: i for i, v in enumerate(kept)}
    parent = []
    for v in kept:
        p = t.parent[v]
        while p is not None and p not in idx:
            p = t.parent[p]
        parent.append(-1 if p is None else idx[p])
    types = tuple(inst.type_of(v) for v in kept)
    amendable = frozenset(
        i for i, p in enumerate(parent) if p >= 0 and types[i].tag == "K" and types[p].tag == "K"
    )
    return CompressedCandidate(tuple(parent), types, amendable, frozenset(kset))


def moderate_instances(graphs):
    for g in graphs:
        if g.n < 2 or g.is_clique():
            continue
        kset = balanced_separator(g, clique_tree(g, recognize_chordal(g)))
        for k in range(1, g.n + 1):
            if g.n - 2 * k < len(kset) <= g.n - k:
                yield g, k, kset
                break


def check_completeness(g, kset):
    cands = {c.canonical() for c in enumerate_candidates(g, kset)}
    for t in enumerate_dfs_trees(g):
        c = compress(g, t, kset)
        assert check_candidate(g, c), (sorted(kset), t.parent)
        assert candidate_height(g, c) <= tree_height(t)
        assert c.canonical() in cands


class TestRecognition:
    def test_c4_hole(self):
        res = recognize_chordal(cycle_graph(4))
        assert not res.chordal and res.hole == (0, 1, 2, 3)

    def test_k4(self):
        res = recognize_chordal(complete_graph(4))
        assert res.chordal and sorted(res.order) == [0, 1, 2, 3]

    def test_blowup_of_edge(self):
        g, _ = blowup(WeightedTree(path_graph(2), (1, 1)), 2)
        assert g.is_clique() and is_chordal(g)

    def test_c6_hole_is_induced(self):
        g = Graph.from_edges(7, [(i, (i + 1) % 6) for i in range(6)] + [(0, 6), (3, 6)])
        res = recognize_chordal(g)
        assert not res.chordal
        hole = res.hole
        assert len(hole) >= 4
        for i, a in enumerate(hole):
            for j, b in enumerate(hole):
                consecutive = abs(i - j) in (1, len(hole) - 1)
                if i != j:
                    assert g.has_edge(a, b) == consecutive

    def test_lexbfs_is_permutation(self):
        assert sorted(lexbfs(cycle_graph(7))) == list(range(7))

    def test_agrees_with_networkx(self):
        nx = pytest.importorskip("networkx")
        rng = random.Random(9)
        for _ in range(200):
            n = rng.randint(2, 9)
            edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < 0.45]
            g = Graph.from_edges(n, edges)
            G = nx.Graph()
            G.add_nodes_from(range(n))
            G.add_edges_from(edges)
            assert is_chordal(g) == nx.is_chordal(G)


class TestCliqueTree:
    def test_k4(self):
        ct = clique_tree(complete_graph(4), recognize_chordal(complete_graph(4)))
        assert ct.bags == (frozenset(range(4)),) and ct.edges == ()

    def test_p3(self):
        g = path_graph(3)
        ct = clique_tree(g, recognize_chordal(g))
        assert set(ct.bags) == {frozenset({0, 1}), frozenset({1, 2})}

    def test_k5_pendant(self):
        g = k5_pendant()
        ct = clique_tree(g, recognize_chordal(g))
        assert set(ct.bags) == {frozenset(range(5)), frozenset({0, 5})}

    def test_bad_order(self):
        g = path_graph(3)
        from minhlt.chordal import PerfectEliminationOrder

        with pytest.raises(GraphError):
            clique_tree(g, PerfectEliminationOrder((1, 0, 2)))

    def test_exhaustive(self):
        nx = pytest.importorskip("networkx")
        for g in connected_chordal(7):
            ct = clique_tree(g, recognize_chordal(g))
            assert validate_decomposition(g, ct)
            G = nx.Graph(g.edges())
            G.add_nodes_from(range(g.n))
            assert set(ct.bags) == {frozenset(c) for c in nx.find_cliques(G)}
            assert maximal_cliques(g, recognize_chordal(g)) == sorted(ct.bags, key=lambda c: tuple(sorted(c)))


class TestHamiltonianSeparator:
    def test_star(self):
        t = dfs_from_hamiltonian_separator(star_graph(3), {0}, [0])
        assert tree_height(t) == 2

    def test_p5_middle(self):
        t = dfs_from_hamiltonian_separator(path_graph(5), {2}, [2])
        assert tree_height(t) == 3 == brute_minhlt(path_graph(5))

    def test_k5_pendant(self):
        g = k5_pendant()
        t = dfs_from_hamiltonian_separator(g, set(range(5)), [1, 2, 3, 4, 0])
        assert verify_dfs_tree(g, t) and tree_height(t) <= 6

    def test_rejects_non_path(self):
        with pytest.raises(GraphError):
            dfs_from_hamiltonian_separator(path_graph(4), {0, 2}, [0, 2])
        with pytest.raises(GraphError):
            dfs_from_hamiltonian_separator(path_graph(4), {0, 1}, [0])

    def test_bound_on_all_cliques(self):
        for g in connected_chordal(6):
            for c in maximal_cliques(g, recognize_chordal(g)):
                t = dfs_from_hamiltonian_separator(g, c, sorted(c))
                assert verify_dfs_tree(g, t)
                comps = connected_components(g, set(range(g.n)) - c)
                assert tree_height(t) <= len(c) + max((len(x) for x in comps), default=0)


class TestDual:
    def test_k5_pendant(self):
        res = dual_minhlt_chordal(k5_pendant(), 1)
        assert res.yes and res.height == 5
        assert verify_dfs_tree(k5_pendant(), res.certificate)

    def test_k6(self):
        res = dual_minhlt_chordal(complete_graph(6), 1)
        assert not res.yes and res.stats["case"] == "clique"

    def test_not_chordal(self):
        with pytest.raises(NotChordalError):
            dual_minhlt_chordal(cycle_graph(4), 1)

    def test_bad_k(self):
        with pytest.raises(GraphError):
            dual_minhlt_chordal(path_graph(3), 0)
        with pytest.raises(GraphError):
            dual_minhlt_chordal(path_graph(3), 4)

    def test_disconnected(self):
        with pytest.raises(GraphError):
            dual_minhlt_chordal(Graph.from_edges(3, [(0, 1)]), 1)

    def test_exhaustive_up_to_8(self):
        for g in connected_chordal(8):
            opt = brute_minhlt(g)
            for k in range(1, g.n + 1):
                res = dual_minhlt_chordal(g, k)
                assert res.yes == (opt <= g.n - k)
                if res.yes:
                    assert verify_dfs_tree(g, res.certificate)
                    assert tree_height(res.certificate) <= g.n - k

    @pytest.mark.slow
    def test_exhaustive_9(self):
        for g in connected_chordal(9):
            if g.n != 9:
                continue
            opt = brute_minhlt(g)
            for k in range(1, g.n + 1):
                assert dual_minhlt_chordal(g, k).yes == (opt <= g.n - k)

    def test_cases_all_reached(self):
        cases = set()
        for g in connected_chordal(7):
            for k in range(1, g.n + 1):
                cases.add(dual_minhlt_chordal(g, k).stats["case"])
        assert cases == {"clique", "small", "moderate", "large"}


class TestModerate:
    def test_six_vertex_example(self):
        g = six_vertex_moderate()
        # |K| = 4 needs n - 2k < 4 <= n - k, so k = 2 on six vertices
        res = solve_moderate_case(g, 2, {0, 1, 2, 3})
        assert res.yes == (brute_minhlt(g) <= 4)
        assert res.stats["best_height"] == brute_minhlt(g)

    def test_precondition(self):
        with pytest.raises(GraphError):
            solve_moderate_case(k5_pendant(), 2, set(range(5)))

    def test_not_a_clique(self):
        with pytest.raises(GraphError):
            solve_moderate_case(six_vertex_moderate(), 2, {0, 4, 5})

    def test_budget_guard(self):
        g = six_vertex_moderate()
        with pytest.raises(ParameterTooLarge, match="parameter too large"):
            solve_moderate_case(g, 2, {0, 1, 2, 3}, budget=3)

    def test_budget_guard_through_dual(self):
        g = random_chordal(10, 0.9, 1)
        assert dual_minhlt_chordal(g, 3).stats["case"] == "moderate"
        with pytest.raises(ParameterTooLarge):
            dual_minhlt_chordal(g, 3, budget=1)

    def test_best_height_is_optimum(self):
        for g, k, kset in moderate_instances(connected_chordal(7)):
            assert solve_moderate_case(g, k, kset).stats["best_height"] == brute_minhlt(g)


class TestCandidateChecks:
    def setup_method(self):
        self.g = six_vertex_moderate()
        self.k = frozenset({0, 1, 2, 3})

    def cand(self, parent, types, amendable=()):
        return CompressedCandidate(tuple(parent), tuple(types), frozenset(amendable), self.k)

    def test_valid_compression(self):
        t = enumerate_dfs_trees(self.g)
        c = compress(self.g, next(iter(t)), self.k)
        assert check_candidate(self.g, c)

    def test_duplicate_r(self):
        c = self.cand([-1, 0, 1, 2], [InK({4, 5}), InR(4), InR(4), InR(5)])
        assert check_candidate(self.g, c).reason == "r-multiplicity"

    def test_incomparable_adjacent(self):
        # R4 and K{4} are siblings below K{4,5}
        c = self.cand([-1, 0, 0, 0], [InK({4, 5}), InR(4), InK({4}), InR(5)], [2])
        assert check_candidate(self.g, c).reason == "incomparable-adjacent"

    def test_unrealised_type(self):
        c = self.cand([-1, 0, 1], [InK({4, 5}), InR(4), InR(5)])
        bad = self.cand([-1, 0, 1, 1], [InK({4, 5}), InK({4, 5}), InR(4), InR(5)], [1])
        assert check_candidate(self.g, bad).reason == "k-multiplicity"
        assert check_candidate(self.g, c).reason != "k-multiplicity"

    def test_only_amendable_condition(self):
        # K{4,5} -> K{4} -> R4, with R5 hanging at the root.  The lost type
        # {5} has no amendable edge above R5.
        c = self.cand([-1, 0, 1, 0], [InK({4, 5}), InK({4}), InR(4), InR(5)], [1])
        res = check_candidate(self.g, c)
        assert res.reason == "no-amendable-edge"
        key = c.canonical()
        for t in enumerate_dfs_trees(self.g):
            assert compress(self.g, t, self.k).canonical() != key

    def test_too_many_vertices(self):
        n = 3 * 2 + 3
        c = self.cand([-1] + list(range(n - 1)), [InK(())] * n)
        assert check_candidate(self.g, c).reason == "too-many-vertices"


class TestDecompress:
    def test_identity(self):
        g = six_vertex_moderate()
        k = frozenset({0, 1, 2, 3})
        for t in enumerate_dfs_trees(g):
            c = compress(g, t, k)
            if len(c) == g.n:
                out = decompress_candidate(g, c)
                assert out.parent == t.parent
                return
        pytest.fail("no uncompressed tree found")

    def test_k4_with_pendant(self):
        g = Graph.from_edges(5, [(u, v) for u, v in combinations(range(4), 2)] + [(0, 4)])
        k = frozenset(range(4))
        c = CompressedCandidate((-1, 0, 1, 2), (InK(()), InK(()), InK({4}), InR(4)), frozenset({1, 2}), k)
        assert check_candidate(g, c)
        t = decompress_candidate(g, c)
        assert verify_dfs_tree(g, t) and tree_height(t) == 5 == candidate_height(g, c)
        trees = {tuple(sorted(x.parent.items())) for x in enumerate_dfs_trees(g)}
        assert tuple(sorted(t.parent.items())) in trees

    def test_symbolic_height(self):
        for g, k, kset in moderate_instances(connected_chordal(6)):
            for c in enumerate_candidates(g, kset):
                t = decompress_candidate(g, c)
                assert tree_height(t) == candidate_height(g, c)
                assert compress(g, t, kset).canonical() == c.canonical() or len(c) <= g.n


class TestEnumeration:
    def test_r1_bound(self):
        g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
        cands = list(enumerate_candidates(g, {0, 1, 2}))
        assert cands and all(len(c) <= 5 for c in cands)

    def test_no_r(self):
        with pytest.raises(GraphError):
            list(enumerate_candidates(complete_graph(3), {0, 1, 2}))

    def test_emitted_are_valid(self):
        for g, k, kset in moderate_instances(connected_chordal(6)):
            for c in enumerate_candidates(g, kset):
                assert check_candidate(g, c)
                assert len(c) <= 3 * (g.n - len(kset)) + 2

    def test_completeness_up_to_7(self):
        for g, k, kset in moderate_instances(connected_chordal(7)):
            check_completeness(g, kset)

    def test_completeness_sampled_8_9(self):
        rng = random.Random(42)
        pool = [x for x in moderate_instances(connected_chordal(9)) if x[0].n >= 8]
        for g, k, kset in rng.sample(pool, 25):
            check_completeness(g, kset)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=11), st.sampled_from([0.2, 0.5, 0.8]), st.integers(0, 10**6))
def test_random_chordal_verdicts(n, density, seed):
    g = random_chordal(n, density, seed)
    opt = brute_minhlt(g)
    for k in (1, 2, 3):
        if k > n:
            continue
        res = dual_minhlt_chordal(g, k)
        assert res.yes == (opt <= n - k)
        if res.yes:
            assert verify_dfs_tree(g, res.certificate)
