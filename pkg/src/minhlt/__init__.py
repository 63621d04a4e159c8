"""Low-height DFS trees: exact solvers, chordal dual solver, generators, oracles."""

__version__ = "0.1.0"

from .graph import (  # noqa: E402
    DfsTree,
    Graph,
    GraphError,
    NotConnectedError,
    RootedTree,
    run_dfs,
    tree_height,
    verify_dfs_tree,
)
from .fpt import SolveResult, Verdict, solve_minhlt  # noqa: E402
from .chordal import dual_minhlt_chordal, recognize_chordal  # noqa: E402

__all__ = [
    "DfsTree",
    "Graph",
    "GraphError",
    "NotConnectedError",
    "RootedTree",
    "SolveResult",
    "Verdict",
    "dual_minhlt_chordal",
    "recognize_chordal",
    "run_dfs",
    "solve_minhlt",
    "tree_height",
    "verify_dfs_tree",
]
