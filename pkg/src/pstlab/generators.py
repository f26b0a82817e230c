"""Constructors for the small named graphs used throughout the analyses."""

from __future__ import annotations

from itertools import combinations

from .graph import Graph


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    """``K_{1,leaves}`` with the center at vertex 0."""
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def hypercube_graph(dim: int) -> Graph:
    """Vertices are bit strings read as integers; edges flip one bit."""
    n = 1 << dim
    return Graph.from_edges(n, ((x, x ^ (1 << k)) for x in range(n) for k in range(dim) if x < x ^ (1 << k)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def prism_graph(k: int) -> Graph:
    """Cartesian product of ``C_k`` and ``K_2``."""
    top = [(i, (i + 1) % k) for i in range(k)]
    bottom = [(k + i, k + (i + 1) % k) for i in range(k)]
    rungs = [(i, k + i) for i in range(k)]
    return Graph.from_edges(2 * k, top + bottom + rungs)


def paw_graph() -> Graph:
    """Triangle ``1-2-3`` with pendant vertex 0 attached to 1."""
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)])


NAMED = {
    "k2": lambda: complete_graph(2),
    "k4": lambda: complete_graph(4),
    "p3": lambda: path_graph(3),
    "p4": lambda: path_graph(4),
    "c4": lambda: cycle_graph(4),
    "c6": lambda: cycle_graph(6),
    "q2": lambda: hypercube_graph(2),
    "q3": lambda: hypercube_graph(3),
    "k33": lambda: complete_bipartite_graph(3, 3),
    "petersen": petersen_graph,
    "prism3": lambda: prism_graph(3),
    "paw": paw_graph,
}
