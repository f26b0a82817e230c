"""Simple undirected graphs, text formats and BFS metrics."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraphError, GraphParseError

GRAPH6_MAX_N = 62


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    The adjacency matrix is stored as a read-only ``int8`` array. Vertex
    labels default to the decimal vertex index and are only used for
    reporting.
    """

    def __init__(self, adjacency, labels: Sequence[str] | None = None):
        adj = np.array(adjacency, dtype=np.int8)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        n = adj.shape[0]
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj) != 0):
            raise ValueError("loops are not allowed")
        if np.any((adj != 0) & (adj != 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        adj.setflags(write=False)
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(x) for x in labels)
        if len(labels) != n or len(set(labels)) != n:
            raise ValueError("labels must be n distinct names")
        self._adj = adj
        self._labels = labels

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> Graph:
        adj = np.zeros((n, n), dtype=np.int8)
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            adj[a, b] = adj[b, a] = 1
        return cls(adj, labels)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in self._adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self.neighbors)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i in range(self.n) for j in self.neighbors[i] if i < j)

    @cached_property
    def distance_info(self) -> DistanceInfo:
        return _bfs_all(self)

    def index(self, vertex) -> int:
        """Resolve a label (or an ``int`` index) to a vertex index."""
        if isinstance(vertex, (int, np.integer)) and not isinstance(vertex, bool):
            if 0 <= vertex < self.n:
                return int(vertex)
            raise KeyError(f"vertex index {vertex} out of range")
        try:
            return self._labels.index(str(vertex))
        except ValueError:
            raise KeyError(f"unknown vertex label {vertex!r}") from None

    def dist(self, u: int, v: int) -> float:
        return self.distance_info.dist[u, v]

    def subgraph(self, vertices: Sequence[int]) -> Graph:
        idx = list(vertices)
        return Graph(self._adj[np.ix_(idx, idx)], [self._labels[i] for i in idx])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._labels == other._labels and np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash((self._adj.tobytes(), self._labels))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class DistanceInfo:
    """All-pairs hop distances; ``math.inf`` marks unreachable pairs."""

    dist: np.ndarray
    ecc: tuple[float, ...]
    diameter: int
    connected: bool


def _bfs_all(g: Graph) -> DistanceInfo:
    n = g.n
    dist = np.full((n, n), math.inf)
    for s in range(n):
        dist[s, s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors[x]:
                if dist[s, y] == math.inf:
                    dist[s, y] = dist[s, x] + 1
                    queue.append(y)
    dist.setflags(write=False)
    ecc = tuple(int(m) if math.isfinite(m) else math.inf for m in dist.max(axis=1))
    finite = dist[np.isfinite(dist)]
    connected = bool(np.all(np.isfinite(dist)))
    return DistanceInfo(dist=dist, ecc=ecc, diameter=int(finite.max()), connected=connected)


def distances(g: Graph) -> DistanceInfo:
    return g.distance_info


def is_connected(g: Graph) -> bool:
    return g.distance_info.connected


def require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError("operation requires a connected graph")


def is_regular(g: Graph) -> int | None:
    """Return the common degree, or ``None`` if degrees differ."""
    degs = set(g.degrees)
    return degs.pop() if len(degs) == 1 else None


def walk_count(g: Graph, k: int, u: int, v: int) -> int:
    """Number of walks of length ``k`` from ``u`` to ``v``, i.e. ``(A^k)[u, v]``.

    Computed by repeated sparse products from ``e_u`` in Python integers so
    the result is exact for every ``k``.
    """
    if k < 0:
        raise ValueError("walk length must be nonnegative")
    vec = [0] * g.n
    vec[u] = 1
    for _ in range(k):
        vec = [sum(vec[j] for j in g.neighbors[i]) for i in range(g.n)]
    return vec[v]


def walk_count_matrix(g: Graph, k: int) -> np.ndarray:
    """Exact ``A^k`` as an object array of Python integers."""
    a = g.adjacency.astype(object)
    out = np.identity(g.n, dtype=int).astype(object)
    for _ in range(k):
        out = out @ a
    return out


# graph6 -------------------------------------------------------------------

def encode_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 encoding supports at most {GRAPH6_MAX_N} vertices")
    bits = [int(g.adjacency[i, j]) for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line (an optional ``>>graph6<<`` prefix is allowed)."""
    s = text.strip("\r\n")
    base = 0
    if s.startswith(">>graph6<<"):
        base = len(">>graph6<<")
        s = s[base:]
    if not s:
        raise GraphParseError("empty graph6 string", base)
    for k, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphParseError(f"byte {ch!r} outside the graph6 range [63, 126]", base + k)
    n = ord(s[0]) - 63
    if n == 0:
        raise GraphParseError("graph6 string encodes the empty graph", base)
    if n > GRAPH6_MAX_N:
        raise GraphParseError(f"graph6 headers for n > {GRAPH6_MAX_N} are not supported", base)
    nbits = n * (n - 1) // 2
    nbytes = -(-nbits // 6)
    if len(s) - 1 < nbytes:
        raise GraphParseError(
            f"truncated graph6 data: {n} vertices need {nbytes} data bytes, got {len(s) - 1}",
            base + len(s),
        )
    if len(s) - 1 > nbytes:
        raise GraphParseError("trailing data after graph6 payload", base + 1 + nbytes)
    bits = []
    for ch in s[1:]:
        val = ord(ch) - 63
        bits.extend((val >> sh) & 1 for sh in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphParseError("nonzero padding bits in last graph6 byte", base + len(s) - 1)
    adj = np.zeros((n, n), dtype=np.int8)
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                adj[i, j] = adj[j, i] = 1
            k += 1
    return Graph(adj)


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace separated vertex-name pairs.

    Vertices are numbered in order of first appearance and keep their
    original names as labels. ``#`` starts a comment.
    """
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if not tokens:
        raise GraphParseError("edge list is empty")
    if len(tokens) % 2:
        raise GraphParseError(f"odd number of tokens ({len(tokens)}) in edge list")
    index: dict[str, int] = {}
    edges = []
    for k in range(0, len(tokens), 2):
        a, b = tokens[k], tokens[k + 1]
        if a == b:
            raise GraphParseError(f"self-loop at vertex {a!r} (edge {k // 2 + 1})")
        for t in (a, b):
            index.setdefault(t, len(index))
        edges.append((index[a], index[b]))
    return Graph.from_edges(len(index), edges, labels=list(index))


def looks_like_graph6(text: str) -> bool:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        return True
    return bool(s) and not any(c.isspace() for c in s) and all(63 <= ord(c) <= 126 for c in s)


def read_graph(text: str, fmt: str = "auto") -> Graph:
    if fmt == "auto":
        fmt = "g6" if looks_like_graph6(text) else "edges"
    if fmt == "g6":
        return parse_graph6(text.strip())
    if fmt == "edges":
        return parse_edge_list(text)
    raise ValueError(f"unknown graph format {fmt!r}")
